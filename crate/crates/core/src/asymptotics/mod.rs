//! Expansion evaluators and the moderate/large deviations machinery.

mod expansion;
mod ld;
mod md;

pub use expansion::{
    fourth_order_coeff, rate_expansion, ChannelExpansion, ExpansionResult, ExpansionTerms, Order, Side,
};
pub use ld::{
    lambda_expansion_coeffs, rate_function_1d, strong_ld_prefactor, Cgf, DiscreteCgf, GaussianCgf,
    LambdaCoeffs, Lattice, TiltSolution,
};
pub use md::{cornish_fisher_md, cornish_fisher_md_guarded, petrov_log_tail, petrov_log_tail_guarded, Tail, MD_GUARD};
