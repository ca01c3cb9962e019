//! Exact finite-blocklength oracles: block LLR spectra, Neyman-Pearson
//! type-II errors and the BSC achievability/converse pair.

mod bsc;
mod spectrum;

pub use bsc::{bracket, bsc_converse_logm, bsc_rcu_eps, BoundBracket};
pub use spectrum::{divergence_spectrum, np_beta_exact, np_beta_exact_eps, DivergenceSpectrum, LlrSpectrum};
