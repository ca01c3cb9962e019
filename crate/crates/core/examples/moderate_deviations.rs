//! Cramér-corrected Gaussian tail of a Bernoulli sum against the exact
//! binomial tail, and the Cornish-Fisher inverse.

use chanskew::asymptotics::{cornish_fisher_md, petrov_log_tail_guarded, Tail};
use chanskew::numeric::{ln_sum_exp, log_binomial_pmf, q_tail_log};
use chanskew::CumulantSet;

fn exact_upper_log_tail(n: u64, p: f64, x: f64) -> chanskew::Result<f64> {
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    let k0 = (mean + x * sd).floor() as u64 + 1;
    let terms = (k0..=n).map(|k| log_binomial_pmf(n, k, p).map(|l| l.ln())).collect::<chanskew::Result<Vec<_>>>()?;
    Ok(ln_sum_exp(&terms))
}

fn main() -> chanskew::Result<()> {
    let p = 0.3;
    let c = CumulantSet::bernoulli(p);
    let x = 3.0;
    println!("P[S_n > n p + x sd], x = {x}");
    println!("      n       exact        Gauss       Petrov   rel err");
    for n in [1_000u64, 10_000, 100_000] {
        let exact = exact_upper_log_tail(n, p, x)?;
        let petrov = petrov_log_tail_guarded(&c, n, x, Tail::Upper, 0.1)?.ln();
        println!("{n:7} {exact:11.5} {:12.5} {petrov:12.5} {:9.2e}", q_tail_log(x), ((petrov - exact) / exact).abs());
    }
    let (b0, b1) = c.cornish_fisher_coeffs();
    let (a0, a1) = c.cramer_coeffs();
    println!("\nb1 - (5/2 a0^2 + a1) = {:.1e}", b1 - (2.5 * a0 * a0 + a1));
    println!("b0 = {b0:.6}, quantile at y = 3, n = 1e4: {:.6}", cornish_fisher_md(&c, 10_000, 3.0)?);
    Ok(())
}
