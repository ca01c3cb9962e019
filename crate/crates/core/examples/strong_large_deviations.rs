//! Exact asymptotics of a Bernoulli large-deviations tail: Legendre transform,
//! tilted variance and the lattice prefactor.

use chanskew::asymptotics::{rate_function_1d, DiscreteCgf, Lattice};
use chanskew::numeric::{ln_sum_exp, log_binomial_pmf};

fn main() -> chanskew::Result<()> {
    let cgf = DiscreteCgf::bernoulli(0.5)?;
    let a = 0.6;
    let t = rate_function_1d(&cgf, a, (-10.0, 10.0))?;
    let el = t.prefactor(&Lattice::Spans(vec![1.0]))?;
    let enl = t.prefactor(&Lattice::NonLattice)?;
    println!("s* = {:.6}, rate = {:.8}, kappa''(s*) = {:.6}", t.s_star[0], t.rate, t.hessian[(0, 0)]);
    println!("E_L = {el:.6}, E_NL = {enl:.6}");
    println!("\n   n        exact     strong LD    ratio");
    for n in [50u64, 500, 5000] {
        let k0 = (a * n as f64).ceil() as u64;
        let terms = (k0..=n).map(|k| log_binomial_pmf(n, k, 0.5).map(|l| l.ln())).collect::<chanskew::Result<Vec<_>>>()?;
        let exact = ln_sum_exp(&terms);
        let approx = el.ln() - n as f64 * t.rate - 0.5 * (n as f64).ln();
        println!("{n:5} {exact:12.5} {approx:12.5} {:8.5}", (approx - exact).exp());
    }
    for h in [1e-1, 1e-2, 1e-4] {
        let e = t.prefactor(&Lattice::Spans(vec![h]))?;
        println!("span {h:6.0e}: E_L / E_NL - 1 = {:.3e}", e / enl - 1.0);
    }
    Ok(())
}
