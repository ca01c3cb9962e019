//! Exact BSC achievability/converse bracket and exact Neyman-Pearson errors.

use chanskew::exact::{bracket, divergence_spectrum, np_beta_exact_eps};

fn main() -> chanskew::Result<()> {
    println!("BSC(0.11) exact bracket on log M (nats)");
    for n in [100, 250, 500] {
        for eps in [1e-10, 1e-6, 1e-3, 1e-1] {
            let b = bracket(n, 0.11, eps)?;
            println!("n = {n:3}, eps = {eps:5.0e}: [{:9.4}, {:9.4}]", b.log_m_achievable, b.log_m_converse);
        }
    }

    let (p, q) = ([0.4, 0.6], [0.8, 0.2]);
    println!("\nBern(0.6) vs Bern(0.2)");
    for n in [10, 100, 500] {
        let beta = np_beta_exact_eps(&p, &q, n, 1e-3)?;
        let ds = divergence_spectrum(&p, &q, n, 1e-3)?;
        println!("n = {n:3}: -ln beta = {:10.5}, D_s = {:10.5}", -beta.ln(), ds.value());
    }
    Ok(())
}
