//! Refined expansion of `-ln β` for a Bernoulli pair against the exact
//! Neyman-Pearson value.

use chanskew::asymptotics::Order;
use chanskew::bht::{bht_expansion, bht_moments};
use chanskew::exact::np_beta_exact_eps;

fn main() -> chanskew::Result<()> {
    let (p, q) = ([0.4, 0.6], [0.8, 0.2]);
    let m = bht_moments(&p, &q)?;
    println!("D = {:.6}, V = {:.6}, Sk = {:.6}, skewness coefficient = {:.6}", m.d, m.v, m.sk, m.skewness_coeff());
    println!("\n  n      eps      exact       o2       o3       o4");
    for n in [100, 250, 500] {
        for eps in [1e-6, 1e-3, 1e-1] {
            let exact = -np_beta_exact_eps(&p, &q, n, eps)?.ln();
            let o = |k| bht_expansion(&p, &q, n, eps, k).map(|r| r.total_log_m);
            println!(
                "{n:3} {eps:8.0e} {exact:10.4} {:8.4} {:8.4} {:8.4}",
                o(Order::Clt)?,
                o(Order::Skewness)?,
                o(Order::Refined)?
            );
        }
    }
    Ok(())
}
