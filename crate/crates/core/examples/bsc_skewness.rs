//! Capacity, dispersion and skewness of a BSC through the general pipeline,
//! then the rate expansion term by term.

use chanskew::asymptotics::{rate_expansion, ChannelExpansion, Order, Side};
use chanskew::dmc::{capacity_solve, moments, Channel};
use chanskew::geometry::skewness_bounds;

fn main() -> chanskew::Result<()> {
    let p = 0.11;
    let ch = Channel::bsc(p)?;
    let stats = capacity_solve(&ch, 1e-13)?;
    let m = moments(&ch, &stats.caid)?;
    let b = skewness_bounds(&ch, &stats)?;
    println!("BSC({p}): C = {:.10} nats, V = {:.10}, mu3 = {:.10}", stats.capacity, m.v_unconditional, m.mu3);
    println!("skewness bounds: [{:.12}, {:.12}]", b.s_lower, b.s_upper);

    // The closed form the pipeline should reproduce.
    let l = ((1.0 - p) / p).ln();
    let v = p * (1.0 - p) * l * l;
    let mu3 = p * (1.0 - p) * (2.0 * p - 1.0) * l * l * l;
    println!("closed form mu3/(6V) + 1/2 = {:.12}", mu3 / (6.0 * v) + 0.5);

    let ex = ChannelExpansion::new(&ch, &stats)?;
    println!("\n   n      eps   order2   order3   order4   (log M, nats)");
    for n in [100, 500, 2000] {
        for eps in [1e-6, 1e-3] {
            let e = |o| rate_expansion(&ex, n, eps, o, Side::Lower).map(|r| r.total_log_m);
            println!(
                "{n:5} {eps:8.0e} {:8.3} {:8.3} {:8.3}",
                e(Order::Clt)?,
                e(Order::Skewness)?,
                e(Order::Refined)?
            );
        }
    }
    Ok(())
}
