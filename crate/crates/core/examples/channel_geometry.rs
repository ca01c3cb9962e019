//! Skewness bounds of an asymmetric channel read from the text format, with
//! the geometric ingredients and the optimal input tilt.

use chanskew::dmc::{capacity_solve, classify_singularity, Channel};
use chanskew::geometry::{optimal_input_tilt, skewness_bounds};

const CHANNEL: &str = "\
# |X| |Y|, then one row W(.|x) per input
3 3
0.80 0.15 0.05
0.10 0.70 0.20
0.05 0.25 0.70
";

fn main() -> chanskew::Result<()> {
    let ch = Channel::parse(CHANNEL)?;
    let stats = capacity_solve(&ch, 1e-13)?;
    println!("capacity = {:.10} nats after {} iterations", stats.capacity, stats.iterations);
    println!("capacity-achieving input = {:?}", stats.caid.weights());
    println!("singularity: {:?}", classify_singularity(&ch, &stats)?.eta_per_achiever);

    let b = skewness_bounds(&ch, &stats)?;
    println!("A0 = {:.3e}, A1 = {:.3e}, eta = {:.6}, Sk_u = {:.6}", b.a0, b.a1, b.eta, b.sk_u);
    println!("S in [{:.6}, {:.6}]", b.s_lower, b.s_upper);

    for n in [100, 1000, 10_000] {
        let t = optimal_input_tilt(&ch, &stats, n, 1e-3)?;
        println!("n = {n:6}: tilted input {:?}, objective {:.3e}", t.distribution.weights(), t.objective);
    }
    Ok(())
}
