//! Shannon's random-coding and sphere-packing bounds for the Gaussian
//! channel against the skewness expansion.

use chanskew::asymptotics::Side;
use chanskew::gaussian::{
    gaussian_expansion, gaussian_params, shannon_random_coding_logm, shannon_sphere_packing_logm, PowerConstraint,
};

fn main() -> chanskew::Result<()> {
    let (n, power) = (400, 10.0);
    let g = gaussian_params(power)?;
    println!("P = {power}: C = {:.7}, V = {:.7}, S = {:.7}, B_upper = {:.7}, B_lower = {:.7}", g.capacity, g.dispersion, g.skewness, g.b_upper, g.b_lower);
    println!("\n     eps   random-coding   expansion lo   expansion hi   sphere-packing (n+1)");
    for eps in [1e-5, 1e-4, 1e-3, 1e-2] {
        let ach = shannon_random_coding_logm(n, power, eps)?;
        let conv = shannon_sphere_packing_logm(n, power, eps, PowerConstraint::Maximal)?;
        let lo = gaussian_expansion(power, n, eps, Side::Lower, PowerConstraint::Maximal)?;
        let hi = gaussian_expansion(power, n, eps, Side::Upper, PowerConstraint::Maximal)?;
        println!(
            "{eps:8.0e} {:15.3} {:14.3} {:14.3} {:15.3}",
            ach.log_m, lo.total_log_m, hi.total_log_m, conv.log_m
        );
    }
    Ok(())
}
