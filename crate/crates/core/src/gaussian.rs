//! Maximal- and equal-power Gaussian channel: closed-form expansion constants
//! and Shannon's random-coding and sphere-packing bounds.

use std::f64::consts::PI;

use crate::asymptotics::{ExpansionResult, ExpansionTerms, Order, Side};
use crate::error::{check_eps, domain, Error, Result};
use crate::numeric::{
    ln_one_minus_exp, ln_reg_incomplete_beta, noncentral_t_log_cdf, noncentral_t_quantile, q_inverse, LogProb,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianParams {
    pub power: f64,
    pub capacity: f64,
    pub dispersion: f64,
    pub skewness: f64,
    pub b_upper: f64,
    pub b_lower: f64,
    pub b_upper_eq: f64,
    pub b_lower_eq: f64,
}

pub fn gaussian_params(power: f64) -> Result<GaussianParams> {
    if !(power > 0.0 && power.is_finite()) {
        return domain(format!("SNR must be positive, got {power}"));
    }
    let p = power;
    let d = 6.0 * (1.0 + p) * (1.0 + p) * (2.0 + p);
    let capacity = 0.5 * p.ln_1p();
    let b_upper = (9.0 * p + 14.0 * p * p + 5.0 * p * p * p) / d + 0.5 * (2.0 * PI * p / (1.0 + p)).ln();
    let b_lower = b_upper - 1.0 - capacity;
    Ok(GaussianParams {
        power,
        capacity,
        dispersion: p * (p + 2.0) / (2.0 * (1.0 + p) * (1.0 + p)),
        skewness: (6.0 + 6.0 * p + 4.0 * p * p + p * p * p) / d,
        b_upper,
        b_lower,
        b_upper_eq: b_upper - capacity,
        b_lower_eq: b_lower,
    })
}

/// Which codebooks the power constraint admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerConstraint {
    /// `‖x‖² ≤ nP` per codeword.
    Maximal,
    /// `‖x‖² = nP` per codeword.
    Equal,
}

pub fn gaussian_expansion(
    power: f64,
    n: u64,
    eps: f64,
    side: Side,
    constraint: PowerConstraint,
) -> Result<ExpansionResult> {
    check_eps(eps)?;
    if n == 0 {
        return domain("blocklength must be positive");
    }
    let g = gaussian_params(power)?;
    let y = q_inverse(eps)?;
    let nf = n as f64;
    let constant = match (side, constraint) {
        (Side::Lower, PowerConstraint::Maximal) => g.b_lower,
        (Side::Upper, PowerConstraint::Maximal) => g.b_upper,
        (Side::Lower, PowerConstraint::Equal) => g.b_lower_eq,
        (Side::Upper, PowerConstraint::Equal) => g.b_upper_eq,
    };
    Ok(ExpansionResult::assemble(
        Order::Skewness,
        ExpansionTerms {
            capacity: nf * g.capacity,
            dispersion: -(nf * g.dispersion).sqrt() * y,
            log: 0.5 * nf.ln(),
            skewness: g.skewness * y * y,
            fourth: 0.0,
            constant,
        },
    ))
}

/// Fraction of the unit sphere in `R^n` lying in the cap `{x : x₁ ≥ b}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapAreaRatio {
    pub exact: LogProb,
    /// Large-`n` expansion; only defined for `b ∈ (0, 1)`.
    pub asymptotic: Option<LogProb>,
}

pub fn cap_area_ratio(n: u64, b: f64) -> Result<CapAreaRatio> {
    if n < 3 {
        return domain(format!("cap area needs n >= 3, got {n}"));
    }
    if !(-1.0..=1.0).contains(&b) {
        return domain(format!("cap height must lie in [-1, 1], got {b}"));
    }
    let exact = LogProb::new(ln_cap_exact(n, b)?);
    let asymptotic = (b > 0.0 && b < 1.0).then(|| {
        let nf = n as f64;
        let s = 1.0 - b * b;
        LogProb::new(0.5 * nf * s.ln() - 0.5 * nf.ln() - 0.5 * (2.0 * PI * b * b * s).ln())
    });
    Ok(CapAreaRatio { exact, asymptotic })
}

fn ln_cap_exact(n: u64, b: f64) -> Result<f64> {
    if b == 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let a = 0.5 * (n as f64 - 1.0);
    // 1 - b² loses digits near |b| = 1.
    let x = (1.0 - b) * (1.0 + b);
    let upper = -std::f64::consts::LN_2 + ln_reg_incomplete_beta(a, 0.5, x)?;
    Ok(if b >= 0.0 { upper } else { ln_one_minus_exp(upper) })
}

/// Inner-product threshold at a given noncentral-t quantile.
fn t_to_a(t: f64, n: u64) -> f64 {
    let r = t / (n as f64 - 1.0).sqrt();
    r / (1.0 + r * r).sqrt()
}

/// Series for the inner-product threshold `a`. With `shifted` it targets the
/// random-coding level `ε̃`, otherwise `ε`.
pub fn threshold_expansion(n: u64, power: f64, eps: f64, shifted: bool) -> Result<f64> {
    let g = gaussian_params(power)?;
    let p = power;
    let y = q_inverse(eps)?;
    let nf = n as f64;
    let sp = p.sqrt();
    let q32 = (1.0 + p).powf(1.5);
    let q52 = (1.0 + p).powf(2.5);
    let mut a = sp / (1.0 + p).sqrt() - (2.0 + p).sqrt() * y / (std::f64::consts::SQRT_2 * q32 * nf.sqrt())
        + (18.0 * sp + 28.0 * p * sp + 10.0 * p * p * sp) / (12.0 * q52 * (2.0 + p) * nf)
        - y * y * (24.0 * sp + 19.0 * p * sp + 4.0 * p * p * sp) / (12.0 * q52 * (2.0 + p) * nf);
    if shifted {
        a -= (2.0 + p).sqrt() / (std::f64::consts::SQRT_2 * q32 * g.dispersion.sqrt() * nf);
    }
    Ok(a)
}

/// `n g_n(b)` and `n g_n'(b)`: the log density of `⟨X̂, Ŷ⟩` plus the log cap
/// area, in their large-`n` forms.
fn n_g(n: u64, power: f64, b: f64) -> (f64, f64) {
    let nf = n as f64;
    let alpha = (power / 4.0).sqrt();
    let w = alpha * b;
    let r = (1.0 + w * w).sqrt();
    let s = 1.0 - b * b;
    let u0 = 0.5 * s.ln() - 2.0 * alpha * alpha + w * w + w * r + (w + r).ln();
    let u1 = (1.0 + w * w + w * r).ln() + 3.0 * s.ln() + (2.0 * PI).ln();
    let du0 = -b / s + 2.0 * alpha * w + alpha * (r + w * w / r) + alpha / r;
    let du1 = (2.0 * alpha * w + alpha * (r + w * w / r)) / (1.0 + w * w + w * r) - 6.0 * b / s;
    // The ½ ln n / n pieces of u_n and v_n cancel.
    let v = 0.5 * s.ln() - (2.0 * PI * b * b * s).ln() / (2.0 * nf);
    let dv = -b / s - (1.0 / b - b / s) / nf;
    (nf * (u0 + v) - 0.5 * u1, nf * (du0 + dv) - 0.5 * du1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShannonAchievability {
    pub log_m: f64,
    /// Threshold solved from the noncentral-t cdf.
    pub a: f64,
    /// Series value of the threshold, before polishing.
    pub a_seed: f64,
    /// Level the first error term is held at.
    pub eps_tilde: f64,
}

/// Shannon's random-coding bound with the threshold split
/// `ε = ε̃ + (ε - ε̃)` and a Laplace evaluation of the second term.
pub fn shannon_random_coding_logm(n: u64, power: f64, eps: f64) -> Result<ShannonAchievability> {
    check_eps(eps)?;
    if n < 10 {
        return domain(format!("random-coding bound needs n >= 10, got {n}"));
    }
    let g = gaussian_params(power)?;
    let y = q_inverse(eps)?;
    let gap = (-0.5 * y * y).exp() / (2.0 * PI * n as f64 * g.dispersion).sqrt();
    let eps_tilde = eps - gap;
    if !(eps_tilde > 0.0) {
        return domain(format!("eps = {eps} is too small for the threshold split at n = {n}"));
    }
    let nc = (n as f64 * power).sqrt();
    let t = noncentral_t_quantile(eps_tilde, n - 1, nc)?;
    let a = t_to_a(t, n);
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Numerical(format!("threshold a = {a} left (0, 1)")));
    }
    let (ng, ndg) = n_g(n, power, a);
    if !(ndg < 0.0) {
        return Err(Error::Numerical(format!("exponent is not decreasing at a = {a}")));
    }
    Ok(ShannonAchievability {
        log_m: gap.ln() - ng + (-ndg).ln(),
        a,
        a_seed: threshold_expansion(n, power, eps, true)?,
        eps_tilde,
    })
}

/// Second error term of the random-coding bound at `(a, ln M)`.
pub fn random_coding_second_term(n: u64, power: f64, a: f64, log_m: f64) -> f64 {
    let (ng, ndg) = n_g(n, power, a);
    (log_m + ng - (-ndg).ln()).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShannonConverse {
    pub log_m: f64,
    pub a_star: f64,
    pub a_seed: f64,
    /// Dimension the bound was evaluated in.
    pub dimension: u64,
}

/// Shannon's sphere-packing converse. The maximal-power case relaxes to the
/// equal-power bound in one more dimension.
pub fn shannon_sphere_packing_logm(
    n: u64,
    power: f64,
    eps: f64,
    constraint: PowerConstraint,
) -> Result<ShannonConverse> {
    check_eps(eps)?;
    if n < 10 {
        return domain(format!("sphere-packing bound needs n >= 10, got {n}"));
    }
    gaussian_params(power)?;
    let dim = match constraint {
        PowerConstraint::Equal => n,
        PowerConstraint::Maximal => n + 1,
    };
    let nc = (dim as f64 * power).sqrt();
    let t = noncentral_t_quantile(eps, dim - 1, nc)?;
    let a_star = t_to_a(t, dim);
    Ok(ShannonConverse {
        log_m: -ln_cap_exact(dim, a_star)?,
        a_star,
        a_seed: threshold_expansion(dim, power, eps, false)?,
        dimension: dim,
    })
}

/// `P[⟨X̂, Ŷ⟩ < a]` in dimension `n`.
pub fn inner_product_log_cdf(n: u64, power: f64, a: f64) -> Result<f64> {
    if !(a > -1.0 && a < 1.0) {
        return domain(format!("inner product threshold must lie in (-1, 1), got {a}"));
    }
    let t = (n as f64 - 1.0).sqrt() * a / (1.0 - a * a).sqrt();
    noncentral_t_log_cdf(t, n - 1, (n as f64 * power).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate;

    #[test]
    fn constants_at_snr_10() {
        let g = gaussian_params(10.0).unwrap();
        assert!((g.capacity - 1.198_947_6).abs() < 1e-7);
        assert!((g.dispersion - 0.495_867_8).abs() < 1e-7);
        assert!((g.skewness - 1466.0 / 8712.0).abs() < 1e-15);
        let b_upper = 6490.0 / 8712.0 + 0.5 * (20.0 * PI / 11.0).ln();
        assert!((g.b_upper - b_upper).abs() < 1e-15);
        assert!((g.b_upper - 1.616_232_938_252_005).abs() < 1e-14);
        assert!((g.b_lower + 0.582_714_698_147_180_2).abs() < 1e-14);
        assert_eq!(g.b_upper_eq - g.b_lower_eq, 1.0);
        assert!(gaussian_params(0.0).is_err());
    }

    #[test]
    fn low_snr_skewness() {
        assert!((gaussian_params(1e-9).unwrap().skewness - 0.5).abs() < 1e-8);
    }

    #[test]
    fn expansion_gaps() {
        for eps in [1e-4, 0.5] {
            let lo = gaussian_expansion(10.0, 400, eps, Side::Lower, PowerConstraint::Maximal).unwrap();
            let hi = gaussian_expansion(10.0, 400, eps, Side::Upper, PowerConstraint::Maximal).unwrap();
            assert!((hi.total_log_m - lo.total_log_m - 1.0 - 0.5 * 11f64.ln()).abs() < 1e-12);
            let lo = gaussian_expansion(10.0, 400, eps, Side::Lower, PowerConstraint::Equal).unwrap();
            let hi = gaussian_expansion(10.0, 400, eps, Side::Upper, PowerConstraint::Equal).unwrap();
            assert!((hi.total_log_m - lo.total_log_m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_edges() {
        assert!((cap_area_ratio(10, 0.0).unwrap().exact.prob() - 0.5).abs() < 1e-15);
        assert_eq!(cap_area_ratio(10, -1.0).unwrap().exact.ln(), 0.0);
        assert!(cap_area_ratio(10, 1.0).unwrap().exact.is_zero());
        for b in [0.1, 0.5, 0.93] {
            let s = cap_area_ratio(25, b).unwrap().exact.prob() + cap_area_ratio(25, -b).unwrap().exact.prob();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cap_against_quadrature() {
        let n = 400u64;
        let b = (10.0f64 / 11.0).sqrt();
        let k = 0.5 * (n as f64 - 3.0);
        // Density of the first coordinate ∝ (1 - t²)^k, scaled at t = b.
        let peak = k * (1.0 - b * b).ln();
        let f = |t: f64| (k * (1.0 - t * t).ln() - peak).exp();
        let g = |t: f64| (k * (1.0 - t * t).ln()).exp();
        let num = integrate(&f, b, 1.0, 1e-13).unwrap().ln() + peak;
        let den = integrate(&g, -1.0, 1.0, 1e-13).unwrap().ln();
        let r = cap_area_ratio(n, b).unwrap();
        assert!((r.exact.ln() - (num - den)).abs() < 1e-10);
        assert!((r.exact.ln() - r.asymptotic.unwrap().ln()).abs() < 1e-3);
    }

    #[test]
    fn derivative_matches_differences() {
        for a in [0.5, 0.9, 0.94] {
            let h = 1e-6;
            let fd = (n_g(400, 10.0, a + h).0 - n_g(400, 10.0, a - h).0) / (2.0 * h);
            let d = n_g(400, 10.0, a).1;
            assert!((fd - d).abs() < 1e-6 * d.abs(), "{a}");
        }
    }

    #[test]
    fn random_coding_split_adds_up() {
        let r = shannon_random_coding_logm(400, 10.0, 1e-4).unwrap();
        let first = inner_product_log_cdf(400, 10.0, r.a).unwrap().exp();
        let second = random_coding_second_term(400, 10.0, r.a, r.log_m);
        assert!((first + second - 1e-4).abs() < 1e-9 * 1e-4);
        assert!((r.a - r.a_seed).abs() < 1e-3);
    }

    #[test]
    fn shannon_pair_at_400() {
        // Independent double-precision prototype of the same bounds.
        let cases = [(1e-5, 424.619, 425.860, 426.985), (1e-4, 431.661, 432.861, 433.995), (1e-3, 439.876, 441.034, 442.180)];
        for (eps, ach, conv_eq, conv_max) in cases {
            let a = shannon_random_coding_logm(400, 10.0, eps).unwrap().log_m;
            let ce = shannon_sphere_packing_logm(400, 10.0, eps, PowerConstraint::Equal).unwrap().log_m;
            let cm = shannon_sphere_packing_logm(400, 10.0, eps, PowerConstraint::Maximal).unwrap().log_m;
            assert!((a - ach).abs() < 2e-3, "{eps}: {a}");
            assert!((ce - conv_eq).abs() < 2e-3, "{eps}: {ce}");
            assert!((cm - conv_max).abs() < 2e-3, "{eps}: {cm}");
        }
    }

    #[test]
    fn sphere_packing_median() {
        let c = shannon_sphere_packing_logm(400, 10.0, 0.5, PowerConstraint::Equal).unwrap();
        let g = gaussian_params(10.0).unwrap();
        let want = 400.0 * g.capacity + 0.5 * 400f64.ln() + g.b_upper_eq;
        assert!((c.log_m - want).abs() < 1.0);
    }
}
