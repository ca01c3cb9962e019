use super::{integrate, ln_gamma, log_phi, newton_solve, q_inverse, q_tail_log, SolveOptions};
use crate::error::{check_eps, domain, Error, Result};

/// Log density of `S = sqrt(chi2_df / df)`.
fn ln_chi_density(s: f64, df: f64) -> f64 {
    if s <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let h = 0.5 * df;
    std::f64::consts::LN_2 + h * h.ln() - ln_gamma(h) + (df - 1.0) * s.ln() - h * s * s
}

fn check_args(t: f64, df: u64, nc: f64) -> Result<f64> {
    if df < 1 {
        return domain("noncentral t needs df >= 1");
    }
    if !t.is_finite() || !nc.is_finite() {
        return domain(format!("noncentral t needs finite t and nc, got t = {t}, nc = {nc}"));
    }
    Ok(df as f64)
}

/// `ln ∫ e^{log_g(s)} ds` over `s > 0` for an integrand concentrated near the
/// chi window.
fn log_integral(log_g: &dyn Fn(f64) -> f64, df: f64) -> Result<f64> {
    // The chi density lives on a window of width ~1/sqrt(2 df) around 1.
    let sd = (0.5 / df).sqrt();
    let s_hi = 1.0 + 60.0 * sd + 20.0 / df;
    let grid = 600;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 1..=grid {
        let s = s_hi * i as f64 / grid as f64;
        let g = log_g(s);
        if g > best.1 {
            best = (s, g);
        }
    }
    let (s_max, g_max) = best;
    if g_max == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let cutoff = g_max - 60.0;
    let step = s_hi / grid as f64;
    let mut lo = s_max;
    while lo > 0.0 && log_g(lo) > cutoff {
        lo -= step;
    }
    let lo = lo.max(0.0);
    let mut hi = s_max;
    while log_g(hi) > cutoff {
        hi += step;
    }
    let f = |s: f64| (log_g(s) - g_max).exp();
    let left = integrate(&f, lo, s_max, 1e-13)?;
    let right = integrate(&f, s_max, hi, 1e-13)?;
    Ok((left + right).ln() + g_max)
}

/// `P[rho < t]` for a noncentral t variable `rho = (Z + nc) / S`.
///
/// Integrates `Q(nc - t s)` against the chi density of `S`, which keeps
/// relative accuracy in the lower tail.
pub fn noncentral_t_cdf(t: f64, df: u64, nc: f64) -> Result<f64> {
    Ok(noncentral_t_log_cdf(t, df, nc)?.exp().min(1.0))
}

pub fn noncentral_t_log_cdf(t: f64, df: u64, nc: f64) -> Result<f64> {
    let df = check_args(t, df, nc)?;
    Ok(log_integral(&|s| q_tail_log(nc - t * s) + ln_chi_density(s, df), df)?.min(0.0))
}

pub fn noncentral_t_pdf(t: f64, df: u64, nc: f64) -> Result<f64> {
    let df = check_args(t, df, nc)?;
    Ok(log_integral(&|s| s.ln() + log_phi(nc - t * s) + ln_chi_density(s, df), df)?.exp())
}

/// The `eps`-quantile: Newton on `ln F(t) = ln eps` from the Cornish-Fisher seed.
pub fn noncentral_t_quantile(eps: f64, df: u64, nc: f64) -> Result<f64> {
    let seed = noncentral_t_quantile_cf(eps, df, nc)?;
    let target = eps.ln();
    let f = |t: f64| -> (f64, f64) {
        match (noncentral_t_log_cdf(t, df, nc), noncentral_t_pdf(t, df, nc)) {
            (Ok(l), Ok(d)) => (l - target, d / l.exp()),
            _ => (f64::NAN, f64::NAN),
        }
    };
    // Widen until the bracket changes sign.
    let mut w = 1.0;
    let (mut lo, mut hi) = (seed - w, seed + w);
    while f(lo).0 > 0.0 || f(hi).0 < 0.0 {
        w *= 2.0;
        if w > 1e6 {
            return Err(Error::NoConvergence(format!("no bracket for the {eps}-quantile")));
        }
        (lo, hi) = (seed - w, seed + w);
    }
    newton_solve(f, seed, &SolveOptions { tol: 1e-13, max_iter: 200, bracket: Some((lo, hi)) })
}

/// Cornish-Fisher seed for the `eps`-quantile, with `df = n - 1`, `nc = sqrt(nP)`.
pub fn noncentral_t_quantile_cf(eps: f64, df: u64, nc: f64) -> Result<f64> {
    check_eps(eps)?;
    if df < 1 {
        return domain("noncentral t needs df >= 1");
    }
    let n = (df + 1) as f64;
    let p = nc * nc / n;
    let k1 = (n * p).sqrt() + 0.75 * (p / n).sqrt();
    let k2 = 1.0 + p / 2.0 + (2.0 + 19.0 * p / 8.0) / n;
    let sk = (12.0 * p.sqrt() + 5.0 * p.powf(1.5)) / ((2.0 * n).sqrt() * (2.0 + p).powf(1.5));
    let y = q_inverse(eps)?;
    Ok(k1 - k2.sqrt() * (y - sk / 6.0 * (y * y - 1.0)))
}
