//! Log-domain probability arithmetic, Gaussian tails, special functions and
//! scalar root finding.

mod gauss;
mod nct;
mod quad;
mod solve;
mod special;

pub use gauss::{log_phi, phi, q_inverse, q_inverse_log, q_tail, q_tail_log};
pub use nct::{
    noncentral_t_cdf, noncentral_t_log_cdf, noncentral_t_pdf, noncentral_t_quantile, noncentral_t_quantile_cf,
};
pub use quad::integrate;
pub(crate) use special::ln_binom_raw;
pub use solve::{newton_solve, SolveOptions};
pub use special::{
    ln_beta, ln_gamma, ln_reg_incomplete_beta, log_binomial_pmf, reg_incomplete_beta,
};

/// Natural logarithm of a probability. `-inf` is an exact zero.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
#[repr(transparent)]
pub struct LogProb(f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    pub fn new(ln_value: f64) -> Self {
        LogProb(ln_value)
    }

    pub fn from_prob(p: f64) -> Self {
        LogProb(p.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `ln(1 - p)` without cancellation on either end.
    pub fn complement(self) -> LogProb {
        LogProb(ln_one_minus_exp(self.0))
    }
}

impl From<LogProb> for f64 {
    fn from(p: LogProb) -> f64 {
        p.0
    }
}

/// `ln(1 - e^x)` for `x <= 0`.
pub fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{t_i}` on raw log values; empty input gives `-inf`.
pub fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = terms.iter().map(|&t| (t - max).exp()).sum();
    max + s.ln()
}

pub fn log_sum_exp(terms: &[LogProb]) -> LogProb {
    let raw: Vec<f64> = terms.iter().map(|t| t.0).collect();
    LogProb(ln_sum_exp(&raw))
}

/// First four cumulants of a per-symbol random variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CumulantSet {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa4: f64,
}

impl CumulantSet {
    pub fn new(kappa1: f64, kappa2: f64, kappa3: f64, kappa4: f64) -> Self {
        CumulantSet { kappa1, kappa2, kappa3, kappa4 }
    }

    /// From the mean and the second to fourth central moments.
    pub fn from_central_moments(mean: f64, mu2: f64, mu3: f64, mu4: f64) -> Self {
        CumulantSet { kappa1: mean, kappa2: mu2, kappa3: mu3, kappa4: mu4 - 3.0 * mu2 * mu2 }
    }

    /// Cumulants of a finitely supported distribution.
    pub fn of_distribution(values: &[f64], probs: &[f64]) -> Self {
        let mean: f64 = values.iter().zip(probs).map(|(v, p)| v * p).sum();
        let mut m = [0.0; 3];
        for (v, p) in values.iter().zip(probs) {
            let d = v - mean;
            m[0] += p * d * d;
            m[1] += p * d * d * d;
            m[2] += p * d * d * d * d;
        }
        Self::from_central_moments(mean, m[0], m[1], m[2])
    }

    pub fn bernoulli(p: f64) -> Self {
        Self::of_distribution(&[0.0, 1.0], &[1.0 - p, p])
    }

    pub fn skewness(&self) -> f64 {
        self.kappa3 / self.kappa2.powf(1.5)
    }

    /// First two coefficients `(a0, a1)` of the Cramér series.
    pub fn cramer_coeffs(&self) -> (f64, f64) {
        let k2 = self.kappa2;
        let a0 = self.skewness() / 6.0;
        let a1 = (self.kappa4 * k2 - 3.0 * self.kappa3 * self.kappa3) / (24.0 * k2 * k2 * k2);
        (a0, a1)
    }

    /// Coefficients `(b0, b1)` of the moderate-deviations Cornish-Fisher inversion.
    pub fn cornish_fisher_coeffs(&self) -> (f64, f64) {
        let k2 = self.kappa2;
        let b0 = self.skewness() / 6.0;
        let b1 = (3.0 * self.kappa4 * k2 - 4.0 * self.kappa3 * self.kappa3) / (72.0 * k2 * k2 * k2);
        (b0, b1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_basics() {
        let half = LogProb::from_prob(0.5);
        assert!(log_sum_exp(&[half, half]).ln().abs() < 1e-15);
        assert!(log_sum_exp(&[]).is_zero());
        // mpmath: ln(2e-300)
        let t = LogProb::from_prob(1e-300);
        let want = -690.08238071765376;
        assert!(((log_sum_exp(&[t, t]).ln() - want) / want).abs() < 1e-12);
    }

    #[test]
    fn lse_permutation_and_monotone() {
        let a = [-3.0, -1.0, -700.0, -0.5, -40.0];
        let mut b = a;
        b.reverse();
        assert!((ln_sum_exp(&a) - ln_sum_exp(&b)).abs() < 1e-15);
        let mut c = a;
        c[2] += 1.0;
        c[0] += 1e-3;
        assert!(ln_sum_exp(&c) > ln_sum_exp(&a));
    }

    #[test]
    fn complement_both_ends() {
        assert!((LogProb::from_prob(1e-20).complement().ln() + 1e-20).abs() < 1e-35);
        let c = LogProb::new((-1e-20f64).ln_1p()).complement().ln();
        assert!((c - (1e-20f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn cumulants_relations() {
        let c = CumulantSet::bernoulli(0.3);
        let (a0, a1) = c.cramer_coeffs();
        let (b0, b1) = c.cornish_fisher_coeffs();
        assert_eq!(a0, b0);
        assert!((b1 - (2.5 * a0 * a0 + a1)).abs() < 1e-15);
        assert!((c.kappa2 - 0.21).abs() < 1e-15);
        assert!((c.kappa3 - 0.21 * 0.4).abs() < 1e-15);
    }
}
