use crate::error::{check_eps, domain, Result};
use crate::numeric::{ln_add_exp, ln_binom_raw, ln_sum_exp, LogProb};

use super::spectrum::np_beta_exact_eps;

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 0.5 {
        Ok(())
    } else {
        domain(format!("crossover probability must lie in (0, 1/2), got {p}"))
    }
}

/// `ln(M - 1)` for `M = e^{log_m}`.
fn ln_m_minus_one(log_m: f64) -> f64 {
    if log_m > 40.0 {
        log_m + (-(-log_m).exp()).ln_1p()
    } else {
        log_m.exp_m1().ln()
    }
}

/// Random-coding union bound for the BSC with uniform codewords.
pub fn bsc_rcu_eps(n: u64, p: f64, log_m: f64) -> Result<LogProb> {
    check_p(p)?;
    if !(log_m >= 0.0) {
        return domain(format!("log M must be nonnegative, got {log_m}"));
    }
    let lm1 = ln_m_minus_one(log_m);
    let ln_half_n = -(n as f64) * std::f64::consts::LN_2;
    // ln P[wt(Z̄ ⊕ Y) <= t] under the uniform competitor.
    let mut ln_cum = f64::NEG_INFINITY;
    let mut terms = Vec::with_capacity(n as usize + 1);
    for t in 0..=n {
        ln_cum = ln_add_exp(ln_cum, ln_binom_raw(n, t, 0.5, 0.5) - ln_half_n);
        let union = (lm1 + ln_cum + ln_half_n).min(0.0);
        terms.push(ln_binom_raw(n, t, p, 1.0 - p) + union);
    }
    Ok(LogProb::new(ln_sum_exp(&terms)))
}

/// Meta-converse `-ln β_{1-eps}` of one output row against uniform outputs.
pub fn bsc_converse_logm(n: u64, p: f64, eps: f64) -> Result<f64> {
    check_p(p)?;
    check_eps(eps)?;
    Ok(-np_beta_exact_eps(&[1.0 - p, p], &[0.5, 0.5], n, eps)?.ln())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundBracket {
    pub log_m_achievable: f64,
    pub log_m_converse: f64,
    pub eps_used: f64,
}

impl BoundBracket {
    pub fn contains(&self, log_m: f64) -> bool {
        self.log_m_achievable <= log_m && log_m <= self.log_m_converse
    }
}

/// Largest `ln M` the union bound certifies, to within `1e-6` nats.
fn rcu_log_m(n: u64, p: f64, eps: f64) -> Result<f64> {
    let target = eps.ln();
    let (mut lo, mut hi) = (0.0, n as f64 * std::f64::consts::LN_2);
    if bsc_rcu_eps(n, p, hi)?.ln() <= target {
        return Ok(hi);
    }
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if bsc_rcu_eps(n, p, mid)?.ln() <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

pub fn bracket(n: u64, p: f64, eps: f64) -> Result<BoundBracket> {
    check_p(p)?;
    check_eps(eps)?;
    Ok(BoundBracket {
        log_m_achievable: rcu_log_m(n, p, eps)?,
        log_m_converse: bsc_converse_logm(n, p, eps)?,
        eps_used: eps,
    })
}
