//! Binary hypothesis testing between product measures: moments of the
//! log-likelihood ratio and the refined expansion of `-ln β_{1-ε}`.

use crate::asymptotics::{fourth_order_coeff, ExpansionResult, ExpansionTerms, Order};
use crate::error::{check_eps, domain, Error, Result};
use crate::numeric::q_inverse;

/// Moments of `Z = ln dP/dQ (X)` with `X ~ P`, per symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BhtMoments {
    pub d: f64,
    pub v: f64,
    pub sk: f64,
    pub mu3: f64,
    pub mu4: f64,
}

impl BhtMoments {
    /// `Sk √V / 6 + ½`.
    pub fn skewness_coeff(&self) -> f64 {
        self.sk * self.v.sqrt() / 6.0 + 0.5
    }
}

pub fn bht_moments(p: &[f64], q: &[f64]) -> Result<BhtMoments> {
    if p.len() != q.len() || p.is_empty() {
        return domain("P and Q live on alphabets of different sizes");
    }
    for (name, d) in [("P", p), ("Q", q)] {
        let s: f64 = d.iter().sum();
        if d.iter().any(|x| !(*x >= 0.0)) || (s - 1.0).abs() > 1e-12 {
            return domain(format!("{name} must be a probability vector"));
        }
    }
    let mut pts = Vec::with_capacity(p.len());
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if qi == 0.0 {
                return Err(Error::AbsoluteContinuity(format!("P charges symbol {i} where Q vanishes")));
            }
            pts.push((pi, pi.ln() - qi.ln()));
        }
    }
    let d: f64 = pts.iter().map(|(w, z)| w * z).sum();
    let central = |k: i32| pts.iter().map(|(w, z)| w * (z - d).powi(k)).sum::<f64>();
    let (v, mu3, mu4) = (central(2), central(3), central(4));
    let sk = if v > 0.0 { mu3 / v.powf(1.5) } else { 0.0 };
    Ok(BhtMoments { d, v, sk, mu3, mu4 })
}

/// Per-index moments averaged over a product of non-identical pairs.
pub fn bht_moments_product(pairs: &[(Vec<f64>, Vec<f64>)]) -> Result<BhtMoments> {
    if pairs.is_empty() {
        return domain("product needs at least one factor");
    }
    let each = pairs.iter().map(|(p, q)| bht_moments(p, q)).collect::<Result<Vec<_>>>()?;
    let avg = |f: fn(&BhtMoments) -> f64| each.iter().map(f).sum::<f64>() / each.len() as f64;
    Ok(BhtMoments { d: avg(|m| m.d), v: avg(|m| m.v), sk: avg(|m| m.sk), mu3: avg(|m| m.mu3), mu4: avg(|m| m.mu4) })
}

pub fn bht_expansion_from(m: &BhtMoments, n: u64, eps: f64, order: Order) -> Result<ExpansionResult> {
    check_eps(eps)?;
    if n == 0 {
        return domain("blocklength must be positive");
    }
    if !(m.v > 0.0) {
        return Err(Error::Degenerate("LLR variance is zero".into()));
    }
    let nf = n as f64;
    let y = q_inverse(eps)?;
    Ok(ExpansionResult::assemble(
        order,
        ExpansionTerms {
            capacity: nf * m.d,
            dispersion: -(nf * m.v).sqrt() * y,
            log: 0.5 * nf.ln(),
            skewness: m.skewness_coeff() * y * y,
            fourth: fourth_order_coeff(m.v, m.mu3, m.mu4) * y * y * y / nf.sqrt(),
            constant: 0.0,
        },
    ))
}

/// Expansion of `-ln β_{1-eps}(Pⁿ, Qⁿ)`.
pub fn bht_expansion(p: &[f64], q: &[f64], n: u64, eps: f64, order: Order) -> Result<ExpansionResult> {
    bht_expansion_from(&bht_moments(p, q)?, n, eps, order)
}

/// Stein exponent `nD`.
pub fn bht_ld_first_order(p: &[f64], q: &[f64], n: u64) -> Result<f64> {
    Ok(n as f64 * bht_moments(p, q)?.d)
}
