use super::{Channel, InputDistribution};
use crate::error::{Error, Result};

/// Below this the information density is treated as constant.
const DEGENERATE_VAR: f64 = 1e-24;

/// Moments of the information density `i(X;Y) = ln W(Y|X)/P_Y(Y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSet {
    pub mutual_info: f64,
    pub v_unconditional: f64,
    pub t_unconditional: f64,
    pub v_conditional: f64,
    pub t_conditional: f64,
    pub v_reverse: f64,
    pub mu3: f64,
    pub mu4: f64,
}

impl MomentSet {
    pub fn is_degenerate(&self) -> bool {
        self.v_unconditional < DEGENERATE_VAR
    }

    pub fn sk_unconditional(&self) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::Degenerate("unconditional variance is zero".into()));
        }
        Ok(self.t_unconditional / self.v_unconditional.powf(1.5))
    }

    pub fn sk_conditional(&self) -> Result<f64> {
        if self.v_conditional < DEGENERATE_VAR {
            return Err(Error::Degenerate("conditional variance is zero".into()));
        }
        Ok(self.t_conditional / self.v_conditional.powf(1.5))
    }

    /// Singularity parameter `1 - V_r / V_u`.
    pub fn eta(&self) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::Degenerate("singularity parameter undefined: V_u = 0".into()));
        }
        Ok((1.0 - self.v_reverse / self.v_unconditional).clamp(0.0, 1.0))
    }
}

/// `D(p || q)` with `0 ln 0 = 0`.
pub fn divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    let mut d = 0.0;
    for (y, (&a, &b)) in p.iter().zip(q).enumerate() {
        if a > 0.0 {
            if b <= 0.0 {
                return Err(Error::AbsoluteContinuity(format!("mass {a} at output {y} where the reference is zero")));
            }
            d += a * (a / b).ln();
        }
    }
    Ok(d)
}

/// Per-input `(D, V, T)` of the log-ratio `ln row(y)/q(y)` under `row`.
pub(crate) fn row_moments(row: &[f64], q: &[f64]) -> Result<(f64, f64, f64)> {
    let d = divergence(row, q)?;
    let (mut v, mut t) = (0.0, 0.0);
    for (&a, &b) in row.iter().zip(q) {
        if a > 0.0 {
            let e = (a / b).ln() - d;
            v += a * e * e;
            t += a * e * e * e;
        }
    }
    Ok((d, v, t))
}

pub fn moments(channel: &Channel, px: &InputDistribution) -> Result<MomentSet> {
    if px.len() != channel.input_size() {
        return Err(Error::Domain("input distribution does not match the channel".into()));
    }
    let py = channel.output_distribution(px);
    let p = px.weights();
    let ny = channel.output_size();
    // Information density on the support of P_X x W.
    let mut dens = vec![0.0; channel.input_size() * ny];
    let mut mean = 0.0;
    let (mut v_cond, mut t_cond) = (0.0, 0.0);
    for x in 0..channel.input_size() {
        if p[x] == 0.0 {
            continue;
        }
        let row = channel.row(x);
        let (d, v, t) = row_moments(row, &py)?;
        mean += p[x] * d;
        v_cond += p[x] * v;
        t_cond += p[x] * t;
        for y in 0..ny {
            if row[y] > 0.0 {
                dens[x * ny + y] = (row[y] / py[y]).ln();
            }
        }
    }
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    let mut v_rev = 0.0;
    for y in 0..ny {
        if py[y] == 0.0 {
            continue;
        }
        let mut cond_mean = 0.0;
        for x in 0..channel.input_size() {
            let mass = p[x] * channel.prob(x, y);
            if mass > 0.0 {
                let e = dens[x * ny + y] - mean;
                m2 += mass * e * e;
                m3 += mass * e * e * e;
                m4 += mass * e * e * e * e;
                cond_mean += mass * dens[x * ny + y];
            }
        }
        cond_mean /= py[y];
        for x in 0..channel.input_size() {
            let mass = p[x] * channel.prob(x, y);
            if mass > 0.0 {
                let e = dens[x * ny + y] - cond_mean;
                v_rev += mass * e * e;
            }
        }
    }
    Ok(MomentSet {
        mutual_info: mean,
        v_unconditional: m2,
        t_unconditional: m3,
        v_conditional: v_cond,
        t_conditional: t_cond,
        v_reverse: v_rev,
        mu3: m3,
        mu4: m4,
    })
}
