use nalgebra::DMatrix;

use super::moments::{divergence, moments};
use super::{Channel, InputDistribution};
use crate::error::{Error, Precondition, Result};

const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Where the set of dispersion achievers came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AchieverSource {
    /// Cover-Thomas symmetric channel; the uniform input.
    Symmetric,
    /// Rows on the capacity support are linearly independent.
    UniqueCaid,
    /// Supplied by the caller through [`ChannelStats::with_achievers`].
    Supplied,
    /// Capacity-achieving input may not be unique and nothing was supplied.
    Unresolved,
}

#[derive(Clone, Debug)]
pub struct ChannelStats {
    pub capacity: f64,
    pub caod: Vec<f64>,
    /// Inputs whose divergence to the output distribution is within `10 tol` of capacity.
    pub x_dagger: Vec<usize>,
    pub caid: InputDistribution,
    pub v_min: f64,
    pub v_max: f64,
    pub dispersion_achievers: Vec<InputDistribution>,
    /// `V` of each entry of `dispersion_achievers`.
    pub achiever_dispersions: Vec<f64>,
    pub source: AchieverSource,
    pub symmetric: bool,
    pub tol: f64,
    pub iterations: usize,
}

impl ChannelStats {
    /// `V_min` below `eps = 1/2`, `V_max` from there on.
    pub fn v_eps(&self, eps: f64) -> f64 {
        if eps < 0.5 {
            self.v_min
        } else {
            self.v_max
        }
    }

    /// Achievers attaining `v_eps(eps)`.
    pub fn achievers(&self, eps: f64) -> Vec<&InputDistribution> {
        let target = self.v_eps(eps);
        self.dispersion_achievers
            .iter()
            .zip(&self.achiever_dispersions)
            .filter(|(_, &v)| (v - target).abs() <= 1e-12 * target.max(1.0))
            .map(|(p, _)| p)
            .collect()
    }

    /// Replaces the achiever set with caller-supplied capacity-achieving inputs.
    pub fn with_achievers(&self, channel: &Channel, list: Vec<InputDistribution>) -> Result<ChannelStats> {
        if list.is_empty() {
            return Err(Error::Domain("achiever list is empty".into()));
        }
        let slack = (10.0 * self.tol).max(1e-9);
        let mut vs = Vec::with_capacity(list.len());
        for (k, p) in list.iter().enumerate() {
            let m = moments(channel, p)?;
            if m.mutual_info < self.capacity - slack {
                return Err(Error::Domain(format!(
                    "achiever {k} has I = {} below capacity {}",
                    m.mutual_info, self.capacity
                )));
            }
            vs.push(m.v_conditional);
        }
        let mut out = self.clone();
        out.v_min = vs.iter().copied().fold(f64::INFINITY, f64::min);
        out.v_max = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        out.dispersion_achievers = list;
        out.achiever_dispersions = vs;
        out.source = AchieverSource::Supplied;
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct Dispersion {
    pub v_min: f64,
    pub v_max: f64,
    pub dispersion_achievers: Vec<InputDistribution>,
}

#[derive(Clone, Debug)]
pub struct Singularity {
    pub is_singular: bool,
    pub eta_per_achiever: Vec<f64>,
}

pub fn capacity_solve(channel: &Channel, tol: f64) -> Result<ChannelStats> {
    capacity_solve_with(channel, tol, DEFAULT_MAX_ITER)
}

/// Blahut-Arimoto iteration stopped once `max_x D(W_x||P_Y) - I < tol`.
pub fn capacity_solve_with(channel: &Channel, tol: f64, max_iter: usize) -> Result<ChannelStats> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let nx = channel.input_size();
    let symmetric = channel.is_cover_thomas_symmetric();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut d = vec![0.0; nx];
    let mut iterations = 0;
    loop {
        let q = channel.output_distribution(&InputDistribution::from_unchecked(p.clone()));
        for x in 0..nx {
            d[x] = divergence(channel.row(x), &q)?;
        }
        let info: f64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
        let dmax = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if symmetric || dmax - info < tol {
            break;
        }
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::NoConvergence(format!(
                "capacity iteration stalled with gap {} after {max_iter} steps",
                dmax - info
            )));
        }
        let mut z = 0.0;
        for x in 0..nx {
            p[x] *= (d[x] - dmax).exp();
            z += p[x];
        }
        p.iter_mut().for_each(|a| *a /= z);
    }

    if !symmetric {
        if let Some((pp, dd)) = polish(channel, &p, &d, tol) {
            p = pp;
            d = dd;
        }
    }
    let c_est = p.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
    let x_dagger: Vec<usize> = (0..nx).filter(|&x| d[x] >= c_est - 10.0 * tol).collect();
    if !symmetric {
        // Inputs off the support carry only iteration residue.
        for x in 0..nx {
            if !x_dagger.contains(&x) {
                p[x] = 0.0;
            }
        }
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|a| *a /= z);
    }
    let caid = InputDistribution::from_unchecked(p);
    let caod = channel.output_distribution(&caid);
    let m = moments(channel, &caid)?;
    let source = if symmetric {
        AchieverSource::Symmetric
    } else if support_rank(channel, &x_dagger) == x_dagger.len() {
        AchieverSource::UniqueCaid
    } else {
        AchieverSource::Unresolved
    };
    Ok(ChannelStats {
        capacity: m.mutual_info,
        caod,
        x_dagger,
        caid: caid.clone(),
        v_min: m.v_conditional,
        v_max: m.v_conditional,
        dispersion_achievers: vec![caid],
        achiever_dispersions: vec![m.v_conditional],
        source,
        symmetric,
        tol,
        iterations,
    })
}

/// Active-set Newton on `D_x(P) = C` over the support. Blahut-Arimoto can
/// meet its gap test while an input just below capacity still holds
/// noticeable mass, which leaves the support divergences unequal.
fn polish(channel: &Channel, p0: &[f64], d0: &[f64], tol: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let nx = channel.input_size();
    let ny = channel.output_size();
    let info0: f64 = p0.iter().zip(d0).map(|(a, b)| a * b).sum();
    let mut active: Vec<bool> = d0.iter().map(|&x| x >= info0 - 10.0 * tol).collect();
    let mut p: Vec<f64> = (0..nx).map(|x| if active[x] { p0[x] } else { 0.0 }).collect();
    let divs = |p: &[f64]| -> Option<(Vec<f64>, Vec<f64>)> {
        let q = channel.output_distribution(&InputDistribution::from_unchecked(p.to_vec()));
        let d = (0..nx).map(|x| divergence(channel.row(x), &q).ok()).collect::<Option<Vec<_>>>()?;
        Some((q, d))
    };
    for _ in 0..2 * nx + 2 {
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|a| *a /= z);
        let mut steps = 0;
        loop {
            steps += 1;
            if steps > 60 {
                return None;
            }
            let s: Vec<usize> = (0..nx).filter(|&x| active[x]).collect();
            let k = s.len();
            let (q, d) = divs(&p)?;
            let mut m = DMatrix::zeros(k + 1, k + 1);
            let mut rhs = nalgebra::DVector::zeros(k + 1);
            for (i, &a) in s.iter().enumerate() {
                for (j, &b) in s.iter().enumerate() {
                    m[(i, j)] = (0..ny)
                        .filter(|&y| q[y] > 0.0)
                        .map(|y| channel.prob(a, y) * channel.prob(b, y) / q[y])
                        .sum::<f64>();
                }
                m[(i, k)] = 1.0;
                m[(k, i)] = 1.0;
                rhs[i] = d[a];
            }
            let sol = m.lu().solve(&rhs)?;
            if !sol.iter().all(|v| v.is_finite()) {
                return None;
            }
            let delta: Vec<f64> = (0..k).map(|i| sol[i]).collect();
            // Step to the boundary if an input would go negative, then drop it.
            let mut t = 1.0;
            let mut block = None;
            for (i, &a) in s.iter().enumerate() {
                if delta[i] < 0.0 && p[a] + delta[i] <= 0.0 {
                    let ti = -p[a] / delta[i];
                    if ti < t {
                        t = ti;
                        block = Some(a);
                    }
                }
            }
            for (i, &a) in s.iter().enumerate() {
                p[a] = (p[a] + t * delta[i]).max(0.0);
            }
            if let Some(a) = block {
                p[a] = 0.0;
                active[a] = false;
                continue;
            }
            if delta.iter().all(|v| v.abs() < 1e-15) || steps > 40 {
                break;
            }
        }
        let (_, d) = divs(&p)?;
        let info: f64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
        let worst = (0..nx).filter(|&x| !active[x]).max_by(|&a, &b| d[a].total_cmp(&d[b]));
        match worst {
            Some(x) if d[x] > info + tol => active[x] = true,
            _ => {
                let dmax = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                return (dmax - info < tol && info >= info0 - tol).then_some((p, d));
            }
        }
    }
    None
}

fn support_rank(channel: &Channel, support: &[usize]) -> usize {
    let ny = channel.output_size();
    let m = DMatrix::from_fn(support.len(), ny, |i, y| channel.prob(support[i], y));
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}

/// `(V_min, V_max)` over the achiever set.
pub fn dispersion(_channel: &Channel, stats: &ChannelStats) -> Result<Dispersion> {
    if stats.source == AchieverSource::Unresolved {
        return Err(Error::Precondition(Precondition::NonUniqueCaid));
    }
    Ok(Dispersion {
        v_min: stats.v_min,
        v_max: stats.v_max,
        dispersion_achievers: stats.dispersion_achievers.clone(),
    })
}

pub fn classify_singularity(channel: &Channel, stats: &ChannelStats) -> Result<Singularity> {
    let disp = dispersion(channel, stats)?;
    let eta_per_achiever = disp
        .dispersion_achievers
        .iter()
        .map(|p| moments(channel, p)?.eta())
        .collect::<Result<Vec<_>>>()?;
    let is_singular = eta_per_achiever.iter().all(|&e| e >= 1.0 - 1e-9);
    Ok(Singularity { is_singular, eta_per_achiever })
}
