//! Second-order geometry of mutual information around a capacity-achieving
//! input: `J`, its centred pseudo-inverse `J~`, the dispersion gradients and
//! the quadratic forms `A0`, `A1` that enter the skewness bounds.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dmc::{dispersion, moments, Channel, ChannelStats, InputDistribution};
use crate::error::{Error, Precondition, Result};
use crate::numeric::q_inverse;

/// Relative eigenvalue cutoff for the pseudo-inverse of `J`.
const PINV_CUTOFF: f64 = 1e-10;
/// An achiever "uses" an input when it puts more than this mass on it.
const SUPPORT_MASS: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct GeometryBundle {
    pub grad_i: DVector<f64>,
    pub hess_i: DMatrix<f64>,
    /// `-hess_i` on the capacity support, zero elsewhere.
    pub j: DMatrix<f64>,
    pub j_pinv: DMatrix<f64>,
    pub j_tilde: DMatrix<f64>,
    pub v: DVector<f64>,
    pub v_tilde: DVector<f64>,
    pub v_bar: DVector<f64>,
    /// `A0`, `A1` normalised by the conditional variance at the given input.
    pub a0: f64,
    pub a1: f64,
}

/// Gradient of `V(P_X)` and its part `v_bar` that flows through `P_Y`.
pub fn dispersion_gradient(channel: &Channel, px: &InputDistribution) -> Result<(DVector<f64>, DVector<f64>)> {
    let nx = channel.input_size();
    let ny = channel.output_size();
    let p = px.weights();
    let py = channel.output_distribution(px);
    let mut d = vec![0.0; nx];
    let mut vx = vec![0.0; nx];
    for x in 0..nx {
        let (dx, v, _) = crate::dmc::row_moments(channel.row(x), &py)?;
        d[x] = dx;
        vx[x] = v;
    }
    // g[y] = sum_x' p(x') W(y|x') l(x',y),  h[y] = sum_x' p(x') D_x' W(y|x').
    let mut g = vec![0.0; ny];
    let mut h = vec![0.0; ny];
    for x in 0..nx {
        if p[x] == 0.0 {
            continue;
        }
        for y in 0..ny {
            let w = channel.prob(x, y);
            if w > 0.0 {
                g[y] += p[x] * w * (w / py[y]).ln();
                h[y] += p[x] * w * d[x];
            }
        }
    }
    let mut v_bar = DVector::zeros(nx);
    for x in 0..nx {
        let mut s = 0.0;
        for y in 0..ny {
            let w = channel.prob(x, y);
            if w > 0.0 {
                s += w / py[y] * 2.0 * (h[y] - g[y]);
            }
        }
        v_bar[x] = s;
    }
    let v = DVector::from_fn(nx, |x, _| vx[x] + v_bar[x]);
    Ok((v, v_bar))
}

pub fn geometry(channel: &Channel, stats: &ChannelStats, px: &InputDistribution) -> Result<GeometryBundle> {
    let nx = channel.input_size();
    let ny = channel.output_size();
    if px.len() != nx {
        return Err(Error::Domain("input distribution does not match the channel".into()));
    }
    let py = channel.output_distribution(px);
    let mut grad_i = DVector::zeros(nx);
    for x in 0..nx {
        grad_i[x] = crate::dmc::divergence(channel.row(x), &py)? - 1.0;
    }
    let mut k = DMatrix::zeros(nx, nx);
    for x in 0..nx {
        for xp in x..nx {
            let mut s = 0.0;
            for y in 0..ny {
                let prod = channel.prob(x, y) * channel.prob(xp, y);
                if prod > 0.0 {
                    s += prod / py[y];
                }
            }
            k[(x, xp)] = s;
            k[(xp, x)] = s;
        }
    }
    let hess_i = -&k;
    let mut j = DMatrix::zeros(nx, nx);
    for &a in &stats.x_dagger {
        for &b in &stats.x_dagger {
            j[(a, b)] = k[(a, b)];
        }
    }
    let j_pinv = pseudo_inverse(&j);
    let ones = DVector::from_element(nx, 1.0);
    let u = &j_pinv * &ones;
    let c = ones.dot(&u);
    if !(c > 0.0) {
        return Err(Error::Numerical(format!("1'J+1 = {c} is not positive")));
    }
    let j_tilde = &j_pinv - &u * u.transpose() / c;

    let (v, v_bar) = dispersion_gradient(channel, px)?;
    let mut v_tilde = DVector::zeros(nx);
    for x in 0..nx {
        v_tilde[x] = crate::dmc::row_moments(channel.row(x), &stats.caod)?.1;
    }
    let v_px = moments(channel, px)?.v_conditional;
    let mut bundle = GeometryBundle { grad_i, hess_i, j, j_pinv, j_tilde, v, v_tilde, v_bar, a0: 0.0, a1: 0.0 };
    if v_px > 0.0 {
        let (a0, a1) = a_terms(&bundle, v_px)?;
        bundle.a0 = a0;
        bundle.a1 = a1;
    }
    Ok(bundle)
}

/// Moore-Penrose inverse of a symmetric PSD matrix.
pub(crate) fn pseudo_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut out = DMatrix::zeros(n, n);
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > PINV_CUTOFF * top {
            let col = eig.eigenvectors.column(i);
            out += col * col.transpose() / lam;
        }
    }
    out
}

/// `(v' J~ v, v_bar' J~ v_bar) / (8 v_eps)`.
pub fn a_terms(bundle: &GeometryBundle, v_eps: f64) -> Result<(f64, f64)> {
    if !(v_eps > 0.0) {
        return Err(Error::Domain(format!("v_eps must be positive, got {v_eps}")));
    }
    let q = |z: &DVector<f64>| (z.transpose() * &bundle.j_tilde * z)[(0, 0)];
    // J~ is PSD; clamp rounding below zero.
    Ok(((q(&bundle.v) / (8.0 * v_eps)).max(0.0), (q(&bundle.v_bar) / (8.0 * v_eps)).max(0.0)))
}

#[derive(Clone, Debug)]
pub struct SkewnessBounds {
    pub s_lower: f64,
    pub s_upper: f64,
    pub achiever_lower: InputDistribution,
    pub achiever_upper: InputDistribution,
    /// Ingredients at `achiever_lower`.
    pub a0: f64,
    pub a1: f64,
    pub eta: f64,
    pub sk_u: f64,
    pub v_eps: f64,
}

/// Skewness bounds in the small-error regime (`V_eps = V_min`).
pub fn skewness_bounds(channel: &Channel, stats: &ChannelStats) -> Result<SkewnessBounds> {
    skewness_bounds_at(channel, stats, 0.25)
}

/// Skewness bounds using the achievers and dispersion that `eps` selects.
pub fn skewness_bounds_at(channel: &Channel, stats: &ChannelStats, eps: f64) -> Result<SkewnessBounds> {
    dispersion(channel, stats)?;
    let v_eps = stats.v_eps(eps);
    if !(v_eps > 1e-24) {
        return Err(Error::Precondition(Precondition::ZeroDispersion));
    }
    let mut best: Option<SkewnessBounds> = None;
    for p in stats.achievers(eps) {
        let m = moments(channel, p)?;
        let eta = m.eta()?;
        if eta >= 1.0 - 1e-9 {
            return Err(Error::Precondition(Precondition::SingularChannel { eta }));
        }
        if let Some(&x) = stats.x_dagger.iter().find(|&&x| p.weights()[x] <= SUPPORT_MASS) {
            return Err(Error::Precondition(Precondition::SupportMismatch { input: x }));
        }
        let geo = geometry(channel, stats, p)?;
        let (a0, a1) = a_terms(&geo, v_eps)?;
        let sk_u = m.sk_unconditional()?;
        let base = sk_u * v_eps.sqrt() / 6.0;
        let lower = base + a0 + (1.0 - eta) / (2.0 * (1.0 + eta));
        let upper = base + 0.5 + a0 - a1;
        match best.as_mut() {
            None => {
                best = Some(SkewnessBounds {
                    s_lower: lower,
                    s_upper: upper,
                    achiever_lower: p.clone(),
                    achiever_upper: p.clone(),
                    a0,
                    a1,
                    eta,
                    sk_u,
                    v_eps,
                })
            }
            Some(b) => {
                if lower > b.s_lower {
                    b.s_lower = lower;
                    b.achiever_lower = p.clone();
                    b.a0 = a0;
                    b.a1 = a1;
                    b.eta = eta;
                    b.sk_u = sk_u;
                }
                if upper > b.s_upper {
                    b.s_upper = upper;
                    b.achiever_upper = p.clone();
                }
            }
        }
    }
    best.ok_or_else(|| Error::Numerical("no achiever attains V_eps".into()))
}

#[derive(Clone, Debug)]
pub struct TiltedInput {
    pub distribution: InputDistribution,
    /// `distribution - P*`; sums to zero.
    pub correction: Vec<f64>,
    /// Dual variable of the sum-to-zero constraint.
    pub lambda: f64,
    /// `n (g'h - g'Jg/2)` at the optimum; equals `A0 Q^{-1}(eps)^2`.
    pub objective: f64,
}

/// Input distribution that attains the lower skewness bound at `(n, eps)`.
pub fn optimal_input_tilt(channel: &Channel, stats: &ChannelStats, n: u64, eps: f64) -> Result<TiltedInput> {
    let y = q_inverse(eps)?;
    let bounds = skewness_bounds_at(channel, stats, eps)?;
    let p_star = &bounds.achiever_lower;
    let geo = geometry(channel, stats, p_star)?;
    let nf = n as f64;
    let nx = channel.input_size();
    let scale = -y / (2.0 * (nf * bounds.v_eps).sqrt());
    let h = &geo.j * &geo.j_pinv * (&geo.v * scale);
    let g = &geo.j_tilde * &h;

    let ones = DVector::from_element(nx, 1.0);
    let lambda = ones.dot(&(&geo.j_pinv * &h)) / ones.dot(&(&geo.j_pinv * &ones));
    let mut ind = DVector::zeros(nx);
    for &x in &stats.x_dagger {
        ind[x] = 1.0;
    }
    let resid = (&geo.j * &g - (&h - &ind * lambda)).amax();
    let sum = g.sum();
    let size = h.amax().max(1e-300);
    if resid > 1e-9 * size.max(1.0) || sum.abs() > 1e-12 {
        return Err(Error::Numerical(format!(
            "stationarity check failed: residual {resid}, correction sum {sum}"
        )));
    }
    let objective = nf * (g.dot(&h) - 0.5 * (g.transpose() * &geo.j * &g)[(0, 0)]);
    let correction: Vec<f64> = g.iter().copied().collect();
    let mut weights = Vec::with_capacity(nx);
    for x in 0..nx {
        let w = p_star.weights()[x] + correction[x];
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::SimplexViolation { n: nf, eps, input: x, weight: w });
        }
        weights.push(w);
    }
    Ok(TiltedInput { distribution: InputDistribution::from_unchecked(weights), correction, lambda, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmc::capacity_solve;

    fn solved(rows: Vec<Vec<f64>>) -> (Channel, ChannelStats) {
        let ch = Channel::new(rows).unwrap();
        let s = capacity_solve(&ch, 1e-13).unwrap();
        (ch, s)
    }

    #[test]
    fn bsc_j_matrix() {
        let (ch, s) = solved(vec![vec![0.89, 0.11], vec![0.11, 0.89]]);
        let g = geometry(&ch, &s, &s.caid).unwrap();
        // J = 2 (0.89^2 + 0.11^2), 2 (2 * 0.89 * 0.11)
        assert!((g.j[(0, 0)] - 1.6084).abs() < 1e-12);
        assert!((g.j[(0, 1)] - 0.3916).abs() < 1e-12);
        assert!(g.a0 < 1e-15 && g.a1 < 1e-15);
        let j_back = &g.j * &g.j_pinv * &g.j;
        assert!((j_back - &g.j).amax() < 1e-12);
    }

    #[test]
    fn perfect_channel_gradient() {
        let (ch, s) = solved(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let g = geometry(&ch, &s, &s.caid).unwrap();
        for x in 0..2 {
            assert!((g.grad_i[x] - (std::f64::consts::LN_2 - 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_channel_constant_v() {
        let (ch, s) = solved(vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.7, 0.2], vec![0.2, 0.1, 0.7]]);
        let g = geometry(&ch, &s, &s.caid).unwrap();
        assert!((g.v.max() - g.v.min()).abs() < 1e-14);
        assert!((g.v_bar.max() - g.v_bar.min()).abs() < 1e-14);
        assert!(g.a0 < 1e-15 && g.a1 < 1e-15);
        let t = optimal_input_tilt(&ch, &s, 1000, 1e-3).unwrap();
        assert!(t.correction.iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn tilt_at_median_is_identity() {
        let (ch, s) = solved(vec![vec![0.9, 0.1], vec![0.2, 0.8]]);
        let t = optimal_input_tilt(&ch, &s, 100, 0.5).unwrap();
        assert_eq!(t.distribution, s.caid);
    }

    #[test]
    fn tilt_identity_asymmetric() {
        let (ch, s) = solved(vec![vec![0.9, 0.1], vec![0.2, 0.8]]);
        let eps = 1e-3;
        let t = optimal_input_tilt(&ch, &s, 10_000, eps).unwrap();
        let b = skewness_bounds(&ch, &s).unwrap();
        let y = q_inverse(eps).unwrap();
        assert!(t.correction.iter().sum::<f64>().abs() < 1e-12);
        assert!((t.objective - b.a0 * y * y).abs() < 1e-9);
        assert!(b.a0 > 0.0);
    }

    #[test]
    fn bounds_bsc_closed_form() {
        for p in [0.05, 0.11, 0.2, 0.3] {
            let (ch, s) = solved(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]);
            let b = skewness_bounds(&ch, &s).unwrap();
            let l = ((1.0 - p) / p).ln();
            let v = p * (1.0 - p) * l * l;
            let mu3 = p * (1.0 - p) * (2.0 * p - 1.0) * l * l * l;
            let want = mu3 / (6.0 * v) + 0.5;
            assert!((b.s_lower - want).abs() < 1e-10);
            assert!((b.s_upper - want).abs() < 1e-10);
        }
    }

    #[test]
    fn bounds_refuse_singular() {
        let ch = Channel::bec(0.3).unwrap();
        let s = capacity_solve(&ch, 1e-12).unwrap();
        assert!(matches!(
            skewness_bounds(&ch, &s),
            Err(Error::Precondition(Precondition::SingularChannel { .. }))
        ));
    }

    #[test]
    fn bounds_refuse_zero_dispersion() {
        let ch = Channel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = capacity_solve(&ch, 1e-12).unwrap();
        assert!(matches!(skewness_bounds(&ch, &s), Err(Error::Precondition(Precondition::ZeroDispersion))));
    }

    #[test]
    fn asymmetric_ordering() {
        let (ch, s) = solved(vec![vec![0.9, 0.1], vec![0.2, 0.8]]);
        let b = skewness_bounds(&ch, &s).unwrap();
        assert!(b.s_lower.is_finite() && b.s_upper.is_finite());
        assert!(b.s_lower <= b.s_upper + 1e-9, "{} > {}", b.s_lower, b.s_upper);
    }
}
