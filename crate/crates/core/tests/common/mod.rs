#![allow(dead_code)]

use chanskew::dmc::{capacity_solve, Channel};
use chanskew::geometry::geometry;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dirichlet(1, ..., 1) probability vector.
pub fn random_simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let g = Gamma::new(1.0, 1.0).unwrap();
    let v: Vec<f64> = (0..k).map(|_| g.sample(rng) + 1e-3).collect();
    let s: f64 = v.iter().sum();
    let mut out: Vec<f64> = v.iter().map(|x| x / s).collect();
    // Exact row sums keep the parser's tolerance irrelevant.
    let head: f64 = out[..k - 1].iter().sum();
    out[k - 1] = 1.0 - head;
    out
}

pub fn random_channel(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Channel {
    Channel::new((0..nx).map(|_| random_simplex(rng, ny)).collect()).unwrap()
}

/// Joint `P(x) W(y|x)`, output marginal and information density by direct
/// summation.
pub struct Joint {
    pub pxy: Vec<Vec<f64>>,
    pub py: Vec<f64>,
    pub dens: Vec<Vec<f64>>,
}

pub fn joint(ch: &Channel, px: &[f64]) -> Joint {
    let (nx, ny) = (ch.input_size(), ch.output_size());
    let mut py = vec![0.0; ny];
    for x in 0..nx {
        for y in 0..ny {
            py[y] += px[x] * ch.prob(x, y);
        }
    }
    let pxy = (0..nx).map(|x| (0..ny).map(|y| px[x] * ch.prob(x, y)).collect()).collect();
    let dens = (0..nx)
        .map(|x| (0..ny).map(|y| if ch.prob(x, y) > 0.0 { (ch.prob(x, y) / py[y]).ln() } else { 0.0 }).collect())
        .collect();
    Joint { pxy, py, dens }
}

/// `Σ_x P(x) Var[ln W(Y|x)/q(Y)]` for an arbitrary positive weight vector
/// `px` and reference `q`.
pub fn conditional_variance(ch: &Channel, px: &[f64], q: &[f64]) -> f64 {
    let mut total = 0.0;
    for x in 0..ch.input_size() {
        let row = ch.row(x);
        let d: f64 = row.iter().zip(q).filter(|(w, _)| **w > 0.0).map(|(w, q)| w * (w / q).ln()).sum();
        let v: f64 = row.iter().zip(q).filter(|(w, _)| **w > 0.0).map(|(w, q)| w * ((w / q).ln() - d).powi(2)).sum();
        total += px[x] * v;
    }
    total
}

pub fn output_of(ch: &Channel, px: &[f64]) -> Vec<f64> {
    (0..ch.output_size()).map(|y| (0..ch.input_size()).map(|x| px[x] * ch.prob(x, y)).sum()).collect()
}

/// `max gᵀh - ½ gᵀJg` over `Σ g = 0` by accelerated projected gradient.
fn qp_oracle(j: &DMatrix<f64>, h: &DVector<f64>) -> f64 {
    let k = h.len();
    let lmax = SymmetricEigen::new(j.clone()).eigenvalues.iter().copied().fold(0.0, f64::max);
    let step = 1.0 / lmax;
    let project = |g: DVector<f64>| {
        let m = g.sum() / k as f64;
        g.map(|x| x - m)
    };
    let f = |g: &DVector<f64>| g.dot(h) - 0.5 * (g.transpose() * j * g)[(0, 0)];
    let mut g = DVector::zeros(k);
    let mut y = g.clone();
    let mut t: f64 = 1.0;
    for _ in 0..400_000 {
        let next = project(&y + (h - j * &y) * step);
        let tn = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = &next + (&next - &g) * ((t - 1.0) / tn);
        g = next;
        t = tn;
    }
    f(&g)
}

/// `(A0 from the library, A0 from the quadratic program)` at the caid, with
/// the Fisher-type matrix and the dispersion gradient rebuilt independently.
pub fn a0_against_qp(ch: &Channel) -> (f64, f64) {
    let stats = capacity_solve(ch, 1e-13).unwrap();
    let s = &stats.x_dagger;
    let px = stats.caid.weights().to_vec();
    let py = output_of(ch, &px);
    let ny = ch.output_size();
    let j = DMatrix::from_fn(s.len(), s.len(), |a, b| {
        (0..ny).map(|y| ch.prob(s[a], y) * ch.prob(s[b], y) / py[y]).sum::<f64>()
    });
    let f = |p: &[f64]| conditional_variance(ch, p, &output_of(ch, p));
    let v_eps = f(&px);
    let h = 1e-6;
    let v = DVector::from_fn(s.len(), |a, _| {
        let mut up = px.clone();
        let mut dn = px.clone();
        up[s[a]] += h;
        dn[s[a]] -= h;
        (f(&up) - f(&dn)) / (2.0 * h)
    });
    let want = qp_oracle(&j, &(v / (2.0 * v_eps.sqrt())));
    let got = geometry(ch, &stats, &stats.caid).unwrap().a0;
    (got, want)
}

/// Every block of length `n`: `(llr, P-prob, Q-prob)`, blocks with `P = 0` dropped.
pub fn blocks(p: &[f64], q: &[f64], n: u32) -> Vec<(f64, f64, f64)> {
    let k = p.len();
    let mut out = Vec::with_capacity(k.pow(n));
    for code in 0..k.pow(n) {
        let (mut c, mut pp, mut qq) = (code, 1.0, 1.0);
        for _ in 0..n {
            pp *= p[c % k];
            qq *= q[c % k];
            c /= k;
        }
        if pp > 0.0 {
            out.push(((pp / qq).ln(), pp, qq));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Groups equal LLR values (up to rounding of the products).
pub fn brute_spectrum(p: &[f64], q: &[f64], n: u32) -> Vec<(f64, f64, f64)> {
    let mut out: Vec<(f64, f64, f64)> = Vec::new();
    for (z, a, b) in blocks(p, q, n) {
        match out.last_mut() {
            Some(last) if (z - last.0).abs() <= 1e-9 * z.abs().max(1.0) => {
                last.1 += a;
                last.2 += b;
            }
            _ => out.push((z, a, b)),
        }
    }
    out
}

/// Neyman-Pearson by sorting blocks on likelihood ratio and filling greedily.
pub fn brute_beta(p: &[f64], q: &[f64], n: u32, alpha: f64) -> f64 {
    let spec = brute_spectrum(p, q, n);
    let (mut pa, mut qa) = (0.0, 0.0);
    for &(_, a, b) in spec.iter().rev() {
        if pa + a >= alpha {
            return qa + b * (alpha - pa) / a;
        }
        pa += a;
        qa += b;
    }
    qa
}
