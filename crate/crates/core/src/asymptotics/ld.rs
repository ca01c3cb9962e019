use nalgebra::DMatrix;

use crate::dmc::MomentSet;
use crate::error::{Error, Precondition, Result};
use crate::numeric::{ln_sum_exp, newton_solve, SolveOptions};

/// A convex cumulant generating function with two derivatives.
pub trait Cgf {
    fn value(&self, s: f64) -> f64;
    fn d1(&self, s: f64) -> f64;
    fn d2(&self, s: f64) -> f64;
}

/// Cgf of a finitely supported distribution.
#[derive(Clone, Debug)]
pub struct DiscreteCgf {
    values: Vec<f64>,
    log_probs: Vec<f64>,
}

impl DiscreteCgf {
    pub fn new(values: Vec<f64>, probs: &[f64]) -> Result<Self> {
        if values.len() != probs.len() || values.is_empty() {
            return Err(Error::Domain("values and probabilities differ in length".into()));
        }
        let s: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(*p >= 0.0)) || (s - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("probabilities must be nonnegative and sum to one".into()));
        }
        Ok(DiscreteCgf { values, log_probs: probs.iter().map(|p| p.ln()).collect() })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], &[1.0 - p, p])
    }

    /// Tilted weights at `s`, normalised, with the log-normaliser.
    fn tilted(&self, s: f64) -> (Vec<f64>, f64) {
        let lw: Vec<f64> = self.values.iter().zip(&self.log_probs).map(|(v, lp)| lp + s * v).collect();
        let z = ln_sum_exp(&lw);
        (lw.iter().map(|l| (l - z).exp()).collect(), z)
    }
}

impl Cgf for DiscreteCgf {
    fn value(&self, s: f64) -> f64 {
        self.tilted(s).1
    }

    fn d1(&self, s: f64) -> f64 {
        let (w, _) = self.tilted(s);
        w.iter().zip(&self.values).map(|(a, v)| a * v).sum()
    }

    fn d2(&self, s: f64) -> f64 {
        let (w, _) = self.tilted(s);
        let m: f64 = w.iter().zip(&self.values).map(|(a, v)| a * v).sum();
        w.iter().zip(&self.values).map(|(a, v)| a * (v - m) * (v - m)).sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GaussianCgf {
    pub mean: f64,
    pub var: f64,
}

impl Cgf for GaussianCgf {
    fn value(&self, s: f64) -> f64 {
        self.mean * s + 0.5 * self.var * s * s
    }

    fn d1(&self, s: f64) -> f64 {
        self.mean + self.var * s
    }

    fn d2(&self, _s: f64) -> f64 {
        self.var
    }
}

#[derive(Clone, Debug)]
pub struct TiltSolution {
    pub s_star: Vec<f64>,
    pub rate: f64,
    pub hessian: DMatrix<f64>,
}

impl TiltSolution {
    pub fn prefactor(&self, lattice: &Lattice) -> Result<f64> {
        strong_ld_prefactor(lattice, &self.s_star, &self.hessian)
    }
}

/// Solves `κ'(s) = a` inside `bracket` and returns the Legendre transform.
pub fn rate_function_1d(cgf: &dyn Cgf, a: f64, bracket: (f64, f64)) -> Result<TiltSolution> {
    let (lo, hi) = bracket;
    let (flo, fhi) = (cgf.d1(lo) - a, cgf.d1(hi) - a);
    if !(flo <= 0.0 && fhi >= 0.0) {
        return Err(Error::Domain(format!("a = {a} is not inside the gradient range of the bracket [{lo}, {hi}]")));
    }
    let tol = 1e-14 * (1.0 + a.abs());
    let opts = SolveOptions { tol, max_iter: 500, bracket: Some((lo, hi)) };
    let s = newton_solve(|s| (cgf.d1(s) - a, cgf.d2(s)), 0.5 * (lo + hi), &opts)?;
    let h = cgf.d2(s);
    if !(h > 0.0) {
        return Err(Error::Degenerate(format!("cgf is not strictly convex at s = {s}")));
    }
    Ok(TiltSolution { s_star: vec![s], rate: s * a - cgf.value(s), hessian: DMatrix::from_element(1, 1, h) })
}

/// Lattice structure of the summands.
#[derive(Clone, Debug, PartialEq)]
pub enum Lattice {
    NonLattice,
    /// One span per coordinate.
    Spans(Vec<f64>),
}

/// Strong large-deviations prefactor `E_NL` or `E_L`.
pub fn strong_ld_prefactor(lattice: &Lattice, s_star: &[f64], hessian: &DMatrix<f64>) -> Result<f64> {
    let d = s_star.len();
    if d == 0 || hessian.nrows() != d || hessian.ncols() != d {
        return Err(Error::Domain("tilt and hessian dimensions disagree".into()));
    }
    let chol = hessian.clone().cholesky().ok_or(Error::SingularHessian)?;
    let det = chol.determinant();
    if !(det > 0.0) {
        return Err(Error::SingularHessian);
    }
    let base = (2.0 * std::f64::consts::PI).powf(d as f64 / 2.0) * det.sqrt();
    match lattice {
        Lattice::NonLattice => {
            if s_star.iter().any(|s| !(*s > 0.0)) {
                return Err(Error::Domain("non-lattice prefactor needs positive tilts".into()));
            }
            Ok(1.0 / (base * s_star.iter().product::<f64>()))
        }
        Lattice::Spans(h) => {
            if h.len() != d || h.iter().any(|x| !(*x > 0.0)) {
                return Err(Error::Domain("lattice prefactor needs one positive span per coordinate".into()));
            }
            let mut prod = 1.0;
            for (s, h) in s_star.iter().zip(h) {
                let denom = -(-s * h).exp_m1();
                if !(denom > 0.0) {
                    return Err(Error::Domain("lattice prefactor needs positive tilts".into()));
                }
                prod *= h / denom;
            }
            Ok(prod / base)
        }
    }
}

/// Taylor coefficients of the rate function of `(Z, Z̄ - Z)` along its first
/// coordinate at `(I, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaCoeffs {
    pub mutual_info: f64,
    /// Coefficient of `(a - I)^2`.
    pub second: f64,
    /// Third derivative along the first coordinate; only known when `eta = 0`.
    pub third: Option<f64>,
}

impl LambdaCoeffs {
    pub fn third(&self) -> Result<f64> {
        self.third.ok_or(Error::Precondition(Precondition::EtaNonzero { eta: f64::NAN }))
    }

    /// `Λ(a, 0)` from the expansion, with the cubic term when available.
    pub fn evaluate(&self, a: f64) -> f64 {
        let d = a - self.mutual_info;
        self.mutual_info + d + self.second * d * d + self.third.map_or(0.0, |t| t / 6.0 * d * d * d)
    }
}

pub fn lambda_expansion_coeffs(m: &MomentSet) -> Result<LambdaCoeffs> {
    let eta = m.eta()?;
    let v = m.v_unconditional;
    let third = if eta.abs() < 1e-9 { Some(-2.0 * m.mu3 / (v * v * v)) } else { None };
    Ok(LambdaCoeffs { mutual_info: m.mutual_info, second: 1.0 / ((1.0 + eta) * v), third })
}
