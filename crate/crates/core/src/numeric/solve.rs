use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Accept `x` once `|f(x)| < tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Sign-changing bracket used whenever a Newton step misbehaves.
    pub bracket: Option<(f64, f64)>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-12, max_iter: 200, bracket: None }
    }
}

impl SolveOptions {
    pub fn tol(tol: f64) -> Self {
        SolveOptions { tol, ..Default::default() }
    }

    pub fn with_bracket(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = Some((lo, hi));
        self
    }
}

/// Safeguarded Newton iteration. `f` returns `(value, derivative)`.
pub fn newton_solve<F>(f: F, x0: f64, opts: &SolveOptions) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut bracket = match opts.bracket {
        Some((a, b)) => {
            let (fa, fb) = (f(a).0, f(b).0);
            if fa.abs() < opts.tol {
                return Ok(a);
            }
            if fb.abs() < opts.tol {
                return Ok(b);
            }
            if fa.signum() == fb.signum() {
                return Err(Error::NoConvergence(format!("bracket [{a}, {b}] does not change sign")));
            }
            // Stored as (point with f < 0, point with f > 0).
            Some(if fa < 0.0 { (a, b) } else { (b, a) })
        }
        None => None,
    };
    let mut x = x0;
    if let Some((lo, hi)) = bracket {
        if !(x > lo.min(hi) && x < lo.max(hi)) {
            x = 0.5 * (lo + hi);
        }
    }
    for _ in 0..opts.max_iter {
        let (fx, dfx) = f(x);
        if !fx.is_finite() {
            return Err(Error::NoConvergence(format!("function is not finite at x = {x}")));
        }
        if fx.abs() < opts.tol {
            return Ok(x);
        }
        if let Some((neg, pos)) = bracket.as_mut() {
            if fx < 0.0 {
                *neg = x;
            } else {
                *pos = x;
            }
            if (*pos - *neg).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                return Ok(x);
            }
        }
        let mut next = x - fx / dfx;
        if let Some((neg, pos)) = bracket {
            let (lo, hi) = (neg.min(pos), neg.max(pos));
            if !next.is_finite() || next <= lo || next >= hi {
                next = 0.5 * (lo + hi);
            }
        } else if !next.is_finite() {
            return Err(Error::NoConvergence(format!("zero derivative at x = {x}")));
        }
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NoConvergence(format!("Newton did not converge after {} iterations (last x = {x})", opts.max_iter)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{phi, q_tail};

    #[test]
    fn linear_root() {
        let x = newton_solve(|x| (x - 1.0, 1.0), 0.0, &SolveOptions::default()).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn gaussian_quantile_root() {
        let opts = SolveOptions::tol(1e-15).with_bracket(0.0, 5.0);
        let x = newton_solve(|x| (q_tail(x) - 0.025, -phi(x)), 0.0, &opts).unwrap();
        // mpmath
        assert!((x - 1.959_963_984_540_054).abs() < 1e-12);
    }

    #[test]
    fn exp_root() {
        let x = newton_solve(|x| (x.exp() - 2.0, x.exp()), 0.0, &SolveOptions::tol(1e-15)).unwrap();
        assert!((x - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn falls_back_to_bisection() {
        // Newton from 0 on atan overshoots without the bracket.
        let f = |x: f64| (x.atan(), 1.0 / (1.0 + x * x));
        assert!(newton_solve(f, 3.0, &SolveOptions { max_iter: 50, ..Default::default() }).is_err());
        let opts = SolveOptions::default().with_bracket(-10.0, 20.0);
        let x = newton_solve(f, 3.0, &opts).unwrap();
        assert!(x.abs() < 1e-12);
    }
}
