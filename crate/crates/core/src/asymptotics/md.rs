use crate::error::{Error, Result};
use crate::numeric::{q_tail_log, CumulantSet, LogProb};

/// Moderate-deviations regime is taken as `|x| <= MD_GUARD * sqrt(n)`.
pub const MD_GUARD: f64 = 0.1;

/// Which tail of the standardized sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// `P[S_n > x]`.
    Upper,
    /// `P[S_n <= -x]`.
    Lower,
}

fn check(c: &CumulantSet, n: u64, x: f64, guard: f64) -> Result<f64> {
    if !(c.kappa2 > 0.0) {
        return Err(Error::Degenerate("kappa2 must be positive".into()));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let sn = (n as f64).sqrt();
    if x.abs() > guard * sn {
        return Err(Error::Domain(format!("|x| = {} exceeds the moderate-deviations guard {}", x.abs(), guard * sn)));
    }
    Ok(sn)
}

pub fn petrov_log_tail(c: &CumulantSet, n: u64, x: f64, tail: Tail) -> Result<LogProb> {
    petrov_log_tail_guarded(c, n, x, tail, MD_GUARD)
}

/// Gaussian tail with the Cramér series truncated after `a1`.
pub fn petrov_log_tail_guarded(c: &CumulantSet, n: u64, x: f64, tail: Tail, guard: f64) -> Result<LogProb> {
    if x < 0.0 {
        return Err(Error::Domain(format!("x must be nonnegative, got {x}")));
    }
    let sn = check(c, n, x, guard)?;
    let (a0, a1) = c.cramer_coeffs();
    let u = x / sn;
    let corr = match tail {
        Tail::Upper => x * x * x / sn * (a0 + a1 * u),
        Tail::Lower => -x * x * x / sn * (a0 - a1 * u),
    };
    Ok(LogProb::new(q_tail_log(x) + corr))
}

pub fn cornish_fisher_md(c: &CumulantSet, n: u64, y: f64) -> Result<f64> {
    cornish_fisher_md_guarded(c, n, y, MD_GUARD)
}

/// `x` with `F_n(-x) = Q(y)`.
pub fn cornish_fisher_md_guarded(c: &CumulantSet, n: u64, y: f64, guard: f64) -> Result<f64> {
    let sn = check(c, n, y, guard)?;
    let (b0, b1) = c.cornish_fisher_coeffs();
    Ok(y - b0 * y * y / sn + b1 * y * y * y / (sn * sn))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_summands() {
        let c = CumulantSet::new(0.0, 2.0, 0.0, 0.0);
        let got = petrov_log_tail(&c, 10_000, 3.0, Tail::Upper).unwrap().ln();
        assert_eq!(got, q_tail_log(3.0));
        assert_eq!(cornish_fisher_md(&c, 10_000, 2.5).unwrap(), 2.5);
    }

    #[test]
    fn zero_point() {
        let c = CumulantSet::bernoulli(0.3);
        let got = petrov_log_tail(&c, 100, 0.0, Tail::Lower).unwrap().ln();
        assert!((got - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn guard_enforced() {
        let c = CumulantSet::bernoulli(0.3);
        assert!(matches!(petrov_log_tail(&c, 100, 1.5, Tail::Upper), Err(Error::Domain(_))));
        assert!(petrov_log_tail_guarded(&c, 100, 1.5, Tail::Upper, 0.2).is_ok());
        assert!(matches!(cornish_fisher_md(&c, 100, -1.5), Err(Error::Domain(_))));
        let flat = CumulantSet::new(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(petrov_log_tail(&flat, 100, 0.5, Tail::Upper), Err(Error::Degenerate(_))));
    }
}
