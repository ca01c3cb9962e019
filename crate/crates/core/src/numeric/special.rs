use std::f64::consts::PI;

use super::LogProb;
use crate::error::{domain, Error, Result};

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln Γ(n+1) - (n+½)ln n + n - ½ln(2π)` at integer `n >= 1`.
fn stirlerr(n: u64) -> f64 {
    const SMALL: [f64; 16] = [
        0.0,
        0.081_061_466_795_327_258_22,
        0.041_340_695_955_409_294_094,
        0.027_677_925_684_998_339_149,
        0.020_790_672_103_765_093_112,
        0.016_644_691_189_821_192_163,
        0.013_876_128_823_070_747_999,
        0.011_896_709_945_891_770_095,
        0.010_411_265_261_972_096_497,
        0.009_255_462_182_712_732_917_7,
        0.008_330_563_433_362_871_256_5,
        0.007_573_675_487_951_840_795,
        0.006_942_840_107_209_529_865_7,
        0.006_408_994_188_004_207_068_4,
        0.005_951_370_112_758_847_735_6,
        0.005_554_733_551_962_801_371,
    ];
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n < 16 {
        return SMALL[n as usize];
    }
    let n = n as f64;
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/m) + m - x` without cancellation near `x = m`.
fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `ln [C(n,k) p^k (1-p)^{n-k}]` via the saddle-point decomposition.
pub fn log_binomial_pmf(n: u64, k: u64, p: f64) -> Result<LogProb> {
    if k > n {
        return domain(format!("binomial pmf needs k <= n, got k = {k}, n = {n}"));
    }
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("binomial pmf needs p in [0, 1], got {p}"));
    }
    Ok(LogProb::new(ln_binom_raw(n, k, p, 1.0 - p)))
}

pub(crate) fn ln_binom_raw(n: u64, k: u64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    if k == 0 {
        return if p < 0.1 { nf * (-p).ln_1p() } else { nf * q.ln() };
    }
    if k == n {
        return if q < 0.1 { nf * (-q).ln_1p() } else { nf * p.ln() };
    }
    let kf = k as f64;
    let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(kf, nf * p) - bd0(nf - kf, nf * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / nf).ln_1p();
    lc - 0.5 * lf
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok(ln_reg_incomplete_beta(a, b, x)?.exp())
}

/// `ln I_x(a, b)`, usable where `I_x` underflows.
pub fn ln_reg_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("incomplete beta needs a, b > 0, got a = {a}, b = {b}"));
    }
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("incomplete beta needs x in [0, 1], got {x}"));
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_beta_direct(a, b, x, 1.0 - x)
    } else {
        let other = ln_beta_direct(b, a, 1.0 - x, x)?;
        Ok(super::ln_one_minus_exp(other))
    }
}

/// Continued-fraction branch, valid for `x < (a+1)/(a+b+2)`.
fn ln_beta_direct(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    let front = a * x.ln() + b * y.ln() - ln_beta(a, b) - a.ln();
    Ok(front + beta_cf(a, b, x)?.ln())
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..20_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence(format!("incomplete beta continued fraction at a = {a}, b = {b}, x = {x}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(log_binomial_pmf(1, 0, 0.0).unwrap().ln(), 0.0);
        assert_eq!(log_binomial_pmf(3, 3, 1.0).unwrap().ln(), 0.0);
        assert!(log_binomial_pmf(3, 1, 1.0).unwrap().is_zero());
        let want = (252.0f64 / 1024.0).ln();
        assert!((log_binomial_pmf(10, 5, 0.5).unwrap().ln() - want).abs() < 1e-15);
        assert!(log_binomial_pmf(3, 4, 0.5).is_err());
    }

    #[test]
    fn binomial_against_high_precision() {
        // mpmath, 50 digits
        let cases = [
            (500, 55, 0.11, -2.865_873_951_755_412_3),
            (500, 0, 0.11, -58.266_908_127_975_765),
            (1000, 300, 0.3, -3.592_805_790_518_698_1),
            (20, 3, 0.5, -6.824_160_069_810_365),
            (100_000, 30_434, 0.3, -10.371_578_484_609_634),
        ];
        for (n, k, p, want) in cases {
            let got = log_binomial_pmf(n, k, p).unwrap().ln();
            assert!(((got - want) / want).abs() < 1e-11, "({n},{k},{p}): {got} vs {want}");
        }
    }

    #[test]
    fn binomial_sums_to_one() {
        for &(n, p) in &[(17u64, 0.3), (250, 0.11), (31, 0.97)] {
            let terms: Vec<f64> = (0..=n).map(|k| log_binomial_pmf(n, k, p).unwrap().ln()).collect();
            assert!(super::super::ln_sum_exp(&terms).abs() < 1e-13);
        }
    }

    #[test]
    fn beta_examples() {
        assert_eq!(reg_incomplete_beta(2.0, 3.0, 1.0).unwrap(), 1.0);
        assert!((reg_incomplete_beta(0.5, 0.5, 0.5).unwrap() - 0.5).abs() < 1e-14);
        assert!(reg_incomplete_beta(0.0, 1.0, 0.5).is_err());
        assert!(reg_incomplete_beta(1.0, 1.0, 1.5).is_err());
        // I_x(1, b) = 1 - (1-x)^b
        let got = reg_incomplete_beta(1.0, 3.5, 0.2).unwrap();
        assert!((got - (1.0 - 0.8f64.powf(3.5))).abs() < 1e-14);
    }

    #[test]
    fn beta_reflection() {
        for &(a, b) in &[(0.5, 0.5), (2.0, 7.5), (199.5, 0.5), (3.0, 40.0), (0.3, 12.0)] {
            for i in 1..20 {
                let x = i as f64 / 20.0;
                let s = reg_incomplete_beta(a, b, x).unwrap() + reg_incomplete_beta(b, a, 1.0 - x).unwrap();
                assert!((s - 1.0).abs() < 1e-12, "a={a} b={b} x={x}");
            }
        }
    }

    #[test]
    fn beta_monotone() {
        let mut prev = 0.0;
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            let v = reg_incomplete_beta(4.5, 0.5, x).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn beta_against_quadrature() {
        // I_x(a,b) by direct quadrature of t^{a-1}(1-t)^{b-1}/B(a,b) on [0, x].
        let (a, b, x) = (199.5, 0.5, 10.0 / 11.0);
        let lb = ln_beta(a, b);
        let f = |t: f64| ((a - 1.0) * t.ln() + (b - 1.0) * (1.0 - t).ln() - lb).exp();
        let quad = super::super::integrate(&f, 0.8, x, 1e-14).unwrap();
        let got = reg_incomplete_beta(a, b, x).unwrap();
        assert!(((got - quad) / quad).abs() < 1e-10, "{got} vs {quad}");
    }
}
