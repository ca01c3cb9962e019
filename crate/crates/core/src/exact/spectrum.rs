use crate::error::{check_eps, domain, Error, Result};
use crate::numeric::{ln_gamma, ln_sum_exp, LogProb};
use crate::numeric::ln_binom_raw;

/// Largest number of type classes enumerated before giving up.
const COMPOSITION_LIMIT: u64 = 4_000_000;
/// Largest lattice index per symbol for the convolution route.
const LATTICE_INDEX_LIMIT: u64 = 10_000;
/// Two block LLRs closer than this (times `max(1, |z|)`) are one support point.
const MERGE_TOL: f64 = 1e-12;

/// Per-symbol log-likelihood ratios of a pair of finite distributions.
#[derive(Clone, Debug)]
struct SymbolLlrs {
    z: Vec<f64>,
    /// `P` restricted to symbols it charges, in the order of `z`.
    p: Vec<f64>,
    /// `ln Q[P = 0]`.
    ln_q_off: f64,
}

fn check_distribution(d: &[f64], name: &str) -> Result<()> {
    let s: f64 = d.iter().sum();
    if d.is_empty() || d.iter().any(|x| !(*x >= 0.0)) || (s - 1.0).abs() > 1e-12 {
        return domain(format!("{name} must be a probability vector"));
    }
    Ok(())
}

fn symbol_llrs(p: &[f64], q: &[f64]) -> Result<SymbolLlrs> {
    check_distribution(p, "P")?;
    check_distribution(q, "Q")?;
    if p.len() != q.len() {
        return domain("P and Q live on alphabets of different sizes");
    }
    let mut out = SymbolLlrs { z: vec![], p: vec![], ln_q_off: f64::NEG_INFINITY };
    let mut q_off = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if qi == 0.0 {
                return Err(Error::AbsoluteContinuity(format!("P charges symbol {i} where Q vanishes")));
            }
            out.z.push(pi.ln() - qi.ln());
            out.p.push(pi);
        } else {
            q_off += qi;
        }
    }
    if q_off > 0.0 {
        out.ln_q_off = q_off.ln();
    }
    Ok(out)
}

/// Exact distribution of the block LLR `Σ ln P(x_i)/Q(x_i)` under `Pⁿ` and `Qⁿ`.
#[derive(Clone, Debug)]
pub struct LlrSpectrum {
    support: Vec<f64>,
    log_p: Vec<f64>,
    log_q: Vec<f64>,
    /// Mass `Qⁿ` puts on blocks `Pⁿ` never produces; their LLR is `-inf`.
    log_q_singular: f64,
    lattice_span: Option<f64>,
}

impl LlrSpectrum {
    pub fn new(p: &[f64], q: &[f64], n: u64) -> Result<Self> {
        if n == 0 {
            return domain("blocklength must be positive");
        }
        let sym = symbol_llrs(p, q)?;
        let k = sym.z.len();
        let span = lattice_span(&sym.z);
        let points = if k <= 2 {
            composition_points(&sym, n)
        } else if let Some((h, idx)) = span.as_ref().filter(|(_, idx)| lattice_fits(idx, n)) {
            lattice_points(&sym, n, *h, idx)
        } else if compositions(n, k) <= COMPOSITION_LIMIT {
            composition_points(&sym, n)
        } else {
            return Err(Error::AlphabetTooLarge(format!(
                "{k} symbols with incommensurable LLRs at n = {n} exceed the composition limit"
            )));
        };
        let (support, log_p) = merge(points);
        // Qⁿ = Pⁿ e^{-z} wherever Pⁿ > 0.
        let log_q = support.iter().zip(&log_p).map(|(z, lp)| lp - z).collect();
        let log_q_singular = if sym.ln_q_off == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            let ln_on = crate::numeric::ln_one_minus_exp(sym.ln_q_off);
            crate::numeric::ln_one_minus_exp(n as f64 * ln_on)
        };
        Ok(LlrSpectrum {
            support,
            log_p,
            log_q,
            log_q_singular,
            lattice_span: span.map(|(h, _)| h),
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn log_probs_p(&self) -> &[f64] {
        &self.log_p
    }

    pub fn log_probs_q(&self) -> &[f64] {
        &self.log_q
    }

    pub fn log_q_singular(&self) -> LogProb {
        LogProb::new(self.log_q_singular)
    }

    pub fn lattice_span(&self) -> Option<f64> {
        self.lattice_span
    }

    /// Total log-mass under `P` and under `Q`, both `0` up to rounding.
    pub fn log_totals(&self) -> (f64, f64) {
        let lq = ln_sum_exp(&self.log_q);
        (ln_sum_exp(&self.log_p), crate::numeric::ln_add_exp(lq, self.log_q_singular))
    }

    /// Index of the first support point whose `P`-cdf exceeds `eps`, and the
    /// cdf just below it. `alpha = 1 - eps` is passed separately so that
    /// neither end loses digits.
    fn threshold(&self, eps: f64, alpha: f64) -> (usize, f64) {
        let last = self.support.len() - 1;
        if eps <= 0.5 {
            let mut below = 0.0;
            for (i, lp) in self.log_p.iter().enumerate() {
                let pi = lp.exp();
                if below + pi > eps || i == last {
                    return (i, (eps - below) / pi);
                }
                below += pi;
            }
        } else {
            // Walk down from the top: G(i) = P[Z >= z_i].
            let mut above = 0.0;
            for i in (0..=last).rev() {
                let pi = self.log_p[i].exp();
                if above + pi >= alpha || i == 0 {
                    return (i, 1.0 - (alpha - above) / pi);
                }
                above += pi;
            }
        }
        unreachable!("spectrum is never empty")
    }

    fn beta_level(&self, eps: f64, alpha: f64) -> LogProb {
        let (i, below_frac) = self.threshold(eps, alpha);
        // Accept z > γ outright, accept z = γ with probability λ.
        let lambda = (1.0 - below_frac).clamp(0.0, 1.0);
        let above = ln_sum_exp(&self.log_q[i + 1..]);
        LogProb::new(crate::numeric::ln_add_exp(above, lambda.ln() + self.log_q[i]))
    }

    /// `ln β_{1-eps}`: smallest `Qⁿ`-probability of accepting `P` over tests
    /// that accept `P` with `Pⁿ`-probability at least `1 - eps`.
    pub fn beta_eps(&self, eps: f64) -> Result<LogProb> {
        check_eps(eps)?;
        Ok(self.beta_level(eps, 1.0 - eps))
    }

    pub fn beta_alpha(&self, alpha: f64) -> Result<LogProb> {
        check_eps(alpha)?;
        Ok(self.beta_level(1.0 - alpha, alpha))
    }

    pub fn divergence_spectrum(&self, eps: f64) -> Result<DivergenceSpectrum> {
        check_eps(eps)?;
        let (i, below_frac) = self.threshold(eps, 1.0 - eps);
        Ok(DivergenceSpectrum {
            supremum: self.support[i],
            last_below: i.checked_sub(1).map(|j| self.support[j]),
            on_jump: i > 0 && below_frac.abs() < 1e-12,
        })
    }
}

/// `sup{γ : P[Z ≤ γ] ≤ eps}` on a discrete spectrum, with the support points
/// on either side of it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceSpectrum {
    /// The supremum itself: the first support point with cdf above `eps`.
    pub supremum: f64,
    /// Largest support point with cdf at most `eps`.
    pub last_below: Option<f64>,
    /// `eps` coincides with a cdf value.
    pub on_jump: bool,
}

impl DivergenceSpectrum {
    /// Largest support point with cdf at most `eps`, or the supremum when no
    /// such point exists.
    pub fn value(&self) -> f64 {
        self.last_below.unwrap_or(self.supremum)
    }

    /// No support point lies at or below the level; `value` is a left limit.
    pub fn is_open(&self) -> bool {
        self.last_below.is_none()
    }
}

fn compositions(n: u64, k: usize) -> u64 {
    // C(n + k - 1, k - 1) saturating.
    let mut c: u128 = 1;
    for j in 1..k as u128 {
        c = c * (n as u128 + j) / j;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

fn lattice_fits(idx: &[u64], n: u64) -> bool {
    let max = idx.iter().copied().max().unwrap_or(0);
    max <= LATTICE_INDEX_LIMIT && n.saturating_mul(max) <= 5_000_000
}

/// Common span `h` with `z_i = z_min + h m_i`, `m_i` integer, if one exists
/// among `d_min / j` for `j <= 64`.
fn lattice_span(z: &[f64]) -> Option<(f64, Vec<u64>)> {
    let zmin = z.iter().copied().fold(f64::INFINITY, f64::min);
    let d: Vec<f64> = z.iter().map(|x| x - zmin).collect();
    let dmin = d.iter().copied().filter(|x| *x > MERGE_TOL).fold(f64::INFINITY, f64::min);
    if !dmin.is_finite() {
        return None;
    }
    (1..=64).find_map(|j| {
        let h = dmin / j as f64;
        let idx: Vec<u64> = d.iter().map(|x| (x / h).round() as u64).collect();
        let ok = d.iter().zip(&idx).all(|(x, m)| (x - *m as f64 * h).abs() <= 1e-9 * (1.0 + x.abs()));
        ok.then_some((h, idx))
    })
}

/// `(llr, ln Pⁿ)` for every type class.
fn composition_points(sym: &SymbolLlrs, n: u64) -> Vec<(f64, f64)> {
    let k = sym.z.len();
    let nf = n as f64;
    if k == 1 {
        return vec![(nf * sym.z[0], 0.0)];
    }
    if k == 2 {
        return (0..=n)
            .map(|j| {
                let z = j as f64 * sym.z[1] + (n - j) as f64 * sym.z[0];
                (z, ln_binom_raw(n, j, sym.p[1], sym.p[0]))
            })
            .collect();
    }
    let lp: Vec<f64> = sym.p.iter().map(|p| p.ln()).collect();
    let ln_fact = |m: u64| ln_gamma(m as f64 + 1.0);
    let mut out = Vec::new();
    let mut counts = vec![0u64; k];
    fn rec(
        pos: usize,
        left: u64,
        counts: &mut Vec<u64>,
        out: &mut Vec<(f64, f64)>,
        emit: &dyn Fn(&[u64]) -> (f64, f64),
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            out.push(emit(counts));
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(pos + 1, left - c, counts, out, emit);
        }
    }
    let base = ln_fact(n);
    let emit = |c: &[u64]| {
        let mut z = 0.0;
        let mut l = base;
        for i in 0..k {
            z += c[i] as f64 * sym.z[i];
            l += c[i] as f64 * lp[i] - ln_fact(c[i]);
        }
        (z, l)
    };
    rec(0, n, &mut counts, &mut out, &emit);
    out
}

/// Log-domain convolution on the lattice `n z_min + h m`.
fn lattice_points(sym: &SymbolLlrs, n: u64, h: f64, idx: &[u64]) -> Vec<(f64, f64)> {
    let zmin = sym.z.iter().copied().fold(f64::INFINITY, f64::min);
    let max = *idx.iter().max().unwrap() as usize;
    let lp: Vec<f64> = sym.p.iter().map(|p| p.ln()).collect();
    let mut dp = vec![0.0f64];
    for _ in 0..n {
        let mut next = vec![f64::NEG_INFINITY; dp.len() + max];
        for (m, &v) in dp.iter().enumerate() {
            if v == f64::NEG_INFINITY {
                continue;
            }
            for (&s, &l) in idx.iter().zip(&lp) {
                let t = &mut next[m + s as usize];
                *t = crate::numeric::ln_add_exp(*t, v + l);
            }
        }
        dp = next;
    }
    dp.into_iter()
        .enumerate()
        .filter(|(_, v)| *v > f64::NEG_INFINITY)
        .map(|(m, v)| (n as f64 * zmin + h * m as f64, v))
        .collect()
}

/// Sorts by LLR and pools points closer than the merge tolerance.
fn merge(mut pts: Vec<(f64, f64)>) -> (Vec<f64>, Vec<f64>) {
    pts.retain(|(_, l)| *l > f64::NEG_INFINITY);
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut support: Vec<f64> = Vec::with_capacity(pts.len());
    let mut groups: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    for (z, l) in pts {
        match support.last() {
            Some(&s) if (z - s).abs() <= MERGE_TOL * s.abs().max(1.0) => groups.last_mut().unwrap().push(l),
            _ => {
                support.push(z);
                groups.push(vec![l]);
            }
        }
    }
    (support, groups.iter().map(|g| ln_sum_exp(g)).collect())
}

pub fn np_beta_exact(p: &[f64], q: &[f64], n: u64, alpha: f64) -> Result<LogProb> {
    LlrSpectrum::new(p, q, n)?.beta_alpha(alpha)
}

/// `np_beta_exact` at `alpha = 1 - eps`, keeping `eps`'s digits.
pub fn np_beta_exact_eps(p: &[f64], q: &[f64], n: u64, eps: f64) -> Result<LogProb> {
    LlrSpectrum::new(p, q, n)?.beta_eps(eps)
}

pub fn divergence_spectrum(p: &[f64], q: &[f64], n: u64, eps: f64) -> Result<DivergenceSpectrum> {
    LlrSpectrum::new(p, q, n)?.divergence_spectrum(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: [f64; 2] = [0.4, 0.6];
    const Q: [f64; 2] = [0.8, 0.2];

    #[test]
    fn identical_hypotheses() {
        for alpha in [0.1, 0.5, 0.93] {
            let b = np_beta_exact(&[0.3, 0.7], &[0.3, 0.7], 7, alpha).unwrap();
            assert!((b.ln() - alpha.ln()).abs() < 1e-14);
        }
        let d = divergence_spectrum(&[0.3, 0.7], &[0.3, 0.7], 7, 0.2).unwrap();
        assert!(d.is_open() && d.value() == 0.0 && d.supremum == 0.0);
    }

    #[test]
    fn two_point_bernoulli() {
        let b = np_beta_exact(&P, &Q, 1, 0.6).unwrap();
        assert!((b.ln() - 0.2f64.ln()).abs() < 1e-15);
        let d = divergence_spectrum(&P, &Q, 1, 0.5).unwrap();
        assert!((d.value() + 2f64.ln()).abs() < 1e-15);
        assert!((d.supremum - 3f64.ln()).abs() < 1e-15);
        let d = divergence_spectrum(&P, &Q, 1, 0.4).unwrap();
        assert!(d.on_jump);
    }

    #[test]
    fn randomization_interpolates() {
        // Deterministic tests at n = 1: accept {1} (alpha 0.6, beta 0.2) and
        // accept everything (alpha 1, beta 1).
        let b = np_beta_exact(&P, &Q, 1, 0.8).unwrap().prob();
        assert!((b - 0.6).abs() < 1e-15);
    }

    #[test]
    fn masses_sum_to_one() {
        for (p, q, n) in [
            (vec![0.5, 0.3, 0.2], vec![0.2, 0.3, 0.5], 40),
            (vec![0.5, 0.25, 0.25], vec![0.25, 0.25, 0.5], 60),
            (vec![0.6, 0.4, 0.0], vec![0.2, 0.3, 0.5], 30),
            (P.to_vec(), Q.to_vec(), 500),
        ] {
            let s = LlrSpectrum::new(&p, &q, n).unwrap();
            let (lp, lq) = s.log_totals();
            assert!(lp.abs() < 1e-10 && lq.abs() < 1e-10, "{lp} {lq}");
            assert!(s.support().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn lattice_and_composition_agree() {
        // LLRs ln2, 0, -ln2 share span ln2.
        let p = [0.5, 0.25, 0.25];
        let q = [0.25, 0.25, 0.5];
        let s = LlrSpectrum::new(&p, &q, 30).unwrap();
        assert!((s.lattice_span().unwrap() - 2f64.ln()).abs() < 1e-15);
        let sym = symbol_llrs(&p, &q).unwrap();
        let (sup, lp) = merge(composition_points(&sym, 30));
        assert_eq!(sup.len(), s.support().len());
        for i in 0..sup.len() {
            assert!((sup[i] - s.support()[i]).abs() < 1e-12);
            assert!((lp[i] - s.log_probs_p()[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn refusals() {
        assert!(matches!(LlrSpectrum::new(&[0.5, 0.5], &[1.0, 0.0], 3), Err(Error::AbsoluteContinuity(_))));
        assert!(matches!(LlrSpectrum::new(&[0.5, 0.6], &[0.5, 0.5], 3), Err(Error::Domain(_))));
        let p = [0.1, 0.2, 0.3, 0.4];
        let q = [0.05, 0.4, 0.15, 0.4];
        let e = [0.1 * std::f64::consts::E, 0.3, 0.2, 0.5 - 0.1 * std::f64::consts::E];
        assert!(matches!(LlrSpectrum::new(&p, &e, 500), Err(Error::AlphabetTooLarge(_))));
        assert!(LlrSpectrum::new(&p, &q, 500).is_ok());
    }
}
