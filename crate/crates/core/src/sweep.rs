//! Grid sweeps behind the figure commands, and the channel report.
//!
//! Rows are computed in parallel and emitted in grid order: `n` outer, `eps`
//! inner. Every number is a library call; this module only tabulates.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::asymptotics::{rate_expansion, ChannelExpansion, Order, Side};
use crate::bht::{bht_expansion_from, bht_moments};
use crate::dmc::{capacity_solve, classify_singularity, dispersion, moments, Channel};
use crate::error::{check_eps, domain, Error, Result};
use crate::exact::{bracket, np_beta_exact_eps};
use crate::gaussian::{
    gaussian_expansion, gaussian_params, shannon_random_coding_logm, shannon_sphere_packing_logm, PowerConstraint,
};
use crate::geometry::skewness_bounds;

/// Capacity-solver tolerance used by every command.
pub const CAPACITY_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub n_values: Vec<u64>,
    pub eps_values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(n_values: Vec<u64>, eps_values: Vec<f64>) -> Result<Self> {
        if n_values.is_empty() || eps_values.is_empty() {
            return domain("sweep grids must be non-empty");
        }
        if n_values.contains(&0) {
            return domain("blocklengths must be positive");
        }
        for &e in &eps_values {
            check_eps(e)?;
        }
        Ok(SweepSpec { n_values, eps_values })
    }

    /// `points` values log-spaced from `eps_min` to `eps_max` inclusive.
    pub fn log_spaced(eps_min: f64, eps_max: f64, points: usize) -> Result<Vec<f64>> {
        check_eps(eps_min)?;
        check_eps(eps_max)?;
        if eps_min > eps_max {
            return domain(format!("eps-min {eps_min} exceeds eps-max {eps_max}"));
        }
        match points {
            0 => domain("eps grid must have at least one point"),
            1 => Ok(vec![eps_min]),
            _ => {
                // Base 10 keeps decade grids exact.
                let (a, b) = (eps_min.log10(), eps_max.log10());
                let step = (b - a) / (points - 1) as f64;
                Ok((0..points)
                    .map(|i| match i {
                        0 => eps_min,
                        _ if i + 1 == points => eps_max,
                        _ => 10f64.powf(a + step * i as f64),
                    })
                    .collect())
            }
        }
    }

    fn grid(&self) -> Vec<(u64, f64)> {
        self.n_values.iter().flat_map(|&n| self.eps_values.iter().map(move |&e| (n, e))).collect()
    }
}

/// A CSV table: `#` comment lines, a header, then numeric rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    /// Integer-valued leading columns, printed without exponent.
    pub integer_columns: usize,
    pub rows: Vec<Vec<f64>>,
}

/// Twelve significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, v)| if i < self.integer_columns { format!("{}", *v as u64) } else { format_value(*v) })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

fn bits(log_m: f64, n: u64) -> f64 {
    log_m / (n as f64 * LN_2)
}

/// BSC(`p`): exact bracket and expansions, all as rates in bits.
pub fn fig1(spec: &SweepSpec, p: f64) -> Result<Table> {
    let ch = Channel::bsc(p)?;
    let ex = ChannelExpansion::new(&ch, &capacity_solve(&ch, CAPACITY_TOL)?)?;
    let rows = spec
        .grid()
        .into_par_iter()
        .map(|(n, eps)| -> Result<Vec<f64>> {
            let b = bracket(n, p, eps)?;
            let e = |order, side| rate_expansion(&ex, n, eps, order, side).map(|r| bits(r.total_log_m, n));
            Ok(vec![
                n as f64,
                eps,
                bits(b.log_m_achievable, n),
                bits(b.log_m_converse, n),
                e(Order::Clt, Side::Lower)?,
                e(Order::Skewness, Side::Lower)?,
                e(Order::Skewness, Side::Upper)?,
                e(Order::Refined, Side::Lower)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        comments: vec![
            format!("BSC crossover p = {}", format_value(p)),
            "units: bits per channel use (log2 M / n)".into(),
        ],
        header: vec![
            "n",
            "eps",
            "rate_rcu",
            "rate_converse",
            "rate_clt",
            "rate_skew_lower",
            "rate_skew_upper",
            "rate_order4",
        ],
        integer_columns: 1,
        rows,
    })
}

/// Gaussian channel at SNR `power`: Shannon's bounds and the expansions.
pub fn fig2(spec: &SweepSpec, power: f64) -> Result<Table> {
    let g = gaussian_params(power)?;
    let rows = spec
        .grid()
        .into_par_iter()
        .map(|(n, eps)| -> Result<Vec<f64>> {
            let ach = shannon_random_coding_logm(n, power, eps)?.log_m;
            let conv = shannon_sphere_packing_logm(n, power, eps, PowerConstraint::Maximal)?.log_m;
            let lower = gaussian_expansion(power, n, eps, Side::Lower, PowerConstraint::Maximal)?;
            let upper = gaussian_expansion(power, n, eps, Side::Upper, PowerConstraint::Maximal)?;
            let t = &lower.terms;
            let clt = t.capacity + t.dispersion + t.log;
            Ok(vec![
                n as f64,
                eps,
                power,
                bits(ach, n),
                bits(conv, n),
                bits(clt, n),
                bits(lower.total_log_m, n),
                bits(upper.total_log_m, n),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        comments: vec![
            format!("Gaussian channel SNR P = {}, capacity = {} nats", format_value(power), format_value(g.capacity)),
            "units: bits per channel use (log2 M / n)".into(),
            "converse: sphere packing in dimension n+1 (maximal power); expansion constants: maximal power".into(),
        ],
        header: vec![
            "n",
            "eps",
            "P",
            "rate_shannon_ach",
            "rate_shannon_conv",
            "rate_clt",
            "rate_thm4_lower",
            "rate_thm4_upper",
        ],
        integer_columns: 1,
        rows,
    })
}

/// Bernoulli(`a`) against Bernoulli(`b`): exact `-ln β_{1-ε}` and its
/// approximations, in nats.
pub fn fig3(spec: &SweepSpec, a: f64, b: f64) -> Result<Table> {
    for x in [a, b] {
        if !(x > 0.0 && x < 1.0) {
            return domain(format!("Bernoulli parameter must lie in (0, 1), got {x}"));
        }
    }
    let p = [1.0 - a, a];
    let q = [1.0 - b, b];
    let m = bht_moments(&p, &q)?;
    let rows = spec
        .grid()
        .into_par_iter()
        .map(|(n, eps)| -> Result<Vec<f64>> {
            let exact = -np_beta_exact_eps(&p, &q, n, eps)?.ln();
            let e = |order| bht_expansion_from(&m, n, eps, order).map(|r| r.total_log_m);
            Ok(vec![
                n as f64,
                eps,
                exact,
                e(Order::Clt)?,
                e(Order::Skewness)?,
                e(Order::Refined)?,
                n as f64 * m.d,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        comments: vec![
            format!("P = Bernoulli({}), Q = Bernoulli({})", format_value(a), format_value(b)),
            "units: nats (-ln beta_{1-eps})".into(),
        ],
        header: vec!["n", "eps", "exact_np", "expansion_o2", "expansion_o3", "expansion_o4", "ld_first_order"],
        integer_columns: 1,
        rows,
    })
}

/// Channel summary as `key = value` lines. A refusal stops the report at the
/// first quantity that cannot be computed and is returned alongside.
#[derive(Debug)]
pub struct ChannelReport {
    pub lines: Vec<(String, String)>,
    pub refusal: Option<Error>,
}

impl ChannelReport {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format_value(*x)).collect::<Vec<_>>().join(" ")
}

pub fn channel_report(ch: &Channel) -> Result<ChannelReport> {
    let mut lines = Vec::new();
    let mut push = |k: &str, v: String| lines.push((k.to_string(), v));
    let stats = capacity_solve(ch, CAPACITY_TOL)?;
    push("capacity_nats", format_value(stats.capacity));
    push("capacity_bits", format_value(stats.capacity / LN_2));
    push("caod", list(&stats.caod));
    push("caid", list(stats.caid.weights()));
    push("symmetric", stats.symmetric.to_string());
    let mut rest = || -> Result<()> {
        let d = dispersion(ch, &stats)?;
        push("v_min", format_value(d.v_min));
        push("v_max", format_value(d.v_max));
        let s = classify_singularity(ch, &stats)?;
        push("eta", list(&s.eta_per_achiever));
        push("classification", if s.is_singular { "singular" } else { "nonsingular" }.into());
        let m = moments(ch, &stats.caid)?;
        push("sk_u", format_value(m.sk_unconditional()?));
        let b = skewness_bounds(ch, &stats)?;
        push("s_lower", format_value(b.s_lower));
        push("s_upper", format_value(b.s_upper));
        push("a0", format_value(b.a0));
        push("a1", format_value(b.a1));
        Ok(())
    };
    let refusal = rest().err();
    Ok(ChannelReport { lines, refusal })
}

/// Distribution text format: whitespace-separated probabilities on one
/// line; `#` lines are comments.
pub fn parse_distribution(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, line) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty distribution file".into() })?;
    if let Some((extra, _)) = lines.next() {
        return Err(Error::Parse { line: extra, msg: "distribution must be a single line".into() });
    }
    let d: Vec<f64> = line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad probability '{t}'") }))
        .collect::<Result<_>>()?;
    let sum: f64 = d.iter().sum();
    if d.iter().any(|p| !(*p >= 0.0 && p.is_finite())) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Parse { line: ln, msg: format!("probabilities must be nonnegative and sum to 1, sum = {sum}") });
    }
    Ok(d)
}

/// Source of the expansion evaluated by `expand`.
#[derive(Clone, Debug)]
pub enum ExpandTarget {
    Channel(Channel),
    Gaussian { power: f64, constraint: PowerConstraint },
    Bht { p: Vec<f64>, q: Vec<f64> },
}

/// One expansion as `key = value` lines, in nats.
pub fn expand(target: &ExpandTarget, n: u64, eps: f64, order: Order, side: Side) -> Result<Vec<(String, String)>> {
    let r = match target {
        ExpandTarget::Channel(ch) => {
            let ex = ChannelExpansion::new(ch, &capacity_solve(ch, CAPACITY_TOL)?)?;
            rate_expansion(&ex, n, eps, order, side)?
        }
        ExpandTarget::Gaussian { power, constraint } => {
            if order != Order::Skewness {
                return domain("the Gaussian expansion is available at order 3 only");
            }
            gaussian_expansion(*power, n, eps, side, *constraint)?
        }
        ExpandTarget::Bht { p, q } => bht_expansion_from(&bht_moments(p, q)?, n, eps, order)?,
    };
    let t = r.terms;
    Ok([
        ("order", format!("{}", r.order.marker())),
        ("capacity_term", format_value(t.capacity)),
        ("dispersion_term", format_value(t.dispersion)),
        ("log_term", format_value(t.log)),
        ("skewness_term", format_value(t.skewness)),
        ("fourth_term", format_value(t.fourth)),
        ("constant_term", format_value(t.constant)),
        ("log_m_nats", format_value(r.total_log_m)),
        ("rate_bits", format_value(r.rate_bits(n))),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect())
}
