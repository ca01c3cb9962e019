//! Discrete memoryless channels, capacity and information-density moments.

mod capacity;
mod moments;

pub use capacity::{
    capacity_solve, capacity_solve_with, classify_singularity, dispersion, AchieverSource, ChannelStats,
    Dispersion, Singularity,
};
pub use moments::{divergence, moments, MomentSet};
pub(crate) use moments::row_moments;

use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

/// Transition matrix `W(y|x)`, rows indexed by input.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    nx: usize,
    ny: usize,
    w: Vec<f64>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ny) {
            return Err(Error::Domain("channel rows have different lengths".into()));
        }
        Self::from_flat(nx, ny, rows.into_iter().flatten().collect())
    }

    pub fn from_flat(nx: usize, ny: usize, w: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || w.len() != nx * ny {
            return Err(Error::Domain(format!("channel shape {nx}x{ny} does not match {} entries", w.len())));
        }
        for x in 0..nx {
            let row = &w[x * ny..(x + 1) * ny];
            if let Some(bad) = row.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
                return Err(Error::Domain(format!("row {x} has invalid entry {bad}")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::Domain(format!("row {x} sums to {s}")));
            }
        }
        Ok(Channel { nx, ny, w })
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Binary erasure channel; output 1 is the erasure.
    pub fn bec(delta: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - delta, delta, 0.0], vec![0.0, delta, 1.0 - delta]])
    }

    /// Square channel whose rows are the cyclic shifts of `row`.
    pub fn cyclic(row: &[f64]) -> Result<Self> {
        let k = row.len();
        Self::new((0..k).map(|x| (0..k).map(|y| row[(y + k - x) % k]).collect()).collect())
    }

    /// Parses the text format: `|X| |Y|` on the first line, then one row per
    /// input. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty channel file".into() })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse { line: hline, msg: format!("bad dimension '{t}'") }))
            .collect::<Result<_>>()?;
        let [nx, ny] = dims[..] else {
            return Err(Error::Parse { line: hline, msg: "header must be '|X| |Y|'".into() });
        };
        if nx == 0 || ny == 0 {
            return Err(Error::Parse { line: hline, msg: "alphabet sizes must be positive".into() });
        }
        let mut w = Vec::with_capacity(nx * ny);
        for x in 0..nx {
            let (ln, line) = lines.next().ok_or(Error::Parse { line: hline, msg: format!("missing row {x}") })?;
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad probability '{t}'") }))
                .collect::<Result<_>>()?;
            if row.len() != ny {
                return Err(Error::Parse { line: ln, msg: format!("expected {ny} entries, found {}", row.len()) });
            }
            if row.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
                return Err(Error::Parse { line: ln, msg: "probabilities must be finite and nonnegative".into() });
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::Parse { line: ln, msg: format!("row sums to {s}") });
            }
            w.extend(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing data after the last row".into() });
        }
        Self::from_flat(nx, ny, w)
    }

    pub fn input_size(&self) -> usize {
        self.nx
    }

    pub fn output_size(&self) -> usize {
        self.ny
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.w[x * self.ny..(x + 1) * self.ny]
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.w[x * self.ny + y]
    }

    /// Output distribution induced by `px`.
    pub fn output_distribution(&self, px: &InputDistribution) -> Vec<f64> {
        let mut py = vec![0.0; self.ny];
        for (x, &p) in px.weights().iter().enumerate() {
            if p > 0.0 {
                for (q, &w) in py.iter_mut().zip(self.row(x)) {
                    *q += p * w;
                }
            }
        }
        py
    }

    /// Rows are permutations of each other and so are columns.
    pub fn is_cover_thomas_symmetric(&self) -> bool {
        fn sorted(mut v: Vec<f64>) -> Vec<f64> {
            v.sort_by(f64::total_cmp);
            v
        }
        fn same(a: &[f64], b: &[f64]) -> bool {
            a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-15)
        }
        let r0 = sorted(self.row(0).to_vec());
        if !(1..self.nx).all(|x| same(&r0, &sorted(self.row(x).to_vec()))) {
            return false;
        }
        let col = |y: usize| sorted((0..self.nx).map(|x| self.prob(x, y)).collect());
        let c0 = col(0);
        (1..self.ny).all(|y| same(&c0, &col(y)))
    }

    /// Relabels inputs and outputs: new row `i` is old row `input_perm[i]`,
    /// new column `j` is old column `output_perm[j]`.
    pub fn permuted(&self, input_perm: &[usize], output_perm: &[usize]) -> Result<Self> {
        let rows = input_perm
            .iter()
            .map(|&x| output_perm.iter().map(|&y| self.prob(x, y)).collect())
            .collect();
        Self::new(rows)
    }
}

/// Probability vector over channel inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct InputDistribution(Vec<f64>);

impl InputDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|p| !(*p >= 0.0 && *p <= 1.0)) {
            return Err(Error::Domain("input weights must lie in [0, 1]".into()));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("input weights sum to {s}")));
        }
        Ok(InputDistribution(weights))
    }

    pub fn uniform(k: usize) -> Self {
        InputDistribution(vec![1.0 / k as f64; k])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn from_unchecked(weights: Vec<f64>) -> Self {
        InputDistribution(weights)
    }
}
