use crate::dmc::{moments, Channel, ChannelStats, InputDistribution};
use crate::error::{check_eps, Error, Precondition, Result};
use crate::geometry::skewness_bounds_at;
use crate::numeric::q_inverse;

/// Which terms an expansion keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    /// Capacity, dispersion and `½ ln n`.
    Clt = 2,
    /// Adds the skewness term.
    Skewness = 3,
    /// Adds the `Q^{-1}(eps)^3 / sqrt(n)` term.
    Refined = 4,
}

impl Order {
    pub fn from_marker(k: u8) -> Result<Order> {
        match k {
            2 => Ok(Order::Clt),
            3 => Ok(Order::Skewness),
            4 => Ok(Order::Refined),
            _ => Err(Error::Domain(format!("order must be 2, 3 or 4, got {k}"))),
        }
    }

    pub fn marker(self) -> u8 {
        self as u8
    }
}

/// Lower (achievability) or upper (converse) side of a bound pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExpansionTerms {
    pub capacity: f64,
    pub dispersion: f64,
    pub log: f64,
    pub skewness: f64,
    pub fourth: f64,
    pub constant: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionResult {
    pub total_log_m: f64,
    pub order: Order,
    pub terms: ExpansionTerms,
}

impl ExpansionResult {
    /// Zeroes the terms `order` excludes and sums the rest.
    pub(crate) fn assemble(order: Order, mut terms: ExpansionTerms) -> Self {
        if order < Order::Skewness {
            terms.skewness = 0.0;
        }
        if order < Order::Refined {
            terms.fourth = 0.0;
        }
        let t = &terms;
        let total_log_m = t.capacity + t.dispersion + t.log + t.skewness + t.fourth + t.constant;
        ExpansionResult { total_log_m, order, terms }
    }

    /// `log2 M / n`.
    pub fn rate_bits(&self, n: u64) -> f64 {
        self.total_log_m / (n as f64 * std::f64::consts::LN_2)
    }
}

/// Coefficient of `Q^{-1}(eps)^3 / sqrt(n)`.
pub fn fourth_order_coeff(v: f64, mu3: f64, mu4: f64) -> f64 {
    -(3.0 * (mu4 - 3.0 * v * v) * v - 4.0 * mu3 * mu3) / (72.0 * v.powf(2.5))
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Regime {
    v: f64,
    s_lower: f64,
    s_upper: f64,
}

/// Everything a channel contributes to its rate expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelExpansion {
    pub capacity: f64,
    small: Regime,
    large: Regime,
    /// Central moments at the uniform input, present for Cover-Thomas channels.
    refined: Option<(f64, f64)>,
}

impl ChannelExpansion {
    pub fn new(channel: &Channel, stats: &ChannelStats) -> Result<Self> {
        let regime = |eps: f64| -> Result<Regime> {
            let b = skewness_bounds_at(channel, stats, eps)?;
            Ok(Regime { v: b.v_eps, s_lower: b.s_lower, s_upper: b.s_upper })
        };
        let small = regime(0.25)?;
        let large = if stats.v_max == stats.v_min { small } else { regime(0.75)? };
        let refined = if channel.is_cover_thomas_symmetric() {
            let m = moments(channel, &InputDistribution::uniform(channel.input_size()))?;
            Some((m.mu3, m.mu4))
        } else {
            None
        };
        Ok(ChannelExpansion { capacity: stats.capacity, small, large, refined })
    }

    pub fn s_lower(&self) -> f64 {
        self.small.s_lower
    }

    pub fn s_upper(&self) -> f64 {
        self.small.s_upper
    }
}

pub fn rate_expansion(
    inputs: &ChannelExpansion,
    n: u64,
    eps: f64,
    order: Order,
    side: Side,
) -> Result<ExpansionResult> {
    check_eps(eps)?;
    if n == 0 {
        return Err(Error::Domain("blocklength must be positive".into()));
    }
    let r = if eps < 0.5 { inputs.small } else { inputs.large };
    let y = q_inverse(eps)?;
    let nf = n as f64;
    let s = match side {
        Side::Lower => r.s_lower,
        Side::Upper => r.s_upper,
    };
    let fourth = if order == Order::Refined {
        let (mu3, mu4) = inputs.refined.ok_or(Error::Precondition(Precondition::NotSymmetric))?;
        fourth_order_coeff(r.v, mu3, mu4) * y * y * y / nf.sqrt()
    } else {
        0.0
    };
    Ok(ExpansionResult::assemble(
        order,
        ExpansionTerms {
            capacity: nf * inputs.capacity,
            dispersion: -(nf * r.v).sqrt() * y,
            log: 0.5 * nf.ln(),
            skewness: s * y * y,
            fourth,
            constant: 0.0,
        },
    ))
}
