//! Closed-form Pull/Push time estimates and the layer-by-layer recursion.
//!
//! Asymptotic expressions carry no constants of their own, so every
//! multiplicative constant is a caller-supplied input and is echoed back in
//! the report. Logarithms are natural except in the complete-graph Push
//! estimate, which uses `log2 n + ln n`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{diameter, load_profile, Graph, GraphError};

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("invalid bound input `{field}`: {reason}")]
    InvalidInput { field: &'static str, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> BoundsError {
    BoundsError::InvalidInput {
        field,
        reason: reason.into(),
    }
}

/// Multiplicative constants for the O(.) terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundConstants {
    /// Constant of `D^2 Δ ln Δ` (regular graphs).
    pub regular: f64,
    /// Constant of `Δmax ln Δmax (Emax - 1)^D` (general graphs).
    pub general: f64,
    /// Constant of the `sqrt(T_i)` buffer term in the recursion.
    pub sqrt: f64,
    /// Constant of the `Δmax ln Δmax` coupon-collector term in the recursion.
    pub coupon: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            regular: 1.0,
            general: 1.0,
            sqrt: 1.0,
            coupon: 1.0,
        }
    }
}

/// `log2 n + ln n`, the center of the complete-graph Push completion time.
pub fn push_complete_estimate(n: usize) -> Result<f64, BoundsError> {
    if n < 2 {
        return Err(invalid("n", "must be at least 2"));
    }
    let n = n as f64;
    Ok(n.log2() + n.ln())
}

/// `c D^2 Δ ln Δ` for Pull on a Δ-regular graph of diameter D.
pub fn pull_regular_upper(diameter: usize, degree: usize, c: f64) -> Result<f64, BoundsError> {
    if diameter < 1 {
        return Err(invalid("diameter", "must be at least 1"));
    }
    if degree < 2 {
        return Err(invalid("degree", "must be at least 2"));
    }
    check_constant("c", c)?;
    let (d, delta) = (diameter as f64, degree as f64);
    Ok(c * d * d * delta * delta.ln())
}

/// `c Δmax ln Δmax (Emax - 1)^D`, evaluated as written. It is zero at
/// `Emax = 1` and does not grow with D for `Emax <= 2`.
pub fn pull_general_upper(max_degree: usize, max_load: f64, diameter: usize, c: f64) -> Result<f64, BoundsError> {
    if max_degree < 2 {
        return Err(invalid("max_degree", "must be at least 2"));
    }
    if max_load.is_nan() || max_load < 1.0 {
        return Err(invalid("max_load", format!("{max_load} is below 1")));
    }
    if diameter < 1 {
        return Err(invalid("diameter", "must be at least 1"));
    }
    check_constant("c", c)?;
    let delta = max_degree as f64;
    Ok(c * delta * delta.ln() * (max_load - 1.0).powi(diameter as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarChainLower {
    pub value: f64,
    /// `delta^d` does not fit in 128 bits; `value` is then only approximate
    /// (or `f64::MAX`).
    pub huge: bool,
}

/// `delta^d`, the growth marker for Pull on a chain of d stars.
pub fn star_chain_lower(delta: usize, d: usize) -> Result<StarChainLower, BoundsError> {
    if delta < 1 {
        return Err(invalid("delta", "must be at least 1"));
    }
    if d < 1 {
        return Err(invalid("d", "must be at least 1"));
    }
    let exact = u32::try_from(d).ok().and_then(|e| (delta as u128).checked_pow(e));
    Ok(match exact {
        Some(v) => StarChainLower {
            value: v as f64,
            huge: false,
        },
        None => {
            let v = (delta as f64).powf(d as f64);
            StarChainLower {
                value: if v.is_finite() { v } else { f64::MAX },
                huge: true,
            }
        }
    })
}

/// Iterates the layer recursion from `first` (= T_1) up to T_D.
///
/// With `max_load == 1` (regular graphs):
/// `T_{i+1} = T_i + c_sqrt sqrt(T_i) + c_cc Δmax ln Δmax`.
/// With `max_load > 1`:
/// `T_{i+1} = T_i (Emax - 1) + c_cc Δmax ln Δmax`.
pub fn pull_recursion(
    first: f64,
    diameter: usize,
    max_degree: usize,
    max_load: f64,
    c_sqrt: f64,
    c_cc: f64,
) -> Result<Vec<f64>, BoundsError> {
    if first.is_nan() || first <= 0.0 || !first.is_finite() {
        return Err(invalid("first", "T_1 must be positive and finite"));
    }
    if max_load.is_nan() || max_load < 1.0 {
        return Err(invalid(
            "max_load",
            format!("{max_load} is below 1, which no graph attains"),
        ));
    }
    if max_degree < 1 {
        return Err(invalid("max_degree", "must be at least 1"));
    }
    check_constant("c_sqrt", c_sqrt)?;
    check_constant("c_cc", c_cc)?;
    let delta = max_degree as f64;
    let coupon = c_cc * delta * delta.ln();
    let regular = max_load == 1.0;
    let mut profile = Vec::with_capacity(diameter);
    let mut t = first;
    for i in 0..diameter {
        if i > 0 {
            t = if regular {
                t + c_sqrt * t.sqrt() + coupon
            } else {
                t * (max_load - 1.0) + coupon
            };
        }
        profile.push(t);
    }
    Ok(profile)
}

fn check_constant(field: &'static str, c: f64) -> Result<(), BoundsError> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("{c} is not a positive finite constant")))
    }
}

/// Recognizes a chain of `d` stars with `delta` leaves each (any labelling).
pub fn detect_star_chain(g: &Graph) -> Option<(usize, usize)> {
    let n = g.node_count();
    if n == 2 {
        return Some((1, 1));
    }
    let centers: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 1).collect();
    let d = centers.len();
    if d == 0 || !n.is_multiple_of(d) || n / d < 2 {
        return None;
    }
    let delta = n / d - 1;
    let is_leaf = |v: usize| g.degree(v) == 1;
    let mut ends = 0;
    for &c in &centers {
        let leaves = g.neighbors(c).iter().filter(|&&u| is_leaf(u)).count();
        let links = g.degree(c) - leaves;
        if leaves != delta || links > 2 || (d > 1 && links == 0) {
            return None;
        }
        if links <= 1 {
            ends += 1;
        }
    }
    // a connected graph whose centers have at most two center neighbours and
    // exactly two path ends is a path
    let center_edges: usize = centers.iter().map(|&c| g.degree(c) - delta).sum::<usize>() / 2;
    let path_like = if d == 1 {
        ends == 1
    } else {
        ends == 2 && center_edges == d - 1
    };
    (path_like && g.is_connected()).then_some((d, delta))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub node_count: usize,
    pub diameter: usize,
    pub max_degree: usize,
    pub regular_degree: Option<usize>,
    pub max_load: f64,
    pub push_complete_estimate: Option<f64>,
    pub pull_regular_upper: Option<f64>,
    pub pull_general_upper: Option<f64>,
    /// `Emax <= 2`: the general expression is zero or shrinks with D.
    pub general_bound_degenerate: bool,
    pub star_chain: Option<(usize, usize)>,
    pub star_chain_lower: Option<StarChainLower>,
    pub recursion_profile: Vec<f64>,
    pub constants_used: BoundConstants,
}

pub fn bounds_report(g: &Graph, constants: &BoundConstants) -> Result<BoundsReport, BoundsError> {
    let n = g.node_count();
    let diam = diameter(g)?;
    let max_degree = g.max_degree();
    let regular_degree = g.regular_degree();
    let max_load = if n > 1 { load_profile(g)?.max_load_f64() } else { 1.0 };

    let pull_regular = match regular_degree {
        Some(degree) if degree >= 2 && diam >= 1 => Some(pull_regular_upper(diam, degree, constants.regular)?),
        _ => None,
    };
    let pull_general = if max_degree >= 2 && diam >= 1 {
        Some(pull_general_upper(max_degree, max_load, diam, constants.general)?)
    } else {
        None
    };
    let recursion_profile = if max_degree >= 2 && diam >= 1 {
        let delta = max_degree as f64;
        let first = constants.coupon * delta * delta.ln();
        pull_recursion(first, diam, max_degree, max_load, constants.sqrt, constants.coupon)?
    } else {
        Vec::new()
    };
    let star_chain = detect_star_chain(g);
    let star_chain_lower = star_chain.map(|(d, delta)| star_chain_lower(delta, d)).transpose()?;

    Ok(BoundsReport {
        node_count: n,
        diameter: diam,
        max_degree,
        regular_degree,
        max_load,
        push_complete_estimate: (n >= 2).then(|| push_complete_estimate(n)).transpose()?,
        pull_regular_upper: pull_regular,
        pull_general_upper: pull_general,
        general_bound_degenerate: max_load <= 2.0,
        star_chain,
        star_chain_lower,
        recursion_profile,
        constants_used: *constants,
    })
}

/// Human-readable two-column rendering of a report.
pub fn render_table(r: &BoundsReport) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
    let mut rows: Vec<(String, String)> = vec![
        ("nodes".into(), r.node_count.to_string()),
        ("diameter".into(), r.diameter.to_string()),
        ("max degree".into(), r.max_degree.to_string()),
        (
            "regular degree".into(),
            r.regular_degree.map_or("-".into(), |d| d.to_string()),
        ),
        ("max load (Emax)".into(), format!("{:.6}", r.max_load)),
        ("push estimate, complete graph".into(), opt(r.push_complete_estimate)),
        ("pull upper, regular".into(), opt(r.pull_regular_upper)),
        (
            "pull upper, general".into(),
            format!(
                "{}{}",
                opt(r.pull_general_upper),
                if r.general_bound_degenerate {
                    " (degenerate: Emax <= 2)"
                } else {
                    ""
                }
            ),
        ),
    ];
    if let (Some((d, delta)), Some(lower)) = (r.star_chain, r.star_chain_lower) {
        rows.push((
            format!("star chain lower (d={d}, delta={delta})"),
            format!("{:.0}{}", lower.value, if lower.huge { " (huge)" } else { "" }),
        ));
    }
    if let Some(last) = r.recursion_profile.last() {
        rows.push((
            format!("recursion T_{}", r.recursion_profile.len()),
            format!("{last:.3}"),
        ));
    }
    let c = &r.constants_used;
    rows.push((
        "constants".into(),
        format!(
            "regular={} general={} sqrt={} coupon={}",
            c.regular, c.general, c.sqrt, c.coupon
        ),
    ));
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}
