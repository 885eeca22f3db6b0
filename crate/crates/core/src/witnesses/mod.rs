//! Exact-rational constructions of three separating compact sets, with the
//! function systems that generate (or approximate) them and an audit of every
//! side condition the constructions rely on.
//!
//! Everything is built on `[0,1]`; [`crate::maps::embed`] carries the sets and
//! maps to `[0,1]^d`.

mod intervals;
mod ladder;
mod prop_p;

pub use intervals::{
    build_epsilon_system, build_epsilon_system_with, build_interval_witness, k_sequence,
    y_sequence, y_sequence_exact, EpsilonSystem, IntervalWitness,
};
pub use ladder::{build_ladder, LadderWitness};
pub use prop_p::{build_prop_p, PropPWitness};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CompactSet;
use crate::hutchinson::FunctionSystem;
use crate::maps::{ContractiveMap, MapSpec};

pub type Rational = BigRational;

pub(crate) fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn qi(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Bits in numerator plus denominator.
pub(crate) fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// `"p/q"`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exact evaluation of the piecewise-linear interpolant through `nodes`
/// (sorted by abscissa), constant outside their hull.
pub(crate) fn pwl_eval_exact(nodes: &[(Rational, Rational)], x: &Rational) -> Rational {
    let first = &nodes[0];
    let last = &nodes[nodes.len() - 1];
    if x <= &first.0 {
        return first.1.clone();
    }
    if x >= &last.0 {
        return last.1.clone();
    }
    let i = nodes.partition_point(|n| &n.0 <= x);
    let (x0, y0) = &nodes[i - 1];
    let (x1, y1) = &nodes[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Largest `|slope|` over consecutive nodes.
pub(crate) fn max_slope_exact(nodes: &[(Rational, Rational)]) -> Rational {
    nodes
        .windows(2)
        .map(|w| ((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

pub(crate) fn pwl_from_exact(nodes: &[(Rational, Rational)]) -> Result<ContractiveMap> {
    let xs: Vec<f64> = nodes.iter().map(|n| to_f64(&n.0)).collect();
    let ys: Vec<f64> = nodes.iter().map(|n| to_f64(&n.1)).collect();
    crate::maps::extend_from_finite(&xs, &ys)
}

pub(crate) fn scalar_set(xs: impl IntoIterator<Item = f64>) -> Result<CompactSet> {
    CompactSet::from_scalars(&xs.into_iter().collect::<Vec<_>>())
}

/// One audited side condition. `margin` is the slack of a strict inequality
/// (positive when it holds) and `0` for an identity that holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditEntry {
    pub id: String,
    pub pass: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn push(&mut self, id: impl Into<String>, pass: bool, margin: f64) {
        self.entries.push(AuditEntry {
            id: id.into(),
            pass,
            margin,
        });
    }

    /// Passes iff every margin is strictly positive; records the smallest.
    pub(crate) fn positive(&mut self, id: &str, margins: impl IntoIterator<Item = Rational>) {
        match margins.into_iter().min() {
            Some(m) => self.push(id, m.is_positive(), to_f64(&m)),
            None => self.push(id, true, 0.0),
        }
    }

    /// Passes iff every value is nonnegative; records the smallest.
    pub(crate) fn nonnegative(&mut self, id: &str, values: impl IntoIterator<Item = Rational>) {
        match values.into_iter().min() {
            Some(m) => self.push(id, !m.is_negative(), to_f64(&m)),
            None => self.push(id, true, 0.0),
        }
    }

    /// Passes iff every pair is equal; the margin is minus the largest gap.
    pub(crate) fn identity(&mut self, id: &str, pairs: impl IntoIterator<Item = (Rational, Rational)>) {
        let worst = pairs
            .into_iter()
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let margin = if worst.is_zero() { 0.0 } else { -to_f64(&worst) };
        self.push(id, worst.is_zero(), margin);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<&AuditEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }

    pub fn get(&self, id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    PropP,
    Ladder,
    Intervals,
}

/// Structured-text form of a witness: exact rationals as `"p/q"` strings and
/// maps in the same format as system configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessExport {
    pub kind: WitnessKind,
    /// `n` for a ladder, the truncation depth otherwise.
    pub size: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intervals: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub maps: Vec<MapSpec>,
    pub audit: Vec<AuditEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl WitnessExport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("witness export serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn points_exact(&self) -> Result<Vec<Rational>> {
        self.points.iter().map(|p| parse_rational(p)).collect()
    }

    /// The point cloud (or interval endpoints) on `[0,1]`.
    pub fn point_set(&self) -> Result<CompactSet> {
        let mut xs = Vec::new();
        for p in &self.points {
            xs.push(to_f64(&parse_rational(p)?));
        }
        for [lo, hi] in &self.intervals {
            xs.push(to_f64(&parse_rational(lo)?));
            xs.push(to_f64(&parse_rational(hi)?));
        }
        if xs.is_empty() {
            return Err(Error::EmptySet);
        }
        scalar_set(xs)
    }

    pub fn delta(&self) -> Result<Option<f64>> {
        self.delta
            .as_deref()
            .map(|d| parse_rational(d).map(|r| to_f64(&r)))
            .transpose()
    }

    pub fn system(&self) -> Result<FunctionSystem> {
        FunctionSystem::new(self.maps.iter().map(MapSpec::build).collect::<Result<Vec<_>>>()?)
    }

    pub fn all_pass(&self) -> bool {
        self.audit.iter().all(|e| e.pass)
    }
}

pub(crate) fn export_maps(sys: &FunctionSystem) -> Vec<MapSpec> {
    sys.maps().iter().map(MapSpec::from_map).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for r in [q(1, 2), q(-3, 7), q(5, 1), q(0, 1)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&q(2, 4)), "1/2");
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exact_interpolation() {
        let nodes = vec![(q(0, 1), q(1, 4)), (q(1, 2), q(1, 2)), (q(1, 1), q(1, 4))];
        assert_eq!(pwl_eval_exact(&nodes, &q(1, 4)), q(3, 8));
        assert_eq!(pwl_eval_exact(&nodes, &q(3, 4)), q(3, 8));
        assert_eq!(pwl_eval_exact(&nodes, &q(1, 2)), q(1, 2));
        assert_eq!(max_slope_exact(&nodes), q(1, 2));
    }

    #[test]
    fn audit_bookkeeping() {
        let mut a = AuditReport::default();
        a.positive("p", vec![q(1, 3), q(1, 5)]);
        a.identity("i", vec![(q(1, 2), q(2, 4))]);
        assert!(a.all_pass());
        assert_eq!(a.get("p").unwrap().margin, 0.2);
        a.positive("bad", vec![q(0, 1)]);
        a.identity("off", vec![(q(1, 2), q(1, 3))]);
        assert_eq!(a.failures().len(), 2);
        assert!(a.get("off").unwrap().margin < 0.0);
    }
}
