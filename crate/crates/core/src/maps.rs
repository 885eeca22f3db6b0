//! Contraction and weak-contraction self-maps of the unit cube.
//!
//! Only one-dimensional maps carry real structure; higher dimensions are
//! reached through [`embed`], which acts on the first coordinate and sends
//! every other coordinate to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{euclidean, CompactSet, Point, DEDUP_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// `d(f(x), f(y)) < d(x, y)` for `x != y`, no uniform rate.
    Weak,
    /// Lipschitz with a constant below 1.
    Contraction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapVariant {
    Affine { slope: f64, offset: f64 },
    Constant(Point),
    /// Linear between nodes, constant outside the node hull.
    PiecewiseLinear(Vec<(f64, f64)>),
    /// `x -> x - x^2`.
    Logistic,
    Embedded { inner: Box<ContractiveMap>, dim: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractiveMap {
    variant: MapVariant,
    kind: MapKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateMethod {
    Analytic,
    Empirical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzCertificate {
    pub upper_bound: f64,
    pub attained_on: Option<(Point, Point)>,
    pub method: CertificateMethod,
    /// The bound is a supremum that is not attained, so the map is only a
    /// weak contraction even though `upper_bound` may equal 1.
    pub weak_only: bool,
}

impl LipschitzCertificate {
    pub fn is_contraction(&self) -> bool {
        self.upper_bound < 1.0
    }

    pub fn margin(&self) -> f64 {
        1.0 - self.upper_bound
    }
}

fn in_unit(x: f64) -> bool {
    (-DEDUP_TOL..=1.0 + DEDUP_TOL).contains(&x)
}

impl ContractiveMap {
    pub fn affine(slope: f64, offset: f64) -> Result<Self> {
        if !(slope.abs() < 1.0) {
            return Err(Error::InvalidMap(format!("affine slope {slope} has |a| >= 1")));
        }
        if !in_unit(offset) || !in_unit(slope + offset) {
            return Err(Error::InvalidMap(format!(
                "affine map {slope}x + {offset} does not send [0,1] into itself"
            )));
        }
        Ok(ContractiveMap {
            variant: MapVariant::Affine { slope, offset },
            kind: MapKind::Contraction,
        })
    }

    pub fn constant(c: Point) -> Self {
        ContractiveMap {
            variant: MapVariant::Constant(c),
            kind: MapKind::Contraction,
        }
    }

    pub fn constant_scalar(c: f64) -> Result<Self> {
        Ok(Self::constant(Point::scalar(c)?))
    }

    pub fn logistic() -> Self {
        ContractiveMap {
            variant: MapVariant::Logistic,
            kind: MapKind::Weak,
        }
    }

    /// Nodes must be strictly increasing in `x`, with `x` and `y` in `[0,1]`
    /// and every segment slope of magnitude below 1. A weak declaration is
    /// allowed and only affects how the map is reported.
    pub fn piecewise_linear(nodes: Vec<(f64, f64)>, kind: MapKind) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidMap("piecewise-linear map needs a node".into()));
        }
        for &(x, y) in &nodes {
            if !in_unit(x) || !in_unit(y) {
                return Err(Error::InvalidMap(format!("node ({x}, {y}) outside [0,1]^2")));
            }
        }
        for w in nodes.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidMap(format!(
                    "node abscissae not strictly increasing at {}",
                    w[1].0
                )));
            }
        }
        let bound = max_segment_slope(&nodes).0;
        if !(bound < 1.0) {
            return Err(Error::NotContractive { bound });
        }
        Ok(ContractiveMap {
            variant: MapVariant::PiecewiseLinear(nodes),
            kind,
        })
    }

    pub fn variant(&self) -> &MapVariant {
        &self.variant
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.variant {
            MapVariant::Constant(c) => c.dim(),
            MapVariant::Embedded { dim, .. } => *dim,
            _ => 1,
        }
    }

    pub fn with_kind(mut self, kind: MapKind) -> Result<Self> {
        if matches!(self.variant, MapVariant::Logistic) && kind == MapKind::Contraction {
            return Err(Error::InvalidMap(
                "the logistic map x - x^2 is a weak contraction, not a contraction".into(),
            ));
        }
        self.kind = kind;
        Ok(self)
    }

    /// Evaluates a one-dimensional map (or the inner map of an embedding)
    /// without any domain check.
    pub(crate) fn eval_scalar(&self, x: f64) -> f64 {
        match &self.variant {
            MapVariant::Affine { slope, offset } => slope * x + offset,
            MapVariant::Constant(c) => c.x(),
            MapVariant::PiecewiseLinear(nodes) => eval_pwl(nodes, x),
            MapVariant::Logistic => x - x * x,
            MapVariant::Embedded { inner, .. } => inner.eval_scalar(x),
        }
    }

    /// Writes `f(x)` into `out`; both slices have the map's dimension.
    pub(crate) fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        match &self.variant {
            MapVariant::Constant(c) => out.copy_from_slice(c.coords()),
            MapVariant::Embedded { inner, .. } => {
                out.iter_mut().for_each(|o| *o = 0.0);
                out[0] = inner.eval_scalar(x[0]).clamp(0.0, 1.0);
            }
            _ => out[0] = self.eval_scalar(x[0]).clamp(0.0, 1.0),
        }
    }
}

fn eval_pwl(nodes: &[(f64, f64)], x: f64) -> f64 {
    let first = nodes[0];
    let last = nodes[nodes.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    // first index with node.x > x
    let i = nodes.partition_point(|n| n.0 <= x);
    let (x0, y0) = nodes[i - 1];
    let (x1, y1) = nodes[i];
    if x == x0 {
        return y0;
    }
    y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
}

fn max_segment_slope(nodes: &[(f64, f64)]) -> (f64, Option<usize>) {
    let mut best = 0.0f64;
    let mut arg = None;
    for (i, w) in nodes.windows(2).enumerate() {
        let s = ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs();
        if s > best || arg.is_none() {
            best = best.max(s);
            arg = Some(i);
        }
    }
    (best, arg)
}

fn check_point(f: &ContractiveMap, x: &Point) -> Result<()> {
    if x.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x.dim(),
        });
    }
    for &c in x.coords() {
        if !in_unit(c) {
            return Err(Error::OutOfDomain { value: c });
        }
    }
    Ok(())
}

pub fn apply(f: &ContractiveMap, x: &Point) -> Result<Point> {
    check_point(f, x)?;
    let mut out = vec![0.0; f.dim()];
    f.eval_into(x.coords(), &mut out);
    Ok(Point::from_raw(out))
}

pub fn image(f: &ContractiveMap, a: &CompactSet) -> Result<CompactSet> {
    if a.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: a.dim(),
        });
    }
    let dim = a.dim();
    let mut coords = vec![0.0; a.len() * dim];
    for (p, out) in a.iter().zip(coords.chunks_exact_mut(dim)) {
        f.eval_into(p, out);
    }
    let resolution = a.resolution() * lipschitz_upper_bound(f).upper_bound;
    Ok(CompactSet::canonical(dim, coords, resolution))
}

pub fn lipschitz_upper_bound(f: &ContractiveMap) -> LipschitzCertificate {
    let analytic = |upper_bound: f64, attained_on| LipschitzCertificate {
        upper_bound,
        attained_on,
        method: CertificateMethod::Analytic,
        weak_only: false,
    };
    match &f.variant {
        MapVariant::Affine { slope, .. } => analytic(slope.abs(), None),
        MapVariant::Constant(_) => analytic(0.0, None),
        MapVariant::PiecewiseLinear(nodes) => {
            let (bound, seg) = max_segment_slope(nodes);
            let pair = seg.map(|i| {
                (
                    Point::from_raw(vec![nodes[i].0]),
                    Point::from_raw(vec![nodes[i + 1].0]),
                )
            });
            analytic(bound, pair)
        }
        // |f(x) - f(y)| = |x - y| |1 - (x + y)|, ratio -> 1 as x + y -> 0
        MapVariant::Logistic => LipschitzCertificate {
            upper_bound: 1.0,
            attained_on: None,
            method: CertificateMethod::Analytic,
            weak_only: true,
        },
        MapVariant::Embedded { inner, dim } => {
            let mut c = lipschitz_upper_bound(inner);
            if let Some((a, b)) = c.attained_on.take() {
                let lift = |p: Point| {
                    let mut v = vec![0.0; *dim];
                    v[0] = p.x();
                    Point::from_raw(v)
                };
                c.attained_on = Some((lift(a), lift(b)));
            }
            c
        }
    }
}

pub fn empirical_lipschitz(f: &ContractiveMap, s: &CompactSet) -> Result<LipschitzCertificate> {
    if s.len() < 2 {
        return Err(Error::InvalidParameter(
            "empirical Lipschitz estimate needs at least two points".into(),
        ));
    }
    let fs = s
        .iter()
        .map(|p| apply(f, &Point::from_raw(p.to_vec())))
        .collect::<Result<Vec<_>>>()?;
    let mut best = -1.0f64;
    let mut arg = (0, 1);
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let d = euclidean(s.point(i), s.point(j));
            let ratio = fs[i].distance(&fs[j]) / d;
            if ratio > best {
                best = ratio;
                arg = (i, j);
            }
        }
    }
    Ok(LipschitzCertificate {
        upper_bound: best,
        attained_on: Some((
            Point::from_raw(s.point(arg.0).to_vec()),
            Point::from_raw(s.point(arg.1).to_vec()),
        )),
        method: CertificateMethod::Empirical,
        weak_only: false,
    })
}

/// Iterates `f` from the cube center.
///
/// Contractions stop once the a-posteriori bound `L/(1-L) * step` is at most
/// `tol`; weak maps stop once a step is at most `tol`. In both cases the
/// returned point `p` satisfies `d(p, f(p)) <= tol`.
pub fn fixed_point(f: &ContractiveMap, tol: f64, max_iter: usize) -> Result<Point> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidParameter(
            "fixed-point iteration needs tol > 0 and max_iter > 0".into(),
        ));
    }
    let dim = f.dim();
    let cert = lipschitz_upper_bound(f);
    let factor = if cert.is_contraction() {
        let l = cert.upper_bound;
        (l / (1.0 - l)).max(f64::MIN_POSITIVE)
    } else {
        1.0
    };
    let mut x = vec![0.5; dim];
    let mut next = vec![0.0; dim];
    let mut step = f64::INFINITY;
    for _ in 0..max_iter {
        f.eval_into(&x, &mut next);
        step = euclidean(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if step == 0.0 || factor * step <= tol {
            return Ok(Point::from_raw(x));
        }
    }
    Err(Error::FixedPointNotConverged {
        iterations: max_iter,
        last_step: step,
        best: Point::from_raw(x),
    })
}

/// Piecewise-linear map through `(domain[i], values[i])`, constant outside
/// the hull of `domain`.
pub fn extend_from_finite(domain: &[f64], values: &[f64]) -> Result<ContractiveMap> {
    if domain.is_empty() || domain.len() != values.len() {
        return Err(Error::InvalidParameter(format!(
            "need equally many domain points and values, got {} and {}",
            domain.len(),
            values.len()
        )));
    }
    for w in domain.windows(2) {
        if w[1] == w[0] {
            return Err(Error::InvalidParameter(format!("duplicate domain point {}", w[0])));
        }
        if w[1] < w[0] {
            return Err(Error::InvalidParameter("domain points must be increasing".into()));
        }
    }
    let nodes: Vec<(f64, f64)> = domain.iter().copied().zip(values.iter().copied()).collect();
    ContractiveMap::piecewise_linear(nodes, MapKind::Contraction)
}

/// `(x_1, ..., x_d) -> (f(x_1), 0, ..., 0)`.
pub fn embed(f: &ContractiveMap, dim: usize) -> Result<ContractiveMap> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let inner = match &f.variant {
        MapVariant::Embedded { inner, .. } => (**inner).clone(),
        MapVariant::Constant(c) if c.dim() != 1 => {
            return Err(Error::NotOneDimensional(c.dim()));
        }
        _ => f.clone(),
    };
    if dim == 1 {
        return Ok(inner);
    }
    let kind = inner.kind;
    Ok(ContractiveMap {
        variant: MapVariant::Embedded {
            inner: Box::new(inner),
            dim,
        },
        kind,
    })
}

/// Serialized map description, shared by config files and witness exports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MapSpec {
    Affine {
        a: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<MapKind>,
    },
    Constant {
        c: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<MapKind>,
    },
    Pwl {
        nodes: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<MapKind>,
    },
    Logistic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<MapKind>,
    },
    Embedded {
        inner: Box<MapSpec>,
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<MapKind>,
    },
}

impl MapSpec {
    pub fn build(&self) -> Result<ContractiveMap> {
        let (map, kind) = match self {
            MapSpec::Affine { a, b, kind } => (ContractiveMap::affine(*a, *b)?, *kind),
            MapSpec::Constant { c, kind } => (ContractiveMap::constant(Point::new(c.clone())?), *kind),
            MapSpec::Pwl { nodes, kind } => (
                ContractiveMap::piecewise_linear(
                    nodes.iter().map(|n| (n[0], n[1])).collect(),
                    kind.unwrap_or(MapKind::Contraction),
                )?,
                *kind,
            ),
            MapSpec::Logistic { kind } => (ContractiveMap::logistic(), *kind),
            MapSpec::Embedded { inner, dim, kind } => (embed(&inner.build()?, *dim)?, *kind),
        };
        match kind {
            Some(k) => map.with_kind(k),
            None => Ok(map),
        }
    }

    pub fn from_map(f: &ContractiveMap) -> MapSpec {
        let kind = Some(f.kind);
        match &f.variant {
            MapVariant::Affine { slope, offset } => MapSpec::Affine {
                a: *slope,
                b: *offset,
                kind,
            },
            MapVariant::Constant(c) => MapSpec::Constant {
                c: c.coords().to_vec(),
                kind,
            },
            MapVariant::PiecewiseLinear(nodes) => MapSpec::Pwl {
                nodes: nodes.iter().map(|&(x, y)| [x, y]).collect(),
                kind,
            },
            MapVariant::Logistic => MapSpec::Logistic { kind },
            MapVariant::Embedded { inner, dim } => MapSpec::Embedded {
                inner: Box::new(MapSpec::from_map(inner)),
                dim: *dim,
                kind,
            },
        }
    }
}
