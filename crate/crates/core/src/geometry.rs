//! Finite stand-ins for compact subsets of the unit cube `[0,1]^d`, the
//! Hausdorff metric between them, and a few helpers (nets, thickenings,
//! CSV point clouds) the rest of the crate builds on.
//!
//! Ground metric is Euclidean. Every [`CompactSet`] is stored sorted
//! lexicographically with near-duplicates (closer than [`DEDUP_TOL`]) removed,
//! which keeps all derived output deterministic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for domain checks, clipping and point deduplication.
pub const DEDUP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Coordinates within `DEDUP_TOL` of the cube are clipped onto it.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let mut coords = coords;
        for c in coords.iter_mut() {
            *c = clip_unit(*c)?;
        }
        Ok(Point { coords })
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Point::new(vec![x])
    }

    pub fn origin(dim: usize) -> Self {
        Point { coords: vec![0.0; dim] }
    }

    pub fn center(dim: usize) -> Self {
        Point { coords: vec![0.5; dim] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn distance(&self, other: &Point) -> f64 {
        euclidean(&self.coords, &other.coords)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Point { coords }
    }
}

fn clip_unit(c: f64) -> Result<f64> {
    if !c.is_finite() || !(-DEDUP_TOL..=1.0 + DEDUP_TOL).contains(&c) {
        return Err(Error::OutOfDomain { value: c });
    }
    Ok(c.clamp(0.0, 1.0))
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// A nonempty finite point cloud in `[0,1]^d`.
///
/// `resolution` records how coarse the cloud is meant to be as a
/// representation of some compact set: 0 means the set is exactly this
/// finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactSet {
    dim: usize,
    coords: Vec<f64>,
    resolution: f64,
}

impl CompactSet {
    pub fn from_points(points: Vec<Point>, resolution: f64) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptySet)?;
        let dim = first.dim();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            coords.extend_from_slice(&p.coords);
        }
        Self::from_coords(dim, coords, resolution)
    }

    /// Builds a set from a flat coordinate buffer (`dim` values per point).
    pub fn from_coords(dim: usize, coords: Vec<f64>, resolution: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if coords.is_empty() {
            return Err(Error::EmptySet);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "coordinate buffer of length {} is not a multiple of dimension {dim}",
                coords.len()
            )));
        }
        if !(resolution >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "resolution must be nonnegative, got {resolution}"
            )));
        }
        let mut coords = coords;
        for c in coords.iter_mut() {
            *c = clip_unit(*c)?;
        }
        Ok(Self::canonical(dim, coords, resolution))
    }

    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::from_coords(1, xs.to_vec(), 0.0)
    }

    pub fn singleton(p: Point) -> Self {
        CompactSet {
            dim: p.dim(),
            coords: p.coords,
            resolution: 0.0,
        }
    }

    /// Sorts, then drops points within `DEDUP_TOL` of an already kept one.
    /// Input coordinates must already be inside the cube.
    pub(crate) fn canonical(dim: usize, coords: Vec<f64>, resolution: f64) -> Self {
        let n = coords.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| lex_cmp(&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim]));
        let mut out: Vec<f64> = Vec::with_capacity(coords.len());
        for i in order {
            let p = &coords[i * dim..(i + 1) * dim];
            let kept = out.len() / dim;
            let mut duplicate = false;
            for k in (0..kept).rev() {
                let q = &out[k * dim..(k + 1) * dim];
                if p[0] - q[0] > DEDUP_TOL {
                    break;
                }
                if euclidean(p, q) < DEDUP_TOL {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                out.extend_from_slice(p);
            }
        }
        CompactSet {
            dim,
            coords: out,
            resolution,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn with_resolution(mut self, resolution: f64) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_points(&self) -> Vec<Point> {
        self.iter().map(|c| Point::from_raw(c.to_vec())).collect()
    }

    /// First coordinates, in sorted order. Handy for `d = 1` sets.
    pub fn xs(&self) -> Vec<f64> {
        self.iter().map(|c| c[0]).collect()
    }

    pub fn diameter(&self) -> f64 {
        if self.dim == 1 {
            let n = self.len();
            return self.coords[n - 1] - self.coords[0];
        }
        let mut best = 0.0f64;
        for (i, a) in self.iter().enumerate() {
            for b in self.iter().skip(i + 1) {
                best = best.max(euclidean(a, b));
            }
        }
        best
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        nearest(self, p, -1.0).is_some_and(|(d, _)| d < DEDUP_TOL)
    }

    /// `A × {0}^{d-1}` for a one-dimensional `A`.
    pub fn embed(&self, dim: usize) -> Result<CompactSet> {
        if self.dim != 1 {
            return Err(Error::NotOneDimensional(self.dim));
        }
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(self.len() * dim);
        for &x in &self.coords {
            coords.push(x);
            coords.extend(std::iter::repeat_n(0.0, dim - 1));
        }
        Ok(CompactSet {
            dim,
            coords,
            resolution: self.resolution,
        })
    }

    fn check_dim(&self, other: &CompactSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }
}

/// Distance together with the pairs realizing each directed distance.
#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffReport {
    pub distance: f64,
    /// `(a, b)` with `a` maximizing `d(a, B)` and `b` its nearest point in `B`.
    pub witness_ab: (Point, Point),
    /// `(b, a)` with `b` maximizing `d(b, A)` and `a` its nearest point in `A`.
    pub witness_ba: (Point, Point),
    pub directed_ab: f64,
    pub directed_ba: f64,
}

/// Nearest point of `set` to `x`. Returns `None` as soon as some point closer
/// than or equal to `give_up_below` is found, since the caller only needs
/// distances exceeding that value.
fn nearest(set: &CompactSet, x: &[f64], give_up_below: f64) -> Option<(f64, usize)> {
    let n = set.len();
    let dim = set.dim;
    let start = {
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if set.coords[mid * dim] < x[0] {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let mut best = f64::INFINITY;
    let mut best_idx = usize::MAX;
    let mut right = start;
    let mut left = start;
    loop {
        let mut progressed = false;
        if right < n {
            let q = set.point(right);
            if q[0] - x[0] < best {
                let d = euclidean(x, q);
                if d < best {
                    best = d;
                    best_idx = right;
                    if best <= give_up_below {
                        return None;
                    }
                }
                right += 1;
                progressed = true;
            } else {
                right = n;
            }
        }
        if left > 0 {
            let q = set.point(left - 1);
            if x[0] - q[0] < best {
                let d = euclidean(x, q);
                if d < best {
                    best = d;
                    best_idx = left - 1;
                    if best <= give_up_below {
                        return None;
                    }
                }
                left -= 1;
                progressed = true;
            } else {
                left = 0;
            }
        }
        if !progressed {
            break;
        }
    }
    Some((best, best_idx))
}

/// `sup_{a in A} d(a, B)` with the index pair attaining it.
fn directed(a: &CompactSet, b: &CompactSet) -> (f64, usize, usize) {
    let mut sup = -1.0f64;
    let mut arg = (0, 0);
    for (i, p) in a.iter().enumerate() {
        if let Some((d, j)) = nearest(b, p, sup) {
            if d > sup {
                sup = d;
                arg = (i, j);
            }
        }
    }
    (sup.max(0.0), arg.0, arg.1)
}

pub fn hausdorff_distance(a: &CompactSet, b: &CompactSet) -> Result<HausdorffReport> {
    a.check_dim(b)?;
    let (dab, ia, jb) = directed(a, b);
    let (dba, ib, ja) = directed(b, a);
    let pt = |s: &CompactSet, i: usize| Point::from_raw(s.point(i).to_vec());
    Ok(HausdorffReport {
        distance: dab.max(dba),
        witness_ab: (pt(a, ia), pt(b, jb)),
        witness_ba: (pt(b, ib), pt(a, ja)),
        directed_ab: dab,
        directed_ba: dba,
    })
}

/// Shorthand for `hausdorff_distance(a, b)?.distance`.
pub fn hausdorff(a: &CompactSet, b: &CompactSet) -> Result<f64> {
    Ok(hausdorff_distance(a, b)?.distance)
}

/// `sup_{a in A} d(a, B)`.
pub fn directed_hausdorff(a: &CompactSet, b: &CompactSet) -> Result<f64> {
    a.check_dim(b)?;
    Ok(directed(a, b).0)
}

pub fn distance_point_set(x: &Point, a: &CompactSet) -> Result<f64> {
    if x.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: x.dim(),
        });
    }
    Ok(nearest(a, x.coords(), -1.0).map(|(d, _)| d).unwrap_or(0.0))
}

pub fn union(a: &CompactSet, b: &CompactSet) -> Result<CompactSet> {
    a.check_dim(b)?;
    let mut coords = Vec::with_capacity(a.coords.len() + b.coords.len());
    coords.extend_from_slice(&a.coords);
    coords.extend_from_slice(&b.coords);
    Ok(CompactSet::canonical(
        a.dim,
        coords,
        a.resolution.max(b.resolution),
    ))
}

/// Greedy net with a uniform grid index; a point is rejected when some kept
/// point lies strictly closer than `radius`.
#[derive(Debug, Clone)]
pub struct GreedyNet {
    dim: usize,
    radius: f64,
    coords: Vec<f64>,
    cells: HashMap<Vec<i64>, Vec<u32>>,
}

impl GreedyNet {
    pub fn new(dim: usize, radius: f64) -> Self {
        GreedyNet {
            dim,
            radius,
            coords: Vec::new(),
            cells: HashMap::new(),
        }
    }

    fn cell(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|c| (c / self.radius).floor() as i64).collect()
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Kept coordinates in insertion order.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Distance from `p` to the nearest kept point, if one is within `radius`.
    pub fn near(&self, p: &[f64]) -> Option<f64> {
        let base = self.cell(p);
        let mut offset = vec![-1i64; self.dim];
        let mut best: Option<f64> = None;
        loop {
            let key: Vec<i64> = base.iter().zip(&offset).map(|(b, o)| b + o).collect();
            if let Some(ids) = self.cells.get(&key) {
                for &id in ids {
                    let q = &self.coords[id as usize * self.dim..(id as usize + 1) * self.dim];
                    let d = euclidean(p, q);
                    if d < self.radius && best.is_none_or(|b| d < b) {
                        best = Some(d);
                    }
                }
            }
            // odometer over {-1, 0, 1}^dim
            let mut k = 0;
            while k < self.dim {
                offset[k] += 1;
                if offset[k] <= 1 {
                    break;
                }
                offset[k] = -1;
                k += 1;
            }
            if k == self.dim {
                break;
            }
        }
        best
    }

    /// Keeps `p` unless a kept point is within `radius`. Returns whether kept.
    pub fn insert(&mut self, p: &[f64]) -> bool {
        if self.near(p).is_some() {
            return false;
        }
        self.push(p);
        true
    }

    /// Unconditional insert.
    pub fn push(&mut self, p: &[f64]) {
        let id = self.len() as u32;
        let key = self.cell(p);
        self.coords.extend_from_slice(p);
        self.cells.entry(key).or_default().push(id);
    }

    pub fn into_set(self, resolution: f64) -> Result<CompactSet> {
        CompactSet::from_coords(self.dim, self.coords, resolution)
    }
}

/// Greedy `r`-net of `a`, sweeping points in sorted order: a point is kept
/// unless a previously kept point is strictly closer than `r`.
pub fn renet(a: &CompactSet, r: f64) -> Result<CompactSet> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "net radius must be positive, got {r}"
        )));
    }
    let mut net = GreedyNet::new(a.dim, r);
    for p in a.iter() {
        net.insert(p);
    }
    // Sorted input and order-preserving insertion: already canonical.
    Ok(CompactSet {
        dim: a.dim,
        coords: net.coords,
        resolution: a.resolution + r,
    })
}

/// Disjoint closed intervals in `[0,1]`, stored in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Merges overlapping input intervals.
    pub fn from_intervals(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !(lo <= hi) {
                return Err(Error::InvalidParameter(format!(
                    "interval [{lo}, {hi}] has lo > hi"
                )));
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        merged.reverse();
        Ok(IntervalUnion { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }

    /// Whether `[lo, hi]` lies inside a single component.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= lo && hi <= b)
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }
}

/// Union of the open balls `B(x, delta)`, `x` in `a`, merged into maximal
/// intervals and clipped to `[0,1]`. Endpoints are reported as closed.
pub fn thicken(a: &CompactSet, delta: f64) -> Result<IntervalUnion> {
    if a.dim != 1 {
        return Err(Error::NotOneDimensional(a.dim));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "thickening radius must be positive, got {delta}"
        )));
    }
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for &x in &a.coords {
        let (lo, hi) = (x - delta, x + delta);
        match merged.last_mut() {
            // open balls only overlap when the next one starts strictly inside
            Some(last) if lo < last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let mut intervals: Vec<(f64, f64)> = merged
        .into_iter()
        .map(|(lo, hi)| (lo.max(0.0), hi.min(1.0)))
        .collect();
    intervals.reverse();
    Ok(IntervalUnion { intervals })
}

/// Parses the point-cloud CSV format: one point per line, comma-separated
/// coordinates, `#` comments and blank lines ignored.
pub fn parse_csv(text: &str) -> Result<CompactSet> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut count = 0;
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::Parse(format!("line {}: bad number {:?}", lineno + 1, field.trim()))
            })?;
            coords.push(v);
            count += 1;
        }
        match dim {
            None => dim = Some(count),
            Some(d) if d != count => {
                return Err(Error::Parse(format!(
                    "line {}: expected {d} fields, found {count}",
                    lineno + 1
                )))
            }
            _ => {}
        }
    }
    let dim = dim.ok_or(Error::EmptySet)?;
    CompactSet::from_coords(dim, coords, 0.0)
}

/// 17 significant digits per coordinate.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(set: &CompactSet) -> String {
    let mut out = String::new();
    for p in set.iter() {
        let fields: Vec<String> = p.iter().map(|&c| format_real(c)).collect();
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[f64]) -> CompactSet {
        CompactSet::from_scalars(xs).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff(&s(&[0.0]), &s(&[1.0])).unwrap(), 1.0);
        let a = s(&[0.1, 0.7, 0.3]);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        let r = hausdorff_distance(&s(&[0.0, 1.0]), &s(&[0.4])).unwrap();
        assert_eq!(r.distance, 0.6);
        assert_eq!(r.directed_ab, 0.6);
        assert_eq!(r.directed_ba, 0.4);
        assert_eq!(r.witness_ab.0.x(), 1.0);
        assert_eq!(r.witness_ab.1.x(), 0.4);
        assert_eq!(r.witness_ba.0.x(), 0.4);
        assert_eq!(r.witness_ba.1.x(), 0.0);
    }

    #[test]
    fn hausdorff_dimension_mismatch() {
        let a = s(&[0.5]);
        let b = CompactSet::from_coords(2, vec![0.5, 0.5], 0.0).unwrap();
        assert!(matches!(
            hausdorff(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(CompactSet::from_scalars(&[]), Err(Error::EmptySet));
        assert_eq!(CompactSet::from_points(vec![], 0.0), Err(Error::EmptySet));
    }

    #[test]
    fn out_of_cube_rejected_and_near_edge_clipped() {
        assert!(matches!(
            CompactSet::from_scalars(&[1.5]),
            Err(Error::OutOfDomain { .. })
        ));
        let a = s(&[-1e-13, 1.0 + 1e-13]);
        assert_eq!(a.xs(), vec![0.0, 1.0]);
    }

    #[test]
    fn point_set_distance() {
        let x = Point::scalar(0.5).unwrap();
        assert_eq!(distance_point_set(&x, &s(&[0.0, 1.0])).unwrap(), 0.5);
        assert_eq!(distance_point_set(&x, &s(&[0.2, 0.5])).unwrap(), 0.0);
        let d = distance_point_set(&Point::scalar(0.1).unwrap(), &s(&[0.35, 0.8])).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn union_dedups() {
        assert_eq!(union(&s(&[0.0]), &s(&[1.0])).unwrap().xs(), vec![0.0, 1.0]);
        let a = s(&[0.2, 0.4]);
        assert_eq!(union(&a, &a).unwrap(), a);
        assert_eq!(
            union(&s(&[0.0, 0.5]), &s(&[0.5, 1.0])).unwrap().xs(),
            vec![0.0, 0.5, 1.0]
        );
        let r = union(&s(&[0.0]).with_resolution(0.1), &s(&[1.0]).with_resolution(0.3)).unwrap();
        assert_eq!(r.resolution(), 0.3);
    }

    #[test]
    fn dedup_in_two_dimensions() {
        let a = CompactSet::from_coords(2, vec![0.5, 0.5, 0.1, 0.9, 0.5, 0.5 + 1e-14], 0.0).unwrap();
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn renet_examples() {
        let a = s(&[0.0, 0.001, 1.0]);
        let n = renet(&a, 0.01).unwrap();
        assert_eq!(n.xs(), vec![0.0, 1.0]);
        assert_eq!(n.resolution(), 0.01);
        assert_eq!(renet(&a, 2.0).unwrap().len(), 1);
        let sep = s(&[0.0, 0.3, 0.6]);
        assert_eq!(renet(&sep, 0.1).unwrap().xs(), sep.xs());
        assert!(renet(&sep, 0.0).is_err());
    }

    #[test]
    fn thicken_examples() {
        let t = thicken(&s(&[0.5]), 0.1).unwrap();
        assert_eq!(t.len(), 1);
        let (lo, hi) = t.intervals()[0];
        assert!((lo - 0.4).abs() < 1e-15 && (hi - 0.6).abs() < 1e-15);

        let t = thicken(&s(&[0.2, 0.25]), 0.05).unwrap();
        assert_eq!(t.len(), 1);
        let (lo, hi) = t.intervals()[0];
        assert!((lo - 0.15).abs() < 1e-15 && (hi - 0.3).abs() < 1e-15);

        let t = thicken(&s(&[0.02]), 0.1).unwrap();
        assert_eq!(t.intervals()[0].0, 0.0);
        assert!((t.intervals()[0].1 - 0.12).abs() < 1e-15);

        // touching open balls stay separate, order is descending
        let t = thicken(&s(&[0.25, 0.75]), 0.25).unwrap();
        assert_eq!(t.intervals(), &[(0.5, 1.0), (0.0, 0.5)]);

        let two = CompactSet::from_coords(2, vec![0.1, 0.1], 0.0).unwrap();
        assert_eq!(thicken(&two, 0.1), Err(Error::NotOneDimensional(2)));
    }

    #[test]
    fn csv_round_trip() {
        let a = CompactSet::from_coords(2, vec![0.1, 0.2, 1.0 / 3.0, 0.0], 0.0).unwrap();
        let text = format!("# cloud\n{}", to_csv(&a));
        assert_eq!(parse_csv(&text).unwrap(), a);
        assert!(to_csv(&a).starts_with("1.0000000000000001e-1,2.0000000000000001e-1\n"));
        assert!(parse_csv("0.1,0.2\n0.3\n").is_err());
        assert_eq!(parse_csv("# nothing\n"), Err(Error::EmptySet));
    }

    #[test]
    fn embed_pads_with_zeros() {
        let a = s(&[0.25, 0.5]).embed(3).unwrap();
        assert_eq!(a.point(0), &[0.25, 0.0, 0.0]);
        assert_eq!(a.dim(), 3);
    }
}
