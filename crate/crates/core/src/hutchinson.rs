//! The Hutchinson operator `S(A) = f_1[A] ∪ ... ∪ f_n[A]` and attractors of
//! finite systems of (weak) contractions.
//!
//! Attractors are computed by a closure sweep rather than by re-applying `S`
//! to a whole cloud every round: starting from the member fixed points, only
//! points added in the previous round are mapped again, and a candidate is
//! kept when no kept point lies within the resolution radius. The kept cloud
//! grows monotonically and the sweep ends when a round adds nothing, so the
//! result satisfies `d_H(S(A), A) <= resolution`.
//!
//! Maps that move points by less than the resolution (near-isometries close
//! to a fixed point, typical for weak contractions) would stall such a sweep.
//! A candidate that is rejected but lies within the radius of its own parent
//! and moved more than `tol` is therefore still propagated, without being
//! stored, unless it comes within `tol` of an earlier propagated candidate.

use crate::error::{Error, Result};
use crate::geometry::{
    directed_hausdorff, euclidean, hausdorff, renet, union, CompactSet, GreedyNet, DEDUP_TOL,
};
use crate::maps::{fixed_point, image, lipschitz_upper_bound, ContractiveMap, MapKind};

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSystem {
    maps: Vec<ContractiveMap>,
    dim: usize,
    kind: MapKind,
}

impl FunctionSystem {
    pub fn new(maps: Vec<ContractiveMap>) -> Result<Self> {
        let first = maps.first().ok_or_else(|| {
            Error::InvalidParameter("a function system needs at least one map".into())
        })?;
        let dim = first.dim();
        for m in &maps {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.dim(),
                });
            }
        }
        let kind = maps
            .iter()
            .map(|m| {
                if lipschitz_upper_bound(m).is_contraction() {
                    m.kind()
                } else {
                    MapKind::Weak
                }
            })
            .min()
            .unwrap_or(MapKind::Contraction);
        Ok(FunctionSystem { maps, dim, kind })
    }

    pub fn maps(&self) -> &[ContractiveMap] {
        &self.maps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Largest analytic Lipschitz bound among the members.
    pub fn lipschitz_bound(&self) -> f64 {
        self.maps
            .iter()
            .map(|m| lipschitz_upper_bound(m).upper_bound)
            .fold(0.0, f64::max)
    }

    pub fn embed(&self, dim: usize) -> Result<FunctionSystem> {
        let maps = self
            .maps
            .iter()
            .map(|m| crate::maps::embed(m, dim))
            .collect::<Result<Vec<_>>>()?;
        FunctionSystem::new(maps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub resolution: f64,
}

impl Default for AttractorOptions {
    fn default() -> Self {
        AttractorOptions {
            tol: 1e-6,
            max_iter: 1_000_000,
            resolution: 1e-4,
        }
    }
}

impl AttractorOptions {
    pub fn new(tol: f64, max_iter: usize, resolution: f64) -> Result<Self> {
        let o = AttractorOptions {
            tol,
            max_iter,
            resolution,
        };
        o.validate()?;
        Ok(o)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.resolution > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidParameter(format!(
                "need tol > 0, resolution > 0, max_iter > 0 (got {}, {}, {})",
                self.tol, self.resolution, self.max_iter
            )));
        }
        Ok(())
    }

    /// Residual allowed for a result to count as converged.
    pub fn residual_tolerance(&self) -> f64 {
        self.tol + 2.0 * self.resolution
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractorResult {
    pub attractor: CompactSet,
    pub iterations: usize,
    /// `d_H` between the last two iterates.
    pub final_step: f64,
    /// `d_H(S(A), A)` for the returned cloud.
    pub residual: f64,
    pub converged: bool,
    /// The residual threshold `converged` was judged against.
    pub tolerance: f64,
    /// `residual / (1 - L)` for contraction systems (collage bound on the
    /// distance to the true attractor); `None` for weak systems.
    pub error_bound: Option<f64>,
}

pub fn step(sys: &FunctionSystem, a: &CompactSet) -> Result<CompactSet> {
    let mut acc: Option<CompactSet> = None;
    for f in &sys.maps {
        let img = image(f, a)?;
        acc = Some(match acc {
            None => img,
            Some(prev) => union(&prev, &img)?,
        });
    }
    Ok(acc.expect("function systems are nonempty"))
}

/// `step` followed by a greedy net of radius `resolution`.
pub fn step_renet(sys: &FunctionSystem, a: &CompactSet, resolution: f64) -> Result<CompactSet> {
    renet(&step(sys, a)?, resolution)
}

pub fn verify_invariance(sys: &FunctionSystem, a: &CompactSet) -> Result<f64> {
    hausdorff(&step(sys, a)?, a)
}

fn seed_points(sys: &FunctionSystem, opts: &AttractorOptions) -> Vec<Vec<f64>> {
    sys.maps
        .iter()
        .map(|f| match fixed_point(f, opts.tol, opts.max_iter.min(1_000_000)) {
            Ok(p) => p.coords().to_vec(),
            Err(Error::FixedPointNotConverged { best, .. }) => best.coords().to_vec(),
            Err(_) => vec![0.5; sys.dim],
        })
        .collect()
}

/// Attractor seeded with the member fixed points, which lie on the attractor.
pub fn attractor(sys: &FunctionSystem, opts: &AttractorOptions) -> Result<AttractorResult> {
    opts.validate()?;
    let seeds = seed_points(sys, opts);
    closure_sweep(sys, seeds, opts)
}

/// Attractor computed from an arbitrary starting set. The seed is first
/// pushed towards the attractor with plain `renet(S(A))` rounds (enough of
/// them to shrink its distance below the resolution for contraction
/// systems), then closed under the system as in [`attractor`].
pub fn attractor_from(
    sys: &FunctionSystem,
    seed: &CompactSet,
    opts: &AttractorOptions,
) -> Result<AttractorResult> {
    opts.validate()?;
    if seed.dim() != sys.dim {
        return Err(Error::DimensionMismatch {
            expected: sys.dim,
            got: seed.dim(),
        });
    }
    let l = sys.lipschitz_bound();
    let mut a = seed.clone();
    if l < 1.0 {
        let rounds = if l == 0.0 {
            1
        } else {
            let diam = (sys.dim as f64).sqrt();
            ((opts.resolution / diam).ln() / l.ln()).ceil().max(1.0) as usize
        };
        for _ in 0..rounds.min(opts.max_iter) {
            a = step_renet(sys, &a, opts.resolution)?;
        }
    } else {
        for _ in 0..opts.max_iter.min(10_000) {
            let next = step_renet(sys, &a, opts.resolution)?;
            let moved = hausdorff(&next, &a)?;
            a = next;
            if moved <= opts.tol {
                break;
            }
        }
    }
    closure_sweep(sys, a.iter().map(|p| p.to_vec()).collect(), opts)
}

fn closure_sweep(
    sys: &FunctionSystem,
    seeds: Vec<Vec<f64>>,
    opts: &AttractorOptions,
) -> Result<AttractorResult> {
    let dim = sys.dim;
    let r = opts.resolution;
    let mut net = GreedyNet::new(dim, r);
    let mut frontier: Vec<f64> = Vec::new();
    for s in &seeds {
        if net.insert(s) {
            frontier.extend_from_slice(s);
        }
    }

    let mut iterations = 0usize;
    let mut prev_len = net.len();
    let mut last_added = 0usize;
    let mut out = vec![0.0; dim];
    // every propagated candidate is remembered at radius `tol`, so ghosts
    // circling inside a cluster narrower than `r` die out
    let mut ghosts = GreedyNet::new(dim, opts.tol);
    while !frontier.is_empty() && iterations < opts.max_iter {
        iterations += 1;
        prev_len = net.len();
        // (candidate, parent) pairs, sorted so acceptance order is deterministic
        let mut candidates: Vec<(Vec<f64>, usize)> =
            Vec::with_capacity(frontier.len() / dim * sys.maps.len());
        for (pi, p) in frontier.chunks_exact(dim).enumerate() {
            for f in &sys.maps {
                f.eval_into(p, &mut out);
                candidates.push((out.clone(), pi));
            }
        }
        candidates.sort_by(|a, b| {
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.1.cmp(&b.1))
        });
        candidates.dedup_by(|b, a| euclidean(&a.0, &b.0) < DEDUP_TOL);

        let mut next: Vec<f64> = Vec::new();
        for (c, pi) in &candidates {
            if net.insert(c) {
                next.extend_from_slice(c);
            } else {
                let parent = &frontier[pi * dim..(pi + 1) * dim];
                let moved = euclidean(c, parent);
                if moved > opts.tol && moved < r && ghosts.insert(c) {
                    next.extend_from_slice(c);
                }
            }
        }
        last_added = net.len() - prev_len;
        frontier = next;
    }
    let converged_sweep = frontier.is_empty();

    // The net only grows, so consecutive iterates differ by the last round's
    // additions; their distance to the older points is the step size.
    let final_step = if last_added == 0 || prev_len == 0 {
        0.0
    } else {
        let coords = net.coords();
        let old = CompactSet::from_coords(dim, coords[..prev_len * dim].to_vec(), 0.0)?;
        let added = CompactSet::from_coords(dim, coords[prev_len * dim..].to_vec(), 0.0)?;
        directed_hausdorff(&added, &old)?
    };
    let all = net.into_set(r)?;
    let residual = hausdorff(&step(sys, &all)?, &all)?;
    let tolerance = opts.residual_tolerance();
    let l = sys.lipschitz_bound();
    let error_bound = (sys.kind == MapKind::Contraction && l < 1.0).then(|| residual / (1.0 - l));
    Ok(AttractorResult {
        attractor: all,
        iterations,
        final_step,
        residual,
        converged: converged_sweep && residual <= tolerance,
        tolerance,
        error_bound,
    })
}

/// Measures `d_H(S_k[E_k], S[E])` along paired sequences of maps and sets.
pub fn image_continuity_probe(
    map_seq: &[ContractiveMap],
    set_seq: &[CompactSet],
    limit_map: &ContractiveMap,
    limit_set: &CompactSet,
) -> Result<Vec<(usize, f64)>> {
    if map_seq.len() != set_seq.len() {
        return Err(Error::InvalidParameter(format!(
            "map sequence has {} entries but set sequence has {}",
            map_seq.len(),
            set_seq.len()
        )));
    }
    let limit = image(limit_map, limit_set)?;
    map_seq
        .iter()
        .zip(set_seq)
        .enumerate()
        .map(|(k, (f, e))| Ok((k, hausdorff(&image(f, e)?, &limit)?)))
        .collect()
}
