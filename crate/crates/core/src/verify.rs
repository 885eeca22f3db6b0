//! Desk-scale probes of the separation results: a seeded random search for
//! small systems whose attractors come close to a witness set, and coverage
//! audits that replay the counting arguments on a concrete candidate system.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{format_real, hausdorff, CompactSet};
use crate::hutchinson::{attractor, AttractorOptions, AttractorResult, FunctionSystem};
use crate::maps::{fixed_point, ContractiveMap, MapKind, MapSpec, MapVariant};
use crate::witnesses::{IntervalWitness, LadderWitness};

/// Largest slope magnitude the sampler draws.
pub const MAX_SAMPLED_SLOPE: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Options for the first, coarse attractor of every trial.
    pub attractor: AttractorOptions,
    /// Refinement stops below this resolution.
    pub min_resolution: f64,
    /// Keep a `(trial, distance)` row per evaluated trial.
    pub trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            attractor: AttractorOptions {
                tol: 1e-6,
                max_iter: 100_000,
                resolution: 1e-3,
            },
            min_resolution: 1e-6,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub trials: usize,
    pub n: usize,
    pub seed: u64,
    pub threshold: f64,
    /// `+inf` when every trial was skipped.
    pub best_distance: f64,
    pub best_trial: Option<usize>,
    pub best_system: Option<FunctionSystem>,
    pub violated: bool,
    /// Trials whose attractor did not converge.
    pub skipped: usize,
    pub trace: Vec<(usize, f64)>,
}

/// Serialized report; the best system uses the config map format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSummary {
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub threshold: f64,
    pub best_distance: Option<f64>,
    pub best_trial: Option<usize>,
    pub violated: bool,
    pub skipped: usize,
    pub best_system: Vec<MapSpec>,
}

impl SearchReport {
    pub fn summary(&self) -> SearchSummary {
        SearchSummary {
            seed: self.seed,
            trials: self.trials,
            n: self.n,
            threshold: self.threshold,
            best_distance: self.best_distance.is_finite().then_some(self.best_distance),
            best_trial: self.best_trial,
            violated: self.violated,
            skipped: self.skipped,
            best_system: self
                .best_system
                .as_ref()
                .map(|s| s.maps().iter().map(MapSpec::from_map).collect())
                .unwrap_or_default(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary()).expect("summary serializes");
        s.push('\n');
        s
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("trial,distance\n");
        for (t, d) in &self.trace {
            let _ = writeln!(out, "{t},{}", format_real(*d));
        }
        out
    }
}

fn uniform_slope(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let s = rng.gen_range(-MAX_SAMPLED_SLOPE..MAX_SAMPLED_SLOPE);
        if s != 0.0 {
            return s;
        }
    }
}

/// One random contraction of `[0,1]`: affine or piecewise linear with up to
/// four nodes, every slope below [`MAX_SAMPLED_SLOPE`] in magnitude.
pub fn sample_map(rng: &mut ChaCha8Rng) -> ContractiveMap {
    if rng.gen_bool(0.5) {
        let s = uniform_slope(rng);
        let (lo, hi) = ((-s).max(0.0), (1.0 - s).min(1.0));
        let b = rng.gen_range(lo..=hi);
        ContractiveMap::affine(s, b).expect("offset keeps the range in [0,1]")
    } else {
        let m = rng.gen_range(2..=4usize);
        let mut xs: Vec<f64> = (0..m - 2).map(|_| rng.gen_range(0.0..1.0)).collect();
        xs.push(0.0);
        xs.push(1.0);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let mut y: f64 = rng.gen_range(0.0..=1.0);
        let mut nodes = vec![(xs[0], y)];
        for w in xs.windows(2) {
            let s = uniform_slope(rng);
            y = (y + s * (w[1] - w[0])).clamp(0.0, 1.0);
            nodes.push((w[1], y));
        }
        ContractiveMap::piecewise_linear(nodes, MapKind::Contraction)
            .expect("clipped random walk keeps slopes below 1")
    }
}

/// The system drawn for `trial` under `seed`; independent of evaluation order.
pub fn sample_system(seed: u64, trial: usize, n: usize, dim: usize) -> Result<FunctionSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let maps = (0..n).map(|_| sample_map(&mut rng)).collect();
    let sys = FunctionSystem::new(maps)?;
    if dim == 1 {
        Ok(sys)
    } else {
        sys.embed(dim)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub distance: f64,
    /// Bound on `|distance - d_H(true attractor, F)|`.
    pub uncertainty: f64,
    pub attractor: AttractorResult,
}

/// Attractor of `sys` and its distance to `f`, refined by halving the
/// resolution while the uncertainty straddles `threshold`.
pub fn probe_against(
    f: &CompactSet,
    sys: &FunctionSystem,
    threshold: f64,
    opts: &SearchOptions,
) -> Result<Probe> {
    let mut o = opts.attractor;
    loop {
        let result = attractor(sys, &o)?;
        if !result.converged {
            return Err(Error::AttractorNotConverged {
                iterations: result.iterations,
            });
        }
        let distance = hausdorff(&result.attractor, f)?;
        let uncertainty = result.error_bound.unwrap_or(result.residual) + o.resolution;
        let straddles = (distance - threshold).abs() <= uncertainty;
        if !straddles || o.resolution / 2.0 < opts.min_resolution {
            return Ok(Probe {
                distance,
                uncertainty,
                attractor: result,
            });
        }
        o.resolution /= 2.0;
        o.tol = o.tol.min(o.resolution);
    }
}

/// Distance from `sys`'s attractor to `f` under the given options.
pub fn probe_system(f: &CompactSet, sys: &FunctionSystem, opts: &AttractorOptions) -> Result<Probe> {
    probe_against(
        f,
        sys,
        f64::NEG_INFINITY,
        &SearchOptions {
            attractor: *opts,
            min_resolution: opts.resolution,
            trace: false,
        },
    )
}

pub fn separation_search(
    f: &CompactSet,
    delta: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<SearchReport> {
    separation_search_with(f, delta, n, trials, seed, &SearchOptions::default())
}

pub fn separation_search_with(
    f: &CompactSet,
    delta: f64,
    n: usize,
    trials: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    let dim = f.dim();
    let outcomes: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sys = sample_system(seed, t, n, dim)?;
            match probe_against(f, &sys, delta, opts) {
                Ok(p) => Ok(Some(p.distance)),
                Err(Error::AttractorNotConverged { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let skipped = outcomes.iter().filter(|o| o.is_none()).count();
    let best = outcomes
        .iter()
        .enumerate()
        .filter_map(|(t, d)| d.map(|d| (t, d)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let (best_trial, best_distance) = match best {
        Some((t, d)) => (Some(t), d),
        None => (None, f64::INFINITY),
    };
    let best_system = best_trial.map(|t| sample_system(seed, t, n, dim)).transpose()?;
    let trace = if opts.trace {
        outcomes
            .iter()
            .enumerate()
            .filter_map(|(t, d)| d.map(|d| (t, d)))
            .collect()
    } else {
        Vec::new()
    };
    Ok(SearchReport {
        trials,
        n,
        seed,
        threshold: delta,
        best_distance,
        best_trial,
        best_system,
        violated: best_distance < delta,
        skipped,
        trace,
    })
}

/// Result of replaying a counting argument on one candidate system.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    /// Ladder block `m` without a fixed point, or the interval group.
    pub group: usize,
    /// Target components: `delta`-balls as `(y - delta, y + delta)` or
    /// closed intervals.
    pub targets: Vec<(f64, f64)>,
    /// Targets each map reaches through the images the argument counts.
    pub hits_per_map: Vec<usize>,
    /// Ladder: every `F` ball met by `g_i[A]`. Intervals: targets fully
    /// covered by images of later groups.
    pub other_hits_per_map: Vec<usize>,
    /// Whether each map behaves as the argument assumes: ladder images
    /// `g_i[A_j]` meet at most one target each, interval images of a
    /// component stay inside one component. Interval images that leave every
    /// component are dropped from all counts, since such a map already moves
    /// `X` off itself.
    pub respects_structure: Vec<bool>,
    pub capacity: usize,
    /// Targets not reached by the (kept) image of the candidate set.
    pub uncovered: Vec<usize>,
}

impl CoverageReport {
    pub fn total_hits(&self) -> usize {
        self.hits_per_map.iter().sum()
    }

    pub fn within_capacity(&self) -> bool {
        self.total_hits() <= self.capacity
    }

    /// The counted hits fit the capacity and some target is left uncovered.
    pub fn passes(&self) -> bool {
        self.within_capacity() && !self.uncovered.is_empty()
    }
}

fn require_scalar_system(sys: &FunctionSystem) -> Result<()> {
    if sys.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: sys.dim(),
        });
    }
    Ok(())
}

/// Sorted scalar values within open distance `r` of `y`.
fn any_within(sorted: &[f64], y: f64, r: f64) -> bool {
    let i = sorted.partition_point(|&v| v <= y - r);
    i < sorted.len() && sorted[i] < y + r
}

fn map_points(f: &ContractiveMap, xs: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = xs.iter().map(|&x| f.eval_scalar(x).clamp(0.0, 1.0)).collect();
    out.sort_by(f64::total_cmp);
    out
}

pub fn coverage_audit_ladder(w: &LadderWitness, sys: &FunctionSystem) -> Result<CoverageReport> {
    let delta = w.delta_f64();
    let opts = AttractorOptions::new(delta / 8.0, 1_000_000, delta / 4.0)?;
    coverage_audit_ladder_with(w, sys, &opts)
}

pub fn coverage_audit_ladder_with(
    w: &LadderWitness,
    sys: &FunctionSystem,
    opts: &AttractorOptions,
) -> Result<CoverageReport> {
    require_scalar_system(sys)?;
    if sys.len() != w.n {
        return Err(Error::InvalidParameter(format!(
            "ladder for n = {} needs a system of {} maps, got {}",
            w.n,
            w.n,
            sys.len()
        )));
    }
    let delta = w.delta_f64();
    let blocks: Vec<Vec<f64>> = (1..=w.n + 1)
        .map(|i| w.block(i).map(|b| b.xs()))
        .collect::<Result<_>>()?;
    let a = attractor(sys, opts)?.attractor.xs();
    let near_block = |x: f64| blocks.iter().position(|b| any_within(b, x, delta));

    let fixed_blocks: Vec<Option<usize>> = sys
        .maps()
        .iter()
        .map(|g| {
            let z = match fixed_point(g, 1e-15, 100_000) {
                Ok(p) => p.x(),
                Err(Error::FixedPointNotConverged { best, .. }) => best.x(),
                Err(e) => return Err(e),
            };
            Ok(near_block(z))
        })
        .collect::<Result<_>>()?;
    let m = (0..=w.n)
        .find(|j| !fixed_blocks.contains(&Some(*j)))
        .expect("n fixed points cannot mark n + 1 blocks");

    let parts: Vec<Vec<f64>> = (0..=w.n)
        .map(|j| a.iter().copied().filter(|&x| any_within(&blocks[j], x, delta)).collect())
        .collect();
    let targets_y = &blocks[m];
    let all_y: Vec<f64> = blocks.iter().flatten().copied().collect();

    let mut hits_per_map = Vec::with_capacity(sys.len());
    let mut other = Vec::with_capacity(sys.len());
    let mut respects = Vec::with_capacity(sys.len());
    let mut full_image: Vec<f64> = Vec::new();
    for g in sys.maps() {
        let mut hit = vec![false; targets_y.len()];
        let mut ok = true;
        for part in parts.iter().skip(m + 1) {
            let img = map_points(g, part);
            let met: Vec<usize> = (0..targets_y.len())
                .filter(|&t| any_within(&img, targets_y[t], delta))
                .collect();
            ok &= met.len() <= 1;
            for t in met {
                hit[t] = true;
            }
        }
        hits_per_map.push(hit.iter().filter(|h| **h).count());
        respects.push(ok);
        let img = map_points(g, &a);
        other.push(all_y.iter().filter(|&&y| any_within(&img, y, delta)).count());
        full_image.extend(img);
    }
    full_image.sort_by(f64::total_cmp);
    let uncovered = (0..targets_y.len())
        .filter(|&t| !any_within(&full_image, targets_y[t], delta))
        .collect();
    Ok(CoverageReport {
        group: m + 1,
        targets: targets_y.iter().map(|&y| (y - delta, y + delta)).collect(),
        hits_per_map,
        other_hits_per_map: other,
        respects_structure: respects,
        capacity: w.n * w.n,
        uncovered,
    })
}

/// Exact image of `[lo, hi]` under a one-dimensional map (clamped to `[0,1]`).
pub fn interval_image(f: &ContractiveMap, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let mut probes = vec![lo, hi];
    match f.variant() {
        MapVariant::PiecewiseLinear(nodes) => {
            probes.extend(nodes.iter().map(|n| n.0).filter(|&x| x > lo && x < hi));
        }
        MapVariant::Logistic if lo < 0.5 && 0.5 < hi => probes.push(0.5),
        MapVariant::Embedded { dim, .. } => return Err(Error::NotOneDimensional(*dim)),
        MapVariant::Constant(c) if c.dim() != 1 => return Err(Error::NotOneDimensional(c.dim())),
        _ => {}
    }
    let vals: Vec<f64> = probes.iter().map(|&x| f.eval_scalar(x).clamp(0.0, 1.0)).collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((min, max))
}

/// Whether the closed intervals in `pieces` together contain `[lo, hi]`.
fn union_covers(pieces: &mut [(f64, f64)], lo: f64, hi: f64) -> bool {
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = lo;
    for &(a, b) in pieces.iter() {
        if a > reach {
            break;
        }
        reach = reach.max(b);
        if reach >= hi {
            return true;
        }
    }
    false
}

pub fn coverage_audit_intervals(
    w: &IntervalWitness,
    sys: &FunctionSystem,
    group: usize,
) -> Result<CoverageReport> {
    require_scalar_system(sys)?;
    if group == 0 || group > w.depth {
        return Err(Error::InvalidParameter(format!(
            "group {group} outside 1..={}",
            w.depth
        )));
    }
    if sys.len() >= group {
        return Err(Error::InvalidParameter(format!(
            "a system of {} maps is audited on a later group than {group}",
            sys.len()
        )));
    }
    let f64s = |(lo, hi): &(crate::witnesses::Rational, crate::witnesses::Rational)| {
        (crate::witnesses::to_f64(lo), crate::witnesses::to_f64(hi))
    };
    let groups: Vec<Vec<(f64, f64)>> =
        w.intervals.iter().map(|g| g.iter().map(f64s).collect()).collect();
    let components = w.interval_union()?;
    let targets = groups[group - 1].clone();
    let n = sys.len();

    let mut hits = Vec::with_capacity(n);
    let mut later_hits = Vec::with_capacity(n);
    let mut respects = Vec::with_capacity(n);
    let mut everything: Vec<(f64, f64)> = Vec::new();
    for f in sys.maps() {
        let mut earlier_imgs = Vec::new();
        let mut same_imgs = Vec::new();
        let mut later_imgs = Vec::new();
        let mut ok = true;
        for (gi, g) in groups.iter().enumerate() {
            for &(lo, hi) in g {
                let img = interval_image(f, lo, hi)?;
                if !components.covers(img.0, img.1) {
                    ok = false;
                    continue;
                }
                match (gi + 1).cmp(&group) {
                    std::cmp::Ordering::Less => earlier_imgs.push(img),
                    std::cmp::Ordering::Equal => same_imgs.push(img),
                    std::cmp::Ordering::Greater => later_imgs.push(img),
                }
            }
        }
        let count = |imgs: &mut Vec<(f64, f64)>| {
            targets
                .iter()
                .filter(|t| union_covers(imgs, t.0, t.1))
                .count()
        };
        hits.push(count(&mut earlier_imgs) + count(&mut same_imgs));
        later_hits.push(count(&mut later_imgs));
        respects.push(ok);
        everything.extend(earlier_imgs);
        everything.extend(same_imgs);
        everything.extend(later_imgs);
    }
    let uncovered = (0..targets.len())
        .filter(|&t| !union_covers(&mut everything, targets[t].0, targets[t].1))
        .collect();
    let earlier: u64 = w.k_seq[..group - 1].iter().sum();
    Ok(CoverageReport {
        group,
        targets,
        hits_per_map: hits,
        other_hits_per_map: later_hits,
        respects_structure: respects,
        capacity: (n as u64 * earlier + n as u64) as usize,
        uncovered,
    })
}
