//! A countable union of closed intervals that is a limit of two-map
//! contraction attractors but no attractor of any finite weak system.

use num_traits::{One, Pow, Signed, Zero};

use super::{
    format_rational, max_slope_exact, q, qi, to_f64, AuditReport, Rational,
    WitnessExport, WitnessKind,
};
use crate::error::{Error, Result};
use crate::geometry::{hausdorff, CompactSet, IntervalUnion};
use crate::hutchinson::{attractor, AttractorOptions, AttractorResult, FunctionSystem};
use crate::maps::{ContractiveMap, MapKind, MapSpec};

/// Upper limit on the number of intervals in a truncation.
pub const MAX_INTERVALS: u64 = 500_000;

/// Upper limit on the length of a `y` sequence.
pub const MAX_Y_LEN: usize = 10_000_000;

/// `k_1 = 1`, `k_n = n * (k_1 + ... + k_{n-1}) + 1 + n`, saturating.
pub fn k_sequence(n: usize) -> u64 {
    k_list(n).last().copied().unwrap_or(0)
}

fn k_list(n: usize) -> Vec<u64> {
    let mut ks = Vec::with_capacity(n);
    let mut sum = 0u64;
    for i in 1..=n as u64 {
        let k = if i == 1 {
            1
        } else {
            i.saturating_mul(sum).saturating_add(1 + i)
        };
        ks.push(k);
        sum = sum.saturating_add(k);
    }
    ks
}

/// `y_1 = start`, `y_{i+1} = max(0, y_i - epsilon / (i + 1))` up to the first
/// zero, whose 1-based index is returned alongside.
pub fn y_sequence(start: f64, epsilon: f64) -> Result<(Vec<f64>, usize)> {
    if !(start > 0.0 && start.is_finite() && epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "start and epsilon must be positive, got {start} and {epsilon}"
        )));
    }
    let mut ys = vec![start];
    while *ys.last().unwrap() > 0.0 {
        if ys.len() >= MAX_Y_LEN {
            return Err(Error::InvalidParameter(format!(
                "y sequence from {start} with epsilon {epsilon} exceeds {MAX_Y_LEN} terms"
            )));
        }
        let i = ys.len() as f64;
        let next = (ys.last().unwrap() - epsilon / (i + 1.0)).max(0.0);
        ys.push(next);
    }
    let i0 = ys.len();
    Ok((ys, i0))
}

/// Exact version of [`y_sequence`], limited to `max_len` terms.
pub fn y_sequence_exact(
    start: &Rational,
    epsilon: &Rational,
    max_len: usize,
) -> Result<(Vec<Rational>, usize)> {
    if !start.is_positive() || !epsilon.is_positive() {
        return Err(Error::InvalidParameter("start and epsilon must be positive".into()));
    }
    let mut ys = vec![start.clone()];
    while ys.last().unwrap().is_positive() {
        if ys.len() >= max_len {
            return Err(Error::InvalidParameter(format!("y sequence exceeds {max_len} terms")));
        }
        let i = ys.len() as u64;
        let next = ys.last().unwrap() - epsilon / qi(i + 1);
        ys.push(if next.is_negative() { Rational::zero() } else { next });
    }
    let i0 = ys.len();
    Ok((ys, i0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalWitness {
    pub depth: usize,
    pub k_seq: Vec<u64>,
    /// `ℓ_1, ..., ℓ_depth`.
    pub lengths: Vec<Rational>,
    /// `intervals[n][j]` is `I_{n+1}^{j+1}` as `(min, max)`; positions
    /// decrease with both indices.
    pub intervals: Vec<Vec<(Rational, Rational)>>,
    /// Lowest endpoint of the truncation. Every later group of the infinite
    /// construction fits below it.
    pub tail_bound: Rational,
    /// `max I_1^1`.
    pub anchor: Rational,
    pub audit: AuditReport,
}

fn next_length(prev: &Rational, n: usize, k_next: u64) -> Rational {
    let two: Rational = qi(2);
    prev / (Pow::pow(&two, (n + 2) as u32) * qi((n as u64 + 1) * k_next))
}

pub fn build_interval_witness(depth: usize) -> Result<IntervalWitness> {
    if depth < 2 {
        return Err(Error::InvalidParameter(format!("depth must be at least 2, got {depth}")));
    }
    let ks = k_list(depth + 1);
    let total: u64 = ks[..depth].iter().fold(0u64, |s, &k| s.saturating_add(k));
    if total > MAX_INTERVALS {
        return Err(Error::PrecisionBudget(format!(
            "depth {depth} needs {total} intervals (limit {MAX_INTERVALS})"
        )));
    }
    let mut lengths = vec![q(1, 4)];
    for n in 1..depth {
        let next = next_length(&lengths[n - 1], n, ks[n]);
        lengths.push(next);
    }
    let two: Rational = qi(2);
    let tail_bound = &lengths[depth - 1] / Pow::pow(&two, depth as u32);

    let mut groups: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); depth];
    let mut cur = tail_bound.clone();
    for n in (0..depth).rev() {
        let l = &lengths[n];
        let k = ks[n] as usize;
        let mut g = Vec::with_capacity(k);
        for j in (0..k).rev() {
            let hi = &cur + l;
            g.push((cur.clone(), hi.clone()));
            cur = hi;
            if j > 0 {
                cur = &cur + l;
            }
        }
        g.reverse();
        groups[n] = g;
        if n > 0 {
            cur = &cur + l;
        }
    }
    let anchor = groups[0][0].1.clone();

    let mut w = IntervalWitness {
        depth,
        k_seq: ks[..depth].to_vec(),
        lengths,
        intervals: groups,
        tail_bound,
        anchor,
        audit: AuditReport::default(),
    };
    w.audit = audit(&w, ks[depth]);
    Ok(w)
}

fn audit(w: &IntervalWitness, k_next: u64) -> AuditReport {
    let mut au = AuditReport::default();
    let depth = w.depth;
    au.identity(
        "condition-1-equal",
        w.intervals.iter().zip(&w.lengths).flat_map(|(g, l)| {
            g.iter().map(move |(lo, hi)| (hi - lo, l.clone()))
        }),
    );
    let mass: Vec<Rational> = w
        .k_seq
        .iter()
        .zip(&w.lengths)
        .map(|(&k, l)| qi(k) * l)
        .collect();
    au.positive(
        "condition-1",
        (0..depth).map(|n| {
            let later: Rational = mass[n + 1..].iter().sum::<Rational>() + &w.tail_bound;
            &w.lengths[n] - qi(n as u64 + 1) * later
        }),
    );
    let flat: Vec<&(Rational, Rational)> = w.intervals.iter().flatten().collect();
    au.positive("condition-2", flat.windows(2).map(|p| &p[0].0 - &p[1].1));
    let mut gaps = Vec::new();
    for n in 0..depth {
        let g = &w.intervals[n];
        for j in 1..g.len() {
            gaps.push((&g[j - 1].0 - &g[j].1, w.lengths[n].clone()));
        }
        if n + 1 < depth {
            let below = &w.intervals[n + 1][0];
            gaps.push((&g[g.len() - 1].0 - &below.1, w.lengths[n + 1].clone()));
        }
    }
    au.identity("condition-3", gaps);
    au.positive(
        "condition-4",
        [w.tail_bound.clone(), Rational::one() - &w.anchor],
    );
    // Groups after the truncation: each spans at most half the previous one,
    // so they all fit below the tail bound.
    let l_next = next_length(&w.lengths[depth - 1], depth, k_next);
    let span_next = qi(2 * k_next) * &l_next;
    au.positive("tail-bound", [&w.tail_bound - qi(2) * &span_next]);
    let ratio = Rational::new(
        1.into(),
        (Pow::pow(&qi(2), (depth + 2) as u32) * qi((depth as u64 + 1) * w.k_seq[depth - 1]))
            .to_integer(),
    );
    au.nonnegative("tail-ratio", [q(1, 2) - ratio]);
    let mut sum = w.k_seq[0];
    let mut cap = Vec::new();
    for n in 2..=depth {
        let k = w.k_seq[n - 1];
        cap.push(qi(k) - qi(n as u64 * sum + n as u64));
        sum += k;
    }
    au.positive("capacity", cap);
    au
}

impl IntervalWitness {
    pub fn len(&self) -> usize {
        self.intervals.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `I_n^j`, both 1-indexed.
    pub fn interval(&self, n: usize, j: usize) -> Option<&(Rational, Rational)> {
        self.intervals.get(n.checked_sub(1)?)?.get(j.checked_sub(1)?)
    }

    pub fn interval_union(&self) -> Result<IntervalUnion> {
        IntervalUnion::from_intervals(
            self.intervals
                .iter()
                .flatten()
                .map(|(lo, hi)| (to_f64(lo), to_f64(hi)))
                .collect(),
        )
    }

    /// Every interval sampled with spacing at most `resolution`, plus `0`.
    pub fn sample(&self, resolution: f64) -> Result<CompactSet> {
        if !(resolution > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        let mut xs = vec![0.0];
        for (lo, hi) in self.intervals.iter().flatten() {
            let (lo, hi) = (to_f64(lo), to_f64(hi));
            let m = ((hi - lo) / resolution).ceil().max(1.0) as usize;
            for i in 0..=m {
                xs.push(lo + (hi - lo) * (i as f64 / m as f64));
            }
        }
        Ok(CompactSet::from_scalars(&xs)?.with_resolution(resolution / 2.0))
    }

    pub fn export(&self) -> Result<WitnessExport> {
        Ok(WitnessExport {
            kind: WitnessKind::Intervals,
            size: self.depth,
            points: vec![format_rational(&Rational::zero())],
            intervals: self
                .intervals
                .iter()
                .flatten()
                .map(|(lo, hi)| [format_rational(lo), format_rational(hi)])
                .collect(),
            delta: None,
            maps: Vec::new(),
            audit: self.audit.entries.clone(),
            notes: vec![
                format!(
                    "k = [{}]",
                    self.k_seq.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
                ),
                format!(
                    "later groups fit in [0, {}]",
                    format_rational(&self.tail_bound)
                ),
            ],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSystem {
    pub epsilon: f64,
    /// The group whose last interval is swallowed together with the tail.
    pub n_swallow: usize,
    /// `max I_n^{k_n} + epsilon`.
    pub alpha: f64,
    pub y_seq: Vec<f64>,
    pub i0: usize,
    pub f1: ContractiveMap,
    pub f2: ContractiveMap,
    pub attractor: AttractorResult,
    /// Hausdorff distance from the attractor to the sampled truncation.
    pub distance: f64,
    pub audit: AuditReport,
    pub notes: Vec<String>,
}

impl EpsilonSystem {
    pub fn system(&self) -> Result<FunctionSystem> {
        FunctionSystem::new(vec![self.f1.clone(), self.f2.clone()])
    }

    pub fn maps(&self) -> Vec<MapSpec> {
        vec![MapSpec::from_map(&self.f1), MapSpec::from_map(&self.f2)]
    }
}

pub fn build_epsilon_system(w: &IntervalWitness, epsilon: f64) -> Result<EpsilonSystem> {
    build_epsilon_system_with(w, epsilon, &AttractorOptions::default())
}

fn exact_nodes(nodes: &[(f64, f64)]) -> Result<Vec<(Rational, Rational)>> {
    nodes
        .iter()
        .map(|&(x, y)| {
            let conv = |v: f64| {
                Rational::from_float(v).ok_or_else(|| Error::InvalidMap(format!("non-finite node {v}")))
            };
            Ok((conv(x)?, conv(y)?))
        })
        .collect()
}

pub fn build_epsilon_system_with(
    w: &IntervalWitness,
    epsilon: f64,
    opts: &AttractorOptions,
) -> Result<EpsilonSystem> {
    let lo = to_f64(&w.lengths[w.depth - 1]) / 2.0;
    let hi = 2.0 * (1.0 - to_f64(&w.anchor));
    let range = || format!("feasible epsilon range at depth {} is ({lo:e}, {hi:e}]", w.depth);
    if !(epsilon > lo && epsilon <= hi) {
        return Err(Error::Infeasible(format!("epsilon {epsilon} out of range; {}", range())));
    }
    let eps_q = Rational::from_float(epsilon).expect("finite epsilon");
    let two = qi(2);
    // least n whose successor group is thin enough to merge with the tail
    let n = (1..w.depth)
        .find(|&n| w.lengths[n] < &eps_q * &two)
        .ok_or_else(|| Error::Infeasible(range()))?;

    let f = |v: &Rational| to_f64(v);
    let grp = |m: usize| &w.intervals[m - 1];
    let last = |m: usize| grp(m).last().expect("groups are nonempty");
    let max_last_n = last(n).1.clone();
    let alpha = f(&max_last_n) + epsilon;
    let y1 = f(&max_last_n) + epsilon / 2.0;
    let (ys, i0) = y_sequence(y1, epsilon).map_err(|e| {
        Error::Infeasible(format!(
            "{e}; the y chain needs about exp({:.1}) terms, so epsilon should sit closer to half a group length",
            y1 / epsilon
        ))
    })?;

    let mut notes = Vec::new();
    let mut au = AuditReport::default();
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(i0 + 3 * n);
    for i in (0..i0).rev() {
        nodes.push((ys[i], if i + 1 < i0 { ys[i + 1] } else { 0.0 }));
    }
    let mut pinned = Vec::new();
    if n >= 2 {
        let second = &grp(n)[grp(n).len() - 2];
        nodes.push((f(&second.0), y1));
        nodes.push((f(&second.1), y1));
        for m in (1..n).rev() {
            let (lo_m, hi_m) = last(m);
            let first_next = &grp(m + 1)[0];
            nodes.push((f(lo_m), f(&first_next.0)));
            nodes.push((f(hi_m), f(&first_next.1)));
            if m >= 2 {
                let g = grp(m);
                let target = lo_m
                    + std::cmp::min(eps_q.clone(), &w.lengths[m - 1] - &w.lengths[m]) / &two;
                pinned.push((target.clone() - lo_m, lo_m + &eps_q - &target));
                nodes.push((f(&g[g.len() - 2].0), f(&target)));
            }
        }
        notes.push(format!(
            "group 1 has a single interval, so the node for its missing second interval maps max I_1^1 to max I_2^1 = {}",
            format_rational(&grp(2)[0].1)
        ));
        au.push("node-substitution", true, 0.0);
    } else {
        notes.push("the swallowed group is the first one, so f1 is the y-chain alone".into());
    }
    if nodes.windows(2).any(|p| !(p[1].0 > p[0].0)) {
        return Err(Error::Infeasible(format!(
            "node abscissae collide in binary64 at epsilon {epsilon}; {}",
            range()
        )));
    }
    let f1 = ContractiveMap::piecewise_linear(nodes.clone(), MapKind::Weak)?;

    let (lo1, hi1) = (f(&grp(1)[0].0), f(&grp(1)[0].1));
    let mut f2_nodes = vec![(0.0, lo1), (hi1, hi1)];
    if hi1 < 1.0 {
        f2_nodes.push((1.0, hi1));
    }
    let f2 = ContractiveMap::piecewise_linear(f2_nodes.clone(), MapKind::Weak)?;

    let exact1 = exact_nodes(&nodes)?;
    let exact2 = exact_nodes(&f2_nodes)?;
    au.positive("f1-slope", [Rational::one() - max_slope_exact(&exact1)]);
    au.positive("f2-slope", [Rational::one() - max_slope_exact(&exact2)]);
    au.positive(
        "tail-no-fixed-point",
        exact1[1..i0].iter().map(|(x, y)| x - y),
    );
    au.identity("y-terminal", [(exact1[0].0.clone(), Rational::zero()), (exact1[0].1.clone(), Rational::zero())]);
    au.positive(
        "second-interval-node",
        pinned.into_iter().flat_map(|(a, b)| [a, b]),
    );

    let sys = FunctionSystem::new(vec![f1.clone(), f2.clone()])?;
    let result = attractor(&sys, opts)?;
    let target = w.sample(opts.resolution)?;
    let distance = hausdorff(&result.attractor, &target)?;
    au.push("converged", result.converged, 0.0);
    let slack = epsilon + 2.0 * (opts.tol + opts.resolution) - distance;
    au.push("hausdorff", slack > 0.0, slack);

    Ok(EpsilonSystem {
        epsilon,
        n_swallow: n,
        alpha,
        y_seq: ys,
        i0,
        f1,
        f2,
        attractor: result,
        distance,
        audit: au,
        notes,
    })
}
