//! A compact set generated by two weak contractions that no finite system of
//! contractions generates: a decreasing sequence accumulating at 0 whose
//! gaps shrink slowly enough to defeat every Lipschitz constant below 1.

use num_traits::{One, Signed};

use super::{
    export_maps, format_rational, max_slope_exact, pwl_eval_exact, pwl_from_exact, q, qi, to_f64,
    AuditReport, Rational, WitnessExport, WitnessKind,
};
use crate::error::{Error, Result};
use crate::geometry::CompactSet;
use crate::hutchinson::FunctionSystem;
use crate::maps::{ContractiveMap, MapKind};

#[derive(Debug, Clone, PartialEq)]
pub struct PropPWitness {
    pub depth: usize,
    /// `x_1 > x_2 > ... > x_N`; annuli `1..depth` are filled.
    pub x_points: Vec<Rational>,
    /// `x_{N+1}`, the first point of annulus `depth`.
    pub sentinel: Rational,
    /// `t_1 = 1/2`, `t_{n+1} = t_n - t_n^2`, so annulus `n` is `(t_{n+1}, t_n]`.
    pub interval_tops: Vec<Rational>,
    /// `k_1, ..., k_depth`.
    pub counts: Vec<u64>,
    /// Nodes of `g`, ascending.
    pub g_nodes: Vec<(Rational, Rational)>,
    pub system: FunctionSystem,
    pub audit: AuditReport,
}

fn logistic(t: &Rational) -> Rational {
    t - t * t
}

/// `k_1 = 2`, `k_n = n * (k_1 + ... + k_{n-1}) + 1`.
pub(crate) fn prop_p_counts(len: usize) -> Vec<u64> {
    let mut ks: Vec<u64> = Vec::with_capacity(len);
    let mut sum = 0u64;
    for n in 1..=len as u64 {
        let k = if n == 1 { 2 } else { n * sum + 1 };
        ks.push(k);
        sum += k;
    }
    ks
}

/// Places `m` points below `p` with gaps `c, c - s, ..., c - (m-1)s`,
/// `s = c / (2m)`, summing to `total`.
fn place(p: &Rational, m: u64, total: &Rational) -> (Vec<Rational>, Rational) {
    let c = total * qi(4) / qi(3 * m + 1);
    let s = &c / qi(2 * m);
    let mut out = Vec::with_capacity(m as usize);
    let mut x = p.clone();
    for j in 0..m {
        x -= &c - &s * qi(j);
        out.push(x.clone());
    }
    (out, c)
}

pub fn build_prop_p(depth: usize) -> Result<PropPWitness> {
    if depth < 2 {
        return Err(Error::InvalidParameter(format!("depth must be at least 2, got {depth}")));
    }
    if depth > 6 {
        return Err(Error::PrecisionBudget(format!(
            "depth {depth} needs more than {} points",
            prop_p_counts(depth).iter().take(depth - 1).sum::<u64>()
        )));
    }
    let mut tops = vec![q(1, 2)];
    while tops.len() < depth + 2 {
        let t = logistic(tops.last().unwrap());
        tops.push(t);
    }
    let counts = prop_p_counts(depth + 1);
    // Annulus n ends a margin above t_{n+1} that leaves room for annulus n+1.
    let eta = |n: usize| -> Rational {
        let t = &tops[n];
        t * t / qi(2 * counts[n])
    };

    let mut xs = vec![q(1, 2)];
    let mut last_gap: Option<Rational> = None;
    let mut sentinel = None;
    for n in 1..=depth {
        let p = xs.last().unwrap().clone();
        let m = if n == 1 { counts[0] - 1 } else { counts[n - 1] };
        let total = &p - &tops[n] - eta(n);
        if !total.is_positive() {
            return Err(Error::Infeasible(format!("annulus {n} has no room below {}", to_f64(&p))));
        }
        let (pts, first_gap) = place(&p, m, &total);
        if let Some(g) = &last_gap {
            if first_gap >= *g {
                return Err(Error::Infeasible(format!(
                    "gaps stop decreasing entering annulus {n}"
                )));
            }
        }
        if n == depth {
            sentinel = Some(pts[0].clone());
            break;
        }
        let k = pts.len();
        last_gap = Some(if k >= 2 {
            &pts[k - 2] - &pts[k - 1]
        } else {
            &p - &pts[0]
        });
        xs.extend(pts);
    }
    let sentinel = sentinel.expect("loop reaches the last annulus");
    let counts: Vec<u64> = counts[..depth].to_vec();

    let n_pts = xs.len();
    let last = &xs[n_pts - 1];
    let sentinel_image = &sentinel - (last - &sentinel) / qi(2);
    let mut g_nodes = vec![(q(0, 1), q(0, 1)), (sentinel.clone(), sentinel_image)];
    g_nodes.push((last.clone(), sentinel.clone()));
    for i in (0..n_pts - 1).rev() {
        g_nodes.push((xs[i].clone(), xs[i + 1].clone()));
    }
    let g = pwl_from_exact(&g_nodes)?.with_kind(MapKind::Weak)?;
    let h = ContractiveMap::constant_scalar(to_f64(&xs[0]))?.with_kind(MapKind::Weak)?;
    let system = FunctionSystem::new(vec![g, h])?;

    let mut w = PropPWitness {
        depth,
        x_points: xs,
        sentinel,
        interval_tops: tops[..=depth].to_vec(),
        counts,
        g_nodes,
        system,
        audit: AuditReport::default(),
    };
    w.audit = audit(&w);
    Ok(w)
}

fn audit(w: &PropPWitness) -> AuditReport {
    let mut a = AuditReport::default();
    let full: Vec<Rational> = w
        .x_points
        .iter()
        .cloned()
        .chain(std::iter::once(w.sentinel.clone()))
        .collect();
    a.nonnegative("a", full.iter().flat_map(|x| [q(1, 2) - x, x.clone()]));
    a.positive("b", full.windows(2).map(|p| &p[0] - &p[1]).chain(full.last().cloned()));
    let gaps: Vec<Rational> = full.windows(2).map(|p| &p[0] - &p[1]).collect();
    a.positive("c", gaps.windows(2).map(|g| &g[0] - &g[1]));
    // (d): every filled annulus holds exactly k_n points.
    let mut exact = Vec::new();
    for n in 1..w.depth {
        let (hi, lo) = (&w.interval_tops[n - 1], &w.interval_tops[n]);
        let inside = full.iter().filter(|x| *x <= hi && *x > lo).count() as u64;
        exact.push((qi(inside), qi(w.counts[n - 1])));
    }
    let in_last = full.iter().filter(|x| *x <= &w.interval_tops[w.depth - 1]).count();
    exact.push((qi(in_last as u64), qi(1)));
    a.identity("d", exact);
    let mut sum = 0u64;
    let mut slack = Vec::new();
    for (i, &k) in w.counts.iter().enumerate() {
        if i > 0 {
            slack.push(qi(k) - qi((i as u64 + 1) * sum));
        }
        sum += k;
    }
    a.identity("e-first", [(qi(w.counts[0]), qi(2))]);
    a.positive("e", slack);

    // g[X_core] and h[X_core] recover the truncation, sentinel included.
    let core: Vec<Rational> = std::iter::once(q(0, 1)).chain(w.x_points.iter().cloned()).collect();
    let mut image: Vec<Rational> = core.iter().map(|x| pwl_eval_exact(&w.g_nodes, x)).collect();
    image.push(w.x_points[0].clone());
    image.sort();
    image.dedup();
    let mut target: Vec<Rational> = full.clone();
    target.push(q(0, 1));
    target.sort();
    let same = image.len() == target.len() && image.iter().zip(&target).all(|(u, v)| u == v);
    a.push("invariance", same, 0.0);
    a.positive("g-slope", [Rational::one() - max_slope_exact(&w.g_nodes)]);
    a.nonnegative(
        "g-range",
        w.g_nodes.iter().flat_map(|(_, y)| [y.clone(), Rational::one() - y]),
    );
    a
}

impl PropPWitness {
    /// `{0} ∪ {x_1, ..., x_N} ∪ {x_{N+1}}` in binary64.
    pub fn point_set(&self) -> Result<CompactSet> {
        let mut xs: Vec<f64> = self.x_points.iter().map(to_f64).collect();
        xs.push(to_f64(&self.sentinel));
        xs.push(0.0);
        super::scalar_set(xs)
    }

    pub fn export(&self) -> Result<WitnessExport> {
        let mut points: Vec<String> = vec![format_rational(&q(0, 1))];
        points.extend(self.x_points.iter().map(format_rational));
        points.push(format_rational(&self.sentinel));
        Ok(WitnessExport {
            kind: WitnessKind::PropP,
            size: self.depth,
            points,
            intervals: Vec::new(),
            delta: None,
            maps: export_maps(&self.system),
            audit: self.audit.entries.clone(),
            notes: vec![format!(
                "last point {} is the sentinel x_(N+1); invariance is checked as g[X] ∪ h[X] = X ∪ {{x_(N+1)}} with X the points before it",
                format_rational(&self.sentinel)
            )],
        })
    }
}
