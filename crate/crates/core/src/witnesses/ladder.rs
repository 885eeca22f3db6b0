//! A finite set generated by `n + 1` contractions that stays a fixed
//! Hausdorff distance away from every attractor of `n` contractions.
//!
//! The set is `n + 1` blocks of `k = n^2 + 1` points. Inside block `i` the
//! gaps shrink by `9/10`, blocks get sparser to the right and steeper gaps
//! separate them.

use num_traits::{One, Pow, Signed, Zero};

use super::{
    bit_size, format_rational, max_slope_exact, pwl_eval_exact, pwl_from_exact, q, qi, to_f64,
    AuditReport, Rational, WitnessExport, WitnessKind,
};
use crate::error::{Error, Result};
use crate::geometry::CompactSet;
use crate::hutchinson::FunctionSystem;
use crate::maps::MapSpec;

/// Largest numerator-plus-denominator size allowed for any ladder rational.
pub const LADDER_BIT_BUDGET: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct LadderWitness {
    pub n: usize,
    pub k: usize,
    /// `a_1, ..., a_{n+1}`.
    pub a: Vec<Rational>,
    /// `b_1, ..., b_n`.
    pub b: Vec<Rational>,
    /// `x[i][j]` is `x_{i+1, j+1}`.
    pub x: Vec<Vec<Rational>>,
    pub delta: Rational,
    /// Node lists of `f_1, ..., f_{n+1}` over every point of `F`.
    pub maps_exact: Vec<Vec<(Rational, Rational)>>,
    pub audit: AuditReport,
}

fn nine_tenths() -> Rational {
    q(9, 10)
}

pub fn build_ladder(n: usize) -> Result<LadderWitness> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let k = n * n + 1;
    let r = nine_tenths();
    let decay: Rational = Pow::pow(&r, (k - 2) as u32);
    let ratio = &decay / qi(2 * (k as u64 - 1));
    // Solve with a_1 = 1, then rescale so condition 1 holds with slack 1/2.
    let mut a = vec![Rational::one()];
    for _ in 0..n {
        let next = a.last().unwrap() * &ratio;
        a.push(next);
    }
    let mut b = vec![qi(10 * (k as u64 - 1))];
    for _ in 1..n {
        let next = b.last().unwrap() * qi(2);
        b.push(next);
    }
    let sum_a: Rational = a.iter().sum();
    let sum_b: Rational = b.iter().sum();
    let s = sum_b + sum_a * qi(k as u64 - 1);
    let a1 = (qi(2) * s).recip();
    for v in a.iter_mut().chain(b.iter_mut()) {
        *v = &*v * &a1;
    }
    let last_bits = bit_size(a.last().unwrap());
    if last_bits > LADDER_BIT_BUDGET {
        return Err(Error::PrecisionBudget(format!(
            "a_(n+1) needs {last_bits} bits at n = {n}"
        )));
    }

    let mut x: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
    let mut cur = Rational::zero();
    for i in 0..=n {
        let mut block = Vec::with_capacity(k);
        let mut step = a[i].clone();
        block.push(cur.clone());
        for _ in 1..k {
            cur = &cur + &step;
            step = &step * &r;
            block.push(cur.clone());
        }
        if i < n {
            cur = &cur + &b[i];
        }
        x.push(block);
    }
    if let Some(big) = x.iter().flatten().map(bit_size).max() {
        if big > LADDER_BIT_BUDGET {
            return Err(Error::PrecisionBudget(format!("points need {big} bits at n = {n}")));
        }
    }
    let delta = &a[n] * &decay / qi(4);

    let maps_exact = (0..=n)
        .map(|i| {
            x.iter()
                .enumerate()
                .flat_map(|(blk, pts)| {
                    let own = &x[i];
                    pts.iter().enumerate().map(move |(j, p)| {
                        let v = if blk != i {
                            own[0].clone()
                        } else if j + 1 < k {
                            own[j + 1].clone()
                        } else {
                            own[k - 1].clone()
                        };
                        (p.clone(), v)
                    })
                })
                .collect()
        })
        .collect();

    let mut w = LadderWitness {
        n,
        k,
        a,
        b,
        x,
        delta,
        maps_exact,
        audit: AuditReport::default(),
    };
    w.audit = audit(&w);
    Ok(w)
}

fn audit(w: &LadderWitness) -> AuditReport {
    let mut au = AuditReport::default();
    let (n, k) = (w.n, w.k as u64);
    let r = nine_tenths();
    let decay: Rational = Pow::pow(&r, (w.k - 2) as u32);
    let sum_a: Rational = w.a.iter().sum();
    let sum_b: Rational = w.b.iter().sum();
    au.positive("condition-1", [Rational::one() - sum_b - sum_a * qi(k - 1)]);
    au.positive(
        "condition-2",
        (0..n).map(|i| &w.a[i] * &decay - qi(k - 1) * &w.a[i + 1]),
    );
    au.identity("condition-3", [(w.b[0].clone(), qi(10) * &w.a[0] * qi(k - 1))]);
    au.identity("condition-4", (1..n).map(|i| (w.b[i].clone(), qi(2) * &w.b[i - 1])));

    let mut rec = vec![(w.x[0][0].clone(), Rational::zero())];
    for i in 0..=n {
        for j in 1..w.k {
            let step = &w.a[i] * Pow::pow(&r, (j - 1) as u32);
            rec.push((w.x[i][j].clone(), &w.x[i][j - 1] + step));
        }
        if i < n {
            rec.push((w.x[i + 1][0].clone(), &w.x[i][w.k - 1] + &w.b[i]));
        }
    }
    au.identity("x-recurrence", rec);

    let all: Vec<Rational> = w.x.iter().flatten().cloned().collect();
    au.nonnegative("domain", all.iter().flat_map(|v| [v.clone(), Rational::one() - v]));

    let mut image: Vec<Rational> = w
        .maps_exact
        .iter()
        .flat_map(|nodes| all.iter().map(move |p| pwl_eval_exact(nodes, p)))
        .collect();
    image.sort();
    image.dedup();
    au.push("invariance", image == all, 0.0);

    let min_gap = all.windows(2).map(|p| &p[1] - &p[0]).min().unwrap_or_else(Rational::zero);
    au.identity("min-gap", [(min_gap, qi(4) * &w.delta)]);
    au.identity(
        "delta",
        [(w.delta.clone(), &w.a[n] * &decay / qi(4))],
    );

    au.positive(
        "lipschitz",
        w.maps_exact.iter().map(|nodes| Rational::one() - max_slope_exact(nodes)),
    );
    let slope = |nodes: &[(Rational, Rational)], u: usize| {
        let (p, v) = (&nodes[u], &nodes[u + 1]);
        ((&v.1 - &p.1) / (&v.0 - &p.0)).abs()
    };
    let mut within = Vec::new();
    let mut transitions = Vec::new();
    for nodes in &w.maps_exact {
        for u in 0..nodes.len() - 1 {
            if (u + 1) % w.k == 0 {
                transitions.push(slope(nodes, u));
            } else {
                within.push(slope(nodes, u));
            }
        }
    }
    au.nonnegative("block-slope", within.into_iter().map(|s| &r - s));
    let cap = std::cmp::min(q(1, 10), Rational::new(1.into(), (k - 1).into()));
    au.nonnegative("transition-slope", transitions.into_iter().map(|s| &cap - s));
    au
}

impl LadderWitness {
    pub fn points(&self) -> Vec<Rational> {
        self.x.iter().flatten().cloned().collect()
    }

    pub fn delta_f64(&self) -> f64 {
        to_f64(&self.delta)
    }

    fn scalar_block(&self, pts: &[Rational]) -> Result<CompactSet> {
        let set = super::scalar_set(pts.iter().map(to_f64))?;
        if set.len() != pts.len() {
            return Err(Error::PrecisionBudget(format!(
                "ladder points for n = {} collapse in binary64",
                self.n
            )));
        }
        Ok(set)
    }

    /// `F` on `[0,1]`.
    pub fn point_set(&self) -> Result<CompactSet> {
        self.scalar_block(&self.points())
    }

    /// `F` on the first axis of `[0,1]^dim`.
    pub fn point_set_in(&self, dim: usize) -> Result<CompactSet> {
        self.point_set()?.embed(dim)
    }

    /// Block `F_i`, 1-indexed.
    pub fn block(&self, i: usize) -> Result<CompactSet> {
        if i == 0 || i > self.n + 1 {
            return Err(Error::InvalidParameter(format!("no block {i}")));
        }
        self.scalar_block(&self.x[i - 1])
    }

    /// `{f_1, ..., f_{n+1}}` on `[0,1]`.
    pub fn system(&self) -> Result<FunctionSystem> {
        let maps = self
            .maps_exact
            .iter()
            .map(|nodes| pwl_from_exact(nodes))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::InvalidParameter(m) | Error::InvalidMap(m) => Error::PrecisionBudget(m),
                other => other,
            })?;
        FunctionSystem::new(maps)
    }

    pub fn system_in(&self, dim: usize) -> Result<FunctionSystem> {
        self.system()?.embed(dim)
    }

    pub fn export(&self) -> Result<WitnessExport> {
        let sys = self.system()?;
        Ok(WitnessExport {
            kind: WitnessKind::Ladder,
            size: self.n,
            points: self.points().iter().map(format_rational).collect(),
            intervals: Vec::new(),
            delta: Some(format_rational(&self.delta)),
            maps: sys.maps().iter().map(MapSpec::from_map).collect(),
            audit: self.audit.entries.clone(),
            notes: vec![format!(
                "k = {}, a = [{}], b = [{}]",
                self.k,
                self.a.iter().map(format_rational).collect::<Vec<_>>().join(", "),
                self.b.iter().map(format_rational).collect::<Vec<_>>().join(", ")
            )],
        })
    }
}
