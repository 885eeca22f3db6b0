//! Polygonal contraction approximants of one-dimensional weak contractions.
//!
//! The interpolant of a weak contraction `f` through finitely many nodes has
//! every secant slope strictly below 1 (each is a ratio
//! `|f(x) - f(y)| / |x - y|` with `x != y`), so it is a genuine contraction.
//! Refining the nodes along an enumeration of the rationals drives the
//! interpolants uniformly to `f`, and the attractors of the interpolated
//! systems towards the attractor of the weak system.

use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{format_real, hausdorff};
use crate::hutchinson::{attractor, AttractorOptions, AttractorResult, FunctionSystem};
use crate::maps::{lipschitz_upper_bound, ContractiveMap, LipschitzCertificate, MapKind, MapVariant};

/// Reduced fractions in `(0,1)` by increasing denominator, then numerator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalEnumeration {
    pub points: Vec<Rational64>,
    /// Largest denominator reached.
    pub level: i64,
}

pub fn rational_enumeration(k: usize) -> RationalEnumeration {
    let mut points = Vec::with_capacity(k);
    let mut den: i64 = 1;
    while points.len() < k {
        den += 1;
        for num in 1..den {
            if num.gcd(&den) == 1 {
                points.push(Rational64::new(num, den));
                if points.len() == k {
                    break;
                }
            }
        }
    }
    RationalEnumeration {
        points,
        level: if k == 0 { 1 } else { den },
    }
}

fn require_scalar(f: &ContractiveMap) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::NotOneDimensional(f.dim()));
    }
    Ok(())
}

/// Interpolates `f` at `0`, `1` and the first `k` enumerated rationals.
pub fn polygonal_approximant(f: &ContractiveMap, k: usize) -> Result<ContractiveMap> {
    require_scalar(f)?;
    let mut xs: Vec<f64> = rational_enumeration(k)
        .points
        .iter()
        .map(|q| q.to_f64().expect("small rationals convert"))
        .collect();
    xs.push(0.0);
    xs.push(1.0);
    xs.sort_by(f64::total_cmp);
    let nodes: Vec<(f64, f64)> = xs
        .into_iter()
        .map(|x| (x, f.eval_scalar(x).clamp(0.0, 1.0)))
        .collect();
    ContractiveMap::piecewise_linear(nodes, MapKind::Contraction)
}

/// Max segment slope of a piecewise-linear map, which for a one-dimensional
/// polygonal chain equals the max secant slope over all node pairs.
pub fn approximant_lipschitz(g: &ContractiveMap) -> Result<LipschitzCertificate> {
    if !matches!(g.variant(), MapVariant::PiecewiseLinear(_)) {
        return Err(Error::InvalidMap("expected a piecewise-linear map".into()));
    }
    let cert = lipschitz_upper_bound(g);
    if !cert.is_contraction() {
        return Err(Error::NotContractive {
            bound: cert.upper_bound,
        });
    }
    Ok(cert)
}

/// `max |f(x) - g(x)|` over `samples` equispaced points of `[0,1]`.
pub fn sup_norm_gap(f: &ContractiveMap, g: &ContractiveMap, samples: usize) -> Result<f64> {
    require_scalar(f)?;
    require_scalar(g)?;
    let n = samples.max(2) - 1;
    Ok((0..=n)
        .map(|i| {
            let x = i as f64 / n as f64;
            (f.eval_scalar(x).clamp(0.0, 1.0) - g.eval_scalar(x).clamp(0.0, 1.0)).abs()
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyEntry {
    pub k: usize,
    /// Certified Lipschitz bound of each member's approximant, in system order.
    pub lipschitz: Vec<f64>,
    pub lipschitz_max: f64,
    pub hausdorff: f64,
    /// Largest sup-norm gap between a member and its approximant.
    pub sup_gap: f64,
    pub attractor: AttractorResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationStudy {
    pub entries: Vec<StudyEntry>,
    pub reference: AttractorResult,
}

impl ApproximationStudy {
    /// `k,lipschitz_max,hausdorff` rows, one per schedule entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,lipschitz_max,hausdorff\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{}",
                e.k,
                format_real(e.lipschitz_max),
                format_real(e.hausdorff)
            );
        }
        out
    }

    pub fn final_distance(&self) -> Option<f64> {
        self.entries.last().map(|e| e.hausdorff)
    }
}

fn converged(r: AttractorResult) -> Result<AttractorResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::AttractorNotConverged {
            iterations: r.iterations,
        })
    }
}

/// For each `k` in the schedule, replaces every member by its polygonal
/// approximant and measures the attractor distance to the weak system's own
/// attractor (computed at `tol / 10`).
pub fn approximation_study(
    sys: &FunctionSystem,
    k_schedule: &[usize],
    opts: &AttractorOptions,
) -> Result<ApproximationStudy> {
    if sys.dim() != 1 {
        return Err(Error::NotOneDimensional(sys.dim()));
    }
    if k_schedule.windows(2).any(|w| w[1] <= w[0]) || k_schedule.first() == Some(&0) {
        return Err(Error::InvalidParameter(
            "k schedule must be strictly increasing positive integers".into(),
        ));
    }
    let ref_opts = AttractorOptions {
        tol: opts.tol / 10.0,
        ..*opts
    };
    let reference = converged(attractor(sys, &ref_opts)?)?;
    let entries = k_schedule
        .par_iter()
        .map(|&k| {
            let mut maps = Vec::with_capacity(sys.len());
            let mut lipschitz = Vec::with_capacity(sys.len());
            let mut sup_gap = 0.0f64;
            for f in sys.maps() {
                let g = polygonal_approximant(f, k)?;
                lipschitz.push(approximant_lipschitz(&g)?.upper_bound);
                sup_gap = sup_gap.max(sup_norm_gap(f, &g, 10_001)?);
                maps.push(g);
            }
            let approx = FunctionSystem::new(maps)?;
            let result = converged(attractor(&approx, opts)?)?;
            let hausdorff = hausdorff(&result.attractor, &reference.attractor)?;
            Ok(StudyEntry {
                k,
                lipschitz_max: lipschitz.iter().copied().fold(0.0, f64::max),
                lipschitz,
                hausdorff,
                sup_gap,
                attractor: result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproximationStudy { entries, reference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{apply, fixed_point};
    use crate::Point;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(rational_enumeration(1).points, vec![r(1, 2)]);
        assert_eq!(rational_enumeration(3).points, vec![r(1, 2), r(1, 3), r(2, 3)]);
        assert_eq!(
            rational_enumeration(9).points,
            vec![r(1, 2), r(1, 3), r(2, 3), r(1, 4), r(3, 4), r(1, 5), r(2, 5), r(3, 5), r(4, 5)]
        );
        for k in 1..60 {
            let a = rational_enumeration(k).points;
            let b = rational_enumeration(k + 1).points;
            assert_eq!(a[..], b[..k]);
        }
    }

    #[test]
    fn logistic_approximants() {
        let f = ContractiveMap::logistic();
        let g1 = polygonal_approximant(&f, 1).unwrap();
        match g1.variant() {
            MapVariant::PiecewiseLinear(nodes) => {
                assert_eq!(nodes, &vec![(0.0, 0.0), (0.5, 0.25), (1.0, 0.0)])
            }
            _ => unreachable!(),
        }
        assert_eq!(approximant_lipschitz(&g1).unwrap().upper_bound, 0.5);

        let g3 = polygonal_approximant(&f, 3).unwrap();
        let at = |x: f64| apply(&g3, &Point::scalar(x).unwrap()).unwrap().x();
        assert!((at(1.0 / 3.0) - 2.0 / 9.0).abs() < 1e-15);
        assert!((at(2.0 / 3.0) - 2.0 / 9.0).abs() < 1e-15);
        // segment slopes 2/3, 1/6, -1/6, -2/3
        let l = approximant_lipschitz(&g3).unwrap().upper_bound;
        assert!((l - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_reproduces_piecewise_linear_maps() {
        let f = ContractiveMap::piecewise_linear(
            vec![(0.0, 0.2), (0.5, 0.5), (1.0, 0.3)],
            MapKind::Weak,
        )
        .unwrap();
        let g = polygonal_approximant(&f, 10).unwrap();
        assert!(sup_norm_gap(&f, &g, 10_001).unwrap() < 1e-15);
    }

    #[test]
    fn lipschitz_certificate_examples() {
        let c = ContractiveMap::piecewise_linear(vec![(0.0, 0.4), (1.0, 0.4)], MapKind::Contraction).unwrap();
        assert_eq!(approximant_lipschitz(&c).unwrap().upper_bound, 0.0);
        let g = crate::maps::extend_from_finite(&[0.0, 1.0], &[0.0, 0.999]).unwrap();
        let cert = approximant_lipschitz(&g).unwrap();
        assert!((cert.upper_bound - 0.999).abs() < 1e-15);
        assert!(cert.margin() > 0.0);
        assert!(approximant_lipschitz(&ContractiveMap::logistic()).is_err());
    }

    #[test]
    fn sup_gap_shrinks_for_logistic() {
        let f = ContractiveMap::logistic();
        let mut prev = f64::INFINITY;
        for k in [1, 2, 4, 8, 16, 32, 64] {
            let gap = sup_norm_gap(&f, &polygonal_approximant(&f, k).unwrap(), 10_001).unwrap();
            assert!(gap <= prev + 1e-12);
            prev = gap;
            // chord error of x - x^2 on a segment of width h is h^2 / 4
            let mut xs: Vec<f64> = rational_enumeration(k).points.iter().map(|q| q.to_f64().unwrap()).collect();
            xs.extend([0.0, 1.0]);
            xs.sort_by(f64::total_cmp);
            let h = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            assert!(gap <= h * h / 4.0 + 1e-12);
            assert!(gap >= h * h / 4.0 - 1e-4);
        }
    }

    #[test]
    fn single_map_study_tracks_fixed_points() {
        let f = ContractiveMap::piecewise_linear(
            vec![(0.0, 0.3), (0.37, 0.5), (1.0, 0.6)],
            MapKind::Weak,
        )
        .unwrap();
        let sys = FunctionSystem::new(vec![f.clone()]).unwrap();
        let opts = AttractorOptions::default();
        let study = approximation_study(&sys, &[1, 4, 16, 64], &opts).unwrap();
        let z = fixed_point(&f, 1e-12, 10_000).unwrap().x();
        for e in &study.entries {
            let g = polygonal_approximant(&f, e.k).unwrap();
            let zk = fixed_point(&g, 1e-12, 10_000).unwrap().x();
            assert!((e.hausdorff - (zk - z).abs()).abs() < 1e-5, "{} vs {}", e.hausdorff, (zk - z).abs());
        }
        assert!(study.final_distance().unwrap() < 1e-5);
    }

    #[test]
    fn study_csv_header() {
        let sys = FunctionSystem::new(vec![ContractiveMap::affine(0.5, 0.1).unwrap()]).unwrap();
        let study = approximation_study(&sys, &[1, 2], &AttractorOptions::default()).unwrap();
        let csv = study.to_csv();
        assert!(csv.starts_with("k,lipschitz_max,hausdorff\n1,5.0000000000000000e-1,"));
        assert_eq!(csv.lines().count(), 3);
        assert!(approximation_study(&sys, &[2, 1], &AttractorOptions::default()).is_err());
    }
}
