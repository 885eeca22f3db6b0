//! Attractors of iterated function systems of contractions and weak
//! contractions on `[0,1]^d`, Hausdorff distances between finite clouds,
//! polygonal contraction approximants of weak contractions, and exact
//! rational constructions of the sets separating the attractor families.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod hutchinson;
pub mod maps;
pub mod polygonal;
pub mod verify;
pub mod witnesses;

pub use error::{Error, Result};
pub use geometry::{CompactSet, HausdorffReport, IntervalUnion, Point};
pub use hutchinson::{AttractorOptions, AttractorResult, FunctionSystem};
pub use maps::{ContractiveMap, LipschitzCertificate, MapKind, MapSpec};
pub use polygonal::{ApproximationStudy, RationalEnumeration, StudyEntry};
pub use verify::{CoverageReport, SearchOptions, SearchReport, SearchSummary};
pub use witnesses::{
    AuditEntry, AuditReport, EpsilonSystem, IntervalWitness, LadderWitness, PropPWitness,
    WitnessExport, WitnessKind,
};
