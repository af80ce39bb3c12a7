//! Algorithms for scheduling sensor covers: given a universe of targets and a
//! family of sensor subsets, split the family into many pairwise disjoint set
//! covers (the combinatorial problem) or schedule fractional covers to
//! maximise total monitoring lifetime (the LP relaxation).
//!
//! The crate pairs every approximation algorithm with an exact oracle so that
//! results can be cross-checked end to end:
//!
//! * [`instance`] — the data model, statistics, verification,
//! * [`colouring`] — randomized/derandomized hypergraph colouring covering the
//!   general case,
//! * [`expcover`] — phased colouring for instances with low target
//!   co-occurrence,
//! * [`lll`] — Moser–Tardos resampling under local-lemma parameters,
//! * [`graph_partition`] — reduction to domatic-style partitioning of the
//!   subset intersection graph,
//! * [`oned`] — exact max-flow solver for interval instances,
//! * [`twocolour`] — exact solver when every target is covered exactly twice,
//! * [`kcover`] — grouping covers for multi-coverage epochs,
//! * [`oracle`] — brute force, exact rational LP, and a packing-LP
//!   approximation.

pub mod colouring;
pub mod error;
pub mod expcover;
pub mod graph_partition;
pub mod instance;
pub mod kcover;
pub mod lll;
pub mod oned;
pub mod oracle;
pub mod rational;
pub mod simplex;
pub mod twocolour;

pub use error::{Error, Result};
pub use instance::{stats, verify, CoverFamily, Instance, Schedule, Stats};
pub use rational::Rat;
