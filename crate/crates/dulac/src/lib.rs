//! Exact arithmetic for analytic vector fields near a singular point.
//!
//! The crate provides, bottom to top:
//!
//! * [`scalars`]: number fields `Q(theta)` in a power basis, with an optional
//!   designated square root of -1 and exact rational-rank computations;
//! * [`series`]: sparse truncated multivariate power series, vector-field
//!   jets, and invertible coordinate changes with pushforwards;
//! * [`resonance`]: resonance sets of an eigenvalue vector and its toric
//!   decomposition over a saturated integer lattice;
//! * [`normalform`]: degree-by-degree Poincare-Dulac normalization with the
//!   full coordinate-change chain and truncated torus-action generators;
//! * [`walcher`]: cofactor renormalization of semi-invariants and the
//!   conservation checks it enables for Darboux-type first integrals and
//!   commuting rational vector fields;
//! * [`darboux`]: certified commutation, first-integral, and independence
//!   checks plus a bounded search for polynomial semi-invariants;
//! * [`problem`] / [`report`] / [`runner`] / [`corpus`]: the deterministic
//!   JSON formats and the command dispatch used by the `dulac` binary.
//!
//! Everything works over exact rationals; nothing in the crate rounds.

pub mod corpus;
pub mod darboux;
pub mod normalform;
pub mod problem;
pub mod report;
pub mod resonance;
pub mod runner;
pub mod scalars;
pub mod series;
pub mod walcher;

mod intlat;
mod linalg;

pub use scalars::{FieldElement, FieldError, NumberField, RationalRank};
pub use series::{CoordinateChange, MultiIndex, SeriesError, TruncatedSeries, VectorFieldJet};
