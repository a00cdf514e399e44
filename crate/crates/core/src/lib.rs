//! Vanishing sequences of valuations on section spaces of line bundles over
//! explicit low-dimensional models, with the associated Okounkov bodies,
//! concave transforms, limit measures and convex-geometric extremal functions.

pub mod algebra;
pub mod convex;
pub mod error;
pub mod filtration;
pub mod measures;
pub mod models;
pub mod okounkov;
pub mod valuation;

pub use error::{Error, Result};
pub use filtration::{
    adapted_basis, asymptotics, vanishing_sequence, AsymptoticsReport, FiltrationProfile, GrowthVerdict,
    VanishingSequence,
};
pub use measures::{empirical_measure, ks_distance, Cdf, ReferenceCdf, StepMeasure};
pub use models::{SectionModel, SectionSpace};
pub use valuation::{ArcBudget, ArcCurve, Divisor, Valuation, Value};
