//! Exact arithmetic substrate: rationals, Q(sqrt 2), polynomials, truncated
//! series, monomial orders and ordered elimination.

pub mod echelon;
pub mod egf;
pub mod order;
pub mod poly;
pub mod quad;
pub mod rat;
pub mod series;

pub use egf::EgfArc;
pub use echelon::{dense_rank, echelonize, echelonize_tagged, kernel, leading_exponent, Echelon, EchelonRow, Insertion};
pub use order::MonomialOrder;
pub use poly::{Exponent, MultiPoly};
pub use quad::QuadExt;
pub use rat::{fmt_rat, int, parse_rat, rat, Rat};
pub use series::{compose_arc, ArcSubstitution, SeriesOrder, TruncSeries};
