//! Exact-arithmetic toolkit for the Kruskal-Katona function and
//! cross-intersecting antichains.
//!
//! The crate is split along the lines of the underlying combinatorics:
//!
//! * [`binomial`]: exact binomial coefficients and the level-difference
//!   function `D(n, r) = C(n, r-1) - C(n, r)`.
//! * [`squashed`]: subsets, families and the squashed (colex) order.
//! * [`shadow`]: shadows, shades, new-shadows, cascade representations and
//!   the Kruskal-Katona minimum shadow.
//! * [`kappa`]: the Kruskal-Katona function κ and its prefix minimum κ*.
//! * [`antichain`]: antichains, Sperner operations, disjoint-pair analysis,
//!   extremal constructions and brute-force oracles.
//! * [`suite`] and [`cli`]: the verification sweeps and command-line front end.
//!
//! All counts are exact `i128` values; any overflow is reported as
//! [`Error::Overflow`] rather than wrapping.

pub mod antichain;
pub mod binomial;
pub mod cli;
mod error;
pub mod kappa;
pub mod report;
pub mod shadow;
pub mod squashed;
pub mod suite;

pub use binomial::{binom, d_value, hockey_stick, ExactInt};
pub use error::{Error, Result};
pub use report::{VerificationReport, Violation};
pub use squashed::{SetFamily, Subset};
