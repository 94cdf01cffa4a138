//! Exact arithmetic in valued difference fields.
//!
//! The crate provides, over value groups `ℚ^n` with a distinguished
//! order-preserving automorphism:
//!
//! - truncated Hahn series with valuation, residue map, termwise `σ`, and
//!   the RV structure ([`series`]);
//! - `σ`-polynomials with evaluation, Taylor decomposition, scaling
//!   composition, and residue reduction ([`sigmapoly`]);
//! - tropical evaluation, regularity tests, regular-element construction
//!   and finite pc-trace adjustment ([`tropical`]);
//! - `σ`-Hensel configuration detection and Newton refinement ([`hensel`]);
//! - tropical-to-actual root lifting for ordinary polynomials together
//!   with a Newton–Puiseux oracle ([`kapranov`]);
//! - truncated grid-based transseries with difference-operator inversion
//!   (flat discrete summation, [`transseries`]).
//!
//! Everything is exact: coefficients are rationals, rational functions, or
//! group-algebra fractions, and truncation is tracked by explicit precision
//! caps rather than floating error.

pub mod error;
pub mod hensel;
pub mod kapranov;
pub mod multiindex;
pub mod ordgroup;
pub mod qpoly;
pub mod report;
pub mod resfield;
pub mod series;
pub mod sigmapoly;
pub mod text;
pub mod transseries;
pub mod tropical;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use ordgroup::{GroupAut, GroupElem, OrdGroup, ValOrInf};
pub use qpoly::{QPoly, Rat};
pub use resfield::{ExpElem, ExpGroupField, ExpSum, RatFun, RatShift, Rationals, ResSigmaPoly, ResidueField};
pub use series::{HahnField, HahnSeries, RVElem};
pub use sigmapoly::{MPoly, SigmaPoly, UPoly};
pub use transseries::{FlatOp, TransCtx, Transmonomial, Transseries};

