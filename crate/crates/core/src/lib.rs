//! Computational laboratory for inverse semigroups of partial symmetries.
//!
//! * [`pbij`]: finitely supported elements of the symmetric inverse semigroup
//!   I(ℕ), its subbasic open sets, a convergence checker, a compatible metric
//!   and the Wagner–Preston representation of finite inverse semigroups.
//! * [`semilattice`]: finite meet-semilattices and their Munn semigroups.
//! * [`clopen`]: clopen subsets of Cantor space as canonical prefix antichains.
//! * [`homeo`]: clopen-domain partial homeomorphisms of Cantor space given as
//!   suffix-preserving prefix exchanges.
//! * [`lattice_iso`]: finite windows onto partial isomorphisms of the clopen
//!   lattice, and the encode/decode correspondence with [`homeo`].
//! * [`acceptance`]: the seeded end-to-end verification suites.

pub mod acceptance;
pub mod clopen;
mod error;
pub mod homeo;
pub mod lattice_iso;
pub mod pbij;
pub mod sample;
pub mod semilattice;

pub use clopen::{Clopen, Word};
pub use error::{Error, Result};
pub use homeo::{HcoQuery, PointImage, PrefixMap};
pub use lattice_iso::{Check, TruncatedLatticeMap};
pub use pbij::{
    ConvergenceVerdict, FiniteInverseSemigroup, PartialBijection, SequenceWindow, SubbasicKind,
};
pub use semilattice::{FiniteSemilattice, MunnElement};

/// Exact value of the τ_pp window metric.
pub type ExactDistance = num_rational::BigRational;

/// Floating-point value of the τ_pp window metric.
pub type FloatDistance = f64;
