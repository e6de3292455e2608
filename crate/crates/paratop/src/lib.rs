//! Finite Alexandroff spaces and the neighborhood-base algebra of free
//! (abelian) paratopological groups over them.
//!
//! A finite topological space is determined by its minimal open
//! neighborhoods `U(x)` (equivalently, by a preorder). Over such a space
//! the free group `F_a(X)` and free abelian group `A_a(X)` carry canonical
//! paratopological-group topologies whose neighborhood filter at the
//! identity is generated by a single normal submonoid: `N_F`, generated by
//! the elements `x^-1 y` with `y ∈ U(x)`, and its abelian counterpart
//! `N_A`, generated by the differences `y - x`.
//!
//! This crate provides:
//! - [`space`]: finite spaces as minimal-neighborhood tables, separation
//!   predicates, chain spaces, separating maps, and exhaustive enumeration
//!   of all labeled topologies on small carriers;
//! - [`words`]: reduced words and finite-support integer vectors, the two
//!   ambient free groups;
//! - [`parabase`]: the generator sets and membership procedures for `N_A`
//!   (exact, via integer flow feasibility) and `N_F` (layered, with
//!   replayable certificates), coset separation, and axiom spot-checks;
//! - [`verify`]: desk-scale suites that sweep every labeled topology on a
//!   small carrier and check the group-level characterizations, emitting
//!   machine-readable counterexample reports.
//!
//! ```
//! use paratop::parabase::{member_na, member_nf};
//! use paratop::space::sierpinski;
//! use paratop::words::{AbelianVector, FreeWord};
//!
//! // U(a) = {a, b}, U(b) = {b}: the arc a → b generates everything.
//! let space = sierpinski();
//! let towards_open = AbelianVector::parse("b - a").unwrap();
//! assert!(member_na(&space, &towards_open).unwrap().is_member());
//! assert!(member_na(&space, &towards_open.neg()).unwrap().is_non_member());
//!
//! // T0 keeps the commutator out of the free monoid.
//! let commutator = FreeWord::parse("a^-1 b a b^-1").unwrap();
//! assert!(member_nf(&space, &commutator, 3).unwrap().is_non_member());
//! ```

pub mod parabase;
pub mod rng;
pub mod space;
pub mod verify;
pub mod words;

pub use space::{FiniteSpace, Point, PointSet, SpaceError, SpaceMap};
pub use words::{AbelianVector, FreeWord, ParseError, Sign};
