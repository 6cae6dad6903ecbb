//! Exact computations for the level `-2` realization of affine `sl_2` on
//! bosons, semi-infinite wedges and the rank-one lattice, together with the
//! associated Z-algebra on the vacuum space.

pub mod combination;
pub mod fock;
pub mod harness;
pub mod lattice;
pub mod rep;
pub mod scalars;
pub mod wedge;
pub mod zalg;

pub use combination::Combination;
pub use fock::{FockElement, FockMonomial, Sign};
pub use rep::{State, StateKey, WeightTriple};
pub use scalars::{HalfInt, Rational};
pub use wedge::{WedgeBasis, WedgeElement};
pub use zalg::{OmegaKey, OmegaState};
