//! Numerical decision procedure for the invariance of the spin structure on
//! spheres under transitive compact Lie group actions.
//!
//! A sphere `S^m` carries a unique spin structure. A compact connected group
//! acting transitively and effectively on it preserves that structure exactly
//! when the isotropy representation of the stabilizer lifts through the double
//! cover `Spin(m) -> SO(m)`. This crate decides that lift criterion
//! mechanically, in two independent ways:
//!
//! * the *differential* route: realize a generating loop of the stabilizer's
//!   fundamental group as a path of rotation matrices on the tangent space and
//!   lift it step by step into the Clifford algebra, reading the Z/2 class off
//!   the endpoint sign;
//! * the *adjoint* route: rebuild the same path from the reductive splitting
//!   of the Lie algebra and the adjoint action, and lift that instead.
//!
//! An eigenphase-winding oracle provides a third, lift-free parity count, and
//! a character calculus certifies the representation-theoretic decompositions
//! the adjoint route relies on. The [`lifting::classify`] entry point runs all
//! three and cross-checks them against the known classification.

pub mod actions;
pub mod adjoint;
pub mod characters;
pub mod clifford;
pub mod error;
pub mod exceptional;
pub mod lifting;
pub mod linalg;
pub mod octonion;
pub mod realize;
pub mod report;
pub mod suites;

pub use actions::{ActionSpec, Family, GroupLoop, RotationPath};
pub use clifford::{Multivector, SpinElement};
pub use error::Error;
pub use lifting::{classify, ClassificationRecord, Verdict};
pub use octonion::{Octonion, Quaternion};
pub use report::Report;

/// Default number of loop samples.
pub const DEFAULT_STEPS: usize = 256;

/// Default seed for all randomized verification suites.
pub const DEFAULT_SEED: u64 = 0x5EED;
