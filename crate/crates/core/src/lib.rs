//! Character calculus for compact connected Lie groups of classical type.
//!
//! The crate evaluates irreducible characters of the classical compact groups
//! everywhere on the maximal torus, including at singular elements where the
//! Weyl quotient degenerates. Around that core it provides:
//!
//! * [`rootdata`]: classical root data in `e_i` coordinates, weights and
//!   torus elements with exact rational angles.
//! * [`weylgroup`]: signed-permutation Weyl groups, Levi subsystems of torus
//!   elements and the `W = W_M · W^M` factorization.
//! * [`characters`]: Weyl dimension, Freudenthal multiplicities, regular and
//!   singular character formulas, decay ratios and torus quadrature.
//! * [`twistednorm`]: the twisted `GL(2n)` layer and its norm map to
//!   `SO(2n+1)`, the twisted Weyl denominator and the twisted character.
//! * [`epinvariants`]: Lefschetz numbers of a lattice automorphism.
//! * [`asymptotics`]: synthetic elliptic sides, principal-term dominance and
//!   the compact-group positivity certificate.
//!
//! Lattice data and every "does this root pair integrally" decision are exact
//! rationals; only the final exponentials are complex doubles.

pub mod asymptotics;
pub mod characters;
pub mod epinvariants;
pub mod error;
pub mod parallel;
pub mod rational;
pub mod rootdata;
pub mod twistednorm;
pub mod weylgroup;

pub use error::{Error, ErrorKind, Result};
pub use rational::Q;
pub use rootdata::{Family, LatticeKind, RootDatum, TorusElement, Weight};
pub use weylgroup::{LeviDatum, WeylElement};

pub use num_complex::Complex64;
