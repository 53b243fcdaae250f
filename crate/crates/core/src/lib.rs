//! Hidden shift problems for multiplicative characters, simulated exactly.
//!
//! The crate is layered bottom-up:
//!
//! * [`numtheory`], [`finfield`], [`ringchar`]: integer arithmetic, finite
//!   fields `F_{p^r}` and characters of `F_q` and `Z/nZ`.
//! * [`qsim`]: a dense state-vector engine over `Z_n`, `F_q` and products of
//!   cyclic groups with exact Fourier transforms.
//! * [`shiftalgos`]: the hidden shift and hidden coset solvers.
//! * [`oracles`]: brute-force references used to check every quantum result.
//! * [`homocrypt`]: a toy algebraically homomorphic cryptosystem and the
//!   attack that reduces it to the shifted Legendre symbol problem.

pub mod error;
pub mod finfield;
pub mod homocrypt;
pub mod numtheory;
pub mod oracles;
pub mod qsim;
pub mod ringchar;
pub mod rng;
pub mod shiftalgos;
pub mod unity;

pub use error::{Error, Result};
pub use finfield::{FieldCtx, FieldElement, MultCharFF};
pub use numtheory::{Factorization, Fraction};
pub use qsim::{GroupSpec, PrepOutcome, QState};
pub use ringchar::{PrimitiveChar, RingChar};
pub use rng::Seed;
pub use shiftalgos::{Mode, ShiftSolution};
pub use unity::CharValue;

pub use num_complex::Complex64;

/// Library version recorded in every run report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
