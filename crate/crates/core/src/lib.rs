//! Exact arithmetic over the p-adic numbers and the classification machinery
//! built on it: square classes and Hilbert symbols, quadratic spaces with
//! Witt decomposition, orthogonal groups with spinor norms, group cocycles
//! and multipliers, particle orbit classification, and the conformal
//! compactification of p-adic spacetime.
//!
//! Everything is computed in capped-relative-precision arithmetic: results
//! are exact in the digits they claim, and predicates that would need more
//! digits than are tracked fail with a typed precision error instead of
//! guessing.

pub mod cocycle;
pub mod conformal;
pub mod error;
pub mod galilean;
pub mod linalg;
pub mod oracle;
pub mod orthogrp;
pub mod padic;
pub mod poincare;
pub mod quadform;
pub mod sampling;
pub mod selftest;

pub use error::{Error, Result};
pub use padic::{PAdic, Phase, SquareClass, DEFAULT_PRECISION};
pub use quadform::{FormInvariants, FormProfile, IsotropyWitness, QuadSpace, WittData};
