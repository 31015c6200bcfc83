//! Factorization in Puiseux information semialgebras and in the monoids of
//! upper triangular matrices over them.

pub mod enumeration;
pub mod error;
pub mod matrix;
pub mod numerical;
pub mod par;
pub mod primes;
pub mod rational;
pub mod semialgebra;
pub mod verifier;

pub use enumeration::{Bounds, Enumeration};
pub use error::{Error, Result};
pub use matrix::{AplReport, HfmWitness, MatrixAtom, ProbeBounds, RigidFactorization, TriangularMonoid, UTMatrix};
pub use rational::{make_rat, Rat};
pub use semialgebra::{accp_probe, AccpOutcome, AccpReport, Element, ExpSum, Factorization, Mode, Semialgebra};
