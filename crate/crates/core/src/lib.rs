//! Evolution algebras defined by two permutations.
//!
//! The basis `e_1, …, e_n` multiplies by `e_i e_j = 0` for `i != j` and
//! `e_i² = a_pi[i] e_{pi(i)} + a_tau[i] e_{tau(i)}`. All arithmetic is exact
//! over arbitrary-precision rationals; indices are 0-based in the API and
//! 1-based in documents, reports and the command line.

pub mod algebra;
pub mod baric;
pub mod document;
pub mod error;
pub mod idempotent;
pub mod iso;
pub mod linalg;
pub mod nilpotent;
pub mod perm;
pub mod rational;
pub mod report;

pub use algebra::{build_algebra, direct_sum, Element, EvolutionAlgebra, StructuralMatrix};
pub use document::AlgebraDocument;
pub use report::{AnalysisReport, Settings};
pub use error::{Error, Result};
pub use perm::{Cycle, Permutation};
pub use rational::Rational;
