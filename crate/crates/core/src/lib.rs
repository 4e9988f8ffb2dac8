//! Exact-arithmetic S-expansions of finite-dimensional Lie algebras by finite
//! Abelian semigroups, with reductions, resonant subalgebras, contraction
//! limits and a classifier for real three-dimensional Lie algebras.

pub mod contraction;
pub mod error;
pub mod expansion;
pub mod identify;
pub mod laurent;
pub mod linalg;
pub mod liealg;
pub mod par;
pub mod quadform;
pub mod rational;
pub mod search;
pub mod semigroup;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace, Vector};
pub use liealg::{change_basis, validate_lie, AlgebraClass, BasisChange, StructureTensor};
pub use rational::Q;
pub use semigroup::SemigroupTable;
