//! Exact polynomial maps over ℚ(i) and their compliance with the degree
//! bounds.

mod compliance;
mod gaussian;
mod map;
mod polynomial;

pub use compliance::{
    check_compliance, ComplianceReport, ComponentCheck, JacobianCheck, OffendingMonomial,
};
pub use gaussian::GaussianRational;
pub use map::{ComplexPolyMap, PolyMap, MAX_JACOBIAN_SIZE};
pub use polynomial::{ComplexPolynomial, Degree, Polynomial, TermJson};

use crate::error::Result;
use crate::weights::{Character, WeightMatrix};

/// The component of `p` in the weight space `V_k`: the terms whose monomial
/// has character `k` under `a`.
pub fn project_character(p: &Polynomial, a: &WeightMatrix, k: &Character) -> Result<Polynomial> {
    p.project_character(a, k)
}
