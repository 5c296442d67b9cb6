//! Resonance invariants of diagonal torus actions on ℂⁿ.
//!
//! A holomorphic linear action of the torus `Tʳ` on ℂⁿ, written in
//! diagonalizing coordinates, is described by an `n × r` integer
//! [`WeightMatrix`]: the row `a_i` is the weight of `z_i`, and `λ ∈ Tʳ`
//! acts by `z_i ↦ λ^{a_i} z_i`. From that matrix this crate computes
//!
//! * an exact admissibility certificate (only constant invariant functions),
//! * the monomial bases of the weight spaces `V_k`,
//! * resonance sets and orders, quasi-resonance sets and orders, which bound
//!   the degree of origin-fixing biholomorphisms between invariant domains,
//! * exact compliance checks of polynomial maps against those bounds,
//! * Monte Carlo checks of the underlying Bergman-space identities.
//!
//! Everything combinatorial is done in exact integer/rational arithmetic.
//! Only the [`mc`] module uses floating point.

pub mod admissibility;
pub mod enumerate;
mod error;
pub mod mc;
pub mod oracle;
pub mod polymap;
pub mod reproduce;
pub mod resonance;
pub(crate) mod serde_util;
pub mod weights;

pub use admissibility::{check_admissible, positive_functional, AdmissibilityCertificate, Verdict};
pub use enumerate::{degree_extremes, enumerate_weight_space, WeightSpace, WeightSpaceEnumerator};
pub use error::{Error, Result};
pub use polymap::{
    check_compliance, project_character, ComplianceReport, Degree, GaussianRational, PolyMap,
    Polynomial,
};
pub use resonance::{
    is_cartan_linear, nonneg_weight_bound, quasi_circular_bound, quasi_resonance, resonance,
    CartanVerdict, NonnegBoundReport, QuasiCircularBoundReport, QuasiResonanceReport,
    ResonanceReport,
};
pub use weights::{validate_weight_matrix, Character, MultiIndex, WeightMatrix, WeightWarning};
