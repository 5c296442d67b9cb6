//! Checks a candidate origin-fixing biholomorphism against the necessary
//! conditions: `f(0) = 0`, constant nonzero Jacobian determinant, every
//! monomial of `f_i` in a weight space indexed by `K_{iρ'}`, and
//! `deg f_i ≤ ν_{iρ'}`.
//!
//! Passing does not certify that `f` is a biholomorphism between any pair of
//! domains. It only means `f` is not ruled out.

use serde::{Deserialize, Serialize};

use super::{Degree, GaussianRational, PolyMap, Polynomial};
use crate::error::{Error, Result};
use crate::resonance::quasi_resonance;
use crate::weights::{Character, MultiIndex, WeightMatrix};

pub const COMPLIANCE_NOTE: &str =
    "necessary conditions only: a pass does not certify that the map is a biholomorphism";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianCheck {
    pub determinant: Polynomial,
    pub constant: bool,
    pub nonzero: bool,
    /// The determinant's value when it is constant.
    pub value: Option<GaussianRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffendingMonomial {
    pub exponent: MultiIndex,
    pub character: Character,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCheck {
    pub index: usize,
    pub degree: Degree,
    /// `ν_{iρ'}`.
    pub bound: u64,
    pub degree_ok: bool,
    /// Monomials of `f_i` whose character is outside `K_{iρ'}`.
    pub offending: Vec<OffendingMonomial>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplianceReport {
    pub origin_fixed: bool,
    /// Components with a nonzero constant term.
    pub origin_offenders: Vec<usize>,
    pub jacobian: JacobianCheck,
    pub components: Vec<ComponentCheck>,
    pub quasi_resonance_order: u64,
    pub passed: bool,
    pub note: String,
}

/// Checks `f`, viewed as a map from a `source`-invariant domain to a
/// `target`-invariant one, against the degree theorem's necessary conditions.
pub fn check_compliance(
    f: &PolyMap,
    source: &WeightMatrix,
    target: &WeightMatrix,
) -> Result<ComplianceReport> {
    if f.n() != source.n() {
        return Err(Error::DimensionMismatch {
            context: "map size vs source weight matrix",
            expected: source.n(),
            found: f.n(),
        });
    }
    let qr = quasi_resonance(source, target)?;

    let origin_offenders: Vec<usize> = f
        .components()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.constant_term().is_zero())
        .map(|(i, _)| i)
        .collect();

    let determinant = f.jacobian_det()?;
    let value = determinant.as_constant();
    let jacobian = JacobianCheck {
        constant: value.is_some(),
        nonzero: !determinant.is_zero(),
        value,
        determinant,
    };

    let components: Vec<ComponentCheck> = f
        .components()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let offending: Vec<OffendingMonomial> = p
                .terms()
                .map(|(e, _)| (e, source.character_of(e)))
                .filter(|(_, k)| !qr.contains(i, k))
                .map(|(e, k)| OffendingMonomial {
                    exponent: e.clone(),
                    character: k,
                })
                .collect();
            let degree = p.degree();
            let bound = qr.orders[i];
            let degree_ok = degree.at_most(bound);
            ComponentCheck {
                index: i,
                degree,
                bound,
                degree_ok,
                passed: degree_ok && offending.is_empty(),
                offending,
            }
        })
        .collect();

    let passed = origin_offenders.is_empty()
        && jacobian.constant
        && jacobian.nonzero
        && components.iter().all(|c| c.passed);
    Ok(ComplianceReport {
        origin_fixed: origin_offenders.is_empty(),
        origin_offenders,
        jacobian,
        components,
        quasi_resonance_order: qr.order,
        passed,
        note: COMPLIANCE_NOTE.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(m: &[i64]) -> WeightMatrix {
        WeightMatrix::from_weights(m).unwrap()
    }

    #[test]
    fn shear_five_attains_bound() {
        let r = check_compliance(&PolyMap::shear(5), &w(&[1, 1]), &w(&[1, 5])).unwrap();
        assert!(r.passed);
        assert_eq!(r.components[1].degree, Degree::Finite(5));
        assert_eq!(r.components[1].bound, 5);
        assert_eq!(r.jacobian.value, Some(GaussianRational::one()));
    }

    #[test]
    fn identity_passes() {
        for a in [w(&[1, 2]), w(&[2, 3]), WeightMatrix::identity(2)] {
            assert!(
                check_compliance(&PolyMap::identity(2), &a, &a)
                    .unwrap()
                    .passed
            );
        }
    }

    #[test]
    fn circular_nonlinear_map_fails() {
        let z1 = Polynomial::var(2, 0);
        let z2 = Polynomial::var(2, 1);
        let f = PolyMap::new(vec![&z1 + &z2.pow(2), z2]).unwrap();
        let r = check_compliance(&f, &w(&[1, 1]), &w(&[1, 1])).unwrap();
        assert!(!r.passed);
        assert!(r.jacobian.constant);
        let c = &r.components[0];
        assert_eq!(
            c.offending,
            vec![OffendingMonomial {
                exponent: MultiIndex::new(vec![0, 2]),
                character: Character::from([2]),
            }]
        );
        assert!(!c.degree_ok);
        assert!(r.components[1].passed);
    }

    #[test]
    fn translation_does_not_fix_origin() {
        let f = PolyMap::new(vec![
            &Polynomial::var(2, 0) + &Polynomial::one(2),
            Polynomial::var(2, 1),
        ])
        .unwrap();
        let r = check_compliance(&f, &w(&[1, 1]), &w(&[1, 1])).unwrap();
        assert!(!r.origin_fixed);
        assert_eq!(r.origin_offenders, vec![0]);
        assert!(!r.passed);
    }

    #[test]
    fn singular_map_fails_jacobian() {
        let f = PolyMap::new(vec![Polynomial::var(2, 0), Polynomial::zero(2)]).unwrap();
        let r = check_compliance(&f, &w(&[1, 1]), &w(&[1, 1])).unwrap();
        assert!(r.jacobian.constant && !r.jacobian.nonzero);
        assert!(!r.passed);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(check_compliance(&PolyMap::identity(3), &w(&[1, 1]), &w(&[1, 1])).is_err());
    }
}
