//! Deciding whether an action has only constant invariant functions.
//!
//! The action with weights `a_1, …, a_n` has a non-constant invariant
//! polynomial iff some monomial `z^α` with `α ≠ 0` has character zero, i.e.
//! `Σ α_i a_i = 0` for a nonzero `α ∈ ℕⁿ`. By Gordan's alternative this fails
//! iff there is a functional `λ ∈ ℚʳ` with `a_i · λ > 0` for every `i`, and
//! after scaling `a_i · λ ≥ 1`.
//!
//! Feasibility of `{a_i · λ ≥ 1}` is decided by Fourier–Motzkin elimination
//! over the rationals. Every derived inequality carries the nonnegative
//! combination of input rows that produced it, so an infeasible system yields
//! the witness `α` directly and a feasible one yields `λ` by back-substitution.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_util::option_rational_vec;
use crate::weights::{MultiIndex, WeightMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Admissible,
    Inadmissible,
}

/// Two-sided certificate for admissibility.
///
/// Exactly one of `positive_functional` and `witness` is present, matching
/// `verdict`. Both can be re-checked with exact dot products via
/// [`AdmissibilityCertificate::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityCertificate {
    pub verdict: Verdict,
    #[serde(with = "option_rational_vec")]
    pub positive_functional: Option<Vec<BigRational>>,
    pub witness: Option<MultiIndex>,
}

impl AdmissibilityCertificate {
    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }

    /// Re-verifies the certificate against `a` with exact arithmetic.
    pub fn verify(&self, a: &WeightMatrix) -> bool {
        match (self.verdict, &self.positive_functional, &self.witness) {
            (Verdict::Admissible, Some(lambda), None) => verify_functional(a, lambda),
            (Verdict::Inadmissible, None, Some(alpha)) => verify_witness(a, alpha),
            _ => false,
        }
    }
}

/// `a_i · λ ≥ 1` for every row.
pub fn verify_functional(a: &WeightMatrix, lambda: &[BigRational]) -> bool {
    lambda.len() == a.r() && (0..a.n()).all(|i| row_dot(a.row(i), lambda) >= BigRational::one())
}

/// `α ≠ 0` and `Σ α_i a_i = 0`.
pub fn verify_witness(a: &WeightMatrix, alpha: &MultiIndex) -> bool {
    alpha.len() == a.n() && !alpha.is_zero() && a.character_of(alpha).is_zero()
}

pub(crate) fn row_dot(row: &[i64], lambda: &[BigRational]) -> BigRational {
    row.iter()
        .zip(lambda)
        .fold(BigRational::zero(), |acc, (&a, l)| {
            acc + l * BigInt::from(a)
        })
}

/// Decides admissibility of `a` and returns a certificate for the answer.
pub fn check_admissible(a: &WeightMatrix) -> Result<AdmissibilityCertificate> {
    match solve(a)? {
        Outcome::Feasible(lambda) => Ok(AdmissibilityCertificate {
            verdict: Verdict::Admissible,
            positive_functional: Some(lambda),
            witness: None,
        }),
        Outcome::Infeasible(alpha) => Ok(AdmissibilityCertificate {
            verdict: Verdict::Inadmissible,
            positive_functional: None,
            witness: Some(alpha),
        }),
    }
}

/// A rational `λ` with `a_i · λ ≥ 1` for all `i`.
///
/// Deterministic: each coordinate of `λ` is the point closest to zero in its
/// feasible interval, chosen in the order `λ_1, λ_2, …`.
pub fn positive_functional(a: &WeightMatrix) -> Result<Vec<BigRational>> {
    match solve(a)? {
        Outcome::Feasible(lambda) => Ok(lambda),
        Outcome::Infeasible(witness) => Err(Error::Inadmissible { witness }),
    }
}

enum Outcome {
    Feasible(Vec<BigRational>),
    Infeasible(MultiIndex),
}

/// `coeffs · λ ≥ rhs`, obtained as `Σ_i mult_i · (a_i · λ ≥ 1)`.
#[derive(Clone, Debug)]
struct Inequality {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
    mult: Vec<BigRational>,
}

impl Inequality {
    fn scaled(&self, s: &BigRational) -> Inequality {
        Inequality {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            rhs: &self.rhs * s,
            mult: self.mult.iter().map(|m| m * s).collect(),
        }
    }

    fn add(&self, other: &Inequality) -> Inequality {
        let zip = |x: &[BigRational], y: &[BigRational]| -> Vec<BigRational> {
            x.iter().zip(y).map(|(a, b)| a + b).collect()
        };
        Inequality {
            coeffs: zip(&self.coeffs, &other.coeffs),
            rhs: &self.rhs + &other.rhs,
            mult: zip(&self.mult, &other.mult),
        }
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(self) -> Inequality {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) if !c.abs().is_one() => {
                let s = BigRational::one() / c.abs();
                self.scaled(&s)
            }
            _ => self,
        }
    }
}

/// Keeps, for every coefficient vector, the inequality with the largest
/// right-hand side; drops trivially true `0 ≥ rhs ≤ 0` rows. Output order is
/// the lexicographic order of coefficient vectors.
fn prune(system: Vec<Inequality>) -> Vec<Inequality> {
    let mut best: BTreeMap<Vec<BigRational>, Inequality> = BTreeMap::new();
    for ineq in system {
        let ineq = ineq.normalized();
        if ineq.coeffs.iter().all(Zero::is_zero) && !ineq.rhs.is_positive() {
            continue;
        }
        match best.get(&ineq.coeffs) {
            Some(prev) if prev.rhs >= ineq.rhs => {}
            _ => {
                best.insert(ineq.coeffs.clone(), ineq);
            }
        }
    }
    best.into_values().collect()
}

fn solve(a: &WeightMatrix) -> Result<Outcome> {
    let (n, r) = (a.n(), a.r());
    let initial: Vec<Inequality> = (0..n)
        .map(|i| {
            let mut mult = vec![BigRational::zero(); n];
            mult[i] = BigRational::one();
            Inequality {
                coeffs: a
                    .row(i)
                    .iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect(),
                rhs: BigRational::one(),
                mult,
            }
        })
        .collect();

    // stages[j] holds the system in variables λ_0..=λ_j, before λ_j is eliminated.
    let mut stages: Vec<Vec<Inequality>> = vec![Vec::new(); r];
    let mut system = prune(initial);
    for j in (0..r).rev() {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut next = Vec::new();
        for ineq in &system {
            if ineq.coeffs[j].is_positive() {
                lower.push(ineq);
            } else if ineq.coeffs[j].is_negative() {
                upper.push(ineq);
            } else {
                next.push(ineq.clone());
            }
        }
        for p in &lower {
            for q in &upper {
                let combined = p.scaled(&-&q.coeffs[j]).add(&q.scaled(&p.coeffs[j]));
                debug_assert!(combined.coeffs[j].is_zero());
                next.push(combined);
            }
        }
        stages[j] = std::mem::replace(&mut system, prune(next));
    }

    // Only `0 ≥ rhs` with rhs > 0 can survive pruning with all-zero coefficients.
    if let Some(contradiction) = system.first() {
        debug_assert!(contradiction.coeffs.iter().all(Zero::is_zero));
        return integer_witness(&contradiction.mult).map(Outcome::Infeasible);
    }

    let mut lambda: Vec<BigRational> = Vec::with_capacity(r);
    for (j, stage) in stages.iter().enumerate() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for ineq in stage {
            let c = &ineq.coeffs[j];
            if c.is_zero() {
                continue;
            }
            let known: BigRational = ineq.coeffs[..j]
                .iter()
                .zip(&lambda)
                .fold(BigRational::zero(), |acc, (c, l)| acc + c * l);
            let bound = (&ineq.rhs - known) / c;
            if c.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        let value = match (&lo, &hi) {
            (Some(l), _) if l.is_positive() => l.clone(),
            (_, Some(h)) if h.is_negative() => h.clone(),
            _ => BigRational::zero(),
        };
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return Err(Error::InvariantViolation(format!(
                    "empty interval [{l}, {h}] for λ_{j} during back-substitution"
                )));
            }
        }
        lambda.push(value);
    }

    if !verify_functional(a, &lambda) {
        return Err(Error::InvariantViolation(
            "back-substituted functional fails a_i·λ ≥ 1".into(),
        ));
    }
    Ok(Outcome::Feasible(lambda))
}

/// Clears denominators of a nonnegative rational combination and divides by
/// the gcd, giving the primitive integer witness.
fn integer_witness(mult: &[BigRational]) -> Result<MultiIndex> {
    let lcm = mult.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
    let ints: Vec<BigInt> = mult.iter().map(|m| (m * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(Error::InvariantViolation("zero Farkas combination".into()));
    }
    ints.iter()
        .map(|x| (x / &g).to_u32().ok_or(Error::Overflow("witness exponent")))
        .collect::<Result<Vec<_>>>()
        .map(MultiIndex::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn m(rows: &[&[i64]]) -> WeightMatrix {
        WeightMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn positive_weights_take_lambda_one() {
        let c = check_admissible(&m(&[&[1], &[2]])).unwrap();
        assert!(c.is_admissible());
        assert_eq!(c.positive_functional, Some(vec![q(1, 1)]));
        assert!(c.verify(&m(&[&[1], &[2]])));
    }

    #[test]
    fn opposite_weights_give_invariant_monomial() {
        let a = m(&[&[1], &[-1]]);
        let c = check_admissible(&a).unwrap();
        assert_eq!(c.verdict, Verdict::Inadmissible);
        assert_eq!(c.witness, Some(MultiIndex::new(vec![1, 1])));
        assert!(c.verify(&a));
    }

    #[test]
    fn brute_force_agrees_on_opposite_weights() {
        // Scan |α| ≤ 4 for invariant monomials; the only primitive one is z₁z₂.
        let a = m(&[&[1], &[-1]]);
        let found: Vec<_> = MultiIndex::all_up_to_degree(2, 4)
            .into_iter()
            .filter(|al| !al.is_zero() && a.character_of(al).is_zero())
            .collect();
        assert_eq!(found.first(), Some(&MultiIndex::new(vec![1, 1])));
        assert!(found
            .iter()
            .all(|al| al.exponents()[0] == al.exponents()[1]));
    }

    #[test]
    fn rank_two_example() {
        let a = m(&[&[1, 0], &[1, 1], &[1, -1]]);
        let lambda = positive_functional(&a).unwrap();
        assert_eq!(lambda, vec![q(1, 1), q(0, 1)]);
        let dots: Vec<_> = (0..3).map(|i| row_dot(a.row(i), &lambda)).collect();
        assert_eq!(dots, vec![q(1, 1); 3]);
    }

    #[test]
    fn minimal_normalized_lambda() {
        assert_eq!(
            positive_functional(&m(&[&[2], &[3]])).unwrap(),
            vec![q(1, 2)]
        );
        assert_eq!(
            positive_functional(&m(&[&[-2], &[-5]])).unwrap(),
            vec![q(-1, 2)]
        );
    }

    #[test]
    fn zero_row_is_its_own_witness() {
        let a = m(&[&[1, 2], &[0, 0]]);
        let c = check_admissible(&a).unwrap();
        assert_eq!(c.witness, Some(MultiIndex::new(vec![0, 1])));
    }

    #[test]
    fn witness_is_primitive() {
        // 2·(3) + 3·(-2) = 0
        let a = m(&[&[3], &[-2]]);
        let c = check_admissible(&a).unwrap();
        assert_eq!(c.witness, Some(MultiIndex::new(vec![2, 3])));
    }

    #[test]
    fn rank_two_inadmissible() {
        // (1,0) + (0,1) + (-1,-1) = 0
        let a = m(&[&[1, 0], &[0, 1], &[-1, -1], &[2, 1]]);
        let c = check_admissible(&a).unwrap();
        assert_eq!(c.verdict, Verdict::Inadmissible);
        assert!(c.verify(&a));
    }

    #[test]
    fn positive_functional_reports_inadmissibility() {
        let err = positive_functional(&m(&[&[1], &[-1]])).unwrap_err();
        assert_eq!(
            err,
            Error::Inadmissible {
                witness: MultiIndex::new(vec![1, 1])
            }
        );
    }

    #[test]
    fn tampered_certificates_fail() {
        let a = m(&[&[1], &[2]]);
        let mut c = check_admissible(&a).unwrap();
        c.positive_functional = Some(vec![q(1, 3)]);
        assert!(!c.verify(&a));
        c.witness = Some(MultiIndex::new(vec![1, 0]));
        assert!(!c.verify(&a));
    }

    #[test]
    fn certificate_json() {
        let c = check_admissible(&m(&[&[2], &[3]])).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"verdict":"admissible","positive_functional":["1/2"],"witness":null}"#
        );
        assert_eq!(
            serde_json::from_str::<AdmissibilityCertificate>(&s).unwrap(),
            c
        );
    }
}
