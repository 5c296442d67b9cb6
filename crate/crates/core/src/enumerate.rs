//! Monomial bases of weight spaces.
//!
//! `V_k` is spanned by the monomials `z^α` with `αᵀA = k`. For an admissible
//! action with positive functional `λ` every such `α` satisfies
//! `Σ α_i (a_i·λ) = k·λ` with all `a_i·λ ≥ 1`, so `α_i ≤ ⌊k·λ / a_i·λ⌋` and the
//! solution set is finite. The enumerator walks coordinates in index order,
//! spending the budget `k·λ`, and solves the last coordinate directly.
//!
//! Arithmetic runs on `i128` with overflow checks and silently reruns on
//! `BigInt` if any intermediate leaves that range, so results are exact for
//! every input. Exponents are `u32`; a solution needing more is reported as
//! [`Error::Overflow`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::admissibility::positive_functional;
use crate::error::{Error, Result};
use crate::weights::{Character, MultiIndex, WeightMatrix};

/// The finite monomial basis of `V_k` together with its degree extremes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpace {
    pub character: Character,
    /// All `α` with `αᵀA = k`, in lexicographic order.
    pub basis: Vec<MultiIndex>,
    /// `d_k`, the least degree of a monomial in `V_k`.
    pub min_degree: u64,
    /// `D_k`, the greatest degree of a monomial in `V_k`.
    pub max_degree: u64,
}

impl WeightSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Reusable enumerator for one admissible matrix; computes `λ` once.
#[derive(Clone, Debug)]
pub struct WeightSpaceEnumerator {
    matrix: WeightMatrix,
    /// `λ` scaled to integers.
    functional: Vec<BigInt>,
    /// `a_i · functional`, all positive.
    row_weights: Vec<BigInt>,
}

impl WeightSpaceEnumerator {
    pub fn new(matrix: &WeightMatrix) -> Result<Self> {
        let lambda = positive_functional(matrix)?;
        let den = lambda
            .iter()
            .fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
        let functional: Vec<BigInt> = lambda.iter().map(|l| (l * &den).to_integer()).collect();
        let row_weights = matrix
            .rows()
            .iter()
            .map(|row| dot_i64(row, &functional))
            .collect();
        Ok(WeightSpaceEnumerator {
            matrix: matrix.clone(),
            functional,
            row_weights,
        })
    }

    pub fn matrix(&self) -> &WeightMatrix {
        &self.matrix
    }

    /// The solution set of `αᵀA = k`, or `None` when it is empty.
    pub fn enumerate(&self, k: &Character) -> Result<Option<WeightSpace>> {
        if k.rank() != self.matrix.r() {
            return Err(Error::DimensionMismatch {
                context: "character length",
                expected: self.matrix.r(),
                found: k.rank(),
            });
        }
        let basis = match self.solve::<i128>(k) {
            Ok(b) => b,
            Err(Fail::Retry) => match self.solve::<BigInt>(k) {
                Ok(b) => b,
                Err(Fail::Retry) => unreachable!("BigInt arithmetic cannot overflow"),
                Err(Fail::Hard(e)) => return Err(e),
            },
            Err(Fail::Hard(e)) => return Err(e),
        };
        if basis.is_empty() {
            return Ok(None);
        }
        let degrees = basis.iter().map(MultiIndex::degree);
        let min_degree = degrees.clone().min().unwrap_or(0);
        let max_degree = degrees.max().unwrap_or(0);
        Ok(Some(WeightSpace {
            character: k.clone(),
            basis,
            min_degree,
            max_degree,
        }))
    }

    /// `(d_k, D_k)`, or `None` when `V_k = 0`.
    pub fn degree_extremes(&self, k: &Character) -> Result<Option<(u64, u64)>> {
        Ok(self.enumerate(k)?.map(|w| (w.min_degree, w.max_degree)))
    }

    fn solve<T: ExactInt>(&self, k: &Character) -> Result<Vec<MultiIndex>, Fail> {
        let conv = |v: &BigInt| T::from_bigint(v).ok_or(Fail::Retry);
        let rows: Vec<Vec<T>> = self
            .matrix
            .rows()
            .iter()
            .map(|row| row.iter().map(|&a| T::from_i64(a)).collect())
            .collect();
        let weights: Vec<T> = self
            .row_weights
            .iter()
            .map(conv)
            .collect::<Result<_, _>>()?;
        let mut residual: Vec<T> = k.components().iter().map(conv).collect::<Result<_, _>>()?;
        let budget = conv(&dot_big(k.components(), &self.functional))?;
        let mut out = Vec::new();
        if budget < T::zero() {
            return Ok(out);
        }
        let mut search = Search {
            rows: &rows,
            weights: &weights,
            alpha: vec![0; rows.len()],
            out: &mut out,
        };
        search.descend(0, &mut residual, budget)?;
        Ok(out)
    }
}

/// Enumerates the monomial basis of `V_k`; `None` when the space is zero.
pub fn enumerate_weight_space(a: &WeightMatrix, k: &Character) -> Result<Option<WeightSpace>> {
    WeightSpaceEnumerator::new(a)?.enumerate(k)
}

/// `(d_k, D_k)` for the weight space `V_k`; `None` when the space is zero.
pub fn degree_extremes(a: &WeightMatrix, k: &Character) -> Result<Option<(u64, u64)>> {
    WeightSpaceEnumerator::new(a)?.degree_extremes(k)
}

fn dot_i64(row: &[i64], v: &[BigInt]) -> BigInt {
    row.iter().zip(v).map(|(&a, x)| x * a).sum()
}

fn dot_big(k: &[BigInt], v: &[BigInt]) -> BigInt {
    k.iter().zip(v).map(|(a, x)| a * x).sum()
}

enum Fail {
    /// Fixed-width arithmetic left its range.
    Retry,
    Hard(Error),
}

struct Search<'a, T> {
    rows: &'a [Vec<T>],
    weights: &'a [T],
    alpha: Vec<u32>,
    out: &'a mut Vec<MultiIndex>,
}

impl<T: ExactInt> Search<'_, T> {
    fn descend(&mut self, i: usize, residual: &mut [T], budget: T) -> Result<(), Fail> {
        let n = self.rows.len();
        if budget.is_zero() {
            // Every remaining row has positive weight, so the rest of α is zero.
            if residual.iter().all(ExactInt::is_zero) {
                self.emit(i);
            }
            return Ok(());
        }
        let w = &self.weights[i];
        let (q, rem) = budget.div_rem(w);
        if i + 1 == n {
            if !rem.is_zero() {
                return Ok(());
            }
            let row = &self.rows[i];
            for (x, a) in residual.iter().zip(row) {
                if a.checked_mul(&q).ok_or(Fail::Retry)? != *x {
                    return Ok(());
                }
            }
            self.alpha[i] = to_exponent(&q)?;
            self.emit(n);
            self.alpha[i] = 0;
            return Ok(());
        }
        let max = to_exponent(&q)?;
        let mut budget = budget;
        let mut steps = 0u32;
        loop {
            self.alpha[i] = steps;
            self.descend(i + 1, residual, budget.clone())?;
            if steps == max {
                break;
            }
            steps += 1;
            budget = budget.checked_sub(w).ok_or(Fail::Retry)?;
            for (x, a) in residual.iter_mut().zip(&self.rows[i]) {
                *x = x.checked_sub(a).ok_or(Fail::Retry)?;
            }
        }
        // Undo the `steps` subtractions of row i.
        let total = T::from_i64(i64::from(steps));
        for (x, a) in residual.iter_mut().zip(&self.rows[i]) {
            let back = a.checked_mul(&total).ok_or(Fail::Retry)?;
            *x = x.checked_add(&back).ok_or(Fail::Retry)?;
        }
        self.alpha[i] = 0;
        Ok(())
    }

    fn emit(&mut self, filled: usize) {
        let mut alpha = self.alpha.clone();
        alpha[filled..].iter_mut().for_each(|a| *a = 0);
        self.out.push(MultiIndex::new(alpha));
    }
}

fn to_exponent<T: ExactInt>(q: &T) -> Result<u32, Fail> {
    q.to_u32()
        .ok_or(Fail::Hard(Error::Overflow("weight-space exponent bound")))
}

/// Integer arithmetic used by the enumerator: checked on fixed-width types,
/// infallible on `BigInt`.
trait ExactInt: Clone + Ord + Debug {
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    /// Floor division by a positive divisor; operands are nonnegative here.
    fn div_rem(&self, o: &Self) -> (Self, Self);
    fn to_u32(&self) -> Option<u32>;
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Self {
        i128::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i128::checked_add(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i128::checked_sub(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i128::checked_mul(*self, *o)
    }
    fn div_rem(&self, o: &Self) -> (Self, Self) {
        (self.div_euclid(*o), self.rem_euclid(*o))
    }
    fn to_u32(&self) -> Option<u32> {
        u32::try_from(*self).ok()
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_rem(&self, o: &Self) -> (Self, Self) {
        self.div_mod_floor(o)
    }
    fn to_u32(&self) -> Option<u32> {
        ToPrimitive::to_u32(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::box_scan;

    fn m(rows: &[&[i64]]) -> WeightMatrix {
        WeightMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn weights_one_two_character_two() {
        let a = m(&[&[1], &[2]]);
        let w = enumerate_weight_space(&a, &Character::from([2]))
            .unwrap()
            .unwrap();
        assert_eq!(w.basis, vec![mi(&[0, 1]), mi(&[2, 0])]);
        assert_eq!((w.min_degree, w.max_degree), (1, 2));
        assert_eq!(w.basis, box_scan(&a, &Character::from([2])).unwrap());
    }

    #[test]
    fn zero_character_is_constants() {
        let a = m(&[&[1], &[2]]);
        let w = enumerate_weight_space(&a, &Character::from([0]))
            .unwrap()
            .unwrap();
        assert_eq!(w.basis, vec![mi(&[0, 0])]);
        assert_eq!((w.min_degree, w.max_degree), (0, 0));
    }

    #[test]
    fn rank_two_character() {
        let a = m(&[&[1, 0], &[1, 1], &[1, -1]]);
        let k = Character::from([2, 0]);
        let w = enumerate_weight_space(&a, &k).unwrap().unwrap();
        assert_eq!(w.basis, vec![mi(&[0, 1, 1]), mi(&[2, 0, 0])]);
        assert_eq!((w.min_degree, w.max_degree), (2, 2));
        assert_eq!(w.basis, box_scan(&a, &k).unwrap());
    }

    #[test]
    fn negative_character_is_empty() {
        let a = m(&[&[1], &[2]]);
        assert_eq!(
            enumerate_weight_space(&a, &Character::from([-1])).unwrap(),
            None
        );
        assert_eq!(degree_extremes(&a, &Character::from([-1])).unwrap(), None);
    }

    #[test]
    fn degree_extreme_examples() {
        let a = m(&[&[1], &[2]]);
        assert_eq!(
            degree_extremes(&a, &Character::from([3])).unwrap(),
            Some((2, 3))
        );
        assert_eq!(
            degree_extremes(&a, &Character::from([0])).unwrap(),
            Some((0, 0))
        );
        let b = m(&[&[1], &[3]]);
        assert_eq!(
            degree_extremes(&b, &Character::from([9])).unwrap(),
            Some((3, 9))
        );
        let w = enumerate_weight_space(&b, &Character::from([9]))
            .unwrap()
            .unwrap();
        assert!(w.basis.contains(&mi(&[0, 3])) && w.basis.contains(&mi(&[9, 0])));
    }

    #[test]
    fn inadmissible_matrix_is_rejected() {
        let a = m(&[&[1], &[-1]]);
        assert!(matches!(
            enumerate_weight_space(&a, &Character::from([0])),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn character_length_is_checked() {
        let a = m(&[&[1], &[2]]);
        assert!(matches!(
            enumerate_weight_space(&a, &Character::from([1, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let a = m(&[&[1], &[1]]);
        let k = Character::new(vec![BigInt::from(u32::MAX) + 1]);
        assert_eq!(
            enumerate_weight_space(&a, &k),
            Err(Error::Overflow("weight-space exponent bound"))
        );
    }

    #[test]
    fn large_values_fall_back_to_bigint() {
        let a = m(&[&[1, 0], &[0, 1]]);
        // The budget overflows i128; the BigInt retry then finds exponents
        // beyond u32.
        let huge = BigInt::from(1u8) << 130;
        assert_eq!(
            enumerate_weight_space(&a, &Character::new(vec![huge, BigInt::from(1)])),
            Err(Error::Overflow("weight-space exponent bound"))
        );
        let big = i64::MAX;
        let b = m(&[&[big, 1], &[big, 2]]);
        let k = Character::new(vec![BigInt::from(big) * 3, BigInt::from(4)]);
        let w = enumerate_weight_space(&b, &k).unwrap().unwrap();
        assert_eq!(w.basis, vec![mi(&[2, 1])]);
    }

    #[test]
    fn mixed_sign_rank_two() {
        let a = m(&[&[1, -1], &[1, 1], &[0, 1]]);
        let k = Character::from([2, 1]);
        let got = enumerate_weight_space(&a, &k)
            .unwrap()
            .map(|w| w.basis)
            .unwrap_or_default();
        assert_eq!(got, box_scan(&a, &k).unwrap());
        for alpha in &got {
            assert_eq!(a.character_of(alpha), k);
        }
    }
}
