//! Weight matrices, exponent vectors and torus characters.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::serde_util::bigint_vec;

/// Exponent vector `α ∈ ℕⁿ` of the monomial `z^α`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The exponent vector of `z_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn into_exponents(self) -> Vec<u32> {
        self.0
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&a| u64::from(a)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise sum, failing on exponent overflow.
    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                a.checked_add(*b)
                    .ok_or(Error::Overflow("exponent addition"))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All exponent vectors in `n` variables with `|α| ≤ max_degree`, in
    /// lexicographic order.
    pub fn all_up_to_degree(n: usize, max_degree: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() == n {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(n, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_degree, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Torus character `k ∈ ℤʳ`, i.e. `λ ↦ λᵏ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character(Vec<BigInt>);

impl Character {
    pub fn new(components: Vec<BigInt>) -> Self {
        Character(components)
    }

    pub fn zero(r: usize) -> Self {
        Character(vec![BigInt::zero(); r])
    }

    pub fn components(&self) -> &[BigInt] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl From<Vec<i64>> for Character {
    fn from(v: Vec<i64>) -> Self {
        Character(v.into_iter().map(BigInt::from).collect())
    }
}

impl<const R: usize> From<[i64; R]> for Character {
    fn from(v: [i64; R]) -> Self {
        Character(v.into_iter().map(BigInt::from).collect())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        bigint_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        bigint_vec::deserialize(d).map(Character)
    }
}

/// The `n × r` integer matrix `A` whose row `a_i` is the weight of `z_i`.
///
/// Construction checks shape only. Whether the action is admissible is a
/// separate question, answered by [`crate::check_admissible`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightMatrix", into = "RawWeightMatrix")]
pub struct WeightMatrix {
    rows: Vec<Vec<i64>>,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct RawWeightMatrix {
    rows: Vec<Vec<i64>>,
}

impl TryFrom<RawWeightMatrix> for WeightMatrix {
    type Error = Error;

    fn try_from(raw: RawWeightMatrix) -> Result<Self> {
        WeightMatrix::new(raw.rows)
    }
}

impl From<WeightMatrix> for RawWeightMatrix {
    fn from(m: WeightMatrix) -> Self {
        RawWeightMatrix { rows: m.rows }
    }
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyMatrix)?;
        let r = first.len();
        if r == 0 {
            return Err(Error::ZeroRank);
        }
        if let Some((row, bad)) = rows.iter().enumerate().find(|(_, row)| row.len() != r) {
            return Err(Error::RaggedRows {
                row,
                expected: r,
                found: bad.len(),
            });
        }
        Ok(WeightMatrix { rows, rank: r })
    }

    /// Rank-one action with weights `m_i`, i.e. a quasi-circular action.
    pub fn from_weights(weights: &[i64]) -> Result<Self> {
        Self::new(weights.iter().map(|&m| vec![m]).collect())
    }

    /// The standard action of `Tⁿ` on ℂⁿ (Reinhardt domains).
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        WeightMatrix { rows, rank: n }
    }

    /// Number of coordinates `n`.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Torus rank `r`.
    pub fn r(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i]
    }

    /// The character `a_i` of the coordinate function `z_i`.
    pub fn row_character(&self, i: usize) -> Character {
        Character(self.rows[i].iter().map(|&a| BigInt::from(a)).collect())
    }

    /// The character `αᵀA` of the monomial `z^α`.
    pub fn character_of(&self, alpha: &MultiIndex) -> Character {
        debug_assert_eq!(alpha.len(), self.n());
        let mut k = vec![BigInt::zero(); self.rank];
        for (a, row) in alpha.exponents().iter().zip(&self.rows) {
            if *a == 0 {
                continue;
            }
            let a = BigInt::from(*a);
            for (kj, &w) in k.iter_mut().zip(row) {
                *kj += &a * w;
            }
        }
        Character(k)
    }

    /// Rank of `A` over ℚ, by exact Gaussian elimination.
    pub fn rational_rank(&self) -> usize {
        let mut m: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&a| BigRational::from_integer(a.into()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.rank {
            let Some(pivot) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = BigRational::one() / &m[rank][col];
            for i in rank + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let factor = &m[i][col] * &inv;
                let (top, bottom) = m.split_at_mut(i);
                for (x, p) in bottom[0][col..].iter_mut().zip(&top[rank][col..]) {
                    *x -= &factor * p;
                }
            }
            rank += 1;
        }
        rank
    }

    pub(crate) fn check_same_n(&self, other: &WeightMatrix, context: &'static str) -> Result<()> {
        other.check_same_n_as(self.n(), context)
    }

    /// Errors unless the matrix has `n` rows.
    pub(crate) fn check_same_n_as(&self, n: usize, context: &'static str) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                context,
                expected: n,
                found: self.n(),
            });
        }
        Ok(())
    }
}

/// Non-fatal observations about a weight matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "warning", rename_all = "kebab-case")]
pub enum WeightWarning {
    /// `rank A < r`. Every invariant depends only on `α ↦ αᵀA`, so the
    /// computation proceeds unchanged.
    RankDeficient { rank: usize, r: usize },
    /// Rows `first` and `second` carry the same weight.
    DuplicateRows { first: usize, second: usize },
}

impl fmt::Display for WeightWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightWarning::RankDeficient { rank, r } => {
                write!(f, "weight matrix has rank {rank} < r = {r}")
            }
            WeightWarning::DuplicateRows { first, second } => {
                write!(f, "rows {first} and {second} are equal")
            }
        }
    }
}

/// Builds a [`WeightMatrix`] and reports rank deficiency and repeated rows.
pub fn validate_weight_matrix(rows: Vec<Vec<i64>>) -> Result<(WeightMatrix, Vec<WeightWarning>)> {
    let m = WeightMatrix::new(rows)?;
    let mut warnings = Vec::new();
    let rank = m.rational_rank();
    if rank < m.r() {
        warnings.push(WeightWarning::RankDeficient { rank, r: m.r() });
    }
    for i in 0..m.n() {
        for j in i + 1..m.n() {
            if m.rows[i] == m.rows[j] {
                warnings.push(WeightWarning::DuplicateRows {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok((m, warnings))
}
