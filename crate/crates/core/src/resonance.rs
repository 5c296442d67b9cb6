//! Resonance and quasi-resonance invariants and the degree bounds they give.
//!
//! For an action `ρ` with weights `a_i`:
//!
//! * the `i`-th resonance set `E_i` is the monomial basis of `V_{a_i}` and
//!   the `i`-th resonance order is `μ_i = D_{a_i}`; `μ_ρ = max_i μ_i`;
//! * for a second action `ρ'` on the same ℂⁿ, the `i`-th quasi-resonance set
//!   `K_{iρ'}` is the set of characters `k` of `ρ` with `d_k ≤ μ'_i`, and the
//!   `i`-th quasi-resonance order is `ν_{iρ'} = max_{k ∈ K_{iρ'}} D_k`.
//!
//! An origin-fixing biholomorphism `f` between bounded domains invariant
//! under `ρ` and `ρ'` has `deg f_i ≤ ν_{iρ'}`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::enumerate::WeightSpaceEnumerator;
use crate::error::{Error, Result};
use crate::serde_util::{rational, rational_vec};
use crate::weights::{Character, MultiIndex, WeightMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceReport {
    /// `E_i`, the exponents `α` with `αᵀA = a_i`, per coordinate.
    pub resonance_sets: Vec<Vec<MultiIndex>>,
    /// `μ_i`.
    pub orders: Vec<u64>,
    /// `μ_ρ = max_i μ_i`.
    pub order: u64,
    /// Characters with `d_k = 1`, i.e. the distinct rows of `A`.
    pub linear_characters: Vec<Character>,
}

/// Resonance sets and orders of the action with weight matrix `a`.
pub fn resonance(a: &WeightMatrix) -> Result<ResonanceReport> {
    resonance_with(&WeightSpaceEnumerator::new(a)?)
}

pub(crate) fn resonance_with(en: &WeightSpaceEnumerator) -> Result<ResonanceReport> {
    let a = en.matrix();
    let mut resonance_sets = Vec::with_capacity(a.n());
    let mut orders = Vec::with_capacity(a.n());
    for i in 0..a.n() {
        let space = en.enumerate(&a.row_character(i))?.ok_or_else(|| {
            Error::InvariantViolation(format!("V_(a_{i}) is empty but contains z_{i}"))
        })?;
        if space.max_degree < 1 || space.min_degree != 1 {
            return Err(Error::InvariantViolation(format!(
                "coordinate {i}: d = {}, μ = {}",
                space.min_degree, space.max_degree
            )));
        }
        orders.push(space.max_degree);
        resonance_sets.push(space.basis);
    }
    let linear_characters: BTreeSet<Character> = (0..a.n()).map(|i| a.row_character(i)).collect();
    Ok(ResonanceReport {
        order: orders.iter().copied().max().unwrap_or(0),
        resonance_sets,
        orders,
        linear_characters: linear_characters.into_iter().collect(),
    })
}

/// Degree data of one weight space inside a quasi-resonance set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDegrees {
    pub character: Character,
    pub min_degree: u64,
    pub max_degree: u64,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiResonanceReport {
    pub source: WeightMatrix,
    pub target: WeightMatrix,
    /// `μ'_i`, the resonance orders of the target action.
    pub target_orders: Vec<u64>,
    /// `K_{iρ'}` per coordinate, characters in lexicographic order.
    pub sets: Vec<Vec<Character>>,
    /// `ν_{iρ'}`.
    pub orders: Vec<u64>,
    /// `ν_{ρρ'} = max_i ν_{iρ'}`.
    pub order: u64,
    /// Upper bounds for `deg f_i` of an origin-fixing biholomorphism; equal
    /// to `orders`.
    pub degree_bounds: Vec<u64>,
    /// Every character in `K_{ρρ'} = ∪_i K_{iρ'}` with `d_k`, `D_k`, `dim V_k`.
    pub spaces: Vec<CharacterDegrees>,
}

impl QuasiResonanceReport {
    /// Whether `k` lies in `K_{iρ'}`.
    pub fn contains(&self, i: usize, k: &Character) -> bool {
        self.sets[i].binary_search(k).is_ok()
    }
}

/// Quasi-resonance sets and orders of `source` (ρ) relative to `target` (ρ').
///
/// `K_{iρ'}` is materialized as `{αᵀA : |α| ≤ μ'_i}`: every character with
/// `d_k ≤ μ'_i` is realized by a monomial of degree `d_k`, and characters
/// with empty weight space never appear.
pub fn quasi_resonance(
    source: &WeightMatrix,
    target: &WeightMatrix,
) -> Result<QuasiResonanceReport> {
    source.check_same_n(target, "quasi-resonance source/target coordinate count")?;
    let en = WeightSpaceEnumerator::new(source)?;
    let target_orders = resonance(target)?.orders;
    quasi_resonance_with(&en, target, target_orders)
}

pub(crate) fn quasi_resonance_with(
    en: &WeightSpaceEnumerator,
    target: &WeightMatrix,
    target_orders: Vec<u64>,
) -> Result<QuasiResonanceReport> {
    let a = en.matrix();
    let reach = target_orders.iter().copied().max().unwrap_or(0);
    let reach = u32::try_from(reach).map_err(|_| Error::Overflow("target resonance order"))?;

    // Least degree at which each character is realized, up to `reach`.
    let mut least: BTreeMap<Character, u64> = BTreeMap::new();
    for alpha in MultiIndex::all_up_to_degree(a.n(), reach) {
        let d = alpha.degree();
        least
            .entry(a.character_of(&alpha))
            .and_modify(|e| *e = (*e).min(d))
            .or_insert(d);
    }

    let mut spaces = Vec::with_capacity(least.len());
    let mut top: BTreeMap<&Character, u64> = BTreeMap::new();
    for (k, &d) in &least {
        let space = en.enumerate(k)?.ok_or_else(|| {
            Error::InvariantViolation(format!("realized character {k} has empty weight space"))
        })?;
        if space.min_degree != d {
            return Err(Error::InvariantViolation(format!(
                "character {k}: enumerated d = {} but realized at degree {d}",
                space.min_degree
            )));
        }
        top.insert(k, space.max_degree);
        spaces.push(CharacterDegrees {
            character: k.clone(),
            min_degree: space.min_degree,
            max_degree: space.max_degree,
            dimension: space.dimension(),
        });
    }

    let mut sets = Vec::with_capacity(a.n());
    let mut orders = Vec::with_capacity(a.n());
    for &mu in &target_orders {
        let set: Vec<Character> = least
            .iter()
            .filter(|(_, &d)| d <= mu)
            .map(|(k, _)| k.clone())
            .collect();
        let nu = set.iter().map(|k| top[k]).max().unwrap_or(0);
        sets.push(set);
        orders.push(nu);
    }

    Ok(QuasiResonanceReport {
        source: a.clone(),
        target: target.clone(),
        target_orders,
        sets,
        order: orders.iter().copied().max().unwrap_or(0),
        degree_bounds: orders.clone(),
        orders,
        spaces,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanVerdict {
    pub linear: bool,
    pub source_order: u64,
    pub target_order: u64,
    pub quasi_resonance_order: u64,
    pub explanation: String,
}

/// Whether every origin-fixing biholomorphism between bounded domains
/// invariant under `source` and `target` must be linear, i.e. whether both
/// resonance orders equal one.
pub fn is_cartan_linear(source: &WeightMatrix, target: &WeightMatrix) -> Result<CartanVerdict> {
    source.check_same_n(target, "Cartan check source/target coordinate count")?;
    let en = WeightSpaceEnumerator::new(source)?;
    let mu = resonance_with(&en)?.order;
    let target_res = resonance(target)?;
    let mu_prime = target_res.order;
    let nu = quasi_resonance_with(&en, target, target_res.orders)?.order;
    let linear = mu == 1 && mu_prime == 1;
    if linear && nu != 1 {
        return Err(Error::InvariantViolation(format!(
            "μ_ρ = μ_ρ' = 1 but ν_ρρ' = {nu}"
        )));
    }
    let explanation = if linear {
        "both resonance orders equal 1, hence the quasi-resonance order is 1 and every \
         origin-fixing biholomorphism is linear"
            .to_string()
    } else {
        format!("resonance orders are μ_ρ = {mu}, μ_ρ' = {mu_prime}; degree bound is ν_ρρ' = {nu}")
    };
    Ok(CartanVerdict {
        linear,
        source_order: mu,
        target_order: mu_prime,
        quasi_resonance_order: nu,
        explanation,
    })
}

/// Stable ascending sort order: `perm[j]` is the input index of the `j`-th
/// smallest key.
fn sort_permutation<K: Ord + Copy>(keys: &[K]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..keys.len()).collect();
    perm.sort_by_key(|&i| keys[i]);
    perm
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiCircularBoundReport {
    pub source_weights: Vec<i64>,
    pub target_weights: Vec<i64>,
    pub source_permutation: Vec<usize>,
    pub target_permutation: Vec<usize>,
    /// `(m_n m'_n)/(m_1 m'_1)` with weights sorted ascending.
    #[serde(with = "rational")]
    pub coarse_bound: BigRational,
    /// `⌊coarse_bound⌋`, the bound as a polynomial degree.
    pub coarse_degree: u64,
    pub exact_orders: Vec<u64>,
    pub exact_order: u64,
}

/// Coarse degree bound for biholomorphisms between quasi-circular domains
/// next to the exact quasi-resonance order.
pub fn quasi_circular_bound(m: &[i64], m_prime: &[i64]) -> Result<QuasiCircularBoundReport> {
    if m.len() != m_prime.len() {
        return Err(Error::DimensionMismatch {
            context: "quasi-circular weight vectors",
            expected: m.len(),
            found: m_prime.len(),
        });
    }
    if let Some(bad) = m.iter().chain(m_prime).find(|&&w| w <= 0) {
        return Err(Error::InvalidWeights(format!(
            "quasi-circular weights must be positive, found {bad}"
        )));
    }
    let source_permutation = sort_permutation(m);
    let target_permutation = sort_permutation(m_prime);
    let lo = |w: &[i64], p: &[usize]| BigInt::from(w[p[0]]);
    let hi = |w: &[i64], p: &[usize]| BigInt::from(w[*p.last().expect("nonempty")]);
    let coarse_bound = BigRational::new(
        hi(m, &source_permutation) * hi(m_prime, &target_permutation),
        lo(m, &source_permutation) * lo(m_prime, &target_permutation),
    );
    let coarse_degree = floor_u64(&coarse_bound)?;

    let report = quasi_resonance(
        &WeightMatrix::from_weights(m)?,
        &WeightMatrix::from_weights(m_prime)?,
    )?;
    if BigRational::from_integer(report.order.into()) > coarse_bound {
        return Err(Error::InvariantViolation(format!(
            "exact order {} exceeds coarse bound {coarse_bound}",
            report.order
        )));
    }
    Ok(QuasiCircularBoundReport {
        source_weights: m.to_vec(),
        target_weights: m_prime.to_vec(),
        source_permutation,
        target_permutation,
        coarse_bound,
        coarse_degree,
        exact_orders: report.orders,
        exact_order: report.order,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonnegBoundReport {
    /// Coordinates sorted by `|a_i|` ascending.
    pub permutation: Vec<usize>,
    /// `|a_i| = Σ_j a_ij`, in input order.
    pub row_sums: Vec<i64>,
    /// `|a_i| |a_n| / |a_1|²` per coordinate, in input order.
    #[serde(with = "rational_vec")]
    pub bounds: Vec<BigRational>,
    /// `|a_n|² / |a_1|²`.
    #[serde(with = "rational")]
    pub global_bound: BigRational,
    /// Exact `ν_i` for automorphisms (`ρ' = ρ`), in input order.
    pub exact_orders: Vec<u64>,
    pub exact_order: u64,
}

/// Coarse automorphism degree bounds for nonnegative weight matrices next to
/// the exact quasi-resonance orders `ν_i`.
pub fn nonneg_weight_bound(a: &WeightMatrix) -> Result<NonnegBoundReport> {
    if let Some(bad) = a.rows().iter().flatten().find(|&&x| x < 0) {
        return Err(Error::InvalidWeights(format!(
            "nonnegative weights required, found {bad}"
        )));
    }
    let row_sums: Vec<i64> = a
        .rows()
        .iter()
        .map(|row| row.iter().try_fold(0i64, |s, &x| s.checked_add(x)))
        .collect::<Option<_>>()
        .ok_or(Error::Overflow("row sum"))?;
    if let Some(i) = row_sums.iter().position(|&s| s == 0) {
        return Err(Error::InvalidWeights(format!("row {i} is zero")));
    }
    let permutation = sort_permutation(&row_sums);
    let smallest = BigInt::from(row_sums[permutation[0]]);
    let largest = BigInt::from(row_sums[*permutation.last().expect("nonempty")]);
    let denom = &smallest * &smallest;
    let bounds: Vec<BigRational> = row_sums
        .iter()
        .map(|&s| BigRational::new(BigInt::from(s) * &largest, denom.clone()))
        .collect();
    let global_bound = BigRational::new(&largest * &largest, denom);

    let report = quasi_resonance(a, a)?;
    for (i, (nu, b)) in report.orders.iter().zip(&bounds).enumerate() {
        if BigRational::from_integer((*nu).into()) > *b {
            return Err(Error::InvariantViolation(format!(
                "coordinate {i}: exact ν = {nu} exceeds bound {b}"
            )));
        }
    }
    Ok(NonnegBoundReport {
        permutation,
        row_sums,
        bounds,
        global_bound,
        exact_orders: report.orders,
        exact_order: report.order,
    })
}

fn floor_u64(q: &BigRational) -> Result<u64> {
    use num_traits::ToPrimitive;
    q.floor()
        .to_integer()
        .to_u64()
        .ok_or(Error::Overflow("coarse bound"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(m: &[i64]) -> WeightMatrix {
        WeightMatrix::from_weights(m).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn resonance_one_two() {
        let r = resonance(&w(&[1, 2])).unwrap();
        assert_eq!(
            r.resonance_sets,
            vec![vec![mi(&[1, 0])], vec![mi(&[0, 1]), mi(&[2, 0])]]
        );
        assert_eq!(r.orders, vec![1, 2]);
        assert_eq!(r.order, 2);
        assert_eq!(
            r.linear_characters,
            vec![Character::from([1]), Character::from([2])]
        );
    }

    #[test]
    fn resonance_two_three_is_one() {
        let r = resonance(&w(&[2, 3])).unwrap();
        assert_eq!((r.orders.clone(), r.order), (vec![1, 1], 1));
    }

    #[test]
    fn reinhardt_weights_have_trivial_resonance() {
        let r = resonance(&WeightMatrix::identity(2)).unwrap();
        assert_eq!((r.orders.clone(), r.order), (vec![1, 1], 1));
    }

    #[test]
    fn quasi_resonance_one_two() {
        let a = w(&[1, 2]);
        let r = quasi_resonance(&a, &a).unwrap();
        assert_eq!(r.target_orders, vec![1, 2]);
        assert_eq!(r.orders, vec![2, 4]);
        assert_eq!(r.order, 4);
        let chars = |v: &[i64]| v.iter().map(|&k| Character::from([k])).collect::<Vec<_>>();
        assert_eq!(r.sets[0], chars(&[0, 1, 2]));
        assert_eq!(r.sets[1], chars(&[0, 1, 2, 3, 4]));
    }

    #[test]
    fn ball_to_shear_image_weights() {
        let r = quasi_resonance(&w(&[1, 1]), &w(&[1, 3])).unwrap();
        assert_eq!(r.orders, vec![1, 3]);
        assert_eq!(r.order, 3);
    }

    #[test]
    fn two_three_is_linear() {
        let a = w(&[2, 3]);
        let r = quasi_resonance(&a, &a).unwrap();
        assert_eq!((r.orders.clone(), r.order), (vec![1, 1], 1));
    }

    #[test]
    fn quasi_resonance_dimension_mismatch() {
        assert!(matches!(
            quasi_resonance(&w(&[1, 2]), &w(&[1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quasi_resonance_rejects_inadmissible() {
        assert!(matches!(
            quasi_resonance(&w(&[1, -1]), &w(&[1, 2])),
            Err(Error::Inadmissible { .. })
        ));
        assert!(matches!(
            quasi_resonance(&w(&[1, 2]), &w(&[1, -1])),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn cartan_examples() {
        assert!(is_cartan_linear(&w(&[2, 3]), &w(&[2, 3])).unwrap().linear);
        let v = is_cartan_linear(&w(&[1, 2]), &w(&[1, 2])).unwrap();
        assert!(!v.linear);
        assert_eq!(v.source_order, 2);
        let id = WeightMatrix::identity(2);
        assert!(is_cartan_linear(&id, &id).unwrap().linear);
    }

    #[test]
    fn quasi_circular_examples() {
        let r = quasi_circular_bound(&[1, 2], &[1, 2]).unwrap();
        assert_eq!((r.coarse_bound.clone(), r.exact_order), (q(4, 1), 4));
        let r = quasi_circular_bound(&[2, 3], &[2, 3]).unwrap();
        assert_eq!(r.coarse_bound, q(9, 4));
        assert_eq!((r.coarse_degree, r.exact_order), (2, 1));
        let r = quasi_circular_bound(&[1, 1], &[1, 1]).unwrap();
        assert_eq!((r.coarse_bound.clone(), r.exact_order), (q(1, 1), 1));
    }

    #[test]
    fn quasi_circular_records_sort_permutation() {
        let r = quasi_circular_bound(&[3, 2], &[2, 1]).unwrap();
        assert_eq!(r.source_permutation, vec![1, 0]);
        assert_eq!(r.target_permutation, vec![1, 0]);
        assert_eq!(r.coarse_bound, q(3 * 2, 2));
    }

    #[test]
    fn quasi_circular_rejects_nonpositive() {
        assert!(matches!(
            quasi_circular_bound(&[0, 2], &[1, 2]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            quasi_circular_bound(&[1, 2], &[1, -2]),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn nonneg_examples() {
        let r = nonneg_weight_bound(&w(&[1, 3])).unwrap();
        assert_eq!(r.bounds, vec![q(3, 1), q(9, 1)]);
        assert_eq!(r.exact_orders, vec![3, 9]);
        let r = nonneg_weight_bound(&w(&[2, 3])).unwrap();
        assert_eq!(r.bounds, vec![q(3, 2), q(9, 4)]);
        assert_eq!(r.global_bound, q(9, 4));
        assert_eq!(r.exact_orders, vec![1, 1]);
        let r = nonneg_weight_bound(&WeightMatrix::identity(2)).unwrap();
        assert_eq!(r.bounds, vec![q(1, 1), q(1, 1)]);
        assert_eq!(r.exact_orders, vec![1, 1]);
    }

    #[test]
    fn nonneg_rejects_negative_and_zero_rows() {
        assert!(matches!(
            nonneg_weight_bound(&w(&[1, -1])),
            Err(Error::InvalidWeights(_))
        ));
        let z = WeightMatrix::new(vec![vec![1, 0], vec![0, 0]]).unwrap();
        assert!(matches!(
            nonneg_weight_bound(&z),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn report_json_round_trip() {
        let r = quasi_resonance(&w(&[1, 2]), &w(&[1, 2])).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<QuasiResonanceReport>(&s).unwrap(), r);
        let b = nonneg_weight_bound(&w(&[2, 3])).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains(r#""global_bound":"9/4""#));
        assert_eq!(serde_json::from_str::<NonnegBoundReport>(&s).unwrap(), b);
    }
}
