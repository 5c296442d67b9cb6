//! Slow reference implementations used to cross-check the fast paths.
//!
//! Nothing here shares code with the enumerator or the Monte Carlo
//! estimators beyond the positive functional, which is re-verified with
//! exact dot products before use.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::admissibility::{positive_functional, verify_functional};
use crate::error::{Error, Result};
use crate::weights::{Character, MultiIndex, WeightMatrix};

/// Solutions of `αᵀA = k` by scanning the whole box
/// `0 ≤ α_i ≤ ⌊(k·λ)/(a_i·λ)⌋`, in lexicographic order.
pub fn box_scan(a: &WeightMatrix, k: &Character) -> Result<Vec<MultiIndex>> {
    let lambda = checked_functional(a)?;
    let budget: BigRational = k
        .components()
        .iter()
        .zip(&lambda)
        .fold(BigRational::zero(), |acc, (kj, l)| acc + l * kj);
    if budget.is_negative() {
        return Ok(Vec::new());
    }
    let bounds: Vec<u32> = (0..a.n())
        .map(|i| {
            let w = crate::admissibility::row_dot(a.row(i), &lambda);
            (&budget / w)
                .floor()
                .to_integer()
                .to_u32()
                .ok_or(Error::Overflow("box bound"))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut alpha = vec![0u32; a.n()];
    loop {
        let candidate = MultiIndex::new(alpha.clone());
        if a.character_of(&candidate) == *k {
            out.push(candidate);
        }
        // Odometer increment, last coordinate fastest, gives lexicographic order.
        let mut i = a.n();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if alpha[i] < bounds[i] {
                alpha[i] += 1;
                break;
            }
            alpha[i] = 0;
        }
    }
}

/// All nonempty weight spaces with `|k_j| ≤ max_abs` for every `j`, found by
/// one scan over exponent vectors with `Σ α_i (a_i·λ) ≤ max_j Σ |k_j λ_j|`,
/// which contains every box that [`box_scan`] would visit for those
/// characters. Bases are in lexicographic order.
pub fn scan_characters(
    a: &WeightMatrix,
    max_abs: i64,
) -> Result<BTreeMap<Character, Vec<MultiIndex>>> {
    let lambda = checked_functional(a)?;
    let den = lambda
        .iter()
        .fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
    let scaled: Vec<i64> = lambda
        .iter()
        .map(|l| {
            (l * &den)
                .to_integer()
                .to_i64()
                .ok_or(Error::Overflow("oracle functional"))
        })
        .collect::<Result<_>>()?;
    let weights: Vec<i64> = (0..a.n())
        .map(|i| a.row(i).iter().zip(&scaled).map(|(x, l)| x * l).sum())
        .collect();
    let reach: i64 = scaled.iter().map(|l| l.abs() * max_abs).sum();

    let mut out: BTreeMap<Character, Vec<MultiIndex>> = BTreeMap::new();
    let mut alpha = vec![0u32; a.n()];
    scan_rec(a, &weights, reach, max_abs, 0, &mut alpha, &mut out);
    Ok(out)
}

fn scan_rec(
    a: &WeightMatrix,
    weights: &[i64],
    left: i64,
    max_abs: i64,
    i: usize,
    alpha: &mut Vec<u32>,
    out: &mut BTreeMap<Character, Vec<MultiIndex>>,
) {
    if i == alpha.len() {
        let mut k = vec![0i64; a.r()];
        for (e, row) in alpha.iter().zip(a.rows()) {
            for (kj, w) in k.iter_mut().zip(row) {
                *kj += i64::from(*e) * w;
            }
        }
        if k.iter().all(|kj| kj.abs() <= max_abs) {
            out.entry(Character::from(k))
                .or_default()
                .push(MultiIndex::new(alpha.clone()));
        }
        return;
    }
    let mut spent = 0;
    let mut e = 0u32;
    while spent <= left {
        alpha[i] = e;
        scan_rec(a, weights, left - spent, max_abs, i + 1, alpha, out);
        e += 1;
        spent += weights[i];
    }
    alpha[i] = 0;
}

fn checked_functional(a: &WeightMatrix) -> Result<Vec<BigRational>> {
    let lambda = positive_functional(a)?;
    if !verify_functional(a, &lambda) {
        return Err(Error::InvariantViolation(
            "functional failed re-verification".into(),
        ));
    }
    Ok(lambda)
}

/// Nonzero `α ∈ ℕⁿ` with `|α| ≤ max_degree` and `αᵀA = 0`, if any, by direct
/// scan. A `None` answer is only conclusive up to the scanned degree.
pub fn invariant_monomial_scan(a: &WeightMatrix, max_degree: u32) -> Option<MultiIndex> {
    MultiIndex::all_up_to_degree(a.n(), max_degree)
        .into_iter()
        .find(|alpha| !alpha.is_zero() && a.character_of(alpha).is_zero())
}

/// `∫_{Bⁿ} |z^α|² dV` by iterated Gauss–Legendre quadrature.
///
/// In polar coordinates `t_i = |z_i|²` the integral is
/// `πⁿ ∫_{Σ t_i < 1} Π t_i^{α_i} dt`, and each nested one-dimensional
/// integrand is a polynomial, so a rule with enough nodes is exact up to
/// rounding.
pub fn ball_monomial_norm_quadrature(alpha: &[u32]) -> f64 {
    let n = alpha.len();
    let degree: u32 = alpha.iter().sum::<u32>() + n as u32;
    let nodes = gauss_legendre((degree as usize / 2) + 2);
    std::f64::consts::PI.powi(n as i32) * simplex_integral(alpha, 1.0, &nodes)
}

fn simplex_integral(alpha: &[u32], s: f64, rule: &[(f64, f64)]) -> f64 {
    let Some((&first, rest)) = alpha.split_first() else {
        return 1.0;
    };
    // ∫_0^s t^first · I_rest(s - t) dt, mapped from [-1, 1].
    rule.iter()
        .map(|&(x, w)| {
            let t = 0.5 * s * (x + 1.0);
            0.5 * s * w * t.powi(first as i32) * simplex_integral(rest, s - t, rule)
        })
        .sum()
}

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[-1, 1]`.
fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}
