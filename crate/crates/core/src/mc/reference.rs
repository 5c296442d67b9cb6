//! Closed-form integrals used as targets for the estimators.

use std::f64::consts::PI;

use crate::weights::MultiIndex;

/// `vol(Bⁿ) = πⁿ / n!` for the unit ball of ℂⁿ.
pub fn ball_volume(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * PI / k as f64)
}

/// `⟨z^α, z^α⟩_{Bⁿ} = πⁿ α! / (n + |α|)!`.
pub fn ball_monomial_norm(alpha: &MultiIndex) -> f64 {
    let n = alpha.exponents().len();
    let mut num = PI.powi(n as i32);
    for &a in alpha.exponents() {
        num *= factorial(a as u64);
    }
    num / factorial(n as u64 + alpha.degree())
}

/// `⟨z^α, z^α⟩ = Π π r_i^{2α_i+2} / (α_i + 1)` on a polydisc.
pub fn polydisc_monomial_norm(radii: &[f64], alpha: &MultiIndex) -> f64 {
    radii
        .iter()
        .zip(alpha.exponents())
        .map(|(r, &a)| PI * r.powi(2 * a as i32 + 2) / (a as f64 + 1.0))
        .product()
}

fn factorial(k: u64) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}
