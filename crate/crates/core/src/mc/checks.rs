use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::domain::{Domain, DomainSpec};
use super::sampler::{self, Visitor};
use super::{check_nvars, MCEstimate, PairIntegrands, SIGMA_THRESHOLD, TWO_SIDED_TAIL_4SIGMA};
use crate::error::{Error, Result};
use crate::polymap::{PolyMap, Polynomial};
use crate::weights::{Character, MultiIndex, WeightMatrix};

/// Points whose image lands this far past the boundary count as violations;
/// anything closer is attributed to rounding.
pub const INVARIANCE_SLACK: f64 = 1e-9;

/// One off-character monomial pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairCheck {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub character_alpha: Character,
    pub character_beta: Character,
    pub estimate: MCEstimate,
    pub z_score: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub domain: DomainSpec,
    pub weights: WeightMatrix,
    pub max_degree: u32,
    pub threshold_sigmas: f64,
    pub pair_count: usize,
    /// Bonferroni bound on the chance that some pair fails although every
    /// true inner product is zero: two components per pair at 4σ each.
    pub family_false_alarm_bound: f64,
    pub pairs: Vec<PairCheck>,
    pub worst_z: f64,
    pub worst_pair: Option<(MultiIndex, MultiIndex)>,
    pub samples: u64,
    pub candidates: u64,
    pub seed: u64,
    pub passed: bool,
}

/// `⟨z^α, z^β⟩_D ≈ 0` for every pair of monomials of degree at most
/// `max_degree` whose characters under `A` differ, including `α = 0`.
///
/// The domain is assumed invariant under the action of `A`; see
/// [`check_invariance`].
pub fn check_orthogonality(
    spec: &DomainSpec,
    a: &WeightMatrix,
    max_degree: u32,
    seed: u64,
    count: u64,
) -> Result<OrthogonalityReport> {
    let domain = Domain::new(spec)?;
    a.check_same_n_as(domain.n(), "weight matrix rows versus domain dimension")?;
    let monomials = MultiIndex::all_up_to_degree(domain.n(), max_degree);
    let characters: Vec<Character> = monomials.iter().map(|m| a.character_of(m)).collect();
    let mut pairs = Vec::new();
    for i in 0..monomials.len() {
        for j in i + 1..monomials.len() {
            if characters[i] != characters[j] {
                pairs.push((i, j));
            }
        }
    }
    let polys: Vec<Polynomial> = monomials
        .iter()
        .map(|m| Polynomial::monomial(m.clone(), crate::polymap::GaussianRational::one()))
        .collect();
    let estimates = PairIntegrands::new(&polys, pairs.clone()).estimate(&domain, seed, count)?;

    let zero = Complex64::new(0.0, 0.0);
    let checks: Vec<PairCheck> = pairs
        .iter()
        .zip(estimates)
        .map(|(&(i, j), estimate)| {
            let z_score = estimate.z_score(zero);
            PairCheck {
                alpha: monomials[i].clone(),
                beta: monomials[j].clone(),
                character_alpha: characters[i].clone(),
                character_beta: characters[j].clone(),
                passed: z_score <= SIGMA_THRESHOLD,
                z_score,
                estimate,
            }
        })
        .collect();
    let worst = checks.iter().max_by(|x, y| x.z_score.total_cmp(&y.z_score));
    let (samples, candidates) = checks
        .first()
        .map_or((0, 0), |c| (c.estimate.samples, c.estimate.candidates));
    Ok(OrthogonalityReport {
        domain: spec.clone(),
        weights: a.clone(),
        max_degree,
        threshold_sigmas: SIGMA_THRESHOLD,
        pair_count: checks.len(),
        family_false_alarm_bound: checks.len() as f64 * 2.0 * TWO_SIDED_TAIL_4SIGMA,
        worst_z: worst.map_or(0.0, |c| c.z_score),
        worst_pair: worst.map(|c| (c.alpha.clone(), c.beta.clone())),
        passed: checks.iter().all(|c| c.passed),
        pairs: checks,
        samples,
        candidates,
        seed,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChangeOfVariablesReport {
    pub map: PolyMap,
    pub inverse: PolyMap,
    /// `u = det f'` and `U = det F'` for `F = f⁻¹`, exact.
    pub jacobian: Polynomial,
    pub inverse_jacobian: Polynomial,
    /// `⟨u·(ψ∘f), φ⟩_D`.
    pub lhs: MCEstimate,
    /// `⟨ψ, U·(φ∘F)⟩_{D'}`.
    pub rhs: MCEstimate,
    #[serde(with = "crate::serde_util::complex_obj")]
    pub difference: Complex64,
    /// `4·(σ_L + σ_R)` per component.
    pub tolerance_re: f64,
    pub tolerance_im: f64,
    pub passed: bool,
}

/// Estimates both sides of `⟨u·(ψ∘f), φ⟩_D = ⟨ψ, U·(φ∘F)⟩_{D'}` for a
/// biholomorphism `f: D → D'` with exact inverse `F`.
///
/// `inverse` may be omitted for triangular maps. Both sides use the same
/// seed, so when `f` is the identity and `D = D'` they are bitwise equal.
#[allow(clippy::too_many_arguments)]
pub fn check_change_of_variables(
    f: &PolyMap,
    inverse: Option<&PolyMap>,
    spec_d: &DomainSpec,
    spec_d_prime: &DomainSpec,
    phi: &Polynomial,
    psi: &Polynomial,
    seed: u64,
    count: u64,
) -> Result<ChangeOfVariablesReport> {
    let d = Domain::new(spec_d)?;
    let d_prime = Domain::new(spec_d_prime)?;
    for (found, context) in [
        (f.n(), "map dimension versus source domain"),
        (d_prime.n(), "target domain dimension versus source domain"),
    ] {
        if found != d.n() {
            return Err(Error::DimensionMismatch {
                context,
                expected: d.n(),
                found,
            });
        }
    }
    check_nvars(&d, phi)?;
    check_nvars(&d, psi)?;
    let big_f = match inverse {
        Some(g) => {
            let id = PolyMap::identity(f.n());
            if f.compose(g)? != id || g.compose(f)? != id {
                return Err(Error::InvalidArgument(
                    "supplied inverse does not invert the map".into(),
                ));
            }
            g.clone()
        }
        None => f.invert_triangular().ok_or(Error::MissingInverse)?,
    };
    let u = f.jacobian_det()?;
    let big_u = big_f.jacobian_det()?;

    let lhs_p = &u * &psi.compose(f.components())?;
    let rhs_q = &big_u * &phi.compose(big_f.components())?;
    let lhs = PairIntegrands::new(&[lhs_p, phi.clone()], vec![(0, 1)])
        .estimate(&d, seed, count)?
        .remove(0);
    let rhs = PairIntegrands::new(&[psi.clone(), rhs_q], vec![(0, 1)])
        .estimate(&d_prime, seed, count)?
        .remove(0);

    let difference = lhs.value - rhs.value;
    let tolerance_re = SIGMA_THRESHOLD * (lhs.stderr_re + rhs.stderr_re);
    let tolerance_im = SIGMA_THRESHOLD * (lhs.stderr_im + rhs.stderr_im);
    let passed = difference.re.abs() <= tolerance_re && difference.im.abs() <= tolerance_im;
    Ok(ChangeOfVariablesReport {
        map: f.clone(),
        inverse: big_f,
        jacobian: u,
        inverse_jacobian: big_u,
        lhs,
        rhs,
        difference,
        tolerance_re,
        tolerance_im,
        passed,
    })
}

/// A sampled point that the torus action moved out of the domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceWitness {
    pub point: Vec<Complex64>,
    /// Torus parameter `λ_j = e^{iθ_j}`.
    pub angles: Vec<f64>,
    pub image: Vec<Complex64>,
    /// Defining function at the image; the domain is where it is `< 1`.
    pub image_value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub domain: DomainSpec,
    pub weights: WeightMatrix,
    pub samples: u64,
    pub candidates: u64,
    pub seed: u64,
    pub slack: f64,
    pub violations: u64,
    pub max_image_value: f64,
    pub witness: Option<InvarianceWitness>,
    pub passed: bool,
}

#[derive(Default)]
struct InvarianceAcc {
    violations: u64,
    max_value: f64,
    first: Option<InvarianceWitness>,
}

struct TorusProbe<'a> {
    domain: &'a Domain,
    rows: Vec<Vec<f64>>,
    rank: usize,
}

impl Visitor for TorusProbe<'_> {
    type Acc = InvarianceAcc;

    fn empty(&self) -> InvarianceAcc {
        InvarianceAcc::default()
    }

    fn visit(&self, acc: &mut InvarianceAcc, z: &[Complex64], rng: &mut ChaCha8Rng) {
        let angles: Vec<f64> = (0..self.rank).map(|_| TAU * rng.random::<f64>()).collect();
        let image: Vec<Complex64> = z
            .iter()
            .zip(&self.rows)
            .map(|(zi, row)| {
                let phase: f64 = row.iter().zip(&angles).map(|(a, t)| a * t).sum();
                zi * Complex64::from_polar(1.0, phase)
            })
            .collect();
        let value = self.domain.defining_value(&image);
        acc.max_value = acc.max_value.max(value);
        if value >= 1.0 + INVARIANCE_SLACK {
            acc.violations += 1;
            if acc.first.is_none() {
                acc.first = Some(InvarianceWitness {
                    point: z.to_vec(),
                    angles,
                    image,
                    image_value: value,
                });
            }
        }
    }

    fn merge(&self, left: InvarianceAcc, right: InvarianceAcc) -> InvarianceAcc {
        InvarianceAcc {
            violations: left.violations + right.violations,
            max_value: left.max_value.max(right.max_value),
            first: left.first.or(right.first),
        }
    }
}

/// Samples points of `D` and uniform torus parameters and checks that
/// `λ·z = (λ^{a_1} z_1, …, λ^{a_n} z_n)` stays in `D`.
pub fn check_invariance(
    spec: &DomainSpec,
    a: &WeightMatrix,
    seed: u64,
    count: u64,
) -> Result<InvarianceReport> {
    let domain = Domain::new(spec)?;
    a.check_same_n_as(domain.n(), "weight matrix rows versus domain dimension")?;
    let probe = TorusProbe {
        domain: &domain,
        rows: a
            .rows()
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect(),
        rank: a.r(),
    };
    let run = sampler::run(&domain, seed, count, &probe)?;
    Ok(InvarianceReport {
        domain: spec.clone(),
        weights: a.clone(),
        samples: run.accepted,
        candidates: run.candidates,
        seed,
        slack: INVARIANCE_SLACK,
        violations: run.acc.violations,
        max_image_value: run.acc.max_value,
        passed: run.acc.violations == 0,
        witness: run.acc.first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::reference::{ball_monomial_norm, ball_volume};

    const COUNT: u64 = 100_000;

    fn z(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn ball_orthogonality_with_scalar_weights() {
        let a = WeightMatrix::from_weights(&[1, 1]).unwrap();
        let r = check_orthogonality(&DomainSpec::unit_ball(2), &a, 3, 42, COUNT).unwrap();
        // 10 monomials, grouped by degree 1 + 2 + 3 + 4.
        assert_eq!(r.pair_count, 45 - (1 + 3 + 6));
        assert!(r.passed, "worst z {}", r.worst_z);
    }

    #[test]
    fn shear_image_orthogonality() {
        let a = WeightMatrix::from_weights(&[1, 2]).unwrap();
        let r = check_orthogonality(&DomainSpec::shear_image_of_ball(2), &a, 2, 3, COUNT).unwrap();
        assert!(r.passed, "worst z {}", r.worst_z);
        assert!(r
            .pairs
            .iter()
            .all(|p| p.character_alpha != p.character_beta));
    }

    #[test]
    fn identity_change_of_variables_is_exact() {
        let spec = DomainSpec::unit_ball(2);
        let f = PolyMap::identity(2);
        let phi = &z(2, 0) + &z(2, 1).pow(2);
        let psi = z(2, 0);
        let r = check_change_of_variables(&f, None, &spec, &spec, &phi, &psi, 4, 20_000).unwrap();
        assert_eq!(r.lhs, r.rhs);
        assert_eq!(r.difference, Complex64::new(0.0, 0.0));
        assert!(r.passed);
    }

    #[test]
    fn shear_preserves_volume() {
        let one = Polynomial::one(2);
        let r = check_change_of_variables(
            &PolyMap::shear(2),
            None,
            &DomainSpec::unit_ball(2),
            &DomainSpec::shear_image_of_ball(2),
            &one,
            &one,
            8,
            COUNT,
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.jacobian, one);
        let vol = Complex64::new(ball_volume(2), 0.0);
        assert!(r.lhs.within(vol, SIGMA_THRESHOLD));
        assert!(r.rhs.within(vol, SIGMA_THRESHOLD));
    }

    #[test]
    fn shear_pairing_matches_ball_norm() {
        let r = check_change_of_variables(
            &PolyMap::shear(3),
            None,
            &DomainSpec::unit_ball(2),
            &DomainSpec::shear_image_of_ball(3),
            &z(2, 0).pow(3),
            &z(2, 1),
            42,
            COUNT,
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
        let exact = ball_monomial_norm(&MultiIndex::new(vec![3, 0]));
        assert!(r.lhs.within(Complex64::new(exact, 0.0), SIGMA_THRESHOLD));
    }

    #[test]
    fn change_of_variables_errors() {
        let ball = DomainSpec::unit_ball(2);
        let one = Polynomial::one(2);
        let f = PolyMap::new(vec![&z(2, 0) + &z(2, 1).pow(2), z(2, 1)]).unwrap();
        assert_eq!(
            check_change_of_variables(&f, None, &ball, &ball, &one, &one, 0, 10).unwrap_err(),
            Error::MissingInverse
        );
        let ball3 = DomainSpec::unit_ball(3);
        assert!(matches!(
            check_change_of_variables(&PolyMap::shear(2), None, &ball, &ball3, &one, &one, 0, 10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shear_images_are_quasi_circular() {
        for k in 2..=5 {
            let a = WeightMatrix::from_weights(&[1, k as i64]).unwrap();
            let r = check_invariance(&DomainSpec::shear_image_of_ball(k), &a, 42, 20_000).unwrap();
            assert!(r.passed, "k = {k}: {:?}", r.witness);
            assert!(r.max_image_value < 1.0 + INVARIANCE_SLACK);
        }
    }

    #[test]
    fn ball_is_reinhardt() {
        let r = check_invariance(
            &DomainSpec::unit_ball(2),
            &WeightMatrix::identity(2),
            1,
            20_000,
        )
        .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn wrong_weight_is_caught_with_witness() {
        let a = WeightMatrix::from_weights(&[1, 3]).unwrap();
        let r = check_invariance(&DomainSpec::shear_image_of_ball(2), &a, 42, 20_000).unwrap();
        assert!(!r.passed);
        let w = r.witness.unwrap();
        let rho = |v: &[Complex64]| v[0].norm_sqr() + (v[1] - v[0].powu(2)).norm_sqr();
        assert!(rho(&w.point) < 1.0);
        assert!(rho(&w.image) >= 1.0);
        let t = w.angles[0];
        let moved = Complex64::from_polar(1.0, 3.0 * t) * w.point[1];
        assert!((moved - w.image[1]).norm() < 1e-12);
    }
}
