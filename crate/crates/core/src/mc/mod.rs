//! Monte Carlo checks of Bergman-space identities on bounded domains.
//!
//! Integrals `∫_D g dV` are estimated by drawing uniform candidates from a
//! polydisc `P ⊇ D` and averaging `vol(P)·g·1_D` over all candidates. The
//! standard errors are the usual sample standard deviations over `√N`,
//! computed separately for the real and imaginary parts. `count` is the
//! number of accepted points; `N` is the number of candidates it took.

mod checks;
mod domain;
pub mod reference;
mod sampler;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use checks::{
    check_change_of_variables, check_invariance, check_orthogonality, ChangeOfVariablesReport,
    InvarianceReport, InvarianceWitness, OrthogonalityReport, PairCheck,
};
pub use domain::{Domain, DomainSpec};
pub use sampler::{sample_domain, DomainSample, CHUNK, DEGENERACY_PROBE, MIN_ACCEPTANCE};

use crate::error::{Error, Result};
use crate::polymap::{ComplexPolynomial, Polynomial};
use sampler::{Moments, Visitor};

/// Default RNG seed.
pub const DEFAULT_SEED: u64 = 42;
/// Default number of accepted samples.
pub const DEFAULT_COUNT: u64 = 1_000_000;
/// Assertions pass when an estimate is within this many standard errors.
pub const SIGMA_THRESHOLD: f64 = 4.0;
/// `P(|Z| > 4)` for a standard normal `Z`.
pub const TWO_SIDED_TAIL_4SIGMA: f64 = 6.334_248_366_623_996e-5;

const RELATIVE_ROUNDING: f64 = 1e-12;

/// A Monte Carlo integral with per-component standard errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    #[serde(with = "crate::serde_util::complex_obj")]
    pub value: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    /// Accepted points.
    pub samples: u64,
    pub candidates: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// `max(|Δre|/σ_re, |Δim|/σ_im)` for `Δ = value − target`. Standard
    /// errors are floored at `1e-12` times the larger magnitude, so integrands
    /// with zero sample variance are compared up to rounding.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let d = self.value - target;
        let floor = RELATIVE_ROUNDING * self.value.norm().max(target.norm());
        ratio(d.re.abs(), self.stderr_re.max(floor))
            .max(ratio(d.im.abs(), self.stderr_im.max(floor)))
    }

    pub fn within(&self, target: Complex64, sigmas: f64) -> bool {
        self.z_score(target) <= sigmas
    }
}

pub(crate) fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Integrands `p_i · conj(p_j)` for a list of index pairs, sharing one
/// evaluation of each polynomial per point.
pub(crate) struct PairIntegrands {
    polys: Vec<ComplexPolynomial>,
    pairs: Vec<(usize, usize)>,
}

impl PairIntegrands {
    pub fn new(polys: &[Polynomial], pairs: Vec<(usize, usize)>) -> Self {
        PairIntegrands {
            polys: polys.iter().map(Polynomial::to_complex).collect(),
            pairs,
        }
    }

    /// Runs the sampler and turns the moments into estimates, one per pair.
    pub fn estimate(&self, domain: &Domain, seed: u64, count: u64) -> Result<Vec<MCEstimate>> {
        let run = sampler::run(domain, seed, count, self)?;
        let vol = domain.enclosing_volume();
        let n = run.candidates as f64;
        Ok((0..self.pairs.len())
            .map(|i| {
                let m = &run.acc;
                let mean = m.sum[i] / n;
                let var = |sq: f64, mu: f64| ((sq / n - mu * mu) * n / (n - 1.0)).max(0.0);
                MCEstimate {
                    value: mean * vol,
                    stderr_re: vol * (var(m.sum_sq_re[i], mean.re) / n).sqrt(),
                    stderr_im: vol * (var(m.sum_sq_im[i], mean.im) / n).sqrt(),
                    samples: run.accepted,
                    candidates: run.candidates,
                    seed,
                }
            })
            .collect())
    }
}

impl Visitor for PairIntegrands {
    type Acc = Moments;

    fn empty(&self) -> Moments {
        Moments::new(self.pairs.len())
    }

    fn visit(&self, acc: &mut Moments, z: &[Complex64], _: &mut ChaCha8Rng) {
        let values: Vec<Complex64> = self.polys.iter().map(|p| p.evaluate(z)).collect();
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            acc.add(k, values[i] * values[j].conj());
        }
    }

    fn merge(&self, left: Moments, right: Moments) -> Moments {
        left.merge(right)
    }
}

pub(crate) fn check_nvars(domain: &Domain, p: &Polynomial) -> Result<()> {
    if p.nvars() != domain.n() {
        return Err(Error::DimensionMismatch {
            context: "test polynomial variables versus domain dimension",
            expected: domain.n(),
            found: p.nvars(),
        });
    }
    Ok(())
}

/// Estimate of `⟨p, q⟩_D = ∫_D p·conj(q) dV`.
pub fn mc_inner_product(
    spec: &DomainSpec,
    p: &Polynomial,
    q: &Polynomial,
    seed: u64,
    count: u64,
) -> Result<MCEstimate> {
    let domain = Domain::new(spec)?;
    check_nvars(&domain, p)?;
    check_nvars(&domain, q)?;
    let integrands = PairIntegrands::new(&[p.clone(), q.clone()], vec![(0, 1)]);
    Ok(integrands.estimate(&domain, seed, count)?.remove(0))
}

/// Estimate of `vol(D)`.
pub fn mc_volume(spec: &DomainSpec, seed: u64, count: u64) -> Result<MCEstimate> {
    let domain = Domain::new(spec)?;
    let one = Polynomial::one(domain.n());
    mc_inner_product(spec, &one, &one, seed, count)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::weights::MultiIndex;

    const COUNT: u64 = 200_000;

    #[test]
    fn ball_volume_estimate() {
        let e = mc_volume(&DomainSpec::unit_ball(2), DEFAULT_SEED, COUNT).unwrap();
        assert!(
            e.within(Complex64::new(PI * PI / 2.0, 0.0), SIGMA_THRESHOLD),
            "{e:?}"
        );
        assert_eq!(e.stderr_im, 0.0);
        assert_eq!(e.samples, COUNT);
    }

    #[test]
    fn distinct_coordinates_are_orthogonal() {
        let z = |i| Polynomial::var(2, i);
        let e = mc_inner_product(&DomainSpec::unit_ball(2), &z(0), &z(1), 5, COUNT).unwrap();
        assert!(e.within(Complex64::new(0.0, 0.0), SIGMA_THRESHOLD), "{e:?}");
    }

    #[test]
    fn polydisc_coordinate_norm() {
        let z1 = Polynomial::var(2, 0);
        let spec = DomainSpec::polydisc(vec![1.0, 1.0]);
        let e = mc_inner_product(&spec, &z1, &z1, 9, COUNT).unwrap();
        let exact = reference::polydisc_monomial_norm(&[1.0, 1.0], &MultiIndex::new(vec![1, 0]));
        assert!((exact - PI * PI / 2.0).abs() < 1e-12);
        assert!(
            e.within(Complex64::new(exact, 0.0), SIGMA_THRESHOLD),
            "{e:?}"
        );
        assert_eq!(e.candidates, COUNT);
    }

    #[test]
    fn mismatched_polynomial_is_rejected() {
        let p = Polynomial::var(3, 0);
        let err = mc_inner_product(&DomainSpec::unit_ball(2), &p, &p, 0, 100).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn estimate_json_shape() {
        let e = mc_volume(&DomainSpec::unit_ball(1), 1, 100).unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        assert!(v["value"]["re"].is_f64());
        assert_eq!(v["seed"], 1);
        assert_eq!(serde_json::from_value::<MCEstimate>(v).unwrap(), e);
    }

    #[test]
    fn z_score_edge_cases() {
        let e = MCEstimate {
            value: Complex64::new(1.0, 0.0),
            stderr_re: 0.5,
            stderr_im: 0.0,
            samples: 2,
            candidates: 2,
            seed: 0,
        };
        assert_eq!(e.z_score(Complex64::new(0.0, 0.0)), 2.0);
        assert!(e.z_score(Complex64::new(1.0, 1.0)) > 1e11);
        assert!(e.z_score(Complex64::new(1.0 + 1e-15, 0.0)) < 1.0);
        let exact = MCEstimate {
            value: Complex64::new(0.0, 0.0),
            stderr_re: 0.0,
            ..e
        };
        assert_eq!(exact.z_score(Complex64::new(0.0, 0.0)), 0.0);
    }
}
