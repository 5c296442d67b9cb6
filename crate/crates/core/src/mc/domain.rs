use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polymap::{ComplexPolyMap, PolyMap};

/// A bounded domain in ℂⁿ containing the origin, written `{ρ(z) < 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainSpec {
    /// `Σ |z_i|² < 1`.
    UnitBall { n: usize },
    /// `|z_i| < r_i` for all `i`.
    Polydisc { radii: Vec<f64> },
    /// `Σ c_i |z_i|^{2 p_i} < 1` with `c_i > 0`, `p_i ≥ 1`.
    WeightedEllipsoid {
        coefficients: Vec<f64>,
        exponents: Vec<f64>,
    },
    /// `map(base)`. Membership is decided through the inverse, which is
    /// computed exactly for triangular maps when not supplied.
    ShearImage {
        base: Box<DomainSpec>,
        map: PolyMap,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inverse: Option<PolyMap>,
    },
}

impl DomainSpec {
    pub fn unit_ball(n: usize) -> Self {
        DomainSpec::UnitBall { n }
    }

    pub fn polydisc(radii: Vec<f64>) -> Self {
        DomainSpec::Polydisc { radii }
    }

    /// Image of `base` under `map`.
    pub fn image(base: DomainSpec, map: PolyMap) -> Self {
        DomainSpec::ShearImage {
            base: Box::new(base),
            map,
            inverse: None,
        }
    }

    /// `{|w_1|² + |w_2 − w_1^k|² < 1}`, the image of the unit ball of ℂ²
    /// under `(z_1, z_2 + z_1^k)`.
    pub fn shear_image_of_ball(k: u32) -> Self {
        Self::image(Self::unit_ball(2), PolyMap::shear(k))
    }
}

#[derive(Clone, Debug)]
enum Shape {
    Ball,
    Polydisc(Vec<f64>),
    Ellipsoid {
        coefficients: Vec<f64>,
        exponents: Vec<f64>,
    },
    Image {
        base: Box<Domain>,
        inverse: ComplexPolyMap,
    },
}

/// A validated domain ready for membership queries.
#[derive(Clone, Debug)]
pub struct Domain {
    n: usize,
    radii: Vec<f64>,
    shape: Shape,
    inverse: Option<PolyMap>,
}

impl Domain {
    pub fn new(spec: &DomainSpec) -> Result<Self> {
        let domain = match spec {
            DomainSpec::UnitBall { n } => {
                if *n == 0 {
                    return Err(Error::InvalidDomain("unit ball of dimension 0".into()));
                }
                Domain {
                    n: *n,
                    radii: vec![1.0; *n],
                    shape: Shape::Ball,
                    inverse: None,
                }
            }
            DomainSpec::Polydisc { radii } => {
                if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                    return Err(Error::InvalidDomain(format!(
                        "polydisc radii must be positive and finite, got {radii:?}"
                    )));
                }
                Domain {
                    n: radii.len(),
                    radii: radii.clone(),
                    shape: Shape::Polydisc(radii.clone()),
                    inverse: None,
                }
            }
            DomainSpec::WeightedEllipsoid {
                coefficients,
                exponents,
            } => {
                if coefficients.is_empty() || coefficients.len() != exponents.len() {
                    return Err(Error::InvalidDomain(
                        "ellipsoid needs equally many coefficients and exponents".into(),
                    ));
                }
                if coefficients.iter().any(|c| !(c.is_finite() && *c > 0.0))
                    || exponents.iter().any(|p| !(p.is_finite() && *p >= 1.0))
                {
                    return Err(Error::InvalidDomain(
                        "ellipsoid coefficients must be > 0 and exponents ≥ 1".into(),
                    ));
                }
                let radii = coefficients
                    .iter()
                    .zip(exponents)
                    .map(|(c, p)| c.powf(-1.0 / (2.0 * p)))
                    .collect();
                Domain {
                    n: coefficients.len(),
                    radii,
                    shape: Shape::Ellipsoid {
                        coefficients: coefficients.clone(),
                        exponents: exponents.clone(),
                    },
                    inverse: None,
                }
            }
            DomainSpec::ShearImage { base, map, inverse } => {
                let base = Domain::new(base)?;
                if map.n() != base.n {
                    return Err(Error::InvalidDomain(format!(
                        "map acts on ℂ^{} but base domain lives in ℂ^{}",
                        map.n(),
                        base.n
                    )));
                }
                let inverse = match inverse {
                    Some(g) => {
                        let id = PolyMap::identity(map.n());
                        if map.compose(g)? != id || g.compose(map)? != id {
                            return Err(Error::InvalidDomain(
                                "supplied inverse does not invert the map".into(),
                            ));
                        }
                        g.clone()
                    }
                    None => map.invert_triangular().ok_or(Error::MissingInverse)?,
                };
                let exact_map = map.to_complex();
                let radii = exact_map
                    .components()
                    .iter()
                    .map(|p| p.abs_bound(&base.radii))
                    .collect();
                Domain {
                    n: base.n,
                    radii,
                    shape: Shape::Image {
                        inverse: inverse.to_complex(),
                        base: Box::new(base),
                    },
                    inverse: Some(inverse),
                }
            }
        };
        if domain.defining_value(&vec![Complex64::new(0.0, 0.0); domain.n]) >= 1.0 {
            return Err(Error::InvalidDomain(
                "domain does not contain the origin".into(),
            ));
        }
        Ok(domain)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Radii of a polydisc containing the domain.
    pub fn enclosing_radii(&self) -> &[f64] {
        &self.radii
    }

    /// Lebesgue volume of the enclosing polydisc, `Π π r_i²`.
    pub fn enclosing_volume(&self) -> f64 {
        self.radii.iter().map(|r| PI * r * r).product()
    }

    /// Exact inverse of the defining map, for image domains.
    pub fn inverse_map(&self) -> Option<&PolyMap> {
        self.inverse.as_ref()
    }

    /// The defining function; the domain is where it is `< 1`.
    pub fn defining_value(&self, z: &[Complex64]) -> f64 {
        match &self.shape {
            Shape::Ball => z.iter().map(Complex64::norm_sqr).sum(),
            Shape::Polydisc(radii) => z
                .iter()
                .zip(radii)
                .map(|(x, r)| x.norm_sqr() / (r * r))
                .fold(0.0, f64::max),
            Shape::Ellipsoid {
                coefficients,
                exponents,
            } => z
                .iter()
                .zip(coefficients.iter().zip(exponents))
                .map(|(x, (c, p))| c * x.norm_sqr().powf(*p))
                .sum(),
            Shape::Image { base, inverse } => {
                let mut pre = vec![Complex64::new(0.0, 0.0); self.n];
                inverse.evaluate_into(z, &mut pre);
                base.defining_value(&pre)
            }
        }
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        self.defining_value(z) < 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shear_image_membership_matches_formula() {
        let d = Domain::new(&DomainSpec::shear_image_of_ball(3)).unwrap();
        assert_eq!(d.enclosing_radii(), &[1.0, 2.0]);
        let w = [c(0.5, 0.1), c(0.2, -0.3)];
        let direct = w[0].norm_sqr() + (w[1] - w[0].powu(3)).norm_sqr();
        assert!((d.defining_value(&w) - direct).abs() < 1e-15);
    }

    #[test]
    fn ellipsoid_radii() {
        let d = Domain::new(&DomainSpec::WeightedEllipsoid {
            coefficients: vec![4.0, 1.0],
            exponents: vec![1.0, 2.0],
        })
        .unwrap();
        assert!((d.enclosing_radii()[0] - 0.5).abs() < 1e-15);
        assert!((d.enclosing_radii()[1] - 1.0).abs() < 1e-15);
        assert!(d.contains(&[c(0.49, 0.0), c(0.0, 0.0)]));
        assert!(!d.contains(&[c(0.51, 0.0), c(0.0, 0.0)]));
    }

    #[test]
    fn invalid_specs() {
        assert!(Domain::new(&DomainSpec::unit_ball(0)).is_err());
        assert!(Domain::new(&DomainSpec::polydisc(vec![1.0, -1.0])).is_err());
        let bad = DomainSpec::WeightedEllipsoid {
            coefficients: vec![1.0],
            exponents: vec![0.5],
        };
        assert!(Domain::new(&bad).is_err());
        let wrong_n = DomainSpec::image(DomainSpec::unit_ball(3), PolyMap::shear(2));
        assert!(Domain::new(&wrong_n).is_err());
    }

    #[test]
    fn non_triangular_image_needs_inverse() {
        let z = |i| crate::polymap::Polynomial::var(2, i);
        let f = PolyMap::new(vec![&z(0) + &z(1).pow(2), z(1)]).unwrap();
        let spec = DomainSpec::image(DomainSpec::unit_ball(2), f.clone());
        assert_eq!(Domain::new(&spec).unwrap_err(), Error::MissingInverse);
        let g = PolyMap::new(vec![&z(0) - &z(1).pow(2), z(1)]).unwrap();
        let spec = DomainSpec::ShearImage {
            base: Box::new(DomainSpec::unit_ball(2)),
            map: f,
            inverse: Some(g),
        };
        assert!(Domain::new(&spec).is_ok());
    }

    #[test]
    fn spec_json() {
        let spec: DomainSpec = serde_json::from_str(r#"{"kind":"unit-ball","n":2}"#).unwrap();
        assert_eq!(spec, DomainSpec::unit_ball(2));
        let s = serde_json::to_string(&DomainSpec::shear_image_of_ball(2)).unwrap();
        assert!(s.starts_with(r#"{"kind":"shear-image","base":{"kind":"unit-ball","n":2}"#));
        assert_eq!(
            serde_json::from_str::<DomainSpec>(&s).unwrap(),
            DomainSpec::shear_image_of_ball(2)
        );
    }
}
