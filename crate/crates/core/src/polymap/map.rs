use std::collections::HashMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::polynomial::{ComplexPolynomial, TermJson};
use super::{Degree, Polynomial};
use crate::error::{Error, Result};

/// Largest map size accepted by [`PolyMap::jacobian_det`].
pub const MAX_JACOBIAN_SIZE: usize = 8;

/// A polynomial self-map `f = (f_1, …, f_n)` of ℂⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        if let Some(bad) = components.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch {
                context: "map components must be polynomials in n variables",
                expected: n,
                found: bad.nvars(),
            });
        }
        Ok(PolyMap { components })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            components: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    /// The shear `(z_1, z_2 + z_1^k)` of ℂ².
    pub fn shear(k: u32) -> Self {
        let z1 = Polynomial::var(2, 0);
        let z2 = Polynomial::var(2, 1);
        PolyMap {
            components: vec![z1.clone(), &z2 + &z1.pow(k)],
        }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn degree(&self) -> Degree {
        self.components
            .iter()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// `f(0) = 0`.
    pub fn fixes_origin(&self) -> bool {
        self.components.iter().all(|p| p.constant_term().is_zero())
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.n() != self.n() {
            return Err(Error::DimensionMismatch {
                context: "map composition",
                expected: self.n(),
                found: inner.n(),
            });
        }
        let components = self
            .components
            .iter()
            .map(|p| p.compose(&inner.components))
            .collect::<Result<_>>()?;
        Ok(PolyMap { components })
    }

    /// Matrix of partial derivatives `∂f_i/∂z_j`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<Polynomial>> {
        self.components
            .iter()
            .map(|p| (0..self.n()).map(|j| p.derivative(j)).collect())
            .collect()
    }

    /// Symbolic Jacobian determinant, by Laplace expansion along rows with
    /// minors memoized on their column sets.
    pub fn jacobian_det(&self) -> Result<Polynomial> {
        let n = self.n();
        if n > MAX_JACOBIAN_SIZE {
            return Err(Error::SizeLimit {
                n,
                max: MAX_JACOBIAN_SIZE,
            });
        }
        let jac = self.jacobian_matrix();
        let mut memo: HashMap<u32, Polynomial> = HashMap::new();
        let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
        Ok(minor(&jac, n, full, &mut memo))
    }

    /// Exact inverse of a triangular map `f_i = c_i z_i + h_i(z_1, …, z_{i-1})`
    /// with constants `c_i ≠ 0`; `None` when `f` has another shape.
    pub fn invert_triangular(&self) -> Option<PolyMap> {
        let n = self.n();
        let mut inverse: Vec<Polynomial> = Vec::with_capacity(n);
        for (i, f) in self.components.iter().enumerate() {
            let unit = crate::weights::MultiIndex::unit(n, i);
            let c = f.coefficient(&unit);
            let c_inv = c.inv()?;
            let rest = f - &Polynomial::monomial(unit, c);
            if rest
                .terms()
                .any(|(e, _)| e.exponents()[i..].iter().any(|&k| k > 0))
            {
                return None;
            }
            // Only the first i substitutes matter for `rest`.
            let subs: Vec<Polynomial> = inverse
                .iter()
                .cloned()
                .chain((i..n).map(|j| Polynomial::var(n, j)))
                .collect();
            let h = rest.compose(&subs).ok()?;
            inverse.push((&Polynomial::var(n, i) - &h).scale(&c_inv));
        }
        let inverse = PolyMap {
            components: inverse,
        };
        (self.compose(&inverse).ok()? == PolyMap::identity(n)).then_some(inverse)
    }

    pub fn to_complex(&self) -> ComplexPolyMap {
        ComplexPolyMap {
            components: self.components.iter().map(Polynomial::to_complex).collect(),
        }
    }
}

fn minor(
    jac: &[Vec<Polynomial>],
    n: usize,
    cols: u32,
    memo: &mut HashMap<u32, Polynomial>,
) -> Polynomial {
    if cols == 0 {
        return Polynomial::one(n);
    }
    if let Some(m) = memo.get(&cols) {
        return m.clone();
    }
    let row = n - cols.count_ones() as usize;
    let mut acc = Polynomial::zero(n);
    let mut position = 0;
    for j in 0..n {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = &jac[row][j];
        if !entry.is_zero() {
            let sub = minor(jac, n, cols & !(1 << j), memo);
            let term = entry * &sub;
            acc = if position % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

impl Serialize for PolyMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.components.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Vec<TermJson>>::deserialize(d)?;
        let n = raw.len();
        let components = raw
            .into_iter()
            .map(|terms| Polynomial::from_json_terms(n, terms))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        PolyMap::new(components).map_err(D::Error::custom)
    }
}

/// Floating-point copy of a map for evaluation inside samplers.
#[derive(Clone, Debug)]
pub struct ComplexPolyMap {
    components: Vec<ComplexPolynomial>,
}

impl ComplexPolyMap {
    pub fn evaluate_into(&self, z: &[Complex64], out: &mut [Complex64]) {
        for (o, p) in out.iter_mut().zip(&self.components) {
            *o = p.evaluate(z);
        }
    }

    pub fn components(&self) -> &[ComplexPolynomial] {
        &self.components
    }
}
