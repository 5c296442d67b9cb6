use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GaussianRational;
use crate::error::{Error, Result};
use crate::serde_util::parse_rational;
use crate::weights::{Character, MultiIndex, WeightMatrix};

/// Polynomial degree; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u64),
}

impl Degree {
    pub fn finite(self) -> Option<u64> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }

    /// `self ≤ bound`; always true for the zero polynomial.
    pub fn at_most(self, bound: u64) -> bool {
        self <= Degree::Finite(bound)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::NegInfinity => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_u64(*d),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(u64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(n) => Ok(Degree::Finite(n)),
            Repr::S(s) if s == "-inf" => Ok(Degree::NegInfinity),
            Repr::S(s) => Err(D::Error::custom(format!("invalid degree '{s}'"))),
        }
    }
}

/// Sparse polynomial in `nvars` variables over ℚ(i).
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<MultiIndex, GaussianRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(MultiIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    /// The coordinate function `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, i), GaussianRational::one())
    }

    pub fn monomial(exponent: MultiIndex, c: GaussianRational) -> Self {
        let mut p = Self::zero(exponent.len());
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    /// Collects terms, summing repeated exponents and dropping zeros.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (MultiIndex, GaussianRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    context: "polynomial term exponent length",
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: MultiIndex, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(e.clone())
            .or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussianRational)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No terms, i.e. the zero polynomial.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(MultiIndex::degree)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn coefficient(&self, e: &MultiIndex) -> GaussianRational {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coefficient(&MultiIndex::zero(self.nvars))
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.degree() {
            Degree::NegInfinity => Some(GaussianRational::zero()),
            Degree::Finite(0) => Some(self.constant_term()),
            Degree::Finite(_) => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `∂/∂z_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.exponents()[i];
            if k == 0 {
                continue;
            }
            let mut d = e.clone().into_exponents();
            d[i] -= 1;
            out.add_term(MultiIndex::new(d), &c.scale_int(&k.into()));
        }
        out
    }

    /// Substitutes `subs[j]` for `z_j`. All substitutes must share one
    /// variable count, which becomes the variable count of the result.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                context: "composition substitutes",
                expected: self.nvars,
                found: subs.len(),
            });
        }
        let m = subs.first().map_or(0, Polynomial::nvars);
        if let Some(bad) = subs.iter().find(|s| s.nvars != m) {
            return Err(Error::DimensionMismatch {
                context: "composition substitute variable count",
                expected: m,
                found: bad.nvars,
            });
        }
        // Powers are cached per variable as they are needed.
        let mut powers: Vec<Vec<Polynomial>> = subs
            .iter()
            .map(|s| vec![Polynomial::one(m), s.clone()])
            .collect();
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(m, c.clone());
            for (j, &k) in e.exponents().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let cache = &mut powers[j];
                while cache.len() <= k as usize {
                    let next = &cache[cache.len() - 1] * &subs[j];
                    cache.push(next);
                }
                term = &term * &cache[k as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Evaluation at a point of ℂⁿ in double precision.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.to_complex().evaluate(z)
    }

    pub fn to_complex(&self) -> ComplexPolynomial {
        ComplexPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.exponents().to_vec(), c.to_complex64()))
                .collect(),
        }
    }

    /// Terms in graded-lexicographic order: by total degree, then
    /// lexicographically by exponent.
    pub fn grlex_terms(&self) -> Vec<(&MultiIndex, &GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Terms whose monomial has character `k` under `a`.
    pub fn project_character(&self, a: &WeightMatrix, k: &Character) -> Result<Polynomial> {
        self.check_matrix(a)?;
        Ok(Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| a.character_of(e) == *k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Splits the polynomial into its components in the weight spaces `V_k`.
    /// The components sum to `self`.
    pub fn character_decomposition(
        &self,
        a: &WeightMatrix,
    ) -> Result<BTreeMap<Character, Polynomial>> {
        self.check_matrix(a)?;
        let mut out: BTreeMap<Character, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(a.character_of(e))
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .terms
                .insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    fn check_matrix(&self, a: &WeightMatrix) -> Result<()> {
        if a.n() != self.nvars {
            return Err(Error::DimensionMismatch {
                context: "polynomial variables vs weight matrix rows",
                expected: a.n(),
                found: self.nvars,
            });
        }
        Ok(())
    }

    /// Parses the JSON term-list form with a known variable count.
    pub fn from_json_terms(nvars: usize, terms: Vec<TermJson>) -> Result<Polynomial> {
        let parsed = terms
            .into_iter()
            .map(|t| {
                let re = parse_rational(&t.re).map_err(Error::Parse)?;
                let im = parse_rational(&t.im).map_err(Error::Parse)?;
                Ok((MultiIndex::new(t.exp), GaussianRational::new(re, im)))
            })
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(nvars, parsed)
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.grlex_terms()
            .into_iter()
            .map(|(e, c)| TermJson {
                exp: e.exponents().to_vec(),
                re: c.re.to_string(),
                im: c.im.to_string(),
            })
            .collect()
    }

    /// Parses `[{"exp": [...], "re": "p/q", "im": "p/q"}, ...]`.
    pub fn from_json_str(nvars: usize, s: &str) -> Result<Polynomial> {
        let terms: Vec<TermJson> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_terms(nvars, terms)
    }
}

/// One term of the JSON polynomial form. `im` defaults to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    /// The variable count is taken from the first term; an empty list
    /// deserializes as the zero polynomial in zero variables. Use
    /// [`Polynomial::from_json_terms`] when the count is known.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        let n = terms.first().map_or(0, |t| t.exp.len());
        Polynomial::from_json_terms(n, terms).map_err(D::Error::custom)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.grlex_terms().into_iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("z{}", j + 1)
                    } else {
                        format!("z{}^{k}", j + 1)
                    }
                })
                .collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "({c})*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

fn check_same_vars(a: &Polynomial, b: &Polynomial) {
    assert_eq!(a.nvars, b.nvars, "polynomials in different variable counts");
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        check_same_vars(self, o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self + &(-o)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// Exponent overflow panics; products of degree beyond `u32::MAX` are far
/// outside any computation this crate performs.
impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        check_same_vars(self, o);
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1
                    .checked_add(e2)
                    .expect("exponent overflow in polynomial product");
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, o: Polynomial) -> Polynomial {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Floating-point copy of a polynomial for fast evaluation.
#[derive(Clone, Debug)]
pub struct ComplexPolynomial {
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl ComplexPolynomial {
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(z)
                    .filter(|(&k, _)| k > 0)
                    .fold(*c, |acc, (&k, x)| acc * x.powu(k))
            })
            .sum()
    }

    /// `Σ |c| Π r_j^{α_j}`, an upper bound for `|p|` on the polydisc of radii `r`.
    pub fn abs_bound(&self, radii: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(radii)
                    .fold(c.norm(), |acc, (&k, r)| acc * r.powi(k as i32))
            })
            .sum()
    }
}
