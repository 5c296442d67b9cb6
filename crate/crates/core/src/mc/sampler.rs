//! Chunked rejection sampling with per-chunk ChaCha streams.
//!
//! Candidate `j` lives in chunk `j / CHUNK` and is drawn from the ChaCha8
//! stream `(seed, chunk)`, so the accepted sequence depends only on the seed.
//! Chunks run in parallel and are reduced in chunk order.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::domain::{Domain, DomainSpec};
use crate::error::{Error, Result};

/// Candidates per RNG stream.
pub const CHUNK: u64 = 4096;
/// Chunks evaluated per parallel round.
const BATCH: u64 = 64;
/// Minimum acceptance ratio before a spec is declared degenerate.
pub const MIN_ACCEPTANCE: f64 = 1e-6;
/// Candidates drawn before the acceptance ratio is judged.
pub const DEGENERACY_PROBE: u64 = 1 << 20;

/// Per-point work done by a sampler run.
pub(crate) trait Visitor: Sync {
    type Acc: Send;
    fn empty(&self) -> Self::Acc;
    /// Called once per accepted point, in candidate order within a chunk.
    /// `rng` is the chunk stream, positioned right after the point.
    fn visit(&self, acc: &mut Self::Acc, z: &[Complex64], rng: &mut ChaCha8Rng);
    fn merge(&self, left: Self::Acc, right: Self::Acc) -> Self::Acc;
}

pub(crate) struct Run<A> {
    pub acc: A,
    pub accepted: u64,
    pub candidates: u64,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Fills `z` with a uniform point of the polydisc with the given radii.
fn draw(rng: &mut ChaCha8Rng, radii: &[f64], z: &mut [Complex64]) {
    for (zi, r) in z.iter_mut().zip(radii) {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        *zi = Complex64::from_polar(r * u.sqrt(), TAU * v);
    }
}

fn run_chunk<V: Visitor>(
    domain: &Domain,
    seed: u64,
    chunk: u64,
    limit: u64,
    visitor: &V,
) -> Run<V::Acc> {
    let mut rng = chunk_rng(seed, chunk);
    let mut z = vec![Complex64::new(0.0, 0.0); domain.n()];
    let mut acc = visitor.empty();
    let mut accepted = 0;
    let mut candidates = 0;
    while candidates < CHUNK && accepted < limit {
        draw(&mut rng, domain.enclosing_radii(), &mut z);
        candidates += 1;
        if domain.contains(&z) {
            accepted += 1;
            visitor.visit(&mut acc, &z, &mut rng);
        }
    }
    Run {
        acc,
        accepted,
        candidates,
    }
}

/// Draws candidates until exactly `count` have been accepted.
pub(crate) fn run<V: Visitor>(
    domain: &Domain,
    seed: u64,
    count: u64,
    visitor: &V,
) -> Result<Run<V::Acc>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "sample count must be at least 2, got {count}"
        )));
    }
    let mut parts: Vec<V::Acc> = Vec::new();
    let mut accepted = 0u64;
    let mut candidates = 0u64;
    let mut next_chunk = 0u64;
    while accepted < count {
        if candidates >= DEGENERACY_PROBE {
            let ratio = accepted as f64 / candidates as f64;
            if ratio < MIN_ACCEPTANCE {
                return Err(Error::DegenerateDomain { ratio, candidates });
            }
        }
        let round: Vec<Run<V::Acc>> = (next_chunk..next_chunk + BATCH)
            .into_par_iter()
            .map(|c| run_chunk(domain, seed, c, u64::MAX, visitor))
            .collect();
        for (offset, part) in round.into_iter().enumerate() {
            let remaining = count - accepted;
            if part.accepted >= remaining {
                // Redo the crossing chunk so it stops at the last needed point.
                let chunk = next_chunk + offset as u64;
                let last = run_chunk(domain, seed, chunk, remaining, visitor);
                accepted += last.accepted;
                candidates += last.candidates;
                parts.push(last.acc);
                break;
            }
            accepted += part.accepted;
            candidates += part.candidates;
            parts.push(part.acc);
        }
        next_chunk += BATCH;
    }
    let acc = pairwise(parts, visitor).unwrap_or_else(|| visitor.empty());
    Ok(Run {
        acc,
        accepted,
        candidates,
    })
}

/// Balanced reduction in fixed order.
fn pairwise<V: Visitor>(mut parts: Vec<V::Acc>, visitor: &V) -> Option<V::Acc> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => visitor.merge(a, b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop()
}

/// Accepted points with the normalization data needed for integrals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainSample {
    pub points: Vec<Vec<Complex64>>,
    pub candidates: u64,
    pub acceptance_ratio: f64,
    pub enclosing_radii: Vec<f64>,
    pub enclosing_volume: f64,
    pub seed: u64,
}

struct Collect;

impl Visitor for Collect {
    type Acc = Vec<Vec<Complex64>>;
    fn empty(&self) -> Self::Acc {
        Vec::new()
    }
    fn visit(&self, acc: &mut Self::Acc, z: &[Complex64], _: &mut ChaCha8Rng) {
        acc.push(z.to_vec());
    }
    fn merge(&self, mut left: Self::Acc, right: Self::Acc) -> Self::Acc {
        left.extend(right);
        left
    }
}

/// `count` uniform points of the domain, by rejection from the enclosing
/// polydisc.
pub fn sample_domain(spec: &DomainSpec, seed: u64, count: u64) -> Result<DomainSample> {
    let domain = Domain::new(spec)?;
    let r = run(&domain, seed, count, &Collect)?;
    Ok(DomainSample {
        points: r.acc,
        candidates: r.candidates,
        acceptance_ratio: r.accepted as f64 / r.candidates as f64,
        enclosing_radii: domain.enclosing_radii().to_vec(),
        enclosing_volume: domain.enclosing_volume(),
        seed,
    })
}

/// Running sums of `N` complex integrands over accepted points.
#[derive(Clone, Debug)]
pub(crate) struct Moments {
    pub sum: Vec<Complex64>,
    pub sum_sq_re: Vec<f64>,
    pub sum_sq_im: Vec<f64>,
}

impl Moments {
    pub fn new(len: usize) -> Self {
        Moments {
            sum: vec![Complex64::new(0.0, 0.0); len],
            sum_sq_re: vec![0.0; len],
            sum_sq_im: vec![0.0; len],
        }
    }

    pub fn add(&mut self, i: usize, v: Complex64) {
        self.sum[i] += v;
        self.sum_sq_re[i] += v.re * v.re;
        self.sum_sq_im[i] += v.im * v.im;
    }

    pub fn merge(mut self, other: Moments) -> Moments {
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sum_sq_re[i] += other.sum_sq_re[i];
            self.sum_sq_im[i] += other.sum_sq_im[i];
        }
        self
    }
}
