//! Prime generation and prime-counting utilities.
//!
//! Everything downstream sums over `p ≤ P`, so the sieve is segmented
//! (odd-only storage) and exposes both a streaming iterator and a
//! collected `Vec<u64>`.

use crate::quad::{adaptive_simpson, KahanSum};
use thiserror::Error;

pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

#[derive(Debug, Error, PartialEq)]
pub enum PrimesError {
    #[error("li(x) requires x >= 2, got {0}")]
    Domain(f64),
}

/// The primes up to and including `limit`, in increasing order.
#[derive(Debug, Clone)]
pub struct PrimeRange {
    pub limit: u64,
    pub segment_size: usize,
}

impl PrimeRange {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }

    pub fn with_segment_size(limit: u64, segment_size: usize) -> Self {
        Self {
            limit,
            segment_size: segment_size.max(64),
        }
    }

    pub fn iter(&self) -> PrimeIter {
        PrimeIter::new(self.limit, self.segment_size)
    }
}

impl IntoIterator for &PrimeRange {
    type Item = u64;
    type IntoIter = PrimeIter;

    fn into_iter(self) -> PrimeIter {
        self.iter()
    }
}

/// Streaming segmented sieve of Eratosthenes.
pub struct PrimeIter {
    limit: u64,
    segment_size: usize,
    base: Vec<u64>,
    // current segment: odd numbers in [low, low + 2*seg.len())
    seg: Vec<bool>,
    low: u64,
    pos: usize,
    emitted_two: bool,
}

impl PrimeIter {
    fn new(limit: u64, segment_size: usize) -> Self {
        let root = (limit as f64).sqrt() as u64 + 2;
        let base = simple_sieve(root);
        Self {
            limit,
            segment_size,
            base,
            seg: Vec::new(),
            low: 3,
            pos: 0,
            emitted_two: false,
        }
    }

    fn fill_segment(&mut self) -> bool {
        if self.low > self.limit {
            return false;
        }
        let count = ((self.limit - self.low) / 2 + 1).min(self.segment_size as u64) as usize;
        self.seg.clear();
        self.seg.resize(count, true);
        let high = self.low + 2 * count as u64 - 1;
        for &p in self.base.iter().skip(1) {
            // odd base primes only
            if p * p > high {
                break;
            }
            let mut start = p * p;
            if start < self.low {
                let k = (self.low - start).div_ceil(2 * p);
                start += 2 * p * k;
            }
            let mut idx = ((start - self.low) / 2) as usize;
            while idx < count {
                self.seg[idx] = false;
                idx += p as usize;
            }
        }
        self.pos = 0;
        true
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.emitted_two {
            self.emitted_two = true;
            if self.limit >= 2 {
                return Some(2);
            }
            return None;
        }
        loop {
            while self.pos < self.seg.len() {
                let i = self.pos;
                self.pos += 1;
                if self.seg[i] {
                    return Some(self.low + 2 * i as u64);
                }
            }
            self.low += 2 * self.seg.len().max(1) as u64;
            if self.seg.is_empty() {
                // first segment
                self.low = 3;
            }
            if !self.fill_segment() {
                return None;
            }
        }
    }
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2usize;
    while i * i <= n {
        if is_prime[i] {
            let mut j = i * i;
            while j <= n {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| is_prime[i]).map(|i| i as u64).collect()
}

/// The primes `p ≤ limit`, collected.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    PrimeRange::new(limit).iter().collect()
}

/// `π(x)`: number of primes `≤ x`.
pub fn prime_pi(x: f64) -> u64 {
    if x < 2.0 {
        return 0;
    }
    PrimeRange::new(x.floor() as u64).iter().count() as u64
}

/// `π(P)` for an already-sieved, sorted prime list.
pub fn prime_pi_in(primes: &[u64], p_limit: u64) -> u64 {
    primes.partition_point(|&p| p <= p_limit) as u64
}

/// Logarithmic integral `Li(x) = ∫₂ˣ dt/log t`, absolute error ≤ 1e-6.
pub fn li(x: f64) -> Result<f64, PrimesError> {
    if x < 2.0 {
        return Err(PrimesError::Domain(x));
    }
    Ok(adaptive_simpson(|t| 1.0 / t.ln(), 2.0, x, 1e-8))
}

/// Chebyshev `θ(P) = Σ_{p ≤ P} log p`.
pub fn chebyshev_theta(p_limit: u64) -> f64 {
    let mut acc = KahanSum::new();
    for p in PrimeRange::new(p_limit).iter() {
        acc.add((p as f64).ln());
    }
    acc.value()
}
