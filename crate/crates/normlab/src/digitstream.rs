//! q-ary expansions and the concatenated digit streams σ_q(f)
//! (arguments run over the integers) and τ_q(f) (over the primes),
//! plus the derived bookkeeping: the prime cutoff P for a digit
//! budget N, the maximal expansion length J up to P, the digit
//! thresholds P_j, and the zero-padded table of expansions.

use crate::primes::primes_up_to;
use crate::pseudopoly::{PolyError, PrecisionPolicy, PseudoPolynomial};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use thiserror::Error;

/// Streams are exported one digit per byte, so the base must fit.
pub const MAX_BASE: u32 = 256;

#[derive(Debug, Error)]
pub enum StreamError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("P_{j} is not defined: f(1) >= q^{{j-1}}")]
    NotDefined { j: u32 },
    #[error("base {0} outside supported range 2..=256")]
    UnsupportedBase(u32),
}

fn check_base(q: u32) -> Result<(), StreamError> {
    if (2..=MAX_BASE).contains(&q) {
        Ok(())
    } else {
        Err(StreamError::UnsupportedBase(q))
    }
}

/// Most-significant-first q-ary expansion of a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub base: u32,
    pub digits: Vec<u8>,
}

impl Expansion {
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &d in &self.digits {
            v = v * self.base + BigUint::from(d);
        }
        v
    }
}

/// Digits of `m` in base `q`, most significant first; `0` expands to
/// the single digit `[0]`.
pub fn qary_digits(m: &BigUint, q: u32) -> Expansion {
    assert!((2..=MAX_BASE).contains(&q));
    let digits = if m.is_zero() {
        vec![0]
    } else {
        m.to_radix_be(q)
    };
    Expansion { base: q, digits }
}

/// ℓ(m): number of digits of `m` in base `q` (ℓ(0) = 1).
pub fn digit_length(m: &BigUint, q: u32) -> usize {
    qary_digits(m, q).len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamMode {
    Integers,
    Primes,
}

/// A generated prefix of σ_q(f) or τ_q(f): the concatenated digits
/// plus the start offset of every per-value block.
#[derive(Debug, Clone)]
pub struct DigitStream {
    pub base: u32,
    pub mode: StreamMode,
    pub digits: Vec<u8>,
    pub boundaries: Vec<usize>,
}

/// Resumable generator: call [`StreamBuilder::extend_to`] repeatedly,
/// then [`StreamBuilder::snapshot`] for a prefix of exact length.
pub struct StreamBuilder<'a> {
    f: &'a PseudoPolynomial,
    base: u32,
    mode: StreamMode,
    policy: PrecisionPolicy,
    digits: Vec<u8>,
    boundaries: Vec<usize>,
    primes: Vec<u64>,
    sieve_limit: u64,
    next_index: usize,
}

impl<'a> StreamBuilder<'a> {
    pub fn new(
        f: &'a PseudoPolynomial,
        base: u32,
        mode: StreamMode,
        policy: PrecisionPolicy,
    ) -> Result<Self, StreamError> {
        check_base(base)?;
        Ok(Self {
            f,
            base,
            mode,
            policy,
            digits: Vec::new(),
            boundaries: Vec::new(),
            primes: Vec::new(),
            sieve_limit: 0,
            next_index: 0,
        })
    }

    fn next_argument(&mut self) -> u64 {
        let i = self.next_index;
        self.next_index += 1;
        match self.mode {
            StreamMode::Integers => i as u64 + 1,
            StreamMode::Primes => {
                while i >= self.primes.len() {
                    // geometric growth keeps total sieving linear
                    self.sieve_limit = (self.sieve_limit * 2).max(64);
                    self.primes = primes_up_to(self.sieve_limit);
                }
                self.primes[i]
            }
        }
    }

    /// Generate until at least `n_digits` digits are available.
    pub fn extend_to(&mut self, n_digits: usize) -> Result<(), StreamError> {
        while self.digits.len() < n_digits {
            let n = self.next_argument();
            let v = self.f.eval_floor(n, &self.policy)?;
            self.boundaries.push(self.digits.len());
            self.digits.extend_from_slice(&qary_digits(&v, self.base).digits);
        }
        Ok(())
    }

    pub fn generated(&self) -> usize {
        self.digits.len()
    }

    /// The first `n_digits` digits (possibly cutting the last value
    /// short) with the boundaries that fall inside the prefix.
    pub fn snapshot(&self, n_digits: usize) -> DigitStream {
        assert!(n_digits <= self.digits.len());
        let digits = self.digits[..n_digits].to_vec();
        let boundaries: Vec<usize> = self
            .boundaries
            .iter()
            .copied()
            .take_while(|&b| b < n_digits)
            .collect();
        DigitStream {
            base: self.base,
            mode: self.mode,
            digits,
            boundaries,
        }
    }
}

/// First `n_digits` digits of τ_q(f) (arguments run over the primes).
pub fn build_tau_prefix(
    f: &PseudoPolynomial,
    q: u32,
    n_digits: usize,
    policy: &PrecisionPolicy,
) -> Result<DigitStream, StreamError> {
    let mut b = StreamBuilder::new(f, q, StreamMode::Primes, *policy)?;
    b.extend_to(n_digits)?;
    Ok(b.snapshot(n_digits))
}

/// First `n_digits` digits of σ_q(f) (arguments run over 1, 2, 3, …).
pub fn build_sigma_prefix(
    f: &PseudoPolynomial,
    q: u32,
    n_digits: usize,
    policy: &PrecisionPolicy,
) -> Result<DigitStream, StreamError> {
    let mut b = StreamBuilder::new(f, q, StreamMode::Integers, *policy)?;
    b.extend_to(n_digits)?;
    Ok(b.snapshot(n_digits))
}

/// The prime cutoff for a digit budget: the least prime `P` with
/// `Σ_{p≤P} ℓ(⌊f(p)⌋) ≥ N`, the exact total at `P`, and the
/// asymptotic main term `(β/ln q)·P` for comparison.
#[derive(Debug, Clone, Copy)]
pub struct PrimeCutoff {
    pub p: u64,
    pub digit_total: u64,
    pub main_term: f64,
}

pub fn prime_cutoff_for_digits(
    f: &PseudoPolynomial,
    q: u32,
    n_digits: u64,
    policy: &PrecisionPolicy,
) -> Result<PrimeCutoff, StreamError> {
    check_base(q)?;
    assert!(n_digits >= 1);
    let mut b = StreamBuilder::new(f, q, StreamMode::Primes, *policy)?;
    let mut total = 0u64;
    loop {
        let p = b.next_argument();
        let v = f.eval_floor(p, policy)?;
        total += digit_length(&v, q) as u64;
        if total >= n_digits {
            let beta = f.beta_f64();
            return Ok(PrimeCutoff {
                p,
                digit_total: total,
                main_term: beta / (q as f64).ln() * p as f64,
            });
        }
    }
}

/// Exact digit total `Σ_{p≤P} ℓ(⌊f(p)⌋)`.
pub fn digit_total_up_to(
    f: &PseudoPolynomial,
    q: u32,
    p_limit: u64,
    policy: &PrecisionPolicy,
) -> Result<u64, StreamError> {
    check_base(q)?;
    let mut total = 0u64;
    for p in primes_up_to(p_limit) {
        total += digit_length(&f.eval_floor(p, policy)?, q) as u64;
    }
    Ok(total)
}

/// J: the greatest expansion length of `⌊f(p)⌋` over primes `p ≤ P`.
pub fn compute_j(
    f: &PseudoPolynomial,
    q: u32,
    p_limit: u64,
    policy: &PrecisionPolicy,
) -> Result<u32, StreamError> {
    check_base(q)?;
    let mut j = 0usize;
    for p in primes_up_to(p_limit) {
        j = j.max(digit_length(&f.eval_floor(p, policy)?, q));
    }
    Ok(j as u32)
}

/// The digit threshold `P_j = max{n ≥ 1 : f(n) < q^{j−1}}` and
/// whether the full two-sided chain
/// `q^{j−2} ≤ f(P_j) < q^{j−1} ≤ f(P_j+1) < q^j` holds.
#[derive(Debug, Clone, Copy)]
pub struct PjResult {
    pub p_j: u64,
    pub chain_holds: bool,
}

pub fn compute_pj(
    f: &PseudoPolynomial,
    q: u32,
    j: u32,
    policy: &PrecisionPolicy,
) -> Result<PjResult, StreamError> {
    check_base(q)?;
    assert!(j >= 1);
    let qr = BigRational::from_integer(BigInt::from(q));
    let upper = qr.clone().pow(j as i64 - 1);
    if !f.certified_lt(1, &upper, policy)? {
        return Err(StreamError::NotDefined { j });
    }
    // exponential search for the first n with f(n) >= q^{j-1}
    let mut hi = 2u64;
    while f.certified_lt(hi, &upper, policy)? {
        hi *= 2;
    }
    let mut lo = hi / 2; // f(lo) < upper <= f(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f.certified_lt(mid, &upper, policy)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p_j = lo;
    // maximality gives q^{j-1} <= f(P_j + 1); check the outer bounds
    let lower = qr.clone().pow(j as i64 - 2);
    let top = qr.pow(j as i64);
    let chain_holds =
        !f.certified_lt(p_j, &lower, policy)? && f.certified_lt(p_j + 1, &top, policy)?;
    Ok(PjResult { p_j, chain_holds })
}

/// Expansions of `⌊f(p)⌋` for all `p ≤ P`, left-padded with zeros to
/// the common length `J`.
#[derive(Debug, Clone)]
pub struct PaddedTable {
    pub base: u32,
    pub p_limit: u64,
    pub j: u32,
    pub rows: Vec<PaddedRow>,
}

#[derive(Debug, Clone)]
pub struct PaddedRow {
    pub p: u64,
    pub digits: Vec<u8>,
}

pub fn padded_table(
    f: &PseudoPolynomial,
    q: u32,
    p_limit: u64,
    policy: &PrecisionPolicy,
) -> Result<PaddedTable, StreamError> {
    check_base(q)?;
    let mut raw: Vec<(u64, Vec<u8>)> = Vec::new();
    let mut j = 0usize;
    for p in primes_up_to(p_limit) {
        let e = qary_digits(&f.eval_floor(p, policy)?, q);
        j = j.max(e.len());
        raw.push((p, e.digits));
    }
    let rows = raw
        .into_iter()
        .map(|(p, d)| {
            let mut digits = vec![0u8; j - d.len()];
            digits.extend_from_slice(&d);
            PaddedRow { p, digits }
        })
        .collect();
    Ok(PaddedTable {
        base: q,
        p_limit,
        j: j as u32,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudopoly::{parse_power_function, parse_pseudo_polynomial};

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn qary_examples() {
        assert_eq!(qary_digits(&BigUint::from(46u32), 10).digits, vec![4, 6]);
        assert_eq!(qary_digits(&BigUint::from(8u32), 2).digits, vec![1, 0, 0, 0]);
        assert_eq!(qary_digits(&BigUint::zero(), 10).digits, vec![0]);
        assert_eq!(digit_length(&BigUint::from(46u32), 10), 2);
        assert_eq!(digit_length(&BigUint::from(1000u32), 10), 4);
        assert_eq!(digit_length(&BigUint::zero(), 10), 1);
    }

    #[test]
    fn qary_roundtrip() {
        for n in 0u64..2000 {
            for q in [2u32, 3, 10, 16, 255] {
                let e = qary_digits(&BigUint::from(n), q);
                assert_eq!(e.value(), BigUint::from(n));
                assert!(e.digits.iter().all(|&d| (d as u32) < q));
                if n > 0 {
                    assert_ne!(e.digits[0], 0);
                }
            }
        }
    }

    #[test]
    fn copeland_erdos_prefix() {
        let f = parse_power_function("x").unwrap();
        let s = build_tau_prefix(&f, 10, 10, &policy()).unwrap();
        assert_eq!(s.digits, vec![2, 3, 5, 7, 1, 1, 1, 3, 1, 7]);
        assert_eq!(s.boundaries, vec![0, 1, 2, 3, 4, 6, 8]);
    }

    #[test]
    fn champernowne_prefix() {
        let f = parse_power_function("x").unwrap();
        let s = build_sigma_prefix(&f, 10, 12, &policy()).unwrap();
        assert_eq!(s.digits, vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0, 1]);
        let b = build_sigma_prefix(&f, 2, 6, &policy()).unwrap();
        assert_eq!(b.digits, vec![1, 1, 0, 1, 1, 1]);
    }

    #[test]
    fn tau_of_three_halves() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        let s = build_tau_prefix(&f, 10, 8, &policy()).unwrap();
        // floors at 2,3,5,7,11: 2, 5, 11, 18, 36
        assert_eq!(s.digits, vec![2, 5, 1, 1, 1, 8, 3, 6]);
    }

    #[test]
    fn empty_prefix() {
        let f = parse_power_function("x").unwrap();
        let s = build_tau_prefix(&f, 10, 0, &policy()).unwrap();
        assert!(s.digits.is_empty());
        assert!(s.boundaries.is_empty());
    }

    #[test]
    fn builder_resumes_identically() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        let whole = build_tau_prefix(&f, 10, 500, &policy()).unwrap();
        let mut b = StreamBuilder::new(&f, 10, StreamMode::Primes, policy()).unwrap();
        for n in [10, 17, 100, 101, 500] {
            b.extend_to(n).unwrap();
            let part = b.snapshot(n);
            assert_eq!(part.digits, whole.digits[..n]);
        }
        assert_eq!(b.snapshot(500).boundaries, whole.boundaries);
    }

    #[test]
    fn boundary_consistency() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        let s = build_tau_prefix(&f, 10, 300, &policy()).unwrap();
        let primes = primes_up_to(10_000);
        for (i, w) in s.boundaries.windows(2).enumerate() {
            let v = f.eval_floor(primes[i], &policy()).unwrap();
            assert_eq!(&s.digits[w[0]..w[1]], &qary_digits(&v, 10).digits[..]);
        }
    }

    #[test]
    fn cutoff_examples() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        // lengths at 2,3,5,7: 1,1,2,2 -> running totals 1,2,4,6
        let c = prime_cutoff_for_digits(&f, 10, 5, &policy()).unwrap();
        assert_eq!(c.p, 7);
        assert_eq!(c.digit_total, 6);
        let c1 = prime_cutoff_for_digits(&f, 10, 1, &policy()).unwrap();
        assert_eq!(c1.p, 2);
        // defining double inequality, checked by direct summation
        let c = prime_cutoff_for_digits(&f, 10, 1000, &policy()).unwrap();
        let at_p = digit_total_up_to(&f, 10, c.p, &policy()).unwrap();
        let before = digit_total_up_to(&f, 10, c.p - 1, &policy()).unwrap();
        assert_eq!(at_p, c.digit_total);
        assert!(before < 1000 && 1000 <= at_p);
    }

    #[test]
    fn cutoff_main_term_scale() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        let c = prime_cutoff_for_digits(&f, 10, 100_000, &policy()).unwrap();
        let ratio = c.digit_total as f64 / c.main_term;
        assert!((0.9..=1.1).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn j_values() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        assert_eq!(compute_j(&f, 10, 10, &policy()).unwrap(), 2);
        assert_eq!(compute_j(&f, 10, 2, &policy()).unwrap(), 1);
        // non-decreasing on a grid
        let mut prev = 0;
        for p in [2u64, 10, 100, 1000, 10_000] {
            let j = compute_j(&f, 10, p, &policy()).unwrap();
            assert!(j >= prev);
            prev = j;
        }
    }

    #[test]
    fn pj_values() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        let r = compute_pj(&f, 10, 3, &policy()).unwrap();
        // 21^{3/2} = 96.2… < 100 <= 22^{3/2} = 103.1…
        assert_eq!(r.p_j, 21);
        assert!(r.chain_holds);
        let lin = parse_power_function("x").unwrap();
        assert_eq!(compute_pj(&lin, 10, 2, &policy()).unwrap().p_j, 9);
        // f(1) = 1 >= q^0
        assert!(matches!(
            compute_pj(&f, 10, 1, &policy()),
            Err(StreamError::NotDefined { j: 1 })
        ));
        // strictly increasing beyond the threshold
        let mut prev = 0;
        for j in 2..8 {
            let r = compute_pj(&f, 10, j, &policy()).unwrap();
            assert!(r.p_j > prev, "P_{j} = {} not increasing", r.p_j);
            assert!(r.chain_holds, "chain fails at j = {j}");
            prev = r.p_j;
        }
    }

    #[test]
    fn padded_rows() {
        let f = parse_pseudo_polynomial("x^1.5").unwrap();
        let t = padded_table(&f, 10, 10, &policy()).unwrap();
        assert_eq!(t.j, 2);
        let rows: Vec<(u64, Vec<u8>)> =
            t.rows.iter().map(|r| (r.p, r.digits.clone())).collect();
        assert_eq!(
            rows,
            vec![
                (2, vec![0, 2]),
                (3, vec![0, 5]),
                (5, vec![1, 1]),
                (7, vec![1, 8]),
            ]
        );
        let single = padded_table(&f, 10, 2, &policy()).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(single.rows[0].digits, vec![2]);
    }

    #[test]
    fn padded_suffix_reconstructs_floor() {
        let f = parse_pseudo_polynomial("1*x^2.5 + 1*x^2").unwrap();
        let t = padded_table(&f, 10, 200, &policy()).unwrap();
        for row in &t.rows {
            assert_eq!(row.digits.len(), t.j as usize);
            let e = Expansion {
                base: 10,
                digits: row.digits.clone(),
            };
            assert_eq!(e.value(), f.eval_floor(row.p, &policy()).unwrap());
        }
    }

    #[test]
    fn base_validation() {
        let f = parse_power_function("x").unwrap();
        assert!(matches!(
            build_tau_prefix(&f, 1, 5, &policy()),
            Err(StreamError::UnsupportedBase(1))
        ));
        assert!(build_tau_prefix(&f, 257, 5, &policy()).is_err());
    }
}
