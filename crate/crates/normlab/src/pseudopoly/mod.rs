//! Pseudo-polynomials `f(x) = α₀x^{β₀} + ⋯ + α_d x^{β_d}` with
//! `α₀ > 0`, strictly decreasing positive exponents and at least one
//! non-integral exponent, plus certified evaluation of the quantities
//! every later stage consumes: `⌊f(n)⌋`, `{ν f(n)/qʲ}` and lower
//! bounds for `|f^{(m)}|` on an interval.
//!
//! Evaluation is interval-based: terms with rational data are enclosed
//! by scaled integer roots (exact rational endpoints), terms involving
//! `pi`, `e` or `sqrt2` by the fixed-point routines in [`fixed`]. The
//! working precision starts at [`PrecisionPolicy::start_bits`] and
//! doubles until the floor or fractional part is certified, up to
//! [`PrecisionPolicy::max_bits`]; exhaustion surfaces as
//! [`PolyError::AmbiguousValue`] rather than a guess.

mod enclosure;
pub mod fixed;
mod parse;

pub use enclosure::Enclosure;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Hard cap on |numerator| and denominator of a reduced rational
/// exponent; keeps `n^p` allocations sane.
const MAX_EXPONENT_PART: u64 = 4096;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a pseudo-polynomial: {0}")]
    NotPseudoPolynomial(String),
    #[error("could not certify value at n = {n} within {bits} bits; tightest enclosure [{lo}, {hi}]")]
    AmbiguousValue { n: u64, lo: f64, hi: f64, bits: u32 },
    #[error("no positive derivative lower bound available")]
    NoBound,
}

/// Named irrational constants admitted by the expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConstant {
    Pi,
    E,
    Sqrt2,
}

impl NamedConstant {
    pub fn enclosure(self, bits: u32) -> Enclosure {
        match self {
            NamedConstant::Pi => fixed::pi(bits),
            NamedConstant::E => fixed::e_const(bits),
            NamedConstant::Sqrt2 => fixed::sqrt2(bits),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedConstant::Pi => "pi",
            NamedConstant::E => "e",
            NamedConstant::Sqrt2 => "sqrt2",
        }
    }
}

/// A coefficient or exponent: an exact rational or a named constant.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Named(NamedConstant),
}

impl Scalar {
    pub fn named(word: &str) -> Option<Self> {
        match word {
            "pi" => Some(Scalar::Named(NamedConstant::Pi)),
            "e" => Some(Scalar::Named(NamedConstant::E)),
            "sqrt2" => Some(Scalar::Named(NamedConstant::Sqrt2)),
            _ => None,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Named(_) => None,
        }
    }

    /// True when the scalar is an integer (named constants never are).
    pub fn is_integer(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_integer())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_positive(),
            Scalar::Named(_) => true,
        }
    }

    /// Enclosure at the given precision; named constants are generated
    /// to the working precision on demand.
    pub fn enclosure(&self, bits: u32) -> Enclosure {
        match self {
            Scalar::Rational(r) => Enclosure::point(r.clone()),
            Scalar::Named(c) => c.enclosure(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Named(c) => c.enclosure(64).to_f64(),
        }
    }

    /// Total order on scalar values. Named constants are irrational,
    /// so refinement always separates unequal values.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Named(a), Scalar::Named(b)) if a == b => Ordering::Equal,
            _ => {
                let mut bits = 64;
                loop {
                    let ea = self.enclosure(bits);
                    let eb = other.enclosure(bits);
                    if ea.hi < eb.lo {
                        return Ordering::Less;
                    }
                    if eb.hi < ea.lo {
                        return Ordering::Greater;
                    }
                    bits *= 2;
                    assert!(bits <= 1 << 16, "scalar comparison failed to separate");
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Named(c) => write!(f, "{}", c.name()),
        }
    }
}

/// One monomial `coeff · x^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Scalar,
    pub exponent: Scalar,
}

impl Term {
    pub(crate) fn negated(&self) -> Term {
        let coeff = match &self.coeff {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            // `-pi*x^..` is representable only through a rational
            // multiple, which the grammar does not produce; keep the
            // constant and reject later if it ever arises.
            Scalar::Named(_) => {
                unreachable!("grammar does not negate named coefficients directly")
            }
        };
        Term {
            coeff,
            exponent: self.exponent.clone(),
        }
    }
}

/// A pseudo-polynomial: terms sorted by strictly decreasing exponent,
/// leading coefficient positive, at least one non-integral exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoPolynomial {
    terms: Vec<Term>,
}

/// `f = g + h` with `h` the integer-exponent (polynomial) part and `g`
/// the non-integer-exponent part.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Non-integer-exponent terms, exponents ascending (`θ₁ < ⋯ < θ_r`).
    pub g_terms: Vec<Term>,
    /// Coefficients of `h` by ascending degree (empty when `h = 0`).
    pub h_coeffs: Vec<Scalar>,
    /// Largest non-integer exponent `θ_r`.
    pub theta_r: Scalar,
    /// Degree of `h` (0 when `h = 0`).
    pub k: u32,
}

/// A certified enclosure: `lo ≤ value ≤ hi` with exact rational
/// endpoints, produced at `precision_bits` working precision.
#[derive(Debug, Clone)]
pub struct CertifiedValue {
    pub lo: BigRational,
    pub hi: BigRational,
    pub precision_bits: u32,
}

impl CertifiedValue {
    pub fn to_f64(&self) -> f64 {
        Enclosure::new(self.lo.clone(), self.hi.clone()).to_f64()
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Adaptive-precision policy: evaluate at `start_bits`, double until
/// certified, give up at `max_bits`.
#[derive(Debug, Clone, Copy)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            start_bits: 96,
            max_bits: 4096,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, max_bits: u32) -> Self {
        let start_bits = start_bits.max(64);
        Self {
            start_bits,
            max_bits: max_bits.max(start_bits),
        }
    }
}

/// Parse an expression like `2*x^2.5 + 3*x^2 - 1*x^0.5`.
pub fn parse_pseudo_polynomial(text: &str) -> Result<PseudoPolynomial, PolyError> {
    let f = parse::parse(text)?;
    if f.is_pseudo() {
        Ok(f)
    } else {
        Err(PolyError::NotPseudoPolynomial(
            "all exponents are integral".into(),
        ))
    }
}

/// Like [`parse_pseudo_polynomial`] but admits ordinary polynomials
/// such as `x` (Champernowne / Copeland–Erdős streams). Functions
/// accepted only here must not be fed to [`PseudoPolynomial::decompose`].
pub fn parse_power_function(text: &str) -> Result<PseudoPolynomial, PolyError> {
    parse::parse(text)
}

impl PseudoPolynomial {
    /// Validate and normalize a term list. The pseudo-polynomial
    /// requirement (a non-integral exponent) is checked by
    /// [`parse_pseudo_polynomial`], not here.
    pub fn from_terms(mut terms: Vec<Term>) -> Result<Self, PolyError> {
        if terms.is_empty() {
            return Err(PolyError::Parse("empty expression".into()));
        }
        for t in &terms {
            if let Scalar::Rational(e) = &t.exponent {
                if !e.is_positive() {
                    return Err(PolyError::NotPseudoPolynomial(format!(
                        "exponent {e} is not positive"
                    )));
                }
                if e.numer().magnitude() > &BigUint::from(MAX_EXPONENT_PART)
                    || e.denom().magnitude() > &BigUint::from(MAX_EXPONENT_PART)
                {
                    return Err(PolyError::NotPseudoPolynomial(format!(
                        "exponent {e} outside supported range"
                    )));
                }
            }
        }
        // sort by decreasing exponent, merge equal exponents
        terms.sort_by(|a, b| b.exponent.cmp_value(&a.exponent));
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            match merged.last_mut() {
                Some(prev) if prev.exponent.cmp_value(&t.exponent) == Ordering::Equal => {
                    match (&prev.coeff, &t.coeff) {
                        (Scalar::Rational(a), Scalar::Rational(b)) => {
                            prev.coeff = Scalar::Rational(a + b);
                        }
                        _ => {
                            return Err(PolyError::Parse(format!(
                                "cannot merge terms with equal exponent {}",
                                t.exponent
                            )))
                        }
                    }
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !matches!(&t.coeff, Scalar::Rational(r) if r.is_zero()));
        if merged.is_empty() {
            return Err(PolyError::NotPseudoPolynomial(
                "all terms cancelled".into(),
            ));
        }
        if !merged[0].coeff.is_positive() {
            return Err(PolyError::NotPseudoPolynomial(
                "leading coefficient is not positive".into(),
            ));
        }
        Ok(Self { terms: merged })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// True when at least one exponent is non-integral.
    pub fn is_pseudo(&self) -> bool {
        self.terms.iter().any(|t| !t.exponent.is_integer())
    }

    /// Leading exponent `β = β₀`.
    pub fn beta(&self) -> &Scalar {
        &self.terms[0].exponent
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta().to_f64()
    }

    /// Unique split `f = g + h` into non-integer and polynomial parts.
    pub fn decompose(&self) -> Decomposition {
        let mut g_terms: Vec<Term> = Vec::new();
        let mut poly: Vec<(u32, Scalar)> = Vec::new();
        for t in &self.terms {
            if t.exponent.is_integer() {
                let deg = t
                    .exponent
                    .as_rational()
                    .unwrap()
                    .to_integer()
                    .to_u32()
                    .expect("bounded integer exponent");
                poly.push((deg, t.coeff.clone()));
            } else {
                g_terms.push(t.clone());
            }
        }
        g_terms.reverse(); // ascending exponents
        let k = poly.iter().map(|(d, _)| *d).max().unwrap_or(0);
        let mut h_coeffs = Vec::new();
        if !poly.is_empty() {
            h_coeffs = vec![Scalar::from_int(0); k as usize + 1];
            for (d, c) in poly {
                h_coeffs[d as usize] = c;
            }
        }
        let theta_r = g_terms
            .last()
            .expect("at least one non-integer exponent")
            .exponent
            .clone();
        Decomposition {
            g_terms,
            h_coeffs,
            theta_r,
            k,
        }
    }

    /// Interval enclosure of `f(n)` at the given working precision.
    /// The boolean is true when the enclosure is an exact point.
    pub fn enclosure_at(&self, n: u64, bits: u32) -> (Enclosure, bool) {
        let mut acc = Enclosure::point(BigRational::zero());
        let mut exact = true;
        for t in &self.terms {
            let (enc, term_exact) = term_enclosure(t, n, bits);
            exact &= term_exact;
            acc = acc.add(&enc);
        }
        (acc, exact)
    }

    /// Certified `⌊f(n)⌋`, clamped at zero for the rare negative values
    /// at small `n` (the digit stream treats those as value 0).
    pub fn eval_floor(&self, n: u64, policy: &PrecisionPolicy) -> Result<BigUint, PolyError> {
        assert!(n >= 1);
        if let Some(v) = self.eval_floor_fast(n) {
            return Ok(v);
        }
        let mut bits = policy.start_bits;
        loop {
            let (enc, exact) = self.enclosure_at(n, bits);
            if exact {
                return Ok(clamp_floor(enc.lo.floor().to_integer()));
            }
            let fl = enc.lo.floor();
            let next = &fl + BigRational::one();
            if enc.hi < next {
                return Ok(clamp_floor(fl.to_integer()));
            }
            if bits >= policy.max_bits {
                return Err(PolyError::AmbiguousValue {
                    n,
                    lo: enc.lo_f64(),
                    hi: enc.hi_f64(),
                    bits,
                });
            }
            bits = (bits * 2).min(policy.max_bits);
        }
    }

    /// Exact integer fast path: integer-coefficient polynomial part
    /// plus a single surd term with positive rational data. Covers the
    /// workhorse functions (`x^1.5`, `x^2.5 + x^2`, …) without any
    /// interval refinement.
    fn eval_floor_fast(&self, n: u64) -> Option<BigUint> {
        let mut poly_sum = BigInt::zero();
        let mut surd: Option<(&BigRational, &BigRational)> = None;
        for t in &self.terms {
            let c = t.coeff.as_rational()?;
            let e = t.exponent.as_rational()?;
            if e.is_integer() {
                if !c.is_integer() {
                    return None;
                }
                let p = e.to_integer().to_u32()?;
                poly_sum += c.to_integer() * BigInt::from(n).pow(p);
            } else {
                if surd.is_some() || !c.is_positive() {
                    return None;
                }
                surd = Some((c, e));
            }
        }
        let (c, e) = surd?;
        let p = e.numer().to_u32()?;
        let d = e.denom().to_u32()?;
        // ⌊(a/b)·n^{p/d}⌋ = ⌊((aᵈ nᵖ) / bᵈ)^{1/d}⌋ = nth_root(⌊aᵈ nᵖ / bᵈ⌋)
        let surd_floor = if c.is_one() {
            if d == 2 {
                if let Some(np) = (n as u128).checked_pow(p) {
                    BigUint::from(isqrt_u128(np))
                } else {
                    BigUint::from(n).pow(p).sqrt()
                }
            } else {
                BigUint::from(n).pow(p).nth_root(d)
            }
        } else {
            let a = c.numer().magnitude();
            let b = c.denom().magnitude();
            let radicand = (a.pow(d) * BigUint::from(n).pow(p)) / b.pow(d);
            radicand.nth_root(d)
        };
        let total = poly_sum + BigInt::from(surd_floor);
        Some(clamp_floor(total))
    }

    /// Certified fractional part `{ν f(n) / qʲ}` as an enclosure of
    /// width at most `2⁻⁵³` (or an exact point).
    pub fn eval_scaled_fraction(
        &self,
        n: u64,
        nu: u64,
        j: u32,
        q: u32,
        policy: &PrecisionPolicy,
    ) -> Result<CertifiedValue, PolyError> {
        assert!(n >= 1 && nu >= 1 && q >= 2);
        let factor = BigRational::new(BigInt::from(nu), BigInt::from(q).pow(j));
        let width_limit = BigRational::new(BigInt::one(), BigInt::one() << 53usize);
        let mut bits = policy.start_bits;
        loop {
            let (enc, exact) = self.enclosure_at(n, bits);
            let x = enc.scale(&factor);
            if exact {
                let fl = x.lo.floor();
                let frac = &x.lo - fl;
                return Ok(CertifiedValue {
                    lo: frac.clone(),
                    hi: frac,
                    precision_bits: bits,
                });
            }
            let fl = x.lo.floor();
            let hi_shifted = &x.hi - &fl;
            if hi_shifted < BigRational::one() && x.width() <= width_limit {
                return Ok(CertifiedValue {
                    lo: &x.lo - &fl,
                    hi: hi_shifted,
                    precision_bits: bits,
                });
            }
            if bits >= policy.max_bits {
                return Err(PolyError::AmbiguousValue {
                    n,
                    lo: x.lo_f64(),
                    hi: x.hi_f64(),
                    bits,
                });
            }
            bits = (bits * 2).min(policy.max_bits);
        }
    }

    /// Certified strict comparison `f(n) < threshold`.
    pub fn certified_lt(
        &self,
        n: u64,
        threshold: &BigRational,
        policy: &PrecisionPolicy,
    ) -> Result<bool, PolyError> {
        let mut bits = policy.start_bits;
        loop {
            let (enc, exact) = self.enclosure_at(n, bits);
            if exact {
                return Ok(&enc.lo < threshold);
            }
            if &enc.hi < threshold {
                return Ok(true);
            }
            if &enc.lo >= threshold {
                return Ok(false);
            }
            if bits >= policy.max_bits {
                return Err(PolyError::AmbiguousValue {
                    n,
                    lo: enc.lo_f64(),
                    hi: enc.hi_f64(),
                    bits,
                });
            }
            bits = (bits * 2).min(policy.max_bits);
        }
    }

    /// Rigorous lower bound `Λ ≥ 0` for `min_{x∈[a,b]} |f^{(m)}(x)|`,
    /// by reverse triangle inequality: each term in turn is taken as
    /// dominant at its worst endpoint, the others subtracted at their
    /// best. May legitimately return 0.
    pub fn derivative_lower_bound(&self, m: u32, a: f64, b: f64) -> f64 {
        assert!(m >= 1);
        assert!((1.0..=b).contains(&a), "need 1 <= a <= b");
        let bits = 128;
        let ar = BigRational::from_float(a).unwrap();
        let br = BigRational::from_float(b).unwrap();
        // per-term magnitude ranges of the m-th derivative over [a, b]
        let mut ranges: Vec<(BigRational, BigRational)> = Vec::new();
        for t in &self.terms {
            let e = t.exponent.enclosure(bits);
            let mut factor = Enclosure::point(BigRational::one());
            for step in 0..m {
                let shifted = e.sub(&Enclosure::from_int(step as i64));
                factor = factor.mul(&shifted);
            }
            let mag = t.coeff.enclosure(bits).mul(&factor).abs();
            let exp_shift = e.sub(&Enclosure::from_int(m as i64));
            let pa = pow_rational(&ar, &t.exponent, m, &exp_shift, bits);
            let pb = pow_rational(&br, &t.exponent, m, &exp_shift, bits);
            let min_pow = pa.lo.clone().min(pb.lo.clone());
            let max_pow = pa.hi.clone().max(pb.hi.clone());
            ranges.push((&mag.lo * min_pow, &mag.hi * max_pow));
        }
        let mut best = BigRational::zero();
        for i in 0..ranges.len() {
            let mut lambda = ranges[i].0.clone();
            for (t, r) in ranges.iter().enumerate() {
                if t != i {
                    lambda -= &r.1;
                }
            }
            if lambda > best {
                best = lambda;
            }
        }
        // round toward zero so the reported f64 stays a valid bound
        let v = best.to_f64().unwrap_or(0.0);
        if v <= 0.0 {
            0.0
        } else {
            let rounded = BigRational::from_float(v).unwrap();
            if rounded > best {
                f64::from_bits(v.to_bits() - 1)
            } else {
                v
            }
        }
    }
}

impl fmt::Display for PseudoPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*x^{}", t.coeff, t.exponent)?;
        }
        Ok(())
    }
}

fn clamp_floor(v: BigInt) -> BigUint {
    if v.is_negative() {
        BigUint::zero()
    } else {
        v.magnitude().clone()
    }
}

pub fn isqrt_u128(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let mut x = (v as f64).sqrt() as u128;
    // one Newton step then local correction
    x = (x + v / x.max(1)) / 2;
    while x.checked_mul(x).map(|s| s > v).unwrap_or(true) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map(|s| s <= v).unwrap_or(false) {
        x += 1;
    }
    x
}

/// Enclosure of `x^{e - m}` for rational `x ≥ 1`, where `e` is the
/// term exponent (`exp_shift` is its enclosure minus `m`). Rational
/// exponents go through scaled integer roots, named ones through
/// `exp(e · ln x)`.
fn pow_rational(
    x: &BigRational,
    exponent: &Scalar,
    m: u32,
    exp_shift: &Enclosure,
    bits: u32,
) -> Enclosure {
    match exponent {
        Scalar::Rational(e) => {
            let shifted = e - BigRational::from_integer(BigInt::from(m));
            rational_pow(x, &shifted, bits).0
        }
        Scalar::Named(_) => fixed::pow_rational_base(x, exp_shift, bits),
    }
}

/// Enclosure of `x^{p/d}` for rational `x > 0` and rational exponent,
/// via scaled integer roots of numerator and denominator. The boolean
/// reports exactness.
pub fn rational_pow(x: &BigRational, e: &BigRational, bits: u32) -> (Enclosure, bool) {
    assert!(x.is_positive());
    if e.is_zero() {
        return (Enclosure::point(BigRational::one()), true);
    }
    if e.is_negative() {
        let (enc, exact) = rational_pow(x, &-e.clone(), bits);
        return (enc.recip(), exact);
    }
    let p = e
        .numer()
        .to_u32()
        .expect("exponent numerator within supported range");
    let d = e
        .denom()
        .to_u32()
        .expect("exponent denominator within supported range");
    let up = x.numer().magnitude().pow(p);
    let vp = x.denom().magnitude().pow(p);
    if d == 1 {
        return (
            Enclosure::point(BigRational::new(up.into(), vp.into())),
            true,
        );
    }
    let (ru, eu) = root_enclosure(&up, d, bits);
    let (rv, ev) = root_enclosure(&vp, d, bits);
    if eu && ev {
        let exact = ru.lo / rv.lo;
        return (Enclosure::point(exact), true);
    }
    (ru.mul(&rv.recip()), false)
}

/// `[r, r'] ∋ v^{1/d}` via a scaled integer root; exact when `v` is a
/// perfect `d`-th power.
fn root_enclosure(v: &BigUint, d: u32, bits: u32) -> (Enclosure, bool) {
    let r = v.nth_root(d);
    if r.clone().pow(d) == *v {
        return (
            Enclosure::point(BigRational::from_integer(r.into())),
            true,
        );
    }
    let shifted = v << (d as usize * bits as usize);
    let root = shifted.nth_root(d);
    let denom = BigInt::one() << bits as usize;
    (
        Enclosure::new(
            BigRational::new(BigInt::from(root.clone()), denom.clone()),
            BigRational::new(BigInt::from(root + BigUint::one()), denom),
        ),
        false,
    )
}

/// Enclosure of one term `c · n^e` at working precision `bits`.
fn term_enclosure(term: &Term, n: u64, bits: u32) -> (Enclosure, bool) {
    let base = BigRational::from_integer(BigInt::from(n));
    let (pow_enc, pow_exact) = match &term.exponent {
        Scalar::Rational(e) => rational_pow(&base, e, bits),
        Scalar::Named(_) => (
            fixed::pow_rational_base(&base, &term.exponent.enclosure(bits), bits),
            false,
        ),
    };
    match &term.coeff {
        Scalar::Rational(c) => (pow_enc.scale(c), pow_exact),
        Scalar::Named(k) => (pow_enc.mul(&k.enclosure(bits)), false),
    }
}
