//! Rational interval enclosures.
//!
//! All certified arithmetic in the crate bottoms out in closed
//! intervals with `BigRational` endpoints. Endpoints are exact, so
//! interval operations here are exact as well; rounding only enters
//! through the constructors in [`super::fixed`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    /// Multiply by an exact rational.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_negative() {
            Self::new(&self.hi * c, &self.lo * c)
        } else {
            Self::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Reciprocal; panics if the interval contains zero.
    pub fn recip(&self) -> Self {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of interval containing zero"
        );
        Self::new(self.hi.recip(), self.lo.recip())
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Self::new(BigRational::zero(), self.lo.abs().max(self.hi.abs()))
        }
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Does the open interior contain an integer?
    pub fn interior_contains_integer(&self) -> bool {
        let f = self.lo.floor().to_integer();
        let next = BigRational::from_integer(&f + BigInt::one());
        next < self.hi
    }

    pub fn to_f64(&self) -> f64 {
        // Midpoint, for reporting only.
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}
