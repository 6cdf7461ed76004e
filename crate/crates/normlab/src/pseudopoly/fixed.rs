//! Fixed-point enclosures of the named constants and of `ln`/`exp`
//! on rational arguments.
//!
//! Values are computed as `BigInt` mantissas at a binary scale with a
//! tracked worst-case error in units of the last place; the result is
//! returned as an exact rational interval guaranteed to contain the
//! true value. Requested precision is in bits; a guard of 64 bits is
//! added internally so that the returned width is well below
//! `2^{-bits}`.

use super::enclosure::Enclosure;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const GUARD_BITS: u32 = 64;

fn ulp_interval(mantissa: BigInt, err_ulps: u64, scale: u32) -> Enclosure {
    let e = BigInt::from(err_ulps);
    let denom = BigInt::one() << scale as usize;
    Enclosure::new(
        BigRational::new(&mantissa - &e, denom.clone()),
        BigRational::new(mantissa + e, denom),
    )
}

/// Enclosure of `√2` of width `2^{1-bits}` or less.
pub fn sqrt2(bits: u32) -> Enclosure {
    let s = bits + GUARD_BITS;
    let two_shifted = BigUint::from(2u32) << (2 * s as usize);
    let r = two_shifted.sqrt();
    ulp_interval(BigInt::from(r), 1, s)
}

/// atan(1/x) at scale `s` for small integer `x`; alternating Gregory
/// series with floored terms.
fn atan_inv(x: u64, s: u32) -> (BigInt, u64) {
    let mut denom = BigInt::from(x);
    let x2 = BigInt::from(x) * BigInt::from(x);
    let one_scaled = BigInt::one() << s as usize;
    let mut sum = BigInt::zero();
    let mut err: u64 = 0;
    let mut k: u64 = 0;
    loop {
        let t = &one_scaled / &denom; // 2^s / x^{2k+1}, err <= 1
        let term = &t / BigInt::from(2 * k + 1); // err <= 2
        if term.is_zero() {
            // remaining tail below (t + 1) ulps
            err += 4;
            break;
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        err += 2;
        denom *= &x2;
        k += 1;
    }
    (sum, err)
}

/// Enclosure of `π` via Machin's formula.
pub fn pi(bits: u32) -> Enclosure {
    let s = bits + GUARD_BITS;
    let (a5, e5) = atan_inv(5, s);
    let (a239, e239) = atan_inv(239, s);
    let m = a5 * BigInt::from(16) - a239 * BigInt::from(4);
    ulp_interval(m, 16 * e5 + 4 * e239, s)
}

/// Enclosure of `e`.
pub fn e_const(bits: u32) -> Enclosure {
    let s = bits + GUARD_BITS;
    let mut term = BigInt::one() << s as usize;
    let mut sum = term.clone();
    let mut err: u64 = 0;
    let mut k: u64 = 1;
    while !term.is_zero() {
        term /= BigInt::from(k);
        sum += &term;
        err += 1;
        k += 1;
    }
    // truncated tail is below 2 ulps once terms vanish
    ulp_interval(sum, err + 2, s)
}

/// atanh(y) for rational `y ∈ [0, 1/2)` at scale `s`.
fn atanh_rational(y: &BigRational, s: u32) -> (BigInt, u64) {
    assert!(!y.is_negative() && y < &BigRational::new(BigInt::one(), BigInt::from(2)));
    let p = y.numer().clone();
    let q = y.denom().clone();
    let p2 = &p * &p;
    let q2 = &q * &q;
    // v_k ~ y^{2k+1} * 2^s
    let mut v = ((BigInt::one() << s as usize) * &p).div_floor(&q);
    let mut verr: u64 = 1;
    let mut sum = BigInt::zero();
    let mut err: u64 = 0;
    let mut k: u64 = 0;
    loop {
        let term = v.div_floor(&BigInt::from(2 * k + 1));
        if term.is_zero() && v.is_zero() {
            // tail: y^{2k+1} 2^s < verr + 1, geometric with ratio y^2 < 1/4
            err += verr + 2;
            break;
        }
        sum += &term;
        err += verr + 1;
        v = (v * &p2).div_floor(&q2);
        verr += 1;
        k += 1;
        if term.is_zero() && k > s as u64 {
            err += verr + 2;
            break;
        }
    }
    (sum, err)
}

fn ln2_scaled(s: u32) -> (BigInt, u64) {
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let (m, e) = atanh_rational(&third, s);
    (m * BigInt::from(2), 2 * e)
}

/// Enclosure of `ln x` for rational `x > 0`.
pub fn ln_rational(x: &BigRational, bits: u32) -> Enclosure {
    assert!(x.is_positive(), "ln of non-positive value");
    let one = BigRational::one();
    if *x == one {
        return Enclosure::point(BigRational::zero());
    }
    if *x < one {
        return ln_rational(&x.recip(), bits).neg();
    }
    let s = bits + GUARD_BITS;
    // reduce: x = 2^t * m with m in [1, 2)
    let mut t: i64 = 0;
    let mut m = x.clone();
    let two = BigRational::from_integer(BigInt::from(2));
    while m >= two {
        m /= &two;
        t += 1;
    }
    // ln m = 2 atanh((m-1)/(m+1)), argument in [0, 1/3]
    let y = (&m - &one) / (&m + &one);
    let (am, ae) = atanh_rational(&y, s);
    let (l2, l2e) = ln2_scaled(s);
    let mant = am * BigInt::from(2) + l2 * BigInt::from(t);
    let err = 2 * ae + l2e * t.unsigned_abs() + 1;
    ulp_interval(mant, err, s)
}

/// Series for `exp f` with rational `f ∈ [0, 1)` at scale `s`.
fn exp_frac(f: &BigRational, s: u32) -> (BigInt, u64) {
    assert!(!f.is_negative() && f < &BigRational::one());
    let p = f.numer().clone();
    let q = f.denom().clone();
    let mut term = BigInt::one() << s as usize;
    let mut terr: u64 = 0;
    let mut sum = term.clone();
    let mut err: u64 = 0;
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = (term * &p).div_floor(&(&q * BigInt::from(k)));
        terr += 2;
        sum += &term;
        err += terr;
        k += 1;
        if k > 4 * s as u64 {
            break;
        }
    }
    // tail after term hits zero: below 2*(terr + 2) ulps
    (sum, err + 2 * terr + 4)
}

/// Enclosure of `exp x` for rational `x`.
pub fn exp_rational(x: &BigRational, bits: u32) -> Enclosure {
    if x.is_negative() {
        return exp_rational(&-x.clone(), bits).recip();
    }
    let s = bits + GUARD_BITS;
    let w = x.floor().to_integer();
    let f = x - BigRational::from_integer(w.clone());
    let (fm, fe) = exp_frac(&f, s);
    let frac_enc = ulp_interval(fm, fe, s);
    if w.is_zero() {
        return frac_enc;
    }
    let w_u32 = u32::try_from(&w).expect("exp argument out of supported range");
    // extra working precision so that e^w keeps enough accurate bits
    let e_enc = e_const(bits + 8 * (64 - w_u32.leading_zeros()) + 32);
    let pw = Enclosure::new(e_enc.lo.pow(w_u32 as i32), e_enc.hi.pow(w_u32 as i32));
    pw.mul(&frac_enc)
}

/// Enclosure of `x^y` for rational `x > 0` and an exponent enclosure.
pub fn pow_rational_base(x: &BigRational, exponent: &Enclosure, bits: u32) -> Enclosure {
    assert!(x.is_positive());
    let l = ln_rational(x, bits + 32);
    let z = l.mul(exponent);
    let lo = exp_rational(&z.lo, bits).lo;
    let hi = exp_rational(&z.hi, bits).hi;
    Enclosure::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn width_f64(e: &Enclosure) -> f64 {
        e.width().to_f64().unwrap()
    }

    #[test]
    fn constants_match_known_digits() {
        for bits in [64, 96, 128] {
            let p = pi(bits);
            assert!(p.lo_f64() > 3.14159265358979 && p.hi_f64() < 3.14159265358980);
            let e = e_const(bits);
            assert!(e.lo_f64() > 2.71828182845904 && e.hi_f64() < 2.71828182845906);
            let s = sqrt2(bits);
            assert!(s.lo_f64() > 1.41421356237309 && s.hi_f64() < 1.41421356237310);
            assert!(width_f64(&p) <= 2f64.powi(1 - bits as i32));
        }
    }

    #[test]
    fn ln_and_exp() {
        let two = BigRational::from_integer(BigInt::from(2));
        let l2 = ln_rational(&two, 96);
        assert!(l2.lo_f64() > 0.693147180559945_f64 - 1e-15);
        assert!(l2.hi_f64() < 0.693147180559946);
        let e1 = exp_rational(&BigRational::one(), 96);
        assert!(e1.lo_f64() > 2.718281828459045 - 1e-15 && e1.hi_f64() < 2.718281828459046);
        // exp(ln 10) ~ 10
        let ten = BigRational::from_integer(BigInt::from(10));
        let l10 = ln_rational(&ten, 96);
        let back_lo = exp_rational(&l10.lo, 96).lo;
        let back_hi = exp_rational(&l10.hi, 96).hi;
        assert!(back_lo.to_f64().unwrap() < 10.0 && back_hi.to_f64().unwrap() > 10.0);
        assert!((back_lo.to_f64().unwrap() - 10.0).abs() < 1e-12);
        // exp of a large argument
        let fifty = BigRational::from_integer(BigInt::from(50));
        let e50 = exp_rational(&fifty, 96);
        let v = e50.to_f64();
        assert!((v.ln() - 50.0).abs() < 1e-9, "exp(50) off: ln = {}", v.ln());
    }

    #[test]
    fn ln_negative_argument_of_reciprocal() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let l = ln_rational(&half, 96);
        assert!((l.to_f64() + std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn pow_known_values() {
        // 2^pi ~ 8.8249778270762876
        let two = BigRational::from_integer(BigInt::from(2));
        let v = pow_rational_base(&two, &pi(96), 96);
        assert!((v.to_f64() - 8.824977827076287).abs() < 1e-12);
        // 10^{-0.5}
        let ten = BigRational::from_integer(BigInt::from(10));
        let neg_half = Enclosure::point(BigRational::new(BigInt::from(-1), BigInt::from(2)));
        let v = pow_rational_base(&ten, &neg_half, 96);
        assert!((v.to_f64() - 0.31622776601683794).abs() < 1e-13);
    }

    #[test]
    fn enclosures_nest_and_shrink() {
        let coarse = pi(64);
        let fine = pi(256);
        assert!(coarse.lo <= fine.lo && fine.hi <= coarse.hi);
        assert!(fine.width() < coarse.width());
    }
}
