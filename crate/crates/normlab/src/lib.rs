//! Construction and empirical analysis of normal numbers built by
//! concatenating base-`q` expansions of pseudo-polynomial values taken
//! at the primes (or at all integers).
//!
//! The crate is organized around the stages of that pipeline:
//!
//! * [`pseudopoly`] — pseudo-polynomials `f(x) = Σ αᵢ x^{βᵢ}` with at
//!   least one non-integral exponent, certified multiprecision
//!   evaluation of floors and scaled fractional parts.
//! * [`primes`] — segmented sieve, `π(x)`, `Li(x)`, Chebyshev `θ`.
//! * [`digitstream`] — the concatenated digit streams `σ_q(f)` and
//!   `τ_q(f)`, padded fixed-length digit tables and length bookkeeping.
//! * [`blockstats`] — block occurrence counts, discrepancy, digit-sum
//!   summatory comparisons.
//! * [`smoothing`] — trapezoid ("little glasses") smoothings of a block
//!   indicator with closed-form Fourier coefficients.
//! * [`expsum`] — the exponential sums `S(P, j, ν)` over primes, range
//!   classification of digit positions, quadrature oracles and the
//!   Fourier bracketing of block counts.
//! * [`config`] / [`commands`] / [`verify`] — the `normlab` CLI:
//!   config-driven experiment runner and the built-in verification
//!   suite.

pub mod blockstats;
pub mod commands;
pub mod config;
pub mod digitstream;
pub mod expsum;
pub mod primes;
pub mod pseudopoly;
pub mod quad;
pub mod smoothing;
pub mod verify;
