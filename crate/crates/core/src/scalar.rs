//! Coefficient rings and fields.
//!
//! Series arithmetic only needs a commutative ring with a zero test; the
//! elimination routines need a field. Integers are arbitrary precision by
//! default, and prime fields use a compile-time modulus below 2^32 so that a
//! product of two residues fits in a `u64`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring with unit, cheap enough to clone.
pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// `self += a * b`; overridden where a fused form avoids temporaries.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a.clone() * b.clone();
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    fn inv(&self) -> Self;
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Ring for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Ring for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Ring for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

/// Residues modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Reduces an exact rational; `None` when `P` divides the denominator.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let num = Self::from_bigint(q.numer(), &p);
        let den = Self::from_bigint(q.denom(), &p);
        if den.0 == 0 {
            None
        } else {
            Some(num * den.inv())
        }
    }

    fn from_bigint(v: &BigInt, p: &BigInt) -> Self {
        let r = ((v % p) + p) % p;
        let digits = r.to_u64_digits().1;
        Fp(digits.first().copied().unwrap_or(0))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Ring for Fp<P> {
    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(P as i64);
        Fp(r as u64)
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = Fp((self.0 + a.0 * b.0) % P);
    }
}

impl<const P: u64> Field for Fp<P> {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero mod {P}");
        self.pow(P - 2)
    }
}

/// Three primes just below 2^31 used for modular certificates.
pub const PRIME_A: u64 = 2_147_483_647;
pub const PRIME_B: u64 = 2_147_483_629;
pub const PRIME_C: u64 = 2_147_483_587;
pub const PRIME_D: u64 = 2_147_483_579;
pub const PRIME_E: u64 = 2_147_483_563;

pub type FpA = Fp<PRIME_A>;
pub type FpB = Fp<PRIME_B>;
pub type FpC = Fp<PRIME_C>;
pub type FpD = Fp<PRIME_D>;
pub type FpE = Fp<PRIME_E>;

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn certificate_moduli_are_prime() {
        for p in [PRIME_A, PRIME_B, PRIME_C, PRIME_D, PRIME_E] {
            assert!(is_prime(p), "{p}");
        }
    }

    #[test]
    fn fp_inverse() {
        let a = FpA::from_i64(-12345);
        assert_eq!(a * a.inv(), FpA::one());
        let q = BigRational::new(BigInt::from(3), BigInt::from(7));
        let r = FpB::from_rational(&q).unwrap();
        assert_eq!(r * FpB::from_i64(7), FpB::from_i64(3));
    }

    #[test]
    fn fp_from_rational_rejects_divisible_denominator() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(PRIME_A));
        assert!(FpA::from_rational(&q).is_none());
    }
}
