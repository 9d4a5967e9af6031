//! The minimal commutative-ring interface shared by every coefficient type.
//!
//! Elements carry whatever context they need (modulus, precision, arity), so
//! the constructors are "like" methods: `x.zero_like()` is the zero of the
//! ring that `x` lives in.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait RingElem: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn from_bigint_like(&self, n: &BigInt) -> Self;

    fn from_i64_like(&self, n: i64) -> Self {
        self.from_bigint_like(&BigInt::from(n))
    }

    /// p-adic precision for truncated rings; `None` means exact.
    fn precision(&self) -> Option<u32> {
        None
    }

    fn truncated(&self, _prec: u32) -> Self {
        self.clone()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn scale_int(&self, n: &BigInt) -> Self {
        self.mul(&self.from_bigint_like(n))
    }
}

/// Exact division by powers of `p`; the runtime face of every integrality
/// statement.
pub trait ExactDivP: RingElem {
    fn exact_div_p(&self, p: u64, k: u32) -> Result<Self>;
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation_bigint(n: &BigInt, p: u64) -> Option<u32> {
    if Zero::is_zero(n) {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !Zero::is_zero(&r) {
            return Some(v);
        }
        v += 1;
        m = q;
    }
}

/// p-adic valuation of a nonzero rational; `None` for zero.
pub fn valuation_rational(x: &BigRational, p: u64) -> Option<i64> {
    let vn = valuation_bigint(x.numer(), p)?;
    let vd = valuation_bigint(x.denom(), p).unwrap_or(0);
    Some(vn as i64 - vd as i64)
}

/// Reduces a p-integral rational modulo `modulus` (a power of p).
pub fn rational_mod(x: &BigRational, modulus: u64) -> Option<u64> {
    let m = BigInt::from(modulus);
    let d = x.denom().mod_floor(&m);
    let inv = mod_inverse_bigint(&d, &m)?;
    let r = (x.numer().mod_floor(&m) * inv).mod_floor(&m);
    r.to_u64()
}

fn mod_inverse_bigint(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

impl RingElem for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        n.clone()
    }
    fn pow(&self, e: u64) -> Self {
        num_traits::pow::Pow::pow(self, e)
    }
}

impl ExactDivP for BigInt {
    fn exact_div_p(&self, p: u64, k: u32) -> Result<Self> {
        let d = num_traits::pow::Pow::pow(BigInt::from(p), k);
        let (q, r) = self.div_rem(&d);
        if Zero::is_zero(&r) {
            Ok(q)
        } else {
            let found = valuation_bigint(self, p).unwrap_or(k);
            Err(Error::not_exact(k, found))
        }
    }
}

impl RingElem for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl ExactDivP for BigRational {
    fn exact_div_p(&self, p: u64, k: u32) -> Result<Self> {
        let d = num_traits::pow::Pow::pow(BigInt::from(p), k);
        Ok(self / BigRational::from_integer(d))
    }
}

/// `binom(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `binom(a, k)` for rational `a`.
pub fn binomial_rational(a: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (a - BigRational::from_integer(BigInt::from(i)))
            / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_negative_rational(x: &BigRational) -> bool {
    x.is_negative()
}

pub fn is_prime(n: u64) -> bool {
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
