//! Truncated arithmetic in the unramified ring `R = W(F_{p^f})`.
//!
//! Elements are coefficient vectors in the polynomial basis of a degree-`f`
//! modulus, reduced modulo `p^prec`. Each element carries its own precision;
//! binary operations truncate to the smaller one, and `delta` /
//! `exact_div_p` consume precision.
//!
//! `R` is viewed as an algebra over `O = W(F_q)`, `q = p^e` with `e | f`.
//! The Frobenius `φ` is the lift of `y -> y^q` fixing `O`, and
//! `δ(x) = (φ(x) - x^q)/p`. The default `e = 1` gives the absolute Frobenius,
//! of order `f`; `e = f` makes `φ` the identity.

mod conway;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{is_prime, ExactDivP, RingElem};

pub use conway::{conway_polynomial, first_irreducible, is_irreducible_mod_p};

/// Largest supported residue degree.
pub const MAX_RESIDUE_DEGREE: usize = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct BaseRing {
    p: u64,
    f: usize,
    /// `q = p^e` is the Frobenius exponent.
    e: usize,
    precision: u32,
    /// Lower coefficients `c_0..c_{f-1}` of the monic modulus, reduced mod `p^precision`.
    modulus: Vec<u64>,
}

impl fmt::Debug for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BaseRing(p={}, f={}, e={}, N={}, modulus={:?})",
            self.p, self.f, self.e, self.precision, self.modulus
        )
    }
}

fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

impl BaseRing {
    /// The ring at precision `precision`, using the bundled Conway polynomial
    /// (or the first irreducible polynomial when none is bundled).
    pub fn new(p: u64, f: usize, precision: u32) -> Result<Arc<Self>> {
        Self::with_frobenius_degree(p, f, 1, precision)
    }

    /// As `new`, with Frobenius exponent `q = p^e`.
    pub fn with_frobenius_degree(p: u64, f: usize, e: usize, precision: u32) -> Result<Arc<Self>> {
        if f == 0 {
            return Err(Error::InvalidInput("residue degree must be at least 1".into()));
        }
        let modulus = conway_polynomial(p, f).unwrap_or_else(|| first_irreducible(p, f));
        Self::build(p, e, precision, &modulus)
    }

    /// The ring for a user-supplied monic modulus given low-to-high.
    pub fn with_modulus(p: u64, precision: u32, modulus: &[u64]) -> Result<Arc<Self>> {
        Self::build(p, 1, precision, modulus)
    }

    fn build(p: u64, e: usize, precision: u32, modulus: &[u64]) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        let f = modulus.len().saturating_sub(1);
        if f == 0 || f > MAX_RESIDUE_DEGREE {
            return Err(Error::InvalidInput(format!(
                "residue degree must be in 1..={MAX_RESIDUE_DEGREE}"
            )));
        }
        let pn = checked_pow(p, precision)
            .filter(|&m| m < (1u64 << 62))
            .ok_or_else(|| Error::BoundExceeded(format!("p^N = {p}^{precision} too large")))?;
        if e == 0 || f % e != 0 {
            return Err(Error::InvalidInput(format!(
                "Frobenius degree {e} must divide the residue degree {f}"
            )));
        }
        if modulus[f] != 1 {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        if !is_irreducible_mod_p(modulus, p) {
            return Err(Error::InvalidInput(format!(
                "modulus {modulus:?} is not irreducible mod {p}"
            )));
        }
        Ok(Arc::new(BaseRing {
            p,
            f,
            e,
            precision,
            modulus: modulus[..f].iter().map(|c| c % pn).collect(),
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn frobenius_degree(&self) -> usize {
        self.e
    }

    /// The Frobenius exponent `q = p^e`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.e as u32)
    }

    /// Residue field cardinality `p^f`.
    pub fn residue_size(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    pub fn p_pow(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    /// Same modulus at a different precision.
    pub fn at_precision(&self, precision: u32) -> Result<Arc<Self>> {
        BaseRing::build(self.p, self.e, precision, &self.modulus())
    }

    pub fn zero(self: &Arc<Self>) -> BaseElem {
        BaseElem {
            ring: self.clone(),
            prec: self.precision,
            coeffs: vec![0; self.f],
        }
    }

    pub fn one(self: &Arc<Self>) -> BaseElem {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> BaseElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self: &Arc<Self>, n: &BigInt) -> BaseElem {
        let m = BigInt::from(self.p_pow(self.precision));
        let mut coeffs = vec![0; self.f];
        coeffs[0] = n.mod_floor(&m).to_u64().unwrap();
        BaseElem {
            ring: self.clone(),
            prec: self.precision,
            coeffs,
        }
    }

    /// Element from basis coefficients (any integers, reduced here).
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> Result<BaseElem> {
        self.from_coeffs_at(coeffs, self.precision)
    }

    pub fn from_coeffs_at(self: &Arc<Self>, coeffs: &[i64], prec: u32) -> Result<BaseElem> {
        if coeffs.len() != self.f {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                self.f,
                coeffs.len()
            )));
        }
        let prec = prec.min(self.precision);
        let m = self.p_pow(prec) as i128;
        Ok(BaseElem {
            ring: self.clone(),
            prec,
            coeffs: coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(m) as u64)
                .collect(),
        })
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> BaseElem {
        let m = self.p_pow(self.precision);
        BaseElem {
            ring: self.clone(),
            prec: self.precision,
            coeffs: (0..self.f).map(|_| rng.gen_range(0..m)).collect(),
        }
    }

    /// Random element with unit residue.
    pub fn random_unit<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> BaseElem {
        loop {
            let x = self.random(rng);
            if !x.residue().is_zero() {
                return x;
            }
        }
    }

    /// Every element of the residue field, as precision-1 elements.
    pub fn residue_field(self: &Arc<Self>) -> Vec<BaseElem> {
        (0..self.residue_size())
            .map(|mut code| {
                let mut coeffs = vec![0; self.f];
                for c in coeffs.iter_mut() {
                    *c = code % self.p;
                    code /= self.p;
                }
                BaseElem {
                    ring: self.clone(),
                    prec: 1,
                    coeffs,
                }
            })
            .collect()
    }

    /// The first generator of the residue field's unit group in enumeration
    /// order.
    pub fn residue_generator(self: &Arc<Self>) -> BaseElem {
        let order = self.residue_size() - 1;
        let mut prime_factors = Vec::new();
        let mut n = order;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                prime_factors.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            prime_factors.push(n);
        }
        self.residue_field()
            .into_iter()
            .filter(|x| !x.is_zero())
            .find(|x| prime_factors.iter().all(|&r| !x.pow(order / r).is_one()))
            .expect("finite field unit groups are cyclic")
    }

    /// Teichmüller lift of a residue class: the root of `X^{p^f} = X`
    /// congruent to `a` mod p, found by iterating `x -> x^{p^f}`.
    pub fn teichmuller(self: &Arc<Self>, a: &BaseElem) -> BaseElem {
        self.teichmuller_at(a, self.precision)
    }

    pub fn teichmuller_at(self: &Arc<Self>, a: &BaseElem, prec: u32) -> BaseElem {
        let q = self.residue_size();
        let mut x = BaseElem {
            ring: self.clone(),
            prec,
            coeffs: a.coeffs.iter().map(|c| c % self.p).collect(),
        };
        for _ in 0..prec {
            x = x.pow(q);
        }
        x
    }

    /// Teichmüller lift of an integer residue (for `f = 1` this is all of F_p).
    pub fn teichmuller_int(self: &Arc<Self>, a: i64) -> BaseElem {
        let a = self.from_int(a).residue();
        self.teichmuller(&a)
    }
}

#[derive(Clone)]
pub struct BaseElem {
    ring: Arc<BaseRing>,
    prec: u32,
    coeffs: Vec<u64>,
}

impl fmt::Debug for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.f == 1 {
            write!(f, "{}", self.coeffs[0])?;
        } else {
            write!(f, "{:?}", self.coeffs)?;
        }
        write!(f, "+O({}^{})", self.ring.p, self.prec)
    }
}

impl fmt::Display for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.f == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(", "))
        }
    }
}

impl PartialEq for BaseElem {
    /// Equality modulo `p^min(prec)`.
    fn eq(&self, other: &Self) -> bool {
        if !(Arc::ptr_eq(&self.ring, &other.ring) || self.same_ring(other)) {
            return false;
        }
        let m = self.ring.p_pow(self.prec.min(other.prec));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a % m == b % m)
    }
}

impl BaseElem {
    fn same_ring(&self, other: &Self) -> bool {
        self.ring.p == other.ring.p
            && self.ring.f == other.ring.f
            && self.ring.e == other.ring.e
            && self.ring.modulus.len() == other.ring.modulus.len()
            && {
                let m = self
                    .ring
                    .p_pow(self.ring.precision.min(other.ring.precision));
                self.ring
                    .modulus
                    .iter()
                    .zip(&other.ring.modulus)
                    .all(|(a, b)| a % m == b % m)
            }
    }

    pub fn ring(&self) -> &Arc<BaseRing> {
        &self.ring
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn modulus_value(&self, prec: u32) -> u64 {
        self.ring.p_pow(prec)
    }

    fn with(&self, prec: u32, coeffs: Vec<u64>) -> BaseElem {
        BaseElem {
            ring: self.ring.clone(),
            prec,
            coeffs,
        }
    }

    fn check_ring(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.same_ring(other),
            "mixing elements of different base rings"
        );
    }

    /// Reduction modulo p, as a precision-1 element (an element of `F_q`).
    pub fn residue(&self) -> BaseElem {
        self.truncated(1)
    }

    /// The p-adic valuation; `None` when the element vanishes to its precision.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut v = 0;
                let mut c = c;
                while c % self.ring.p == 0 {
                    c /= self.ring.p;
                    v += 1;
                }
                v
            })
            .min()
    }

    /// `x / p^k` at precision `prec - k`, when every coefficient is divisible.
    pub fn exact_div_p(&self, k: u32) -> Result<BaseElem> {
        if k > self.prec {
            return Err(Error::PrecisionExhausted {
                needed: k,
                available: self.prec,
            });
        }
        let d = self.ring.p_pow(k);
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::not_exact(k, v));
            }
        }
        Ok(self.with(self.prec - k, self.coeffs.iter().map(|c| c / d).collect()))
    }

    /// `p^k · x`, raising the precision by `k` (the inverse of `exact_div_p`).
    pub fn mul_p_pow(&self, k: u32) -> BaseElem {
        let prec = (self.prec + k).min(self.ring.precision);
        let m = self.modulus_value(prec) as u128;
        let d = self.ring.p_pow(k) as u128;
        self.with(
            prec,
            self.coeffs
                .iter()
                .map(|&c| ((c as u128 * d) % m) as u64)
                .collect(),
        )
    }

    /// The same coefficients read in `ring` (same residue data), truncated to
    /// its precision.
    pub fn in_ring(&self, ring: &Arc<BaseRing>) -> BaseElem {
        let prec = self.prec.min(ring.precision);
        let m = ring.p_pow(prec);
        BaseElem {
            ring: ring.clone(),
            prec,
            coeffs: self.coeffs.iter().map(|c| c % m).collect(),
        }
    }

    /// Lifts to a higher precision by choosing the canonical representatives.
    pub fn lift_to(&self, prec: u32) -> BaseElem {
        self.with(prec.min(self.ring.precision), self.coeffs.clone())
    }

    /// The Frobenius lift: `x = Σ [t_i] p^i  ↦  Σ [t_i^q] p^i`.
    pub fn frobenius(&self) -> BaseElem {
        if self.ring.e == self.ring.f {
            return self.clone();
        }
        let n = self.prec;
        let p = self.ring.p;
        let q = self.ring.q();
        let modulus = self.modulus_value(n) as u128;
        let mut acc = vec![0u64; self.ring.f];
        let mut rem = self.clone();
        for i in 0..n {
            let digit = rem.residue();
            let teich = self.ring.teichmuller_at(&digit, n - i);
            let image = teich.pow(q);
            let scale = p.pow(i) as u128;
            for (a, c) in acc.iter_mut().zip(&image.coeffs) {
                *a = ((*a as u128 + scale * *c as u128) % modulus) as u64;
            }
            if i + 1 < n {
                rem = rem
                    .sub(&teich)
                    .exact_div_p(1)
                    .expect("subtracting the Teichmüller digit leaves a multiple of p");
            }
        }
        self.with(n, acc)
    }

    /// The p-derivation `δ(x) = (φ(x) - x^q)/p`, one digit less precise.
    pub fn delta(&self) -> Result<BaseElem> {
        let q = self.ring.q();
        self.frobenius()
            .sub(&RingElem::pow(self, q))
            .exact_div_p(1)
            .map_err(|e| e.with_context("base ring delta"))
    }

    /// Multiplicative inverse via a residue-field inverse and Newton lifting.
    pub fn inverse(&self) -> Result<BaseElem> {
        let r = self.residue();
        if r.is_zero() {
            return Err(Error::NotInvertible(format!("{self:?} has zero residue")));
        }
        let mut y = RingElem::pow(&r, self.ring.residue_size() - 2).lift_to(self.prec);
        let two = self.from_i64_like(2);
        let mut good = 1;
        while good < self.prec {
            y = y.mul(&two.sub(&self.mul(&y)));
            good *= 2;
        }
        Ok(y)
    }

    pub fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    pub fn to_json(&self) -> BaseElemJson {
        BaseElemJson {
            p: self.ring.p,
            f: self.ring.f,
            n: self.prec,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(json: &BaseElemJson) -> Result<BaseElem> {
        let ring = BaseRing::new(json.p, json.f, json.n)?;
        if json.coeffs.len() != json.f {
            return Err(Error::InvalidInput("coefficient count must equal f".into()));
        }
        let m = BigInt::from(ring.p_pow(json.n));
        let mut coeffs = Vec::with_capacity(json.f);
        for c in &json.coeffs {
            let v: BigInt = c
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad decimal coefficient {c:?}")))?;
            coeffs.push(v.mod_floor(&m).to_u64().unwrap());
        }
        Ok(BaseElem {
            ring,
            prec: json.n,
            coeffs,
        })
    }

    /// The integer representative in `[0, p^prec)` when `f = 1`.
    pub fn as_u64(&self) -> Option<u64> {
        (self.ring.f == 1).then(|| self.coeffs[0])
    }
}

/// JSON form `{p, f, N, coeffs}` with decimal-string coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseElemJson {
    pub p: u64,
    pub f: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub coeffs: Vec<String>,
}

impl RingElem for BaseElem {
    fn zero_like(&self) -> Self {
        self.with(self.prec, vec![0; self.ring.f])
    }

    fn one_like(&self) -> Self {
        let mut c = vec![0; self.ring.f];
        c[0] = 1 % self.modulus_value(self.prec);
        self.with(self.prec, c)
    }

    fn is_zero(&self) -> bool {
        let m = self.modulus_value(self.prec);
        self.coeffs.iter().all(|c| c % m == 0)
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check_ring(rhs);
        let prec = self.prec.min(rhs.prec);
        let m = self.modulus_value(prec);
        self.with(
            prec,
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a % m + b % m) % m)
                .collect(),
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.check_ring(rhs);
        let prec = self.prec.min(rhs.prec);
        let m = self.modulus_value(prec);
        self.with(
            prec,
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a % m + m - b % m) % m)
                .collect(),
        )
    }

    fn neg(&self) -> Self {
        let m = self.modulus_value(self.prec);
        self.with(self.prec, self.coeffs.iter().map(|a| (m - a % m) % m).collect())
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check_ring(rhs);
        let prec = self.prec.min(rhs.prec);
        let m = self.modulus_value(prec);
        let f = self.ring.f;
        if f == 1 {
            let v = (self.coeffs[0] as u128 * rhs.coeffs[0] as u128) % m as u128;
            return self.with(prec, vec![v as u64]);
        }
        let m128 = m as u128;
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + (a as u128 * b as u128) % m128) % m128;
            }
        }
        for d in (f..2 * f - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (i, &mc) in self.ring.modulus.iter().enumerate() {
                let t = (c * (mc as u128 % m128)) % m128;
                prod[d - f + i] = (prod[d - f + i] + m128 - t) % m128;
            }
            prod[d] = 0;
        }
        self.with(prec, prod[..f].iter().map(|&c| c as u64).collect())
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        let m = BigInt::from(self.modulus_value(self.prec));
        let mut c = vec![0; self.ring.f];
        c[0] = n.mod_floor(&m).to_u64().unwrap();
        self.with(self.prec, c)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        let m = self.modulus_value(self.prec) as i128;
        let mut c = vec![0; self.ring.f];
        c[0] = (n as i128).rem_euclid(m) as u64;
        self.with(self.prec, c)
    }

    fn precision(&self) -> Option<u32> {
        Some(self.prec)
    }

    fn truncated(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        let m = self.modulus_value(prec);
        self.with(prec, self.coeffs.iter().map(|c| c % m).collect())
    }
}

impl ExactDivP for BaseElem {
    fn exact_div_p(&self, p: u64, k: u32) -> Result<Self> {
        debug_assert_eq!(p, self.ring.p);
        BaseElem::exact_div_p(self, k)
    }
}
