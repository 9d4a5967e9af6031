//! q-power Witt vectors `W_n(B)` with `n + 1` coordinates.
//!
//! The ghost map is `w_i = x_0^{q^i} + p x_1^{q^{i-1}} + ... + p^i x_i`.
//! Ring operations evaluate cached universal integer polynomials, so they
//! work over any coefficient ring, including ones with p-torsion.

mod cache;
mod universal;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{ExactDivP, RingElem};

pub use cache::{
    cache_dir, cache_file, clear_memory, default_cache_dir, parse as parse_cache, serialize,
    set_cache_dir, universal_polys, CACHE_DIR_ENV, CACHE_VERSION,
};
pub use universal::{
    check_bounds, generate, ghost_of, ghost_polys, solve_ghost, UniversalWittPolys, MAX_GHOST_DEGREE,
    MAX_ORDER,
};

/// Coefficient rings without p-torsion, where the ghost map is injective and
/// can be inverted by exact division.
pub trait TorsionFree {}

impl TorsionFree for BigInt {}
impl TorsionFree for BigRational {}
impl TorsionFree for Poly<BigInt> {}

#[derive(Clone, PartialEq)]
pub struct WittVector<C> {
    p: u64,
    f: usize,
    coords: Vec<C>,
}

impl<C: fmt::Debug> fmt::Debug for WittVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{:?}", self.coords)
    }
}

impl<C: RingElem> WittVector<C> {
    /// A vector of `W_n` with `n = coords.len() - 1`; fails outside the
    /// supported `(p, f, n)` range.
    pub fn new(p: u64, f: usize, coords: Vec<C>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a Witt vector needs at least one coordinate".into()));
        }
        check_bounds(p, f, coords.len() - 1)?;
        Ok(WittVector { p, f, coords })
    }

    pub fn teichmuller(p: u64, f: usize, n: usize, a: C) -> Result<Self> {
        let mut coords = vec![a.zero_like(); n + 1];
        coords[0] = a;
        Self::new(p, f, coords)
    }

    /// The image of an integer under `Z -> W_n(B)`.
    pub fn from_integer(p: u64, f: usize, n: usize, m: &BigInt, like: &C) -> Result<Self> {
        check_bounds(p, f, n)?;
        let q = p.pow(f as u32);
        let coords = solve_ghost(p, q, &vec![m.clone(); n + 1], "integer in W_n")?;
        Self::new(p, f, coords.iter().map(|c| like.from_bigint_like(c)).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    /// Truncation order: the vector has `n + 1` coordinates.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[C] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<C> {
        self.coords
    }

    pub fn ghost(&self) -> Vec<C> {
        ghost_of(self.p, self.q(), &self.coords)
    }

    fn polys_for(&self, n: usize) -> Arc<UniversalWittPolys> {
        universal_polys(self.p, self.f, n)
            .expect("bounds were checked when the vector was built; integrality is a theorem")
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.p == other.p && self.f == other.f && self.coords.len() == other.coords.len(),
            "Witt vectors of different shapes"
        );
    }

    fn eval_pair(&self, other: &Self, family: &[Poly<BigInt>]) -> Self {
        self.same_shape(other);
        let points: Vec<C> = self.coords.iter().chain(&other.coords).cloned().collect();
        self.rebuild(family.iter().map(|s| s.eval_in(&points)).collect())
    }

    fn eval_single(&self, family: &[Poly<BigInt>]) -> Self {
        self.rebuild(family.iter().map(|s| s.eval_in(&self.coords)).collect())
    }

    fn rebuild(&self, coords: Vec<C>) -> Self {
        WittVector {
            p: self.p,
            f: self.f,
            coords,
        }
    }

    pub fn witt_add(&self, other: &Self) -> Self {
        let u = self.polys_for(self.n());
        self.eval_pair(other, &u.sum)
    }

    pub fn witt_mul(&self, other: &Self) -> Self {
        let u = self.polys_for(self.n());
        self.eval_pair(other, &u.prod)
    }

    pub fn witt_neg(&self) -> Self {
        let u = self.polys_for(self.n());
        self.eval_single(&u.neg)
    }

    pub fn witt_sub(&self, other: &Self) -> Self {
        self.witt_add(&other.witt_neg())
    }

    /// `T : W_n -> W_{n-1}`, dropping the last coordinate.
    pub fn truncate(&self) -> Result<Self> {
        if self.n() == 0 {
            return Err(Error::Range("cannot truncate W_0".into()));
        }
        Ok(self.rebuild(self.coords[..self.n()].to_vec()))
    }

    /// `F : W_n -> W_{n-1}`, the map shifting ghost components left.
    pub fn frobenius(&self) -> Result<Self> {
        if self.n() == 0 {
            return Err(Error::Range("Frobenius needs n >= 1".into()));
        }
        let u = self.polys_for(self.n());
        Ok(self.eval_single(&u.frob))
    }

    /// `W_n -> W_{n-1}`, the p-derivation with `F(x) = x^q + p δ(x)`.
    pub fn delta(&self) -> Result<Self> {
        if self.n() == 0 {
            return Err(Error::Range("delta needs n >= 1".into()));
        }
        let u = self.polys_for(self.n());
        Ok(self.eval_single(&u.delta))
    }

    /// `V : W_n -> W_{n+1}`, `(x_0, ..., x_n) -> (0, x_0, ..., x_n)`.
    pub fn verschiebung(&self) -> Result<Self> {
        let mut coords = Vec::with_capacity(self.coords.len() + 1);
        coords.push(self.coords[0].zero_like());
        coords.extend(self.coords.iter().cloned());
        Self::new(self.p, self.f, coords)
    }

    /// Multiplication by the image of the integer `m`.
    pub fn scale_integer(&self, m: &BigInt) -> Self {
        let c = Self::from_integer(self.p, self.f, self.n(), m, &self.coords[0])
            .expect("same shape as an existing vector");
        c.witt_mul(self)
    }

    /// Applies a ring map coordinatewise.
    pub fn map<D: RingElem>(&self, g: impl Fn(&C) -> D) -> WittVector<D> {
        WittVector {
            p: self.p,
            f: self.f,
            coords: self.coords.iter().map(g).collect(),
        }
    }
}

impl<C: ExactDivP + TorsionFree> WittVector<C> {
    /// Inverts the ghost map (p-torsion-free coefficients only).
    pub fn from_ghost(p: u64, f: usize, comps: &[C]) -> Result<Self> {
        check_bounds(p, f, comps.len().saturating_sub(1))?;
        let coords = solve_ghost(p, p.pow(f as u32), comps, "ghost inverse")?;
        Self::new(p, f, coords)
    }

    /// Addition through the ghost side.
    pub fn add_via_ghost(&self, other: &Self) -> Result<Self> {
        self.same_shape(other);
        let g: Vec<C> = self
            .ghost()
            .iter()
            .zip(other.ghost())
            .map(|(a, b)| a.add(&b))
            .collect();
        Self::from_ghost(self.p, self.f, &g)
    }

    /// Multiplication through the ghost side.
    pub fn mul_via_ghost(&self, other: &Self) -> Result<Self> {
        self.same_shape(other);
        let g: Vec<C> = self
            .ghost()
            .iter()
            .zip(other.ghost())
            .map(|(a, b)| a.mul(&b))
            .collect();
        Self::from_ghost(self.p, self.f, &g)
    }
}

impl<C: RingElem> RingElem for WittVector<C> {
    fn zero_like(&self) -> Self {
        self.rebuild(vec![self.coords[0].zero_like(); self.coords.len()])
    }

    fn one_like(&self) -> Self {
        let mut c = vec![self.coords[0].zero_like(); self.coords.len()];
        c[0] = self.coords[0].one_like();
        self.rebuild(c)
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn add(&self, rhs: &Self) -> Self {
        self.witt_add(rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.witt_sub(rhs)
    }

    fn neg(&self) -> Self {
        self.witt_neg()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.witt_mul(rhs)
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Self::from_integer(self.p, self.f, self.n(), n, &self.coords[0])
            .expect("same shape as an existing vector")
    }

    fn precision(&self) -> Option<u32> {
        self.coords.iter().filter_map(|c| c.precision()).min()
    }

    fn truncated(&self, prec: u32) -> Self {
        self.rebuild(self.coords.iter().map(|c| c.truncated(prec)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseRing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ghost_of_small_vectors() {
        let w = WittVector::new(3, 1, ints(&[1, 1])).unwrap();
        assert_eq!(w.ghost(), ints(&[1, 4]));
        let w = WittVector::new(2, 1, ints(&[1, 1, 1])).unwrap();
        assert_eq!(w.ghost(), ints(&[1, 3, 7]));
    }

    #[test]
    fn ghost_of_teichmuller_is_powers() {
        let w = WittVector::teichmuller(2, 1, 2, BigInt::from(3)).unwrap();
        assert_eq!(w.ghost(), ints(&[3, 9, 81]));
    }

    #[test]
    fn integers_embed() {
        let two = WittVector::from_integer(2, 1, 2, &BigInt::from(2), &BigInt::from(0)).unwrap();
        assert_eq!(two.ghost(), ints(&[2, 2, 2]));
        assert_eq!(two.coords(), &ints(&[2, -1, -4])[..]);
    }

    #[test]
    fn ghost_is_additive_and_multiplicative_mod_p5() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, f, n) in [(2, 1, 2), (3, 1, 2), (2, 2, 1)] {
            let r = BaseRing::new(p, f, 5).unwrap();
            for _ in 0..50 {
                let x = WittVector::new(p, f, (0..=n).map(|_| r.random(&mut rng)).collect()).unwrap();
                let y = WittVector::new(p, f, (0..=n).map(|_| r.random(&mut rng)).collect()).unwrap();
                let (gx, gy) = (x.ghost(), y.ghost());
                let gs = x.witt_add(&y).ghost();
                let gp = x.witt_mul(&y).ghost();
                for i in 0..=n {
                    assert_eq!(gs[i], gx[i].add(&gy[i]));
                    assert_eq!(gp[i], gx[i].mul(&gy[i]));
                }
            }
        }
    }

    #[test]
    fn ghost_fast_path_agrees_with_polynomials() {
        let nv = 6;
        let x = WittVector::new(3, 1, (0..3).map(|i| Poly::int_var(i, nv)).collect()).unwrap();
        let y = WittVector::new(3, 1, (3..6).map(|i| Poly::int_var(i, nv)).collect()).unwrap();
        assert_eq!(x.add_via_ghost(&y).unwrap(), x.witt_add(&y));
        assert_eq!(x.mul_via_ghost(&y).unwrap(), x.witt_mul(&y));
    }

    #[test]
    fn frobenius_and_verschiebung() {
        let x = WittVector::new(3, 1, ints(&[2, 5])).unwrap();
        assert_eq!(x.frobenius().unwrap().coords(), &ints(&[8 + 15])[..]);
        let v = x.verschiebung().unwrap();
        assert_eq!(v.coords(), &ints(&[0, 2, 5])[..]);
        let fv = v.frobenius().unwrap();
        assert_eq!(fv, x.scale_integer(&BigInt::from(3)));
        assert!(matches!(
            WittVector::new(3, 1, ints(&[1, 1, 1, 1])).unwrap().verschiebung(),
            Err(Error::BoundExceeded(_))
        ));
    }

    #[test]
    fn truncation_drops_the_last_coordinate() {
        let x = WittVector::new(2, 1, ints(&[4, 7])).unwrap();
        assert_eq!(x.truncate().unwrap().coords(), &ints(&[4])[..]);
        assert!(x.truncate().unwrap().truncate().is_err());
    }

    #[test]
    fn frobenius_lifts_q_power_via_delta() {
        let r = BaseRing::new(3, 1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = WittVector::new(3, 1, (0..3).map(|_| r.random(&mut rng)).collect()).unwrap();
            let lhs = x.frobenius().unwrap();
            let t = x.truncate().unwrap();
            let rhs = RingElem::pow(&t, 3).add(&x.delta().unwrap().scale_integer(&BigInt::from(3)));
            assert_eq!(lhs, rhs);
        }
    }
}
