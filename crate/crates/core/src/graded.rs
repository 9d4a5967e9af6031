//! Kummer algebras `S[t]/(t^m - h)`, the diamond action `t -> θ(d)^{-1} t`,
//! and the decomposition of an element into its `t^r` pieces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::base::{BaseElem, BaseRing};
use crate::error::{Error, Result};
use crate::jet::{coeff_to_json, CoeffJson};
use crate::ring::RingElem;

/// `S[t]/(t^m - h)` with `h` a unit of `S`.
#[derive(Clone, Debug)]
pub struct KummerAlgebra<C> {
    m: usize,
    h: C,
    h_inv: C,
}

impl<C: RingElem> KummerAlgebra<C> {
    /// `h_inv` is the inverse certificate for `h`.
    pub fn new(m: usize, h: C, h_inv: C) -> Result<Arc<Self>> {
        if m == 0 {
            return Err(Error::InvalidInput("Kummer degree must be positive".into()));
        }
        if !h.mul(&h_inv).sub(&h.one_like()).is_zero() {
            return Err(Error::NotInvertible("supplied inverse of h does not check".into()));
        }
        Ok(Arc::new(KummerAlgebra { m, h, h_inv }))
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> &C {
        &self.h
    }

    pub fn h_inv(&self) -> &C {
        &self.h_inv
    }

    pub fn zero(self: &Arc<Self>) -> KummerElem<C> {
        self.from_base(self.h.zero_like())
    }

    pub fn one(self: &Arc<Self>) -> KummerElem<C> {
        self.from_base(self.h.one_like())
    }

    pub fn from_base(self: &Arc<Self>, c: C) -> KummerElem<C> {
        let mut coeffs = vec![c.zero_like(); self.m];
        coeffs[0] = c;
        KummerElem {
            alg: self.clone(),
            coeffs,
        }
    }

    /// Builds `Σ coeffs[r] t^r`, reducing powers `r >= m`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<C>) -> KummerElem<C> {
        let mut acc = self.zero();
        for (r, c) in coeffs.into_iter().enumerate() {
            acc = acc.add(&self.t_pow(r as i64).scale_base(&c));
        }
        acc
    }

    pub fn t(self: &Arc<Self>) -> KummerElem<C> {
        self.t_pow(1)
    }

    /// `t^r` for any integer `r`, using `t^m = h` and `t^{-1} = h^{-1} t^{m-1}`.
    pub fn t_pow(self: &Arc<Self>, r: i64) -> KummerElem<C> {
        let m = self.m as i64;
        let (k, j) = (r.div_euclid(m), r.rem_euclid(m) as usize);
        let scalar = if k >= 0 {
            RingElem::pow(&self.h, k as u64)
        } else {
            RingElem::pow(&self.h_inv, k.unsigned_abs())
        };
        let mut coeffs = vec![self.h.zero_like(); self.m];
        coeffs[j] = scalar;
        KummerElem {
            alg: self.clone(),
            coeffs,
        }
    }

    /// `aplus^m == h_target`.
    pub fn hasse_root_check(self: &Arc<Self>, aplus: &KummerElem<C>, h_target: &C) -> bool {
        RingElem::pow(aplus, self.m as u64) == self.from_base(h_target.clone())
    }
}

/// An element `Σ_{r<m} coeffs[r] t^r`.
#[derive(Clone)]
pub struct KummerElem<C> {
    alg: Arc<KummerAlgebra<C>>,
    coeffs: Vec<C>,
}

impl<C: RingElem> std::fmt::Debug for KummerElem<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})*t^{r}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<C: RingElem> PartialEq for KummerElem<C> {
    fn eq(&self, other: &Self) -> bool {
        self.alg.m == other.alg.m && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.sub(b).is_zero())
    }
}

impl<C: RingElem> KummerElem<C> {
    pub fn algebra(&self) -> &Arc<KummerAlgebra<C>> {
        &self.alg
    }

    /// Coefficients in the basis `1, t, ..., t^{m-1}`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn scale_base(&self, c: &C) -> Self {
        self.with(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// Multiplies piece `r` by `scalars[r]`.
    pub fn scale_pieces(&self, scalars: &[C]) -> Self {
        self.with(self.coeffs.iter().zip(scalars).map(|(x, s)| x.mul(s)).collect())
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        self.with(self.coeffs.iter().map(f).collect())
    }

    fn with(&self, coeffs: Vec<C>) -> Self {
        KummerElem {
            alg: self.alg.clone(),
            coeffs,
        }
    }

    /// Indices of the nonzero pieces.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&r| !self.coeffs[r].is_zero()).collect()
    }
}

impl<C: RingElem> RingElem for KummerElem<C> {
    fn zero_like(&self) -> Self {
        self.alg.zero()
    }

    fn one_like(&self) -> Self {
        self.alg.one()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn add(&self, rhs: &Self) -> Self {
        self.with(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add(b)).collect())
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.with(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.sub(b)).collect())
    }

    fn neg(&self) -> Self {
        self.with(self.coeffs.iter().map(|a| a.neg()).collect())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let m = self.alg.m;
        let zero = self.alg.h.zero_like();
        let mut low = vec![zero.clone(); m];
        let mut high = vec![zero; m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.mul(b);
                if i + j < m {
                    low[i + j] = low[i + j].add(&prod);
                } else {
                    high[i + j - m] = high[i + j - m].add(&prod);
                }
            }
        }
        for (l, h) in low.iter_mut().zip(&high) {
            if !h.is_zero() {
                *l = l.add(&h.mul(&self.alg.h));
            }
        }
        self.with(low)
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        self.alg.from_base(self.alg.h.from_bigint_like(n))
    }

    fn precision(&self) -> Option<u32> {
        self.coeffs.iter().filter_map(|c| c.precision()).min()
    }

    fn truncated(&self, prec: u32) -> Self {
        self.map_coeffs(|c| c.truncated(prec))
    }
}

pub type BaseKummer = KummerAlgebra<BaseElem>;

/// `θ(d)` for `d` in `F_q^×`, `q` the residue cardinality of `S`, after
/// checking that `m` divides `q - 1`.
fn theta(alg: &BaseKummer, d: &BaseElem) -> Result<BaseElem> {
    let ring = alg.h.ring().clone();
    let q1 = ring.residue_size() - 1;
    if q1 % alg.m as u64 != 0 {
        return Err(Error::InvalidInput(format!(
            "the diamond action needs m = {} to divide q - 1 = {q1}",
            alg.m
        )));
    }
    if d.residue().is_zero() {
        return Err(Error::NotAUnit(format!("diamond operator at {d:?}")));
    }
    Ok(ring.teichmuller(d))
}

/// `θ(d)` for an integer `d` prime to `p`.
pub fn teichmuller_of(ring: &Arc<BaseRing>, d: i64) -> Result<BaseElem> {
    if d.rem_euclid(ring.p() as i64) == 0 {
        return Err(Error::NotAUnit(format!("{d} is not prime to {}", ring.p())));
    }
    Ok(ring.teichmuller_int(d))
}

/// `⟨d⟩ x`: the `S`-linear map with `t -> θ(d)^{-1} t`.
pub fn diamond_act(d: &BaseElem, x: &KummerElem<BaseElem>) -> Result<KummerElem<BaseElem>> {
    let th = theta(&x.alg, d)?;
    let inv = th.inverse()?;
    let mut scalars = Vec::with_capacity(x.alg.m);
    let mut s = inv.one_like();
    for _ in 0..x.alg.m {
        scalars.push(s.clone());
        s = s.mul(&inv);
    }
    Ok(x.scale_pieces(&scalars))
}

/// `diamond_act` for an integer `d` prime to `p`.
pub fn diamond_act_int(d: i64, x: &KummerElem<BaseElem>) -> Result<KummerElem<BaseElem>> {
    let ring = x.alg.h.ring().clone();
    if d.rem_euclid(ring.p() as i64) == 0 {
        return Err(Error::NotAUnit(format!("{d} is not prime to {}", ring.p())));
    }
    diamond_act(&ring.from_int(d), x)
}

/// Order of `⟨d⟩` as an automorphism, i.e. of `θ(d)^{-1}` restricted to
/// the exponents that occur.
pub fn diamond_order(alg: &Arc<BaseKummer>, d: &BaseElem) -> Result<u64> {
    let th = theta(alg, d)?;
    let inv = th.inverse()?;
    let q1 = th.ring().residue_size() - 1;
    let mut s = inv.clone();
    for k in 1..=q1 {
        if s.is_one() {
            return Ok(k);
        }
        s = s.mul(&inv);
    }
    Err(Error::AxiomViolation {
        law: "diamond order divides q - 1".into(),
        witness: format!("{d:?}"),
    })
}

/// Pieces of an element by power of `t`; piece `r` carries weight `-r`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement {
    pub m: usize,
    pub components: BTreeMap<usize, BaseElem>,
}

impl GradedElement {
    /// Weight label of piece `r`, as a residue mod `m`.
    pub fn weight(&self, r: usize) -> usize {
        (self.m - r % self.m) % self.m
    }
}

pub fn tau_decompose(x: &KummerElem<BaseElem>) -> GradedElement {
    GradedElement {
        m: x.alg.m,
        components: x
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| (r, c.clone()))
            .collect(),
    }
}

pub fn reassemble(alg: &Arc<BaseKummer>, g: &GradedElement) -> Result<KummerElem<BaseElem>> {
    if g.m != alg.m {
        return Err(Error::InvalidInput(format!("graded element has {} pieces, algebra {}", g.m, alg.m)));
    }
    let mut coeffs = vec![alg.h.zero_like(); alg.m];
    for (&r, c) in &g.components {
        if r >= alg.m {
            return Err(Error::Range(format!("piece {r} outside 0..{}", alg.m)));
        }
        coeffs[r] = c.clone();
    }
    Ok(KummerElem {
        alg: alg.clone(),
        coeffs,
    })
}

/// A generator of `F_q^×` as a residue element of `S`.
fn residue_generator(ring: &Arc<BaseRing>) -> BaseElem {
    if ring.f() == 1 {
        let p = ring.p();
        let q1 = p - 1;
        let factors: Vec<u64> = (2..=q1).filter(|&l| q1 % l == 0 && crate::ring::is_prime(l)).collect();
        let g = (2..p)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| pow_mod(g, q1 / l, p) != 1)
            })
            .unwrap_or(1);
        ring.from_int(g as i64)
    } else {
        ring.residue_generator()
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let (mut acc, mut b) = (1u128, b as u128 % m as u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// `k'` mod `m` with `⟨g⟩ x = θ(g)^{k'} x` for a generator `g` of `F_q^×`.
pub fn eigenweight(x: &KummerElem<BaseElem>) -> Result<usize> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let ring = x.alg.h.ring().clone();
    let g = residue_generator(&ring);
    let image = diamond_act(&g, x)?;
    let th = theta(&x.alg, &g)?;
    let mut s = th.one_like();
    for k in 0..x.alg.m {
        if image == x.scale_base(&s) {
            return Ok(k);
        }
        s = s.mul(&th);
    }
    Err(Error::NotEigen { pieces: x.support() })
}

/// The companion weight `p + 1 - k`, for `2 < k < p`.
pub fn companion_weight(k: i64, p: i64) -> Result<i64> {
    if !(2 < k && k < p) {
        return Err(Error::Range(format!("companion weight needs 2 < k < p, got k = {k}, p = {p}")));
    }
    Ok(p + 1 - k)
}

/// The graded weight residue `c (k - 2) mod (q - 1)`.
pub fn conjugate_weight(c: i64, k: i64, q: u64) -> Result<u64> {
    let m = q as i64 - 1;
    if m <= 0 {
        return Err(Error::Range(format!("q = {q} too small")));
    }
    if num_integer::Integer::gcd(&c, &m) != 1 {
        return Err(Error::InvalidInput(format!("c = {c} is not prime to q - 1 = {m}")));
    }
    Ok((c * (k - 2)).rem_euclid(m) as u64)
}

/// The monomial `t^{-k'}` with `k' = c (k - 2) mod (q - 1)`: an element on
/// which `⟨g⟩` acts by `θ(g)^{k'}`.
pub fn synthetic_shell(alg: &Arc<BaseKummer>, c: i64, k: i64) -> Result<KummerElem<BaseElem>> {
    let q = alg.h.ring().residue_size();
    let kp = conjugate_weight(c, k, q)? as i64;
    Ok(alg.t_pow(-kp))
}

/// `Z/p^N [t]/(t^{q-1} - h)` over the base ring of residue size `q`.
pub fn kummer_over_base(ring: &Arc<BaseRing>, h: BaseElem) -> Result<Arc<BaseKummer>> {
    let inv = h
        .inverse()
        .map_err(|_| Error::NotInvertible(format!("h = {h:?} must be a unit")))?;
    KummerAlgebra::new((ring.residue_size() - 1) as usize, h, inv)
}

pub fn random_elem<R: Rng + ?Sized>(alg: &Arc<BaseKummer>, rng: &mut R) -> KummerElem<BaseElem> {
    let ring = alg.h.ring().clone();
    KummerElem {
        alg: alg.clone(),
        coeffs: (0..alg.m).map(|_| ring.random(rng)).collect(),
    }
}

/// `{"coeffs": {"r": coefficient}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedJson {
    pub coeffs: BTreeMap<String, CoeffJson>,
}

impl GradedJson {
    pub fn from_graded(g: &GradedElement) -> Self {
        GradedJson {
            coeffs: g.components.iter().map(|(r, c)| (r.to_string(), coeff_to_json(c))).collect(),
        }
    }

    pub fn to_graded(&self, alg: &Arc<BaseKummer>) -> Result<GradedElement> {
        let ring = alg.h.ring().clone();
        let mut components = BTreeMap::new();
        for (k, v) in &self.coeffs {
            let r: usize = k
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad piece index {k:?}")))?;
            let terms = [crate::jet::TermJson {
                monomial: vec![],
                coeff: v.clone(),
            }];
            let c = crate::jet::poly_from_json(&terms, 0, &ring)?.constant_term();
            if !c.is_zero() {
                components.insert(r, c);
            }
        }
        Ok(GradedElement { m: alg.m, components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::seeded_rng;

    fn setup(p: u64, n: u32) -> (Arc<BaseRing>, Arc<BaseKummer>) {
        let ring = BaseRing::new(p, 1, n).unwrap();
        let h = ring.from_int(2);
        let alg = kummer_over_base(&ring, h).unwrap();
        (ring, alg)
    }

    #[test]
    fn diamond_on_t_at_five() {
        let (ring, alg) = setup(5, 3);
        assert_eq!(teichmuller_of(&ring, 2).unwrap(), ring.from_int(57));
        let y = diamond_act_int(2, &alg.t()).unwrap();
        let want = alg.t().scale_base(&ring.from_int(57).inverse().unwrap());
        assert_eq!(y, want);
        let x = random_elem(&alg, &mut seeded_rng(1));
        assert_eq!(diamond_act_int(1, &x).unwrap(), x);
        assert!(matches!(diamond_act_int(5, &x), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn t_to_the_m_reduces_to_h() {
        let (ring, alg) = setup(5, 3);
        let g = tau_decompose(&alg.t_pow(4));
        assert_eq!(g.components, BTreeMap::from([(0, ring.from_int(2))]));
        assert_eq!(alg.t_pow(-1).mul(&alg.t()), alg.one());
        assert_eq!(tau_decompose(&alg.t()).weight(1), 3);
    }

    #[test]
    fn diamond_is_a_ring_automorphism_and_a_group_action() {
        let (_, alg) = setup(7, 3);
        let mut rng = seeded_rng(2);
        for _ in 0..20 {
            let x = random_elem(&alg, &mut rng);
            let y = random_elem(&alg, &mut rng);
            let d = rng.gen_range(1..7);
            let e = rng.gen_range(1..7);
            let act = |z: &KummerElem<BaseElem>| diamond_act_int(d, z).unwrap();
            assert_eq!(act(&x.mul(&y)), act(&x).mul(&act(&y)));
            assert_eq!(act(&x.add(&y)), act(&x).add(&act(&y)));
            let both = diamond_act_int(e, &act(&x)).unwrap();
            assert_eq!(both, diamond_act_int(d * e, &x).unwrap());
        }
        for d in 1..7 {
            let ord = diamond_order(&alg, &alg.h().ring().from_int(d)).unwrap();
            assert_eq!(6 % ord, 0);
        }
    }

    #[test]
    fn roundtrip_and_eigenweights() {
        for p in [5, 7] {
            let (_, alg) = setup(p, 3);
            let mut rng = seeded_rng(3);
            for _ in 0..50 {
                let x = random_elem(&alg, &mut rng);
                let g = tau_decompose(&x);
                assert_eq!(reassemble(&alg, &g).unwrap(), x);
                assert_eq!(tau_decompose(&reassemble(&alg, &g).unwrap()), g);
            }
            let m = (p - 1) as i64;
            for r in 0..m {
                let want = (-r).rem_euclid(m) as usize;
                assert_eq!(eigenweight(&alg.t_pow(r)).unwrap(), want);
                let scaled = alg.t_pow(r).scale_base(&alg.h().ring().from_int(3 * p as i64 + 2));
                assert_eq!(eigenweight(&scaled).unwrap(), want);
                for s in 0..m {
                    let prod = alg.t_pow(r).mul(&alg.t_pow(s));
                    assert_eq!(eigenweight(&prod).unwrap(), (-(r + s)).rem_euclid(m) as usize);
                }
            }
        }
    }

    #[test]
    fn mixed_pieces_are_not_eigen() {
        let (_, alg) = setup(5, 3);
        let x = alg.t().add(&alg.t_pow(2));
        assert!(matches!(eigenweight(&x), Err(Error::NotEigen { pieces }) if pieces == vec![1, 2]));
        assert!(matches!(eigenweight(&alg.zero()), Err(Error::ZeroElement)));
    }

    #[test]
    fn weights() {
        let (_, alg) = setup(7, 3);
        assert_eq!(conjugate_weight(5, 3, 7).unwrap(), 5);
        assert_eq!(eigenweight(&synthetic_shell(&alg, 5, 3).unwrap()).unwrap(), 5);
        assert_eq!(companion_weight(3, 7).unwrap(), 5);
        assert_eq!(companion_weight(4, 5).unwrap(), 2);
        assert_eq!(companion_weight(5, 11).unwrap(), 7);
        assert!(matches!(companion_weight(2, 7), Err(Error::Range(_))));
    }

    #[test]
    fn hasse_roots() {
        let (ring, alg) = setup(5, 3);
        let h = alg.h().clone();
        assert!(alg.hasse_root_check(&alg.t(), &h));
        assert!(alg.hasse_root_check(&alg.t_pow(2), &h.mul(&h)));
        assert!(!alg.hasse_root_check(&alg.t().add(&alg.one()), &h));
        assert!(kummer_over_base(&ring, ring.from_int(5)).is_err());
    }

    #[test]
    fn graded_json_roundtrip() {
        let (_, alg) = setup(5, 3);
        let x = random_elem(&alg, &mut seeded_rng(9));
        let g = tau_decompose(&x);
        let js = GradedJson::from_graded(&g);
        let text = serde_json::to_string(&js).unwrap();
        let back: GradedJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graded(&alg).unwrap(), g);
    }
}
