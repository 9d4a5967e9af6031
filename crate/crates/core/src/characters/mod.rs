//! Weight characters and δ-series in `q^{±1}, q', q''`.

pub mod eigen;
pub mod formal;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::base::{BaseElem, BaseRing};
use crate::error::{Error, Result};
use crate::jet::{JetPoly, JetRing};
use crate::poly::{Monomial, Poly};
use crate::ring::{rational, rational_mod, valuation_rational, RingElem};

pub use eigen::{count_points, curve_coefficients, EigenformData};
pub use formal::{discriminant, Curve, FormalGroupData};

/// `w_0 + w_1 φ + ... + w_n φ^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightPoly {
    coeffs: Vec<i64>,
}

impl WeightPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        WeightPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, other: &WeightPoly) -> WeightPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[i64], i: usize| v.get(i).copied().unwrap_or(0);
        WeightPoly::new((0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.unsigned_abs();
            match i {
                0 => out.push_str(&a.to_string()),
                _ => {
                    if a != 1 {
                        out.push_str(&a.to_string());
                    }
                    out.push_str("phi");
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// `χ_w(λ) = Π φ^i(λ)^{w_i}` in any ring with a Frobenius lift.
pub fn weight_character_with<C: RingElem>(
    w: &WeightPoly,
    lambda: &C,
    phi: impl Fn(&C) -> C,
    inverse: impl Fn(&C) -> Result<C>,
) -> Result<C> {
    let mut acc = lambda.one_like();
    let mut power = lambda.clone();
    let mut inv: Option<C> = None;
    for (i, &wi) in w.coeffs.iter().enumerate() {
        if i > 0 {
            power = phi(&power);
            inv = inv.map(|x| phi(&x));
        }
        if wi > 0 {
            acc = acc.mul(&RingElem::pow(&power, wi as u64));
        } else if wi < 0 {
            if inv.is_none() {
                let mut x = inverse(lambda)?;
                for _ in 0..i {
                    x = phi(&x);
                }
                inv = Some(x);
            }
            acc = acc.mul(&RingElem::pow(inv.as_ref().unwrap(), wi.unsigned_abs()));
        }
    }
    Ok(acc)
}

pub fn weight_character(w: &WeightPoly, lambda: &BaseElem) -> Result<BaseElem> {
    weight_character_with(w, lambda, |x| x.frobenius(), |x| {
        x.inverse().map_err(|_| Error::NotInvertible(format!("{x:?}")))
    })
}

/// How a δ-series is cut off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    /// Total degree in `q', q'', ...` at most the bound.
    PrimeDegree(i64),
    /// Weighted degree at most the bound, `weight(q^{(k)}) = p^k`.
    Weighted(i64),
}

impl Truncation {
    pub fn bound(&self) -> i64 {
        match *self {
            Truncation::PrimeDegree(d) | Truncation::Weighted(d) => d,
        }
    }

    /// Variable weights for `q, q', ..., q^{(order)}`.
    pub fn weights(&self, p: u64, order: usize) -> Vec<i64> {
        match self {
            Truncation::PrimeDegree(_) => (0..=order).map(|k| i64::from(k > 0)).collect(),
            Truncation::Weighted(_) => (0..=order).map(|k| (p as i64).pow(k as u32)).collect(),
        }
    }
}

/// A truncated series in `q^{±1}, q', ..., q^{(r)}` reduced mod `p^N`,
/// optionally with its exact rational coefficients.
#[derive(Clone, Debug)]
pub struct DeltaSeries {
    pub base: Arc<BaseRing>,
    pub order: usize,
    pub series: Poly<BaseElem>,
    pub exact: Option<Poly<BigRational>>,
    pub truncation: Truncation,
    pub weight: Option<WeightPoly>,
}

/// One term of the JSON form of a δ-series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub monomial: SeriesMonomialJson,
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesMonomialJson {
    pub q: i32,
    pub q1: i32,
    pub q2: i32,
}

fn reduce_rational(base: &Arc<BaseRing>, c: &BigRational) -> Result<BaseElem> {
    let v = valuation_rational(c, base.p()).unwrap_or(0);
    if v < 0 {
        return Err(Error::DivisionNotExact {
            needed: v.unsigned_abs() as u32,
            found: 0,
            context: Some(format!("coefficient {c}")),
        });
    }
    let m = base.p_pow(base.precision());
    let r = rational_mod(c, m).expect("p-integral rational has a residue");
    Ok(base.from_bigint(&BigInt::from(r)))
}

impl DeltaSeries {
    /// Reduces an exact series; every coefficient must be `p`-integral.
    pub fn from_exact(
        base: &Arc<BaseRing>,
        order: usize,
        exact: Poly<BigRational>,
        truncation: Truncation,
        weight: Option<WeightPoly>,
    ) -> Result<Self> {
        let series = exact.try_map_coeffs(base.one(), |c| reduce_rational(base, c))?;
        Ok(DeltaSeries {
            base: base.clone(),
            order,
            series,
            exact: Some(exact),
            truncation,
            weight,
        })
    }

    pub fn coeff(&self, exps: &[i32]) -> BaseElem {
        self.series.coeff_of(exps)
    }

    pub fn exact_coeff(&self, exps: &[i32]) -> Option<BigRational> {
        self.exact.as_ref().map(|e| e.coeff_of(exps))
    }

    /// Reduction mod `p`.
    pub fn reduce_mod_p(&self) -> Poly<BaseElem> {
        let r = self.base.at_precision(1).expect("precision 1 is valid");
        self.series.map_coeffs(r.one(), |c| c.in_ring(&r))
    }

    /// Terms ordered by total degree in the primed variables, then by the
    /// primed exponents, then by the `q` exponent.
    pub fn to_json(&self) -> Vec<SeriesTermJson> {
        let monomials: Vec<&Monomial> = match &self.exact {
            Some(exact) => exact.terms().iter().map(|(m, _)| m).collect(),
            None => self.series.terms().iter().map(|(m, _)| m).collect(),
        };
        let mut terms: Vec<SeriesTermJson> = monomials
            .into_iter()
            .map(|m| {
                let e = m.exps();
                let c = self.coeff(e);
                let get = |i: usize| e.get(i).copied().unwrap_or(0);
                SeriesTermJson {
                    monomial: SeriesMonomialJson {
                        q: get(0),
                        q1: get(1),
                        q2: get(2),
                    },
                    coeff: c
                        .as_u64()
                        .map(|x| x.to_string())
                        .unwrap_or_else(|| format!("{:?}", c.coeffs())),
                    exact: self.exact_coeff(e).map(|x| x.to_string()),
                }
            })
            .collect();
        terms.sort_by_key(|t| {
            let m = &t.monomial;
            (m.q1 + m.q2, m.q2, m.q1, m.q)
        });
        terms
    }
}

/// Exact coefficient `(-1)^{n-1} p^{n-1} / n` of `(q'/q^p)^n` in `Ψ`.
pub fn psi_coefficient(p: u64, n: u64) -> BigRational {
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let num = BigInt::from(sign) * num_traits::pow(BigInt::from(p), n as usize - 1);
    BigRational::new(num, BigInt::from(n))
}

/// `Ψ = (1/p) log(φ(q)/q^p) = Σ_{n<=D} (-1)^{n-1} n^{-1} p^{n-1} (q'/q^p)^n`,
/// with `p` the residue characteristic.
pub fn psi_series(base: &Arc<BaseRing>, d: i64) -> Result<DeltaSeries> {
    if d < 1 {
        return Err(Error::Range(format!("degree bound {d} must be at least 1")));
    }
    let p = base.p();
    let terms = (1..=d as u64).map(|n| {
        let m = Monomial::from_exps(vec![-(p as i32) * n as i32, n as i32]);
        (m, psi_coefficient(p, n))
    });
    let exact = Poly::from_terms(2, BigRational::one(), terms);
    DeltaSeries::from_exact(
        base,
        1,
        exact,
        Truncation::PrimeDegree(d),
        Some(WeightPoly::new(vec![-1, -1])),
    )
}

/// The order-1 series `1` of weight `φ - 1`.
pub fn f_partial_series(base: &Arc<BaseRing>) -> DeltaSeries {
    let exact = Poly::one(2, BigRational::one());
    DeltaSeries {
        base: base.clone(),
        order: 1,
        series: Poly::one(2, base.one()),
        exact: Some(exact),
        truncation: Truncation::PrimeDegree(0),
        weight: Some(WeightPoly::new(vec![-1, 1])),
    }
}

/// `(1/p) Σ_{n<=D} (a_n/n) (φ²(q)^n - a_p φ(q)^n + p q^n)` with
/// `φ(q) = q^p + p q'`, `φ²(q) = φ(q)^p + p(q'^p + p q'')`, cut at weighted
/// degree `D`. Fails with `DivisionNotExact` at the first coefficient that
/// is not `p`-integral.
pub fn f_sharp_series(e: &EigenformData, base: &Arc<BaseRing>, d: i64) -> Result<DeltaSeries> {
    let p = base.p();
    if p != e.p {
        return Err(Error::InvalidInput(format!("eigenform data is for p = {}, base has p = {p}", e.p)));
    }
    if base.f() != 1 {
        return Err(Error::InvalidInput("f-sharp is implemented over unramified degree 1 only".into()));
    }
    if d < 1 || (e.len() as i64) < d {
        return Err(Error::InvalidInput(format!("need a_n for n <= {d}, have {}", e.len())));
    }
    let exact = f_sharp_exact(e, d)?;
    DeltaSeries::from_exact(base, 2, exact, Truncation::Weighted(d), None)
}

fn f_sharp_exact(e: &EigenformData, d: i64) -> Result<Poly<BigRational>> {
    let p = e.p;
    let weights = Truncation::Weighted(d).weights(p, 2);
    let keep = |m: &Monomial| m.weight(&weights) <= d;
    let one = BigRational::one();
    let pr = rational(p as i64, 1);
    let var = |i| Poly::var(i, 3, one.clone());
    let (q, q1, q2) = (var(0), var(1), var(2));
    let phi1 = q.pow_filtered(p, &keep).add(&q1.scale(&pr));
    let phi2 = phi1
        .pow_filtered(p, &keep)
        .add(&q1.pow_filtered(p, &keep).add(&q2.scale(&pr)).scale(&pr));
    let (mut p1, mut p2, mut pq) = (Poly::one(3, one.clone()), Poly::one(3, one.clone()), Poly::one(3, one.clone()));
    let mut acc = Poly::zero(3, one.clone());
    let a_p = rational(e.a_p, 1);
    for n in 1..=d as usize {
        p1 = p1.mul_filtered(&phi1, keep);
        p2 = p2.mul_filtered(&phi2, keep);
        pq = pq.mul_filtered(&q, keep);
        let a = e.a(n);
        if a == 0 {
            continue;
        }
        let term = p2.sub(&p1.scale(&a_p)).add(&pq.scale(&pr));
        acc = acc.add(&term.scale(&rational(a, n as i64)));
    }
    let out = acc.scale(&rational(1, p as i64));
    for (m, c) in out.terms() {
        if let Some(v) = valuation_rational(c, p) {
            if v < 0 {
                return Err(Error::DivisionNotExact {
                    needed: v.unsigned_abs() as u32,
                    found: 0,
                    context: Some(format!("f-sharp coefficient {c} of {m:?}")),
                });
            }
        }
    }
    Ok(out)
}

/// The formal group with logarithm `Σ a_n/n T^n`, in which `f_sharp_series`
/// is written.
pub fn eigenform_formal_group(e: &EigenformData, degree: usize) -> Result<FormalGroupData> {
    let mut log = vec![BigRational::zero(); degree + 1];
    for n in 1..=degree.min(e.len()) {
        log[n] = rational(e.a(n), n as i64);
    }
    FormalGroupData::from_logarithm(&log, degree)
}

/// Substitutes `q -> image`, `q^{(k)} -> δ^k(image)` into `s`, working in the
/// truncated jet ring `jet`. Negative powers of `q` need `image` to be a
/// unit monomial.
pub fn delta_substitute(s: &DeltaSeries, jet: &JetRing, image: &JetPoly) -> Result<JetPoly> {
    if jet.order() < s.order {
        return Err(Error::BoundExceeded(format!(
            "series of order {} needs jets of order {}",
            s.order, s.order
        )));
    }
    if let Some((_, bound)) = jet.truncation() {
        if bound > s.truncation.bound() {
            return Err(Error::TruncationUnderflow(format!(
                "requested degree {bound} exceeds the series truncation {}",
                s.truncation.bound()
            )));
        }
    }
    let mut images = vec![jet.truncate(image)];
    for k in 1..=s.order {
        let next = jet.delta(&images[k - 1])?;
        images.push(next);
    }
    let needs_inverse = (0..s.order + 1).any(|i| s.series.min_exponent(i) < 0);
    let inverse = if needs_inverse {
        Some(monomial_inverse(image)?)
    } else {
        None
    };

    let mut cache: HashMap<(usize, i32), JetPoly> = HashMap::new();
    let mut acc = jet.zero();
    for (m, c) in s.series.terms() {
        let mut t = jet.constant(c.in_ring(jet.base()));
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !cache.contains_key(&(i, e)) {
                let src = if e > 0 {
                    images[i].clone()
                } else if i == 0 {
                    inverse.clone().expect("inverse computed for negative q powers")
                } else {
                    return Err(Error::InvalidInput("negative power of a primed variable".into()));
                };
                let pw = jet.pow(&src, e.unsigned_abs() as u64);
                cache.insert((i, e), pw);
            }
            t = jet.mul(&t, &cache[&(i, e)]);
            if t.is_zero() {
                break;
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

fn monomial_inverse(f: &JetPoly) -> Result<JetPoly> {
    match f.terms() {
        [(m, c)] => {
            let inv = c
                .inverse()
                .map_err(|_| Error::NotInvertible(format!("coefficient {c:?}")))?;
            let exps = m.exps().iter().map(|e| -e).collect();
            Ok(Poly::monomial(Monomial::from_exps(exps), inv))
        }
        _ => Err(Error::NotInvertible("only unit monomials can replace q^{-1}".into())),
    }
}

/// `s` read in the jet ring, with `q^{(k)}` placed on variable `var`.
pub fn embed_series(s: &DeltaSeries, jet: &JetRing, var: usize) -> JetPoly {
    let mapping: Vec<usize> = (0..=s.order).map(|k| jet.index(var, k)).collect();
    let moved = s.series.remap(jet.nvars(), &mapping);
    jet.truncate(&moved.map_coeffs(jet.base().one(), |c| c.in_ring(jet.base())))
}

/// `Ψ(q1 q2) - Ψ(q1) - Ψ(q2)` through primed degree `d`.
pub fn psi_additivity_defect(base: &Arc<BaseRing>, d: i64) -> Result<JetPoly> {
    let psi = psi_series(base, d)?;
    let jet = JetRing::new(base.clone(), vec!["q1".into(), "q2".into()], 1)?.with_truncation(vec![0, 1, 0, 1], d)?;
    let image = jet.mul(&jet.var(0, 0), &jet.var(1, 0));
    let lhs = delta_substitute(&psi, &jet, &image)?;
    Ok(lhs.sub(&embed_series(&psi, &jet, 0)).sub(&embed_series(&psi, &jet, 1)))
}

/// `f♯(G(q1, q2)) - f♯(q1) - f♯(q2)` through weighted degree `d`, with `G`
/// the group law of `eigenform_formal_group`.
pub fn f_sharp_additivity_defect(e: &EigenformData, base: &Arc<BaseRing>, d: i64) -> Result<JetPoly> {
    let group = eigenform_formal_group(e, d as usize)?;
    if !group.is_p_integral(base.p()) {
        return Err(Error::DivisionNotExact {
            needed: 1,
            found: 0,
            context: Some("formal group law of the eigenform".into()),
        });
    }
    let s = f_sharp_series(e, base, d)?;
    let jet = JetRing::new(base.clone(), vec!["q1".into(), "q2".into()], 2)?;
    let weights = jet.frobenius_weights(&[1, 1]);
    let jet = jet.with_truncation(weights, d)?;
    let law = group
        .law
        .try_map_coeffs(base.one(), |c| reduce_rational(base, c))?
        .remap(jet.nvars(), &[jet.index(0, 0), jet.index(1, 0)]);
    let lhs = delta_substitute(&s, &jet, &law)?;
    Ok(lhs.sub(&embed_series(&s, &jet, 0)).sub(&embed_series(&s, &jet, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::seeded_rng;

    const CURVE_11A: Curve = [0, -1, 1, -10, -20];

    #[test]
    fn weight_characters() {
        let base = BaseRing::new(3, 2, 4).unwrap();
        let mut rng = seeded_rng(11);
        let w = WeightPoly::new(vec![-1, -1]);
        assert_eq!(w.to_string(), "-phi - 1");
        assert_eq!(WeightPoly::new(vec![-1, 1]).to_string(), "phi - 1");
        let v = WeightPoly::new(vec![2, 0, 1]);
        for _ in 0..20 {
            let l = base.random_unit(&mut rng);
            let m = base.random_unit(&mut rng);
            assert_eq!(weight_character(&WeightPoly::new(vec![1]), &l).unwrap(), l);
            let want = l.inverse().unwrap().mul(&l.frobenius().inverse().unwrap());
            assert_eq!(weight_character(&w, &l).unwrap(), want);
            assert_eq!(
                weight_character(&w, &l.mul(&m)).unwrap(),
                weight_character(&w, &l).unwrap().mul(&weight_character(&w, &m).unwrap())
            );
            assert_eq!(
                weight_character(&w.add(&v), &l).unwrap(),
                weight_character(&w, &l).unwrap().mul(&weight_character(&v, &l).unwrap())
            );
        }
        assert!(weight_character(&w, &base.from_int(3)).is_err());
    }

    #[test]
    fn psi_leading_terms() {
        for p in [2, 3, 5] {
            let base = BaseRing::new(p, 1, 6).unwrap();
            let psi = psi_series(&base, 12).unwrap();
            let pi = p as i32;
            assert_eq!(psi.coeff(&[-pi, 1]), base.one());
            assert_eq!(psi.exact_coeff(&[-2 * pi, 2]).unwrap(), rational(-(p as i64), 2));
            for n in 1..=12u64 {
                let c = psi_coefficient(p, n);
                let vn = valuation_rational(&rational(n as i64, 1), p).unwrap();
                assert_eq!(valuation_rational(&c, p).unwrap(), n as i64 - 1 - vn);
            }
        }
        let base = BaseRing::new(2, 1, 6).unwrap();
        assert_eq!(psi_series(&base, 3).unwrap().exact_coeff(&[-4, 2]).unwrap(), rational(-1, 1));
    }

    #[test]
    fn psi_is_additive() {
        for p in [2, 3] {
            let base = BaseRing::new(p, 1, 6).unwrap();
            assert!(psi_additivity_defect(&base, 10).unwrap().is_zero());
        }
    }

    #[test]
    fn psi_is_invariant_under_roots_of_unity() {
        let base = BaseRing::new(5, 1, 5).unwrap();
        let psi = psi_series(&base, 6).unwrap();
        let jet = JetRing::new(base.clone(), vec!["q".into()], 1)
            .unwrap()
            .with_truncation(vec![0, 1], 6)
            .unwrap();
        let zeta = base.teichmuller_int(2);
        let moved = delta_substitute(&psi, &jet, &jet.var(0, 0).scale(&zeta)).unwrap();
        assert_eq!(moved, embed_series(&psi, &jet, 0));
        let same = delta_substitute(&psi, &jet, &jet.var(0, 0)).unwrap();
        assert_eq!(same, embed_series(&psi, &jet, 0));
    }

    #[test]
    fn substitution_rejects_deeper_truncation() {
        let base = BaseRing::new(3, 1, 5).unwrap();
        let psi = psi_series(&base, 4).unwrap();
        let jet = JetRing::new(base.clone(), vec!["q".into()], 1)
            .unwrap()
            .with_truncation(vec![0, 1], 6)
            .unwrap();
        assert!(matches!(
            delta_substitute(&psi, &jet, &jet.var(0, 0)),
            Err(Error::TruncationUnderflow(_))
        ));
    }

    #[test]
    fn f_partial() {
        let base = BaseRing::new(5, 1, 4).unwrap();
        let s = f_partial_series(&base);
        assert_eq!(s.weight.as_ref().unwrap().to_string(), "phi - 1");
        assert_eq!(s.series, Poly::one(2, base.one()));
        let r = s.reduce_mod_p();
        assert_eq!(r.terms().len(), 1);
        assert!(r.terms()[0].1.is_one());
    }

    #[test]
    fn f_sharp_single_term_probe() {
        let base = BaseRing::new(3, 1, 5).unwrap();
        let e = EigenformData::new(3, vec![1, 0, 0, 0, 0, 0, 0, 0, 0], None).unwrap();
        // below weight 9 only p q / p = q survives
        let s = f_sharp_series(&e, &base, 3).unwrap();
        let want = Poly::var(0, 3, rational(1, 1));
        assert_eq!(s.exact.as_ref().unwrap(), &want);
        // at weight 9, φ²(q) contributes q^9 / 3
        assert!(matches!(f_sharp_series(&e, &base, 9), Err(Error::DivisionNotExact { .. })));
    }

    #[test]
    fn f_sharp_for_11a_is_integral_and_additive() {
        let base = BaseRing::new(3, 1, 8).unwrap();
        let e = EigenformData::from_curve(&CURVE_11A, 3, 20).unwrap();
        let s = f_sharp_series(&e, &base, 20).unwrap();
        assert!(s.exact.as_ref().unwrap().terms().iter().all(|(_, c)| valuation_rational(c, 3).unwrap_or(0) >= 0));
        assert!(f_sharp_additivity_defect(&e, &base, 8).unwrap().is_zero());
        // weight 10 is the first bound at which q'' takes part
        assert!(f_sharp_additivity_defect(&e, &base, 10).unwrap().is_zero());

        // the additive law is the wrong group: the defect must not vanish
        let s = f_sharp_series(&e, &base, 8).unwrap();
        let jet = JetRing::new(base.clone(), vec!["q1".into(), "q2".into()], 2).unwrap();
        let w = jet.frobenius_weights(&[1, 1]);
        let jet = jet.with_truncation(w, 8).unwrap();
        let sum = jet.var(0, 0).add(&jet.var(1, 0));
        let lhs = delta_substitute(&s, &jet, &sum).unwrap();
        let defect = lhs.sub(&embed_series(&s, &jet, 0)).sub(&embed_series(&s, &jet, 1));
        assert!(!defect.is_zero());
    }

    #[test]
    fn eigenform_group_is_isomorphic_to_the_curve_group_at_3() {
        let d = 12;
        let e = EigenformData::from_curve(&CURVE_11A, 3, d).unwrap();
        let honda = eigenform_formal_group(&e, d).unwrap();
        let curve = FormalGroupData::from_weierstrass(&CURVE_11A, 3, d).unwrap();
        let exp = formal::series_reversion(&curve.log, d + 1).unwrap();
        let iso = formal::series_compose(&exp, &honda.log, d + 1);
        assert!(iso.iter().all(|c| valuation_rational(c, 3).map_or(true, |v| v >= 0)));
        assert_eq!(iso[1], rational(1, 1));
    }

    #[test]
    fn eigenform_group_of_11a_is_integral() {
        let e = EigenformData::from_curve(&CURVE_11A, 3, 12).unwrap();
        let g = eigenform_formal_group(&e, 12).unwrap();
        g.check().unwrap();
        assert!(g.is_p_integral(3));
    }
}
