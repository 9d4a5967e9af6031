//! Sparse distributed multivariate Laurent polynomials.
//!
//! Terms are kept sorted in graded-lex order with no zero coefficients.
//! Negative exponents are allowed so the same engine carries `q^{-p}` in
//! delta-series and `h^{-1}` in Kummer algebras; operations that need true
//! polynomials (`derivative` aside) check for them explicitly.
//!
//! For truncated coefficient rings the whole polynomial is kept at a single
//! precision: every operation truncates all coefficients to the minimum
//! precision seen, so an absent monomial means "zero to that precision".

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{ExactDivP, RingElem};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[i32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exps(exps: Vec<i32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * e as i32).collect())
    }

    pub fn weight(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0)
    }
}

#[derive(Clone)]
pub struct Poly<C> {
    nvars: usize,
    terms: Vec<(Monomial, C)>,
    unit: C,
}

impl<C: RingElem> Poly<C> {
    pub fn zero(nvars: usize, unit: C) -> Self {
        Poly {
            nvars,
            terms: Vec::new(),
            unit,
        }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        let unit = c.one_like();
        Self::from_terms(nvars, unit, vec![(Monomial::one(nvars), c)])
    }

    pub fn one(nvars: usize, unit: C) -> Self {
        Self::constant(unit, nvars)
    }

    pub fn var(i: usize, nvars: usize, unit: C) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Poly {
            nvars,
            terms: vec![(Monomial::var(i, nvars), unit.clone())],
            unit,
        }
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        let unit = c.one_like();
        Self::from_terms(nvars, unit, vec![(m, c)])
    }

    /// Builds a polynomial from possibly repeated, unsorted terms.
    pub fn from_terms(nvars: usize, unit: C, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(nvars, unit, acc)
    }

    fn from_map(nvars: usize, unit: C, acc: HashMap<Monomial, C>) -> Self {
        let terms: Vec<_> = acc.into_iter().collect();
        Poly { nvars, terms, unit }.normalized()
    }

    fn normalized(mut self) -> Self {
        if let Some(mut prec) = self.unit.precision() {
            for (_, c) in &self.terms {
                if let Some(q) = c.precision() {
                    prec = prec.min(q);
                }
            }
            self.unit = self.unit.truncated(prec);
            for (_, c) in self.terms.iter_mut() {
                if c.precision() != Some(prec) {
                    *c = c.truncated(prec);
                }
            }
        }
        self.terms.retain(|(_, c)| !c.is_zero());
        self.terms.sort_by(|a, b| a.0.cmp(&b.0));
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn unit(&self) -> &C {
        &self.unit
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.unit.zero_like(),
        }
    }

    pub fn coeff_of(&self, exps: &[i32]) -> C {
        self.coeff(&Monomial::from_exps(exps.to_vec()))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn max_exponent(&self, var: usize) -> i32 {
        self.terms.iter().map(|(m, _)| m.0[var]).max().unwrap_or(0)
    }

    pub fn min_exponent(&self, var: usize) -> i32 {
        self.terms.iter().map(|(m, _)| m.0[var]).min().unwrap_or(0)
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.has_negative())
    }

    pub fn precision(&self) -> Option<u32> {
        self.unit.precision()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.merge(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.merge(rhs, true)
    }

    fn merge(&self, rhs: &Self, negate: bool) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        a[i].1.sub(&b[j].1)
                    } else {
                        a[i].1.add(&b[j].1)
                    };
                    out.push((a[i].0.clone(), c));
                    i += 1;
                    j += 1;
                }
            }
        }
        let unit = self.unit.mul(&rhs.unit);
        Poly {
            nvars: self.nvars,
            terms: out,
            unit,
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
            unit: self.unit.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.mul_filtered(rhs, |_| true)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_filtered(&self, rhs: &Self, keep: impl Fn(&Monomial) -> bool) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let unit = self.unit.mul(&rhs.unit);
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return Poly::zero(self.nvars, unit);
        }
        let mut acc: HashMap<Monomial, C> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(self.nvars, unit, acc)
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
            unit: self.unit.mul(&c.one_like()),
        }
        .normalized()
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&self.unit.from_bigint_like(n))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
            unit: self.unit.clone(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        self.pow_filtered(e, &|_| true)
    }

    pub fn pow_filtered(&self, mut e: u64, keep: &dyn Fn(&Monomial) -> bool) -> Self {
        // single term powers are exact and cheap
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            let m = m.pow(e as u32);
            if !keep(&m) {
                return Poly::zero(self.nvars, self.unit.clone());
            }
            return Poly {
                nvars: self.nvars,
                terms: vec![(m, c.pow(e))],
                unit: self.unit.clone(),
            }
            .normalized();
        }
        let mut acc = Poly::one(self.nvars, self.unit.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_filtered(&base, keep);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_filtered(&base, keep);
            }
        }
        acc
    }

    pub fn map_coeffs<D: RingElem>(&self, unit: D, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
            unit,
        }
        .normalized()
    }

    pub fn try_map_coeffs<D: RingElem>(
        &self,
        unit: D,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<Poly<D>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Ok(Poly {
            nvars: self.nvars,
            terms,
            unit,
        }
        .normalized())
    }

    /// Re-embeds into `new_nvars` variables, sending variable `i` to `mapping[i]`.
    pub fn remap(&self, new_nvars: usize, mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; new_nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[mapping[i]] += x;
            }
            (Monomial::from_exps(e), c.clone())
        });
        Self::from_terms(new_nvars, self.unit.clone(), terms)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[var];
            if e == 0 {
                return None;
            }
            let mut exps = m.0.to_vec();
            exps[var] -= 1;
            Some((Monomial::from_exps(exps), c.from_i64_like(e as i64).mul(c)))
        });
        Self::from_terms(self.nvars, self.unit.clone(), terms)
    }

    /// Drops every monomial whose weight exceeds `bound`.
    pub fn truncate_weight(&self, weights: &[i64], bound: i64) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(weights) <= bound)
                .cloned()
                .collect(),
            unit: self.unit.clone(),
        }
    }

    pub fn truncated_to(&self, prec: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.clone(),
            unit: self.unit.truncated(prec),
        }
        .normalized()
    }

    /// Evaluates at `points`, mapping coefficients through `coeff_map`.
    /// Negative exponents use `inverses[i]`, which must then be supplied.
    pub fn eval_with<R: RingElem>(
        &self,
        points: &[R],
        inverses: Option<&[Option<R>]>,
        coeff_map: impl Fn(&C) -> R,
    ) -> Result<R> {
        assert_eq!(points.len(), self.nvars, "wrong number of evaluation points");
        let sample = points
            .first()
            .cloned()
            .map(|x| x.one_like())
            .ok_or_else(|| Error::InvalidInput("cannot evaluate in zero variables".into()));
        let table = PowerTable::build(self, points, inverses)?;
        let mut acc: Option<R> = None;
        for (m, c) in &self.terms {
            let mut t = coeff_map(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t = t.mul(table.get(i, e));
                }
            }
            acc = Some(match acc {
                Some(a) => a.add(&t),
                None => t,
            });
        }
        match acc {
            Some(a) => Ok(a),
            None => Ok(sample?.zero_like()),
        }
    }

    /// Substitutes polynomial images for the variables (composition).
    pub fn substitute(&self, images: &[Poly<C>]) -> Result<Poly<C>> {
        if images.is_empty() {
            return Ok(self.clone());
        }
        let n = images[0].nvars;
        let unit = self.unit.mul(&images[0].unit);
        if self.is_empty() {
            return Ok(Poly::zero(n, unit));
        }
        self.eval_with(images, None, |c| Poly::constant(c.clone(), n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: ExactDivP> Poly<C> {
    pub fn exact_div_p(&self, p: u64, k: u32) -> Result<Self> {
        let unit = match self.unit.precision() {
            Some(prec) => {
                let left = prec.checked_sub(k).ok_or(Error::PrecisionExhausted {
                    needed: k,
                    available: prec,
                })?;
                self.unit.truncated(left)
            }
            None => self.unit.clone(),
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), c.exact_div_p(p, k)?));
        }
        Ok(Poly {
            nvars: self.nvars,
            terms,
            unit,
        }
        .normalized())
    }
}

struct PowerTable<R> {
    pos: Vec<Vec<R>>,
    neg: Vec<Vec<R>>,
}

impl<R: RingElem> PowerTable<R> {
    fn build<C: RingElem>(
        poly: &Poly<C>,
        points: &[R],
        inverses: Option<&[Option<R>]>,
    ) -> Result<Self> {
        let mut pos = Vec::with_capacity(points.len());
        let mut neg = Vec::with_capacity(points.len());
        for (i, x) in points.iter().enumerate() {
            let hi = poly.max_exponent(i).max(0) as usize;
            let lo = (-poly.min_exponent(i)).max(0) as usize;
            let mut powers = vec![x.one_like()];
            for k in 1..=hi {
                let next = powers[k - 1].mul(x);
                powers.push(next);
            }
            pos.push(powers);
            let mut inv_powers = Vec::new();
            if lo > 0 {
                let inv = inverses
                    .and_then(|v| v.get(i).cloned().flatten())
                    .ok_or_else(|| {
                        Error::NotInvertible(format!("no inverse supplied for variable {i}"))
                    })?;
                inv_powers.push(x.one_like());
                for k in 1..=lo {
                    let next = inv_powers[k - 1].mul(&inv);
                    inv_powers.push(next);
                }
            }
            neg.push(inv_powers);
        }
        Ok(PowerTable { pos, neg })
    }

    fn get(&self, i: usize, e: i32) -> &R {
        if e >= 0 {
            &self.pos[i][e as usize]
        } else {
            &self.neg[i][(-e) as usize]
        }
    }
}

impl<C: RingElem> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.sub(other).is_zero()
    }
}

impl<C: RingElem> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}*{m:?}")?;
        }
        Ok(())
    }
}

impl<C: RingElem> RingElem for Poly<C> {
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars, self.unit.clone())
    }
    fn one_like(&self) -> Self {
        Poly::one(self.nvars, self.unit.clone())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Poly::constant(self.unit.from_bigint_like(n), self.nvars)
    }
    fn precision(&self) -> Option<u32> {
        self.unit.precision()
    }
    fn truncated(&self, prec: u32) -> Self {
        self.truncated_to(prec)
    }
    fn pow(&self, e: u64) -> Self {
        Poly::pow(self, e)
    }
}

impl<C: ExactDivP> ExactDivP for Poly<C> {
    fn exact_div_p(&self, p: u64, k: u32) -> Result<Self> {
        Poly::exact_div_p(self, p, k)
    }
}

impl Poly<BigInt> {
    /// Evaluates an integer polynomial in an arbitrary ring.
    pub fn eval_in<R: RingElem>(&self, points: &[R]) -> R {
        let sample = points[0].clone();
        self.eval_with(points, None, |c| sample.from_bigint_like(c))
            .expect("integer polynomials without negative exponents always evaluate")
    }

    pub fn int_one(nvars: usize) -> Self {
        Poly::one(nvars, BigInt::from(1))
    }

    pub fn int_var(i: usize, nvars: usize) -> Self {
        Poly::var(i, nvars, BigInt::from(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: usize) -> Poly<BigInt> {
        Poly::int_var(i, 2)
    }

    #[test]
    fn binomial_square() {
        let s = x(0).add(&x(1));
        let sq = s.pow(2);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff_of(&[1, 1]), BigInt::from(2));
        assert_eq!(sq.total_degree(), Some(2));
    }

    #[test]
    fn cancellation_drops_terms() {
        let s = x(0).add(&x(1));
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exps(vec![0, 2]);
        let b = Monomial::from_exps(vec![1, 0]);
        let c = Monomial::from_exps(vec![2, 0]);
        assert!(b < a);
        assert!(a < c);
    }

    #[test]
    fn laurent_evaluation_needs_inverse() {
        let m = Poly::monomial(Monomial::from_exps(vec![-1, 0]), BigInt::from(1));
        let r = m.eval_with(&[BigInt::from(2), BigInt::from(3)], None, |c| c.clone());
        assert!(matches!(r, Err(Error::NotInvertible(_))));
    }

    #[test]
    fn derivative_and_substitution() {
        // d/dx (x^3 y) = 3 x^2 y
        let p = x(0).pow(3).mul(&x(1));
        let d = p.derivative(0);
        assert_eq!(d.coeff_of(&[2, 1]), BigInt::from(3));
        // substitute x -> x + y, y -> 1
        let s = p
            .substitute(&[x(0).add(&x(1)), Poly::int_one(2)])
            .unwrap();
        assert_eq!(s, x(0).add(&x(1)).pow(3));
    }

    proptest! {
        #[test]
        fn multiplication_matches_evaluation(
            a in prop::collection::vec((0i32..4, 0i32..4, -5i64..5), 0..6),
            b in prop::collection::vec((0i32..4, 0i32..4, -5i64..5), 0..6),
            pt in (-4i64..4, -4i64..4),
        ) {
            let mk = |v: &Vec<(i32, i32, i64)>| Poly::from_terms(
                2,
                BigInt::from(1),
                v.iter().map(|&(i, j, c)| (Monomial::from_exps(vec![i, j]), BigInt::from(c))),
            );
            let (pa, pb) = (mk(&a), mk(&b));
            let pts = [BigInt::from(pt.0), BigInt::from(pt.1)];
            let lhs = pa.mul(&pb).eval_in(&pts);
            let rhs = pa.eval_in(&pts) * pb.eval_in(&pts);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
