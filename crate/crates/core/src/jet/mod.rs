//! Arithmetic jet spaces of affine presentations.
//!
//! A jet ring of order `n` over variables `x_0..x_{m-1}` has the prolonged
//! variables `x_j^{(k)}`, `0 <= k <= n`, stored at index `j * (n + 1) + k`.
//! `δ` acts by `δ(x^{(k)}) = x^{(k+1)}`, by the base derivation on
//! coefficients, and by the sum and product laws elsewhere.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::base::{BaseElem, BaseRing};
use crate::delta::{c_pi, CPiPoly, ProlongationLevel, ProlongationSequence};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::ring::RingElem;
use crate::witt::{solve_ghost, WittVector};

/// Largest order accepted by `jet_presentation` and `kummer_jet`.
pub const MAX_JET_ORDER: usize = 2;

pub mod kummer;

pub type JetPoly = Poly<BaseElem>;

/// Polynomial ring in prolonged variables with the canonical `δ` and `φ`.
pub struct JetRing {
    base: Arc<BaseRing>,
    names: Vec<String>,
    order: usize,
    truncation: Option<(Vec<i64>, i64)>,
    cpi: CPiPoly,
    memo: Mutex<HashMap<Monomial, JetPoly>>,
}

impl std::fmt::Debug for JetRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "JetRing({:?}, order {})", self.names, self.order)
    }
}

fn prime_name(name: &str, k: usize) -> String {
    format!("{name}{}", "'".repeat(k))
}

impl JetRing {
    pub fn new(base: Arc<BaseRing>, names: Vec<String>, order: usize) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidInput("a jet ring needs at least one variable".into()));
        }
        let cpi = c_pi(base.p(), base.frobenius_degree())?;
        Ok(JetRing {
            base,
            names,
            order,
            truncation: None,
            cpi,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Drops every monomial of weight above `bound` after each operation.
    /// The weights must make the discarded ideal stable under `δ`, e.g.
    /// `weight(x^{(k)}) = q^k weight(x)` with positive base weights.
    pub fn with_truncation(mut self, weights: Vec<i64>, bound: i64) -> Result<Self> {
        if weights.len() != self.nvars() {
            return Err(Error::InvalidInput("one weight per jet variable".into()));
        }
        self.truncation = Some((weights, bound));
        self.memo = Mutex::new(HashMap::new());
        Ok(self)
    }

    /// `weight(x_j^{(k)}) = base[j] * q^k`.
    pub fn frobenius_weights(&self, base_weights: &[i64]) -> Vec<i64> {
        let q = self.q() as i64;
        let mut w = Vec::with_capacity(self.nvars());
        for &b in base_weights {
            let mut x = b;
            for _ in 0..=self.order {
                w.push(x);
                x *= q;
            }
        }
        w
    }

    /// Weights and bound of the truncation, if any.
    pub fn truncation(&self) -> Option<(&[i64], i64)> {
        self.truncation.as_ref().map(|(w, b)| (w.as_slice(), *b))
    }

    pub fn base(&self) -> &Arc<BaseRing> {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len() * (self.order + 1)
    }

    pub fn index(&self, var: usize, k: usize) -> usize {
        assert!(var < self.names.len() && k <= self.order);
        var * (self.order + 1) + k
    }

    pub fn var_name(&self, idx: usize) -> String {
        prime_name(&self.names[idx / (self.order + 1)], idx % (self.order + 1))
    }

    pub fn var_names(&self) -> Vec<String> {
        (0..self.nvars()).map(|i| self.var_name(i)).collect()
    }

    fn unit(&self) -> BaseElem {
        self.base.one()
    }

    pub fn zero(&self) -> JetPoly {
        Poly::zero(self.nvars(), self.unit())
    }

    pub fn one(&self) -> JetPoly {
        Poly::one(self.nvars(), self.unit())
    }

    pub fn constant(&self, c: BaseElem) -> JetPoly {
        Poly::constant(c, self.nvars())
    }

    pub fn var(&self, var: usize, k: usize) -> JetPoly {
        Poly::var(self.index(var, k), self.nvars(), self.unit())
    }

    /// A polynomial in the original variables, embedded at order 0.
    pub fn embed(&self, f: &JetPoly) -> JetPoly {
        let mapping: Vec<usize> = (0..f.nvars()).map(|j| self.index(j, 0)).collect();
        f.remap(self.nvars(), &mapping)
    }

    /// Highest prolongation order present in `f`.
    pub fn max_order(&self, f: &JetPoly) -> Option<usize> {
        let mut best = None;
        for (m, _) in f.terms() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e != 0 {
                    let k = i % (self.order + 1);
                    best = Some(best.map_or(k, |b: usize| b.max(k)));
                }
            }
        }
        best
    }

    pub fn keep(&self, m: &Monomial) -> bool {
        match &self.truncation {
            Some((w, bound)) => m.weight(w) <= *bound,
            None => true,
        }
    }

    pub fn truncate(&self, f: &JetPoly) -> JetPoly {
        match &self.truncation {
            Some((w, bound)) => f.truncate_weight(w, *bound),
            None => f.clone(),
        }
    }

    pub fn mul(&self, a: &JetPoly, b: &JetPoly) -> JetPoly {
        a.mul_filtered(b, |m| self.keep(m))
    }

    pub fn pow(&self, a: &JetPoly, e: u64) -> JetPoly {
        a.pow_filtered(e, &|m| self.keep(m))
    }

    fn check_input(&self, f: &JetPoly) -> Result<()> {
        if f.nvars() != self.nvars() {
            return Err(Error::InvalidInput(format!(
                "polynomial has {} variables, jet ring has {}",
                f.nvars(),
                self.nvars()
            )));
        }
        if f.is_laurent() {
            return Err(Error::InvalidInput("jet polynomials must not have negative exponents".into()));
        }
        if let Some(k) = self.max_order(f) {
            if k >= self.order {
                return Err(Error::BoundExceeded(format!(
                    "applying delta to an order-{k} polynomial needs order {} > {}",
                    k + 1,
                    self.order
                )));
            }
        }
        Ok(())
    }

    /// `δ(f)`, by structural recursion on the sum and product laws.
    pub fn delta(&self, f: &JetPoly) -> Result<JetPoly> {
        self.check_input(f)?;
        let f = self.truncate(f);
        self.delta_terms(f.terms())
    }

    /// `δ^k(f)`.
    pub fn delta_pow(&self, f: &JetPoly, k: usize) -> Result<JetPoly> {
        let mut g = self.truncate(f);
        for _ in 0..k {
            g = self.delta(&g)?;
        }
        Ok(g)
    }

    fn from_slice(&self, terms: &[(Monomial, BaseElem)]) -> JetPoly {
        Poly::from_terms(self.nvars(), self.unit(), terms.iter().cloned())
    }

    fn delta_terms(&self, terms: &[(Monomial, BaseElem)]) -> Result<JetPoly> {
        match terms.len() {
            0 => Ok(self.zero()),
            1 => self.delta_term(&terms[0].0, &terms[0].1),
            len => {
                let (left, right) = terms.split_at(len / 2);
                let a = self.from_slice(left);
                let b = self.from_slice(right);
                let da = self.delta_terms(left)?;
                let db = self.delta_terms(right)?;
                Ok(da.add(&db).add(&self.correction(&a, &b)))
            }
        }
    }

    /// `C(a, b) = Σ_{0<k<q} c_k a^k b^{q-k}`.
    fn correction(&self, a: &JetPoly, b: &JetPoly) -> JetPoly {
        let q = self.q();
        let mut pa = vec![self.one()];
        let mut pb = vec![self.one()];
        for k in 1..q as usize {
            pa.push(self.mul(&pa[k - 1], a));
            pb.push(self.mul(&pb[k - 1], b));
        }
        let mut acc = self.zero();
        for k in 1..q {
            let c = self.cpi.poly.coeff_of(&[k as i32, (q - k) as i32]);
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            let term = self.mul(&pa[k as usize], &pb[(q - k) as usize]);
            acc = acc.add(&term.scale(&self.base.from_bigint(&c)));
        }
        acc
    }

    fn delta_term(&self, m: &Monomial, c: &BaseElem) -> Result<JetPoly> {
        let dm = self.delta_monomial(m);
        let dc = c.delta()?;
        let mut out = dm.scale(&RingElem::pow(c, self.q()));
        if !dc.is_zero() {
            let mq = m.pow(self.q() as u32);
            if self.keep(&mq) {
                out = out.add(&Poly::monomial(mq, dc.clone()));
            }
            let p = BigInt::from(self.p());
            out = out.add(&dm.scale(&dc.scale_int(&p)));
        }
        Ok(out)
    }

    fn delta_monomial(&self, m: &Monomial) -> JetPoly {
        if m.is_one() {
            return self.zero();
        }
        if let Some(hit) = self.memo.lock().unwrap().get(m) {
            return hit.clone();
        }
        let exps = m.exps();
        let support: Vec<usize> = (0..exps.len()).filter(|&i| exps[i] != 0).collect();
        let result = if support.len() == 1 && exps[support[0]] == 1 {
            let i = support[0];
            Poly::var(i + 1, self.nvars(), self.unit())
        } else {
            let i = support[0];
            let mut a = vec![0; exps.len()];
            let mut b = exps.to_vec();
            let take = if support.len() == 1 { exps[i] / 2 } else { exps[i] };
            a[i] = take;
            b[i] -= take;
            let (a, b) = (Monomial::from_exps(a), Monomial::from_exps(b));
            let da = self.delta_monomial(&a);
            let db = self.delta_monomial(&b);
            let q = self.q() as u32;
            let one = self.unit();
            let aq = Poly::monomial(a.pow(q), one.clone());
            let bq = Poly::monomial(b.pow(q), one);
            let p = BigInt::from(self.p());
            self.mul(&aq, &db)
                .add(&self.mul(&bq, &da))
                .add(&self.mul(&da, &db).scale_int(&p))
        };
        let result = self.truncate(&result);
        self.memo.lock().unwrap().insert(m.clone(), result.clone());
        result
    }

    /// Image of a variable under `φ`: `x^{(k)} -> (x^{(k)})^q + p x^{(k+1)}`.
    pub fn phi_image(&self, idx: usize) -> Result<JetPoly> {
        if idx % (self.order + 1) == self.order {
            return Err(Error::BoundExceeded(format!(
                "phi of the top variable {} needs a higher order",
                self.var_name(idx)
            )));
        }
        let x = Poly::var(idx, self.nvars(), self.unit());
        let next = Poly::var(idx + 1, self.nvars(), self.unit());
        Ok(self
            .pow(&x, self.q())
            .add(&next.scale(&self.base.from_int(self.p() as i64))))
    }

    /// `φ(f)`: base Frobenius on coefficients, `phi_image` on variables.
    pub fn phi(&self, f: &JetPoly) -> Result<JetPoly> {
        self.check_input(f)?;
        let mut images: HashMap<usize, Vec<JetPoly>> = HashMap::new();
        let mut acc = self.zero();
        for (m, c) in f.terms() {
            let mut t = self.constant(c.frobenius());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !images.contains_key(&i) {
                    images.insert(i, vec![self.one(), self.phi_image(i)?]);
                }
                let powers = images.get_mut(&i).unwrap();
                while powers.len() <= e as usize {
                    let next = self.mul(powers.last().unwrap(), &powers[1]);
                    powers.push(next);
                }
                t = self.mul(&t, &powers[e as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `δ(f) = (φ(f) - f^q)/p`, computed independently of the recursion.
    pub fn delta_via_frobenius(&self, f: &JetPoly) -> Result<JetPoly> {
        let f = self.truncate(f);
        self.phi(&f)?
            .sub(&self.pow(&f, self.q()))
            .exact_div_p(self.p(), 1)
            .map_err(|e| e.with_context("jet delta via Frobenius"))
    }

    /// Ghost component `w_k(x) = φ^k(x)` of variable `var`.
    pub fn ghost(&self, var: usize, k: usize) -> Result<JetPoly> {
        let mut g = self.var(var, 0);
        for _ in 0..k {
            g = self.phi(&g)?;
        }
        Ok(g)
    }

    /// The canonical prolongation sequence `B_0 -> B_1 -> ... -> B_n` with
    /// `B_i` the polynomials of order at most `i`; generators are the
    /// variables of each level plus `extra` constants.
    pub fn canonical_sequence(self: &Arc<Self>, extra: &[BaseElem]) -> ProlongationSequence<JetPoly> {
        let levels = (0..self.order)
            .map(|i| {
                let ring = self.clone();
                let mut generators: Vec<JetPoly> = (0..self.names.len())
                    .flat_map(|v| (0..=i).map(move |k| (v, k)))
                    .map(|(v, k)| self.var(v, k))
                    .collect();
                generators.extend(extra.iter().map(|c| self.constant(c.clone())));
                ProlongationLevel {
                    u: Arc::new(|f: &JetPoly| f.clone()) as Arc<dyn Fn(&JetPoly) -> JetPoly + Send + Sync>,
                    delta: Arc::new(move |f: &JetPoly| ring.delta(f))
                        as Arc<dyn Fn(&JetPoly) -> Result<JetPoly> + Send + Sync>,
                    generators,
                }
            })
            .collect();
        ProlongationSequence::new(levels)
    }
}

/// Generators and relations over the base ring.
#[derive(Clone, Debug)]
pub struct AffinePresentation {
    pub base: Arc<BaseRing>,
    pub vars: Vec<String>,
    pub relations: Vec<Poly<BaseElem>>,
}

impl AffinePresentation {
    pub fn new(base: Arc<BaseRing>, vars: Vec<String>, relations: Vec<Poly<BaseElem>>) -> Result<Self> {
        if relations.iter().any(|r| r.nvars() != vars.len()) {
            return Err(Error::InvalidInput("relation arity differs from the variable count".into()));
        }
        Ok(AffinePresentation {
            base,
            vars,
            relations,
        })
    }
}

/// `O(J^n X)`: prolonged variables and the relations `δ^k f`.
#[derive(Debug)]
pub struct JetPresentation {
    pub source: AffinePresentation,
    pub ring: Arc<JetRing>,
    /// `relations[r][k] = δ^k(f_r)`.
    pub relations: Vec<Vec<JetPoly>>,
}

pub fn jet_presentation(a: &AffinePresentation, n: usize) -> Result<JetPresentation> {
    if n > MAX_JET_ORDER {
        return Err(Error::BoundExceeded(format!("jet order {n} exceeds {MAX_JET_ORDER}")));
    }
    let ring = Arc::new(JetRing::new(a.base.clone(), a.vars.clone(), n)?);
    let mut relations = Vec::with_capacity(a.relations.len());
    for f in &a.relations {
        let mut chain = vec![ring.embed(f)];
        for k in 0..n {
            let next = ring.delta(&chain[k])?;
            chain.push(next);
        }
        relations.push(chain);
    }
    Ok(JetPresentation {
        source: a.clone(),
        ring,
        relations,
    })
}

impl JetPresentation {
    pub fn order(&self) -> usize {
        self.ring.order()
    }

    pub fn vars(&self) -> Vec<String> {
        self.ring.var_names()
    }

    /// All relations, ordered relation by relation and then by `k`.
    pub fn all_relations(&self) -> Vec<&JetPoly> {
        self.relations.iter().flatten().collect()
    }

    /// `u : O(J^{n-1}) -> O(J^n)`, the inclusion, as (variable, image) pairs.
    pub fn u_table(&self) -> Vec<(String, JetPoly)> {
        let r = &self.ring;
        (0..r.names().len())
            .flat_map(|v| (0..r.order()).map(move |k| (v, k)))
            .map(|(v, k)| (prime_name(&r.names()[v], k), r.var(v, k)))
            .collect()
    }

    /// `φ : O(J^{n-1}) -> O(J^n)` as (variable, image) pairs.
    pub fn phi_table(&self) -> Result<Vec<(String, JetPoly)>> {
        let r = &self.ring;
        let mut out = Vec::new();
        for v in 0..r.names().len() {
            for k in 0..r.order() {
                out.push((prime_name(&r.names()[v], k), r.phi_image(r.index(v, k))?));
            }
        }
        Ok(out)
    }

    /// Checks `φ(δ^k f) = (δ^k f)^q + p δ^{k+1} f` for `k < n`, which puts
    /// the image of every relation of `J^{n-1}` in the relation ideal.
    /// Returns the number of identities checked.
    pub fn check_frobenius_certificates(&self) -> Result<usize> {
        let r = &self.ring;
        let p = BigInt::from(r.p());
        let mut count = 0;
        for chain in &self.relations {
            for k in 0..self.order() {
                let lhs = r.phi(&chain[k])?;
                let rhs = RingElem::pow(&chain[k], r.q()).add(&chain[k + 1].scale_int(&p));
                if lhs != rhs {
                    return Err(Error::AxiomViolation {
                        law: "phi maps relations into the relation ideal".into(),
                        witness: format!("{:?}", chain[k]),
                    });
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// Checks that `u` carries the relations of `J^{n-1}` onto the first
    /// `n` relations of each chain here.
    pub fn check_inclusion(&self) -> Result<usize> {
        if self.order() == 0 {
            return Ok(0);
        }
        let lower = jet_presentation(&self.source, self.order() - 1)?;
        let mapping: Vec<usize> = (0..lower.ring.nvars())
            .map(|i| {
                let n = lower.order() + 1;
                self.ring.index(i / n, i % n)
            })
            .collect();
        let mut count = 0;
        for (low, high) in lower.relations.iter().zip(&self.relations) {
            for (a, b) in low.iter().zip(high) {
                if a.remap(self.ring.nvars(), &mapping) != *b {
                    return Err(Error::AxiomViolation {
                        law: "u maps relations to relations".into(),
                        witness: format!("{a:?}"),
                    });
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// Points of `J^n X` with coordinates in `elements`, a complete list of
    /// the elements of a finite quotient `B` of the base ring.
    pub fn points(&self, elements: &[BaseElem]) -> Result<Vec<Vec<BaseElem>>> {
        let b = elements
            .first()
            .ok_or_else(|| Error::InvalidInput("empty point ring".into()))?
            .ring()
            .clone();
        let nv = self.ring.nvars();
        let rels = self.all_relations();
        let mut out = Vec::new();
        for_each_tuple(elements, nv, |pt| {
            for f in &rels {
                let v = f.eval_with(pt, None, |c| c.in_ring(&b))?;
                if !v.is_zero() {
                    return Ok(());
                }
            }
            out.push(pt.to_vec());
            Ok(())
        })?;
        Ok(out)
    }
}

fn for_each_tuple<T: Clone>(
    elements: &[T],
    len: usize,
    mut visit: impl FnMut(&[T]) -> Result<()>,
) -> Result<()> {
    let mut idx = vec![0usize; len];
    let mut current: Vec<T> = vec![elements[0].clone(); len];
    loop {
        visit(&current)?;
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < elements.len() {
                current[i] = elements[idx[i]].clone();
                break;
            }
            idx[i] = 0;
            current[i] = elements[0].clone();
        }
    }
}

/// The `R`-algebra structure map `R -> W_n`: the Witt vector with ghost
/// components `(r, φ r, ..., φ^n r)`, read in `target`.
pub fn witt_lift(r: &BaseElem, n: usize, target: &Arc<BaseRing>) -> Result<WittVector<BaseElem>> {
    let ring = r.ring();
    let mut ghosts = vec![r.clone()];
    for _ in 0..n {
        let next = ghosts.last().unwrap().frobenius();
        ghosts.push(next);
    }
    let coords = solve_ghost(ring.p(), ring.q(), &ghosts, "structure map into Witt vectors")?;
    WittVector::new(
        ring.p(),
        ring.frobenius_degree(),
        coords.iter().map(|c| c.in_ring(target)).collect(),
    )
}

/// Points of `X` over `W_n(B)`, listed by Witt coordinates in jet layout.
pub fn witt_points(a: &AffinePresentation, n: usize, elements: &[BaseElem]) -> Result<Vec<Vec<BaseElem>>> {
    let b = elements
        .first()
        .ok_or_else(|| Error::InvalidInput("empty point ring".into()))?
        .ring()
        .clone();
    let (p, e) = (a.base.p(), a.base.frobenius_degree());
    let m = a.vars.len();
    let mut lifts: HashMap<Vec<u64>, WittVector<BaseElem>> = HashMap::new();
    for f in &a.relations {
        for (_, c) in f.terms() {
            if !lifts.contains_key(c.coeffs()) {
                lifts.insert(c.coeffs().to_vec(), witt_lift(c, n, &b)?);
            }
        }
    }
    let mut out = Vec::new();
    for_each_tuple(elements, m * (n + 1), |pt| {
        let mut xs = Vec::with_capacity(m);
        for v in 0..m {
            xs.push(WittVector::new(p, e, pt[v * (n + 1)..(v + 1) * (n + 1)].to_vec())?);
        }
        for f in &a.relations {
            let val = f.eval_with(&xs, None, |c| lifts[c.coeffs()].clone())?;
            if !val.is_zero() {
                return Ok(());
            }
        }
        out.push(pt.to_vec());
        Ok(())
    })?;
    Ok(out)
}

/// One term of the JSON polynomial format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: Vec<i32>,
    pub coeff: CoeffJson,
}

/// A base-ring coefficient: a decimal string when `f = 1`, otherwise the
/// list of basis coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Scalar(String),
    Vector(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionJson {
    pub var: String,
    pub image: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub vars: Vec<String>,
    pub relations: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<SubstitutionJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<SubstitutionJson>>,
}

pub fn coeff_to_json(c: &BaseElem) -> CoeffJson {
    if c.coeffs().len() == 1 {
        CoeffJson::Scalar(c.coeffs()[0].to_string())
    } else {
        CoeffJson::Vector(c.coeffs().iter().map(|x| x.to_string()).collect())
    }
}

pub fn poly_to_json(f: &JetPoly) -> Vec<TermJson> {
    f.terms()
        .iter()
        .map(|(m, c)| TermJson {
            monomial: m.exps().to_vec(),
            coeff: coeff_to_json(c),
        })
        .collect()
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad integer coefficient {s:?}")))
}

pub fn poly_from_json(terms: &[TermJson], nvars: usize, base: &Arc<BaseRing>) -> Result<JetPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.monomial.len() != nvars {
            return Err(Error::InvalidInput(format!(
                "monomial {:?} should have {nvars} exponents",
                t.monomial
            )));
        }
        let c = match &t.coeff {
            CoeffJson::Scalar(s) => {
                let mut v = vec![0; base.f()];
                v[0] = parse_int(s)?;
                base.from_coeffs(&v)?
            }
            CoeffJson::Vector(v) => {
                let ints = v.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>>>()?;
                base.from_coeffs(&ints)?
            }
        };
        out.push((Monomial::from_exps(t.monomial.clone()), c));
    }
    Ok(Poly::from_terms(nvars, base.one(), out))
}

impl PresentationJson {
    pub fn to_affine(&self, base: &Arc<BaseRing>) -> Result<AffinePresentation> {
        let rels = self
            .relations
            .iter()
            .map(|r| poly_from_json(r, self.vars.len(), base))
            .collect::<Result<Vec<_>>>()?;
        AffinePresentation::new(base.clone(), self.vars.clone(), rels)
    }
}

impl JetPresentation {
    pub fn to_json(&self) -> Result<PresentationJson> {
        let subs = |table: Vec<(String, JetPoly)>| {
            table
                .into_iter()
                .map(|(var, image)| SubstitutionJson {
                    var,
                    image: poly_to_json(&image),
                })
                .collect()
        };
        Ok(PresentationJson {
            vars: self.vars(),
            relations: self.all_relations().into_iter().map(poly_to_json).collect(),
            order: Some(self.order()),
            u: Some(subs(self.u_table())),
            phi: Some(subs(self.phi_table()?)),
        })
    }
}
