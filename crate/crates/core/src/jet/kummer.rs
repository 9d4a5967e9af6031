//! Jets of the Kummer cover `t^m = h` over the jet ring of a generic unit `h`.
//!
//! The prolongations `t', t'', ...` are eliminated: each `t^{(k)}` is the
//! unique solution of `δ^k(t^m - h) = 0` in `S_n[t]/(t^m - h)`, where `S_n`
//! is the Laurent ring in `h` over `h', ..., h^{(n)}`.

use std::sync::Arc;

use crate::base::{BaseElem, BaseRing};
use crate::error::{Error, Result};
use crate::graded::{KummerAlgebra, KummerElem};
use crate::poly::{Monomial, Poly};
use crate::ring::{ExactDivP, RingElem};

use super::{jet_presentation, AffinePresentation, JetPoly, JetPresentation, MAX_JET_ORDER};

pub type HPoly = Poly<BaseElem>;

#[derive(Debug)]
pub struct KummerJet {
    /// Jets of `Z[h, t]/(t^m - h)`; variables `h, t` and their primes.
    pub presentation: JetPresentation,
    /// `S_n[t]/(t^m - h)`.
    pub algebra: Arc<KummerAlgebra<HPoly>>,
    /// `solved[k - 1]` is `t^{(k)}`.
    pub solved: Vec<KummerElem<HPoly>>,
    m: usize,
}

pub fn kummer_jet(base: &Arc<BaseRing>, m: usize, n: usize) -> Result<KummerJet> {
    let p = base.p();
    if num_integer::Integer::gcd(&(m as u64), &p) != 1 {
        return Err(Error::NotCoprime { m: m as u64, p });
    }
    if n > MAX_JET_ORDER {
        return Err(Error::BoundExceeded(format!("jet order {n} exceeds {MAX_JET_ORDER}")));
    }
    let one = base.one();
    let h = Poly::var(0, 2, one.clone());
    let t = Poly::var(1, 2, one.clone());
    let rel = RingElem::pow(&t, m as u64).sub(&h);
    let affine = AffinePresentation::new(base.clone(), vec!["h".into(), "t".into()], vec![rel])?;
    let presentation = jet_presentation(&affine, n)?;

    let s_vars = n + 1;
    let h_s = Poly::var(0, s_vars, one.clone());
    let h_inv = Poly::monomial(Monomial::from_exps(unit_exps(s_vars, -1)), one.clone());
    let algebra = KummerAlgebra::new(m, h_s, h_inv)?;

    let mut jet = KummerJet {
        presentation,
        algebra,
        solved: Vec::with_capacity(n),
        m,
    };
    for k in 1..=n {
        let tk = jet.solve_level(k)?;
        jet.solved.push(tk);
    }
    Ok(jet)
}

fn unit_exps(nvars: usize, e: i32) -> Vec<i32> {
    let mut v = vec![0; nvars];
    v[0] = e;
    v
}

impl KummerJet {
    pub fn order(&self) -> usize {
        self.presentation.order()
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Names of the coordinates of `S_n`: `h, h', ...`.
    pub fn base_vars(&self) -> Vec<String> {
        (0..=self.order()).map(|k| format!("h{}", "'".repeat(k))).collect()
    }

    /// The only relation left once the prolongations of `t` are eliminated.
    pub fn quotient_relation(&self) -> &JetPoly {
        &self.presentation.relations[0][0]
    }

    /// `δ^k(t^m - h)`.
    pub fn relation(&self, k: usize) -> &JetPoly {
        &self.presentation.relations[0][k]
    }

    fn base_elem(&self, c: &BaseElem) -> KummerElem<HPoly> {
        self.algebra.from_base(Poly::constant(c.clone(), self.order() + 1))
    }

    /// Evaluates a jet polynomial in `h^{(j)}, t^{(j)}` with `t^{(j)} -> ts[j]`.
    fn eval(&self, f: &JetPoly, ts: &[KummerElem<HPoly>]) -> Result<KummerElem<HPoly>> {
        let n = self.order();
        let one = self.presentation.ring.base().one();
        let mut points = Vec::with_capacity(2 * (n + 1));
        for j in 0..=n {
            points.push(self.algebra.from_base(Poly::var(j, n + 1, one.clone())));
        }
        for j in 0..=n {
            points.push(ts.get(j).cloned().unwrap_or_else(|| self.algebra.zero()));
        }
        f.eval_with(&points, None, |c| self.base_elem(c))
    }

    fn known(&self) -> Vec<KummerElem<HPoly>> {
        let mut ts = vec![self.algebra.t()];
        ts.extend(self.solved.iter().cloned());
        ts
    }

    /// `m^{q^{k-1}} t^{q^k (m-1)}`, the linear coefficient of `t^{(k)}` mod `p`.
    fn leading_unit(&self, k: usize) -> Result<(KummerElem<HPoly>, KummerElem<HPoly>)> {
        let base = self.presentation.ring.base().clone();
        let q = base.q() as i64;
        let qk1 = q.pow(k as u32 - 1);
        let c = RingElem::pow(&base.from_int(self.m as i64), qk1 as u64);
        let c_inv = c
            .inverse()
            .map_err(|_| Error::NotAUnit(format!("{}^{qk1} is not a unit", self.m)))?;
        let e = qk1 * q * (self.m as i64 - 1);
        let u = self.algebra.t_pow(e).scale_base(&Poly::constant(c, self.order() + 1));
        let u_inv = self.algebra.t_pow(-e).scale_base(&Poly::constant(c_inv, self.order() + 1));
        Ok((u, u_inv))
    }

    fn solve_level(&self, k: usize) -> Result<KummerElem<HPoly>> {
        let rel = self.relation(k);
        let ring = &self.presentation.ring;
        let top = ring.index(1, k);
        let p = ring.p();
        let (u, u_inv) = self.leading_unit(k)?;

        let mut ts = self.known();
        ts.push(self.algebra.zero());
        let slope = self.eval(&rel.derivative(top), &ts)?;
        for c in slope.sub(&u).coeffs() {
            ExactDivP::exact_div_p(c, p, 1).map_err(|_| {
                Error::NotAUnit(format!("linearization of delta^{k}(t^{} - h) is not a unit", self.m))
            })?;
        }

        let steps = ring.base().precision() as usize + 1;
        for _ in 0..=steps {
            let err = self.eval(rel, &ts)?;
            if err.is_zero() {
                return Ok(ts.pop().unwrap());
            }
            let next = ts[k].sub(&u_inv.mul(&err));
            ts[k] = next;
        }
        Err(Error::PrecisionExhausted {
            needed: ring.base().precision(),
            available: 0,
        }
        .with_context(format!("Hensel iteration for t^({k})")))
    }

    /// Back-substitutes every solved prolongation; returns the number of
    /// relations that vanish (all of them, or an error).
    pub fn check(&self) -> Result<usize> {
        let ts = self.known();
        for k in 0..=self.order() {
            let v = self.eval(self.relation(k), &ts[..=k])?;
            if !v.is_zero() {
                return Err(Error::AxiomViolation {
                    law: format!("delta^{k}(t^m - h) vanishes on the solution"),
                    witness: format!("{v:?}"),
                });
            }
        }
        Ok(self.order() + 1)
    }

    /// Specializes `h^{(j)} -> values[j]`, with `values[0]` a unit; returns
    /// `t^{(1)}, ..., t^{(n)}` in `B[t]/(t^m - values[0])`.
    pub fn specialize(&self, values: &[BaseElem]) -> Result<Vec<KummerElem<BaseElem>>> {
        if values.len() != self.order() + 1 {
            return Err(Error::InvalidInput(format!("need {} values", self.order() + 1)));
        }
        let h = values[0].clone();
        let h_inv = h.inverse()?;
        let alg = KummerAlgebra::new(self.m, h, h_inv.clone())?;
        let mut inverses = vec![None; values.len()];
        inverses[0] = Some(h_inv);
        self.solved
            .iter()
            .map(|x| {
                let coeffs = x
                    .coeffs()
                    .iter()
                    .map(|c| c.eval_with(values, Some(&inverses), |b| b.clone()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(alg.from_coeffs(coeffs))
            })
            .collect()
    }
}
