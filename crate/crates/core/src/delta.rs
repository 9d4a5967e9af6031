//! p-derivations as data: the sum-law correction polynomial, derivations
//! built from Frobenius lifts, sampled axiom checks and prolongation
//! sequences.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::base::{BaseElem, BaseRing};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::ring::{binomial, ExactDivP, RingElem};

/// Seed used whenever the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `C(X, Y) = (X^q + Y^q - (X + Y)^q) / p` as an integer polynomial in two
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CPiPoly {
    pub p: u64,
    pub q: u64,
    pub poly: Poly<BigInt>,
}

impl CPiPoly {
    pub fn eval<R: RingElem>(&self, x: &R, y: &R) -> R {
        self.poly.eval_in(&[x.clone(), y.clone()])
    }
}

pub fn c_pi(p: u64, f: usize) -> Result<CPiPoly> {
    c_pi_for(p, p.pow(f as u32))
}

fn c_pi_for(p: u64, q: u64) -> Result<CPiPoly> {
    // -(sum of the mixed binomial terms), divided by p
    let terms = (1..q).map(|k| {
        (
            Monomial::from_exps(vec![k as i32, (q - k) as i32]),
            -binomial(q, k),
        )
    });
    let numerator = Poly::from_terms(2, BigInt::from(1), terms);
    let poly = numerator
        .exact_div_p(p, 1)
        .map_err(|e| e.with_context("sum-law correction polynomial"))?;
    Ok(CPiPoly { p, q, poly })
}

type MapFn<A, B> = Arc<dyn Fn(&A) -> B + Send + Sync>;
type TryMapFn<A, B> = Arc<dyn Fn(&A) -> Result<B> + Send + Sync>;

/// A p-derivation `δ : A -> B` over a ring map `u : A -> B`, with its
/// Frobenius `φ(x) = u(x)^q + p δ(x)`.
#[derive(Clone)]
pub struct PDerivation<A, B> {
    pub p: u64,
    pub q: u64,
    u: MapFn<A, B>,
    phi: MapFn<A, B>,
    delta: TryMapFn<A, B>,
}

impl<A, B> fmt::Debug for PDerivation<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PDerivation(p={}, q={})", self.p, self.q)
    }
}

impl<A: RingElem + 'static, B: RingElem + 'static> PDerivation<A, B> {
    /// Assembles a derivation from explicit maps, with no checks.
    pub fn from_parts(
        p: u64,
        q: u64,
        u: impl Fn(&A) -> B + Send + Sync + 'static,
        phi: impl Fn(&A) -> B + Send + Sync + 'static,
        delta: impl Fn(&A) -> Result<B> + Send + Sync + 'static,
    ) -> Self {
        PDerivation {
            p,
            q,
            u: Arc::new(u),
            phi: Arc::new(phi),
            delta: Arc::new(delta),
        }
    }

    pub fn u(&self, x: &A) -> B {
        (self.u)(x)
    }

    pub fn phi(&self, x: &A) -> B {
        (self.phi)(x)
    }

    pub fn delta(&self, x: &A) -> Result<B> {
        (self.delta)(x)
    }

    /// The same derivation with `δ` replaced by `δ + 1`; breaks both laws.
    pub fn corrupted(&self) -> Self {
        let inner = self.delta.clone();
        PDerivation {
            p: self.p,
            q: self.q,
            u: self.u.clone(),
            phi: self.phi.clone(),
            delta: Arc::new(move |x: &A| inner(x).map(|d| d.add(&d.one_like()))),
        }
    }
}

/// `δ(x) = (φ(x) - u(x)^q) / p`, after checking `φ(x) ≡ u(x)^q mod p` on
/// every probe.
pub fn delta_from_frobenius<A, B>(
    p: u64,
    q: u64,
    u: impl Fn(&A) -> B + Send + Sync + 'static,
    phi: impl Fn(&A) -> B + Send + Sync + 'static,
    probes: &[A],
) -> Result<PDerivation<A, B>>
where
    A: RingElem + 'static,
    B: ExactDivP + 'static,
{
    let u: MapFn<A, B> = Arc::new(u);
    let phi: MapFn<A, B> = Arc::new(phi);
    for x in probes {
        let diff = phi(x).sub(&RingElem::pow(&u(x), q));
        if diff.exact_div_p(p, 1).is_err() {
            return Err(Error::NotAFrobeniusLift {
                witness: format!("{x:?}"),
            });
        }
    }
    let (u2, phi2) = (u.clone(), phi.clone());
    let delta = move |x: &A| {
        phi2(x)
            .sub(&RingElem::pow(&u2(x), q))
            .exact_div_p(p, 1)
            .map_err(|e| e.with_context("delta from Frobenius"))
    };
    Ok(PDerivation {
        p,
        q,
        u,
        phi,
        delta: Arc::new(delta),
    })
}

/// The canonical derivation of the base ring, `u = id`, `φ = frobenius`.
pub fn base_derivation(ring: &Arc<BaseRing>) -> PDerivation<BaseElem, BaseElem> {
    let probes: Vec<BaseElem> = ring
        .residue_field()
        .iter()
        .map(|a| a.lift_to(ring.precision()))
        .collect();
    delta_from_frobenius(
        ring.p(),
        ring.q(),
        |x: &BaseElem| x.clone(),
        |x: &BaseElem| x.frobenius(),
        &probes,
    )
    .expect("the base Frobenius lifts the q-power map")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub samples: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub laws: Vec<LawReport>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.violations == 0)
    }

    pub fn violations(&self) -> usize {
        self.laws.iter().map(|l| l.violations).sum()
    }

    /// The first violated law as an error.
    pub fn into_result(self) -> Result<AxiomReport> {
        match self.laws.iter().find(|l| l.violations > 0) {
            Some(l) => Err(Error::AxiomViolation {
                law: l.law.clone(),
                witness: l.witness.clone().unwrap_or_default(),
            }),
            None => Ok(self),
        }
    }
}

struct Tally {
    law: &'static str,
    samples: usize,
    violations: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(law: &'static str) -> Self {
        Tally {
            law,
            samples: 0,
            violations: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self) -> LawReport {
        LawReport {
            law: self.law.to_string(),
            samples: self.samples,
            violations: self.violations,
            witness: self.witness,
        }
    }
}

/// Checks the sum law, the product law and `φ = u^q + p δ` on the given
/// pairs. A `δ` that errors counts as a violation.
pub fn check_delta_axioms<A, B>(
    d: &PDerivation<A, B>,
    pairs: impl IntoIterator<Item = (A, A)>,
) -> Result<AxiomReport>
where
    A: RingElem + 'static,
    B: RingElem + 'static,
{
    let c = c_pi_for(d.p, d.q)?;
    let p = BigInt::from(d.p);
    let mut sum = Tally::new("sum");
    let mut product = Tally::new("product");
    let mut frob = Tally::new("frobenius");
    for (x, y) in pairs {
        let witness = || format!("x = {x:?}, y = {y:?}");
        let (ux, uy) = (d.u(&x), d.u(&y));
        let (dx, dy) = match (d.delta(&x), d.delta(&y)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                sum.record(false, witness);
                continue;
            }
        };

        let lhs = d.delta(&x.add(&y));
        let rhs = dx.add(&dy).add(&c.eval(&ux, &uy));
        sum.record(lhs.map(|l| l == rhs).unwrap_or(false), witness);

        let lhs = d.delta(&x.mul(&y));
        let rhs = RingElem::pow(&ux, d.q)
            .mul(&dy)
            .add(&RingElem::pow(&uy, d.q).mul(&dx))
            .add(&dx.mul(&dy).scale_int(&p));
        product.record(lhs.map(|l| l == rhs).unwrap_or(false), witness);

        let rebuilt = RingElem::pow(&ux, d.q).add(&dx.scale_int(&p));
        frob.record(rebuilt == d.phi(&x), || format!("x = {x:?}"));
    }
    Ok(AxiomReport {
        laws: vec![sum.finish(), product.finish(), frob.finish()],
    })
}

/// Runs `check_delta_axioms` on `count` seeded random pairs.
pub fn check_delta_axioms_sampled<A, B>(
    d: &PDerivation<A, B>,
    count: usize,
    seed: u64,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> A,
) -> Result<AxiomReport>
where
    A: RingElem + 'static,
    B: RingElem + 'static,
{
    let mut rng = seeded_rng(seed);
    let pairs: Vec<(A, A)> = (0..count)
        .map(|_| (sample(&mut rng), sample(&mut rng)))
        .collect();
    check_delta_axioms(d, pairs)
}

/// One step `B_i -> B_{i+1}` of a prolongation sequence, with generators of
/// `B_i` on which commutation is tested.
pub struct ProlongationLevel<R> {
    pub u: MapFn<R, R>,
    pub delta: TryMapFn<R, R>,
    pub generators: Vec<R>,
}

impl<R> Clone for ProlongationLevel<R>
where
    R: Clone,
{
    fn clone(&self) -> Self {
        ProlongationLevel {
            u: self.u.clone(),
            delta: self.delta.clone(),
            generators: self.generators.clone(),
        }
    }
}

/// Rings `B_0, B_1, ...` with maps `u_i, δ_i : B_i -> B_{i+1}`, all sharing
/// one element type.
#[derive(Clone)]
pub struct ProlongationSequence<R> {
    pub levels: Vec<ProlongationLevel<R>>,
}

impl<R: RingElem> ProlongationSequence<R> {
    pub fn new(levels: Vec<ProlongationLevel<R>>) -> Self {
        ProlongationSequence { levels }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// The sequence `B_n, B_{n+1}, ...`.
    pub fn shift(&self, n: usize) -> Result<Self> {
        if n > self.levels.len() {
            return Err(Error::Range(format!(
                "shift {n} exceeds sequence length {}",
                self.levels.len()
            )));
        }
        Ok(ProlongationSequence {
            levels: self.levels[n..].to_vec(),
        })
    }

    /// Checks `u_{i+1}(δ_i(x)) = δ_{i+1}(u_i(x))` on the generators of every
    /// level where both composites exist; returns the number of checks made.
    pub fn check_commutation(&self) -> Result<usize> {
        let mut checked = 0;
        for i in 0..self.levels.len().saturating_sub(1) {
            let (cur, next) = (&self.levels[i], &self.levels[i + 1]);
            for g in &cur.generators {
                let lhs = (next.u)(&(cur.delta)(g)?);
                let rhs = (next.delta)(&(cur.u)(g))?;
                if lhs != rhs {
                    return Err(Error::AxiomViolation {
                        law: format!("u o delta = delta o u at level {i}"),
                        witness: format!("{g:?}"),
                    });
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

/// The base ring as a prolongation sequence: `B_i = R / p^{N-i}`, `u` the
/// reduction, `δ` the canonical derivation.
pub fn base_prolongation(ring: &Arc<BaseRing>, levels: usize, generators: Vec<BaseElem>) -> ProlongationSequence<BaseElem> {
    let levels = (0..levels)
        .map(|i| {
            let prec = ring.precision().saturating_sub(i as u32 + 1);
            ProlongationLevel {
                u: Arc::new(move |x: &BaseElem| x.truncated(prec)) as MapFn<BaseElem, BaseElem>,
                delta: Arc::new(|x: &BaseElem| x.delta()) as TryMapFn<BaseElem, BaseElem>,
                generators: generators
                    .iter()
                    .map(|g| g.truncated(ring.precision() - i as u32))
                    .collect(),
            }
        })
        .collect();
    ProlongationSequence::new(levels)
}
