//! The property-suite runner behind `deltajet verify`.
//!
//! Every suite is pure and seeded; suites run on separate threads and the
//! report lists them in a fixed order, so equal seeds give equal reports.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::base::{BaseElem, BaseRing};
use crate::characters::{self, formal, EigenformData};
use crate::delta::{base_derivation, check_delta_axioms_sampled, seeded_rng};
use crate::error::Result;
use crate::graded;
use crate::jet::{self, kummer, AffinePresentation, JetRing};
use crate::poly::{Monomial, Poly};
use crate::ring::{rational, valuation_rational, RingElem};
use crate::witt::{universal_polys, WittVector};

pub const SUITES: [&str; 6] = ["witt", "delta", "jet", "kummer", "series", "graded"];

/// Weierstrass coefficients of the conductor-11 test curve.
pub const CURVE_11A: characters::Curve = [0, -1, 1, -10, -20];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

struct Checks(Vec<CheckResult>);

impl Checks {
    /// Records a check that returns `Ok(samples)` on success and an error
    /// (whose message is the witness) on failure.
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<std::result::Result<usize, String>>) {
        let (passed, samples, witness) = match f() {
            Ok(Ok(n)) => (true, n, None),
            Ok(Err(w)) => (false, 0, Some(w)),
            Err(e) => (false, 0, Some(e.to_string())),
        };
        self.0.push(CheckResult {
            name: name.into(),
            passed,
            samples,
            witness,
        });
    }
}

fn mix(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Runs the named suites (`all` for every suite).
pub fn run_suites(names: &[String], seed: u64) -> std::result::Result<VerifyReport, String> {
    let wanted: Vec<&str> = if names.iter().any(|n| n == "all") {
        SUITES.to_vec()
    } else {
        let mut v = Vec::new();
        for n in names {
            match SUITES.iter().find(|s| **s == n.as_str()) {
                Some(s) => v.push(*s),
                None => return Err(format!("unknown suite {n:?}; expected one of {SUITES:?} or all")),
            }
        }
        v
    };
    let suites: Vec<SuiteReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = wanted
            .iter()
            .map(|&name| scope.spawn(move || run_suite(name, seed)))
            .collect();
        handles
            .into_iter()
            .zip(&wanted)
            .map(|(h, name)| {
                h.join().unwrap_or_else(|_| SuiteReport {
                    suite: name.to_string(),
                    passed: false,
                    checks: vec![CheckResult {
                        name: "suite".into(),
                        passed: false,
                        samples: 0,
                        witness: Some("panicked".into()),
                    }],
                })
            })
            .collect()
    });
    Ok(VerifyReport {
        seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

fn run_suite(name: &str, seed: u64) -> SuiteReport {
    let mut c = Checks(Vec::new());
    match name {
        "witt" => witt_suite(&mut c, seed),
        "delta" => delta_suite(&mut c, seed),
        "jet" => jet_suite(&mut c, seed),
        "kummer" => kummer_suite(&mut c),
        "series" => series_suite(&mut c),
        "graded" => graded_suite(&mut c, seed),
        _ => unreachable!("suite names are validated"),
    }
    SuiteReport {
        suite: name.to_string(),
        passed: c.0.iter().all(|r| r.passed),
        checks: c.0,
    }
}

fn random_witt(ring: &Arc<BaseRing>, p: u64, f: usize, n: usize, rng: &mut impl Rng) -> Result<WittVector<BaseElem>> {
    WittVector::new(p, f, (0..=n).map(|_| ring.random(rng)).collect())
}

const WITT_CASES: [(u64, usize, usize); 4] = [(2, 1, 2), (3, 1, 2), (5, 1, 1), (2, 2, 1)];

fn witt_suite(c: &mut Checks, seed: u64) {
    for (i, &(p, f, n)) in WITT_CASES.iter().enumerate() {
        c.run(format!("ghost homomorphism p={p} f={f} n={n}"), || {
            let ring = BaseRing::new(p, 1, 5)?;
            let mut rng = seeded_rng(mix(seed, 10 + i as u64));
            let samples = 200;
            for _ in 0..samples {
                let x = random_witt(&ring, p, f, n, &mut rng)?;
                let y = random_witt(&ring, p, f, n, &mut rng)?;
                let (gx, gy) = (x.ghost(), y.ghost());
                let gs = x.witt_add(&y).ghost();
                let gp = x.witt_mul(&y).ghost();
                for k in 0..=n {
                    if gs[k] != gx[k].add(&gy[k]) || gp[k] != gx[k].mul(&gy[k]) {
                        return Ok(Err(format!("x = {:?}, y = {:?}", x.coords(), y.coords())));
                    }
                }
            }
            Ok(Ok(samples))
        });
        c.run(format!("universal polynomials integral p={p} f={f} n={n}"), || {
            let u = universal_polys(p, f, n)?;
            Ok(Ok(u.families().iter().map(|(_, v)| v.len()).sum()))
        });
    }
    c.run("first sum polynomial at p=2 and p=3", || {
        let var = |i| Poly::int_var(i, 4);
        let s2 = var(1).add(&var(3)).sub(&var(0).mul(&var(2)));
        let s3 = var(1)
            .add(&var(3))
            .sub(&var(0).mul(&var(0)).mul(&var(2)))
            .sub(&var(0).mul(&var(2)).mul(&var(2)));
        let ok = universal_polys(2, 1, 1)?.sum[1] == s2 && universal_polys(3, 1, 1)?.sum[1] == s3;
        Ok(if ok { Ok(2) } else { Err("S_1 differs".into()) })
    });
    c.run("F V = p, T and F ring maps, Teichmuller multiplicative, ghost shift", || {
        let mut rng = seeded_rng(mix(seed, 20));
        let mut count = 0;
        for &(p, f, n) in &WITT_CASES {
            let ring = BaseRing::new(p, 1, 5)?;
            for _ in 0..100 {
                let x = random_witt(&ring, p, f, n, &mut rng)?;
                let y = random_witt(&ring, p, f, n, &mut rng)?;
                let pb = BigInt::from(p);
                let short = x.truncate()?;
                if short.verschiebung()?.frobenius()? != short.scale_integer(&pb) {
                    return Ok(Err(format!("F V != p at {:?}", short.coords())));
                }
                if x.witt_add(&y).truncate()? != short.witt_add(&y.truncate()?)
                    || x.witt_mul(&y).truncate()? != short.witt_mul(&y.truncate()?)
                {
                    return Ok(Err(format!("T not a ring map at {:?}", x.coords())));
                }
                if x.witt_mul(&y).frobenius()? != x.frobenius()?.witt_mul(&y.frobenius()?) {
                    return Ok(Err(format!("F not multiplicative at {:?}", x.coords())));
                }
                if x.frobenius()?.ghost() != x.ghost()[1..].to_vec() {
                    return Ok(Err(format!("ghost(F x) is not the shift at {:?}", x.coords())));
                }
                let (a, b) = (ring.random(&mut rng), ring.random(&mut rng));
                let ta = WittVector::teichmuller(p, f, n, a.clone())?;
                let tb = WittVector::teichmuller(p, f, n, b.clone())?;
                if ta.witt_mul(&tb) != WittVector::teichmuller(p, f, n, a.mul(&b))? {
                    return Ok(Err(format!("Teichmuller not multiplicative at {a:?}, {b:?}")));
                }
                count += 1;
            }
        }
        Ok(Ok(count))
    });
}

fn delta_suite(c: &mut Checks, seed: u64) {
    for (i, &(p, f)) in [(3, 1), (3, 2), (5, 1), (5, 2)].iter().enumerate() {
        c.run(format!("delta axioms p={p} f={f}"), || {
            let ring = BaseRing::new(p, f, 4)?;
            let d = base_derivation(&ring);
            let report = check_delta_axioms_sampled(&d, 200, mix(seed, 30 + i as u64), |r| ring.random(r))?;
            Ok(match report.laws.iter().find(|l| l.violations > 0) {
                None => Ok(200),
                Some(l) => Err(format!("{}: {}", l.law, l.witness.clone().unwrap_or_default())),
            })
        });
    }
    c.run("corrupted delta is rejected", || {
        let ring = BaseRing::new(3, 1, 4)?;
        let d = base_derivation(&ring).corrupted();
        let report = check_delta_axioms_sampled(&d, 50, mix(seed, 40), |r| ring.random(r))?;
        Ok(if report.passed() {
            Err("corrupted delta passed".into())
        } else {
            Ok(50)
        })
    });
}

fn square_minus(base: &Arc<BaseRing>, c: i64) -> Result<AffinePresentation> {
    let x = Poly::var(0, 1, base.one());
    let rel = x.mul(&x).sub(&Poly::constant(base.from_int(c), 1));
    AffinePresentation::new(base.clone(), vec!["x".into()], vec![rel])
}

fn jet_suite(c: &mut Checks, seed: u64) {
    c.run("order-1 adjunction over Z/9 for x^2 = c, c mod 27", || {
        let base = BaseRing::new(3, 1, 3)?;
        let b = BaseRing::new(3, 1, 2)?;
        let elements: Vec<BaseElem> = (0..9).map(|i| b.from_int(i)).collect();
        let key = |v: &Vec<BaseElem>| v.iter().map(|x| x.coeffs()[0]).collect::<Vec<_>>();
        let mut total = 0;
        for cc in 0..27 {
            let a = square_minus(&base, cc)?;
            let mut jp = jet::jet_presentation(&a, 1)?.points(&elements)?;
            let mut wp = jet::witt_points(&a, 1, &elements)?;
            jp.sort_by_key(key);
            wp.sort_by_key(key);
            if jp != wp {
                return Ok(Err(format!("c = {cc}: {} jet points, {} Witt points", jp.len(), wp.len())));
            }
            total += jp.len();
        }
        Ok(Ok(total))
    });
    c.run("phi and u map relations into the relation ideal", || {
        let base = BaseRing::new(5, 1, 4)?;
        let j = jet::jet_presentation(&square_minus(&base, 7)?, 2)?;
        Ok(Ok(j.check_frobenius_certificates()? + j.check_inclusion()?))
    });
    c.run("recursive delta agrees with (phi - power)/p", || {
        let base = BaseRing::new(3, 1, 5)?;
        let ring = JetRing::new(base.clone(), vec!["x".into(), "y".into()], 2)?;
        let mut rng = seeded_rng(mix(seed, 50));
        let samples = 10;
        for _ in 0..samples {
            let mut f = ring.zero();
            for _ in 0..4 {
                let exps = vec![rng.gen_range(0..3), rng.gen_range(0..2), 0, rng.gen_range(0..3), rng.gen_range(0..2), 0];
                f = f.add(&Poly::monomial(Monomial::from_exps(exps), base.random(&mut rng)));
            }
            if ring.delta(&f)? != ring.delta_via_frobenius(&f)? {
                return Ok(Err(format!("{f:?}")));
            }
        }
        Ok(Ok(samples))
    });
}

fn kummer_suite(c: &mut Checks) {
    c.run("solved t' back-substitutes (q=5, m=4, N=3)", || {
        let base = BaseRing::new(5, 1, 3)?;
        let kj = kummer::kummer_jet(&base, 4, 1)?;
        Ok(Ok(kj.check()?))
    });
    c.run("h = 1 gives t' = 0", || {
        let base = BaseRing::new(5, 1, 3)?;
        let kj = kummer::kummer_jet(&base, 4, 1)?;
        let sp = kj.specialize(&[base.one(), base.zero()])?;
        Ok(if sp.iter().all(|x| x.is_zero()) { Ok(1) } else { Err(format!("{sp:?}")) })
    });
}

/// `(1/p) log(1 + p X)` by inverting `1 + p X` and integrating.
pub fn psi_by_logarithm(p: u64, d: usize) -> Result<Vec<BigRational>> {
    let pr = rational(p as i64, 1);
    let mut lin = vec![BigRational::zero(); d + 1];
    lin[0] = BigRational::one();
    if d >= 1 {
        lin[1] = pr.clone();
    }
    let inv = formal::series_inverse(&lin, d + 1)?;
    let deriv: Vec<BigRational> = inv.iter().map(|c| c * &pr).collect();
    let log = formal::series_integrate(&deriv, d + 1);
    Ok(log.iter().map(|c| c / &pr).collect())
}

fn series_suite(c: &mut Checks) {
    c.run("psi equals (1/p) log(phi(q)/q^p) (p=3, N=6, D=12)", || {
        let base = BaseRing::new(3, 1, 6)?;
        let psi = characters::psi_series(&base, 12)?;
        let oracle = psi_by_logarithm(3, 12)?;
        for n in 1..=12i32 {
            let exact = psi.exact_coeff(&[-3 * n, n]).unwrap_or_default();
            if exact != oracle[n as usize] {
                return Ok(Err(format!("term {n}: {exact} vs {}", oracle[n as usize])));
            }
            let v = valuation_rational(&exact, 3).unwrap_or(i64::MAX);
            let vn = valuation_rational(&rational(n as i64, 1), 3).unwrap_or(0);
            if v != n as i64 - 1 - vn {
                return Ok(Err(format!("term {n} has valuation {v}")));
            }
        }
        Ok(Ok(12))
    });
    c.run("psi additive under q -> q1 q2 (degree 10)", || {
        let base = BaseRing::new(3, 1, 6)?;
        let defect = characters::psi_additivity_defect(&base, 10)?;
        Ok(if defect.is_zero() { Ok(1) } else { Err(format!("{defect:?}")) })
    });
    c.run("f-partial is 1 of weight phi - 1", || {
        let base = BaseRing::new(3, 1, 6)?;
        let s = characters::f_partial_series(&base);
        let ok = s.series == Poly::one(2, base.one()) && s.weight.map(|w| w.to_string()).as_deref() == Some("phi - 1");
        Ok(if ok { Ok(1) } else { Err("wrong f-partial".into()) })
    });
    c.run("f-sharp of 11a at p=3 integral to weight 20", || {
        let base = BaseRing::new(3, 1, 8)?;
        let e = EigenformData::from_curve(&CURVE_11A, 3, 20)?;
        let s = characters::f_sharp_series(&e, &base, 20)?;
        Ok(Ok(s.series.terms().len()))
    });
    c.run("f-sharp of 11a additive to weight 8", || {
        let base = BaseRing::new(3, 1, 8)?;
        let e = EigenformData::from_curve(&CURVE_11A, 3, 20)?;
        let defect = characters::f_sharp_additivity_defect(&e, &base, 8)?;
        Ok(if defect.is_zero() { Ok(1) } else { Err(format!("{defect:?}")) })
    });
}

fn graded_suite(c: &mut Checks, seed: u64) {
    for (i, p) in [5u64, 7].into_iter().enumerate() {
        c.run(format!("decompose and reassemble (q={p})"), || {
            let ring = BaseRing::new(p, 1, 3)?;
            let alg = graded::kummer_over_base(&ring, ring.from_int(2))?;
            let mut rng = seeded_rng(mix(seed, 60 + i as u64));
            for _ in 0..200 {
                let x = graded::random_elem(&alg, &mut rng);
                let g = graded::tau_decompose(&x);
                if graded::reassemble(&alg, &g)? != x {
                    return Ok(Err(format!("{x:?}")));
                }
            }
            Ok(Ok(200))
        });
        c.run(format!("eigenweight of t^r is -r (q={p})"), || {
            let ring = BaseRing::new(p, 1, 3)?;
            let alg = graded::kummer_over_base(&ring, ring.from_int(2))?;
            let m = p as i64 - 1;
            for r in 0..m {
                let k = graded::eigenweight(&alg.t_pow(r))?;
                if k as i64 != (-r).rem_euclid(m) {
                    return Ok(Err(format!("t^{r} has eigenweight {k}")));
                }
            }
            Ok(Ok(m as usize))
        });
    }
    c.run("weight c(k-2) for q=7, k=3, c=5 and companion weight", || {
        let ring = BaseRing::new(7, 1, 3)?;
        let alg = graded::kummer_over_base(&ring, ring.from_int(3))?;
        let k = graded::eigenweight(&graded::synthetic_shell(&alg, 5, 3)?)?;
        let cw = graded::companion_weight(3, 7)?;
        Ok(if k == 5 && cw == 5 { Ok(2) } else { Err(format!("k' = {k}, companion = {cw}")) })
    });
}
