//! End-to-end acceptance checks. Each criterion prints one line; the process
//! exits non-zero if any of them fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use deltajet::base::{BaseElem, BaseRing};
use deltajet::characters::{self, curve_coefficients, EigenformData};
use deltajet::cli;
use deltajet::delta::{base_derivation, check_delta_axioms_sampled, seeded_rng};
use deltajet::graded;
use deltajet::jet::{self, kummer, AffinePresentation};
use deltajet::poly::{Monomial, Poly};
use deltajet::ring::RingElem;
use deltajet::witt::{universal_polys, WittVector};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

const WITT_CASES: [(u64, usize, usize); 4] = [(2, 1, 2), (3, 1, 2), (5, 1, 1), (2, 2, 1)];

/// `w_i = Σ_j p^j x_j^{q^{i-j}}`, written out directly.
fn ghost_oracle(p: u64, q: u64, x: &[BaseElem]) -> Vec<BaseElem> {
    let ring = x[0].ring().clone();
    (0..x.len())
        .map(|i| {
            let mut w = ring.zero();
            for (j, xj) in x.iter().enumerate().take(i + 1) {
                let e = q.pow((i - j) as u32);
                let pj = ring.from_int(p.pow(j as u32) as i64);
                w = w.add(&pj.mul(&xj.pow(e)));
            }
            w
        })
        .collect()
}

fn random_vector(ring: &Arc<BaseRing>, p: u64, f: usize, n: usize, rng: &mut impl Rng) -> WittVector<BaseElem> {
    WittVector::new(p, f, (0..=n).map(|_| ring.random(rng)).collect()).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(101);
    for &(p, f, n) in &WITT_CASES {
        let ring = BaseRing::new(p, 1, 5).unwrap();
        let q = p.pow(f as u32);
        for _ in 0..1000 {
            let x = random_vector(&ring, p, f, n, &mut rng);
            let y = random_vector(&ring, p, f, n, &mut rng);
            let gx = ghost_oracle(p, q, x.coords());
            let gy = ghost_oracle(p, q, y.coords());
            let gs = ghost_oracle(p, q, x.witt_add(&y).coords());
            let gp = ghost_oracle(p, q, x.witt_mul(&y).coords());
            for k in 0..=n {
                ensure(gs[k] == gx[k].add(&gy[k]), || format!("sum, ({p},{f},{n}) at {x:?}, {y:?}"))?;
                ensure(gp[k] == gx[k].mul(&gy[k]), || format!("product, ({p},{f},{n}) at {x:?}, {y:?}"))?;
            }
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("4000 pairs in {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    for &(p, f, n) in &WITT_CASES {
        universal_polys(p, f, n).map_err(|e| format!("({p},{f},{n}): {e}"))?;
    }
    let v = |i| Poly::int_var(i, 4);
    let (x0, x1, y0, y1) = (v(0), v(1), v(2), v(3));
    let s2 = x1.add(&y1).sub(&x0.mul(&y0));
    let s3 = x1
        .add(&y1)
        .sub(&x0.mul(&x0).mul(&y0))
        .sub(&x0.mul(&y0).mul(&y0));
    ensure(universal_polys(2, 1, 1).unwrap().sum[1] == s2, || "S_1 at p=2".into())?;
    ensure(universal_polys(3, 1, 1).unwrap().sum[1] == s3, || "S_1 at p=3".into())?;
    Ok("generation exact, S_1 matches at p=2,3".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(303);
    let per_case = 125;
    for &(p, f, n) in &WITT_CASES {
        let ring = BaseRing::new(p, 1, 5).unwrap();
        let q = p.pow(f as u32);
        for _ in 0..per_case {
            let x = random_vector(&ring, p, f, n, &mut rng);
            let y = random_vector(&ring, p, f, n, &mut rng);
            let short = x.truncate().unwrap();
            let mut p_times = short.clone();
            for _ in 1..p {
                p_times = p_times.witt_add(&short);
            }
            let fv = short.verschiebung().unwrap().frobenius().unwrap();
            ensure(fv == p_times, || format!("F V != p at {short:?}"))?;

            let ys = y.truncate().unwrap();
            ensure(x.witt_add(&y).truncate().unwrap() == short.witt_add(&ys), || format!("T(x+y) at {x:?}"))?;
            ensure(x.witt_mul(&y).truncate().unwrap() == short.witt_mul(&ys), || format!("T(xy) at {x:?}"))?;
            let one = WittVector::teichmuller(p, f, n, ring.one()).unwrap();
            ensure(one.truncate().unwrap() == WittVector::teichmuller(p, f, n - 1, ring.one()).unwrap(), || {
                "T(1) != 1".into()
            })?;

            let (a, b) = (ring.random(&mut rng), ring.random(&mut rng));
            let ta = WittVector::teichmuller(p, f, n, a.clone()).unwrap();
            let tb = WittVector::teichmuller(p, f, n, b.clone()).unwrap();
            let tab = WittVector::teichmuller(p, f, n, a.mul(&b)).unwrap();
            ensure(ta.witt_mul(&tb) == tab, || format!("θ({a:?}) θ({b:?})"))?;

            let g = ghost_oracle(p, q, x.coords());
            let gf = ghost_oracle(p, q, x.frobenius().unwrap().coords());
            ensure(gf == g[1..], || format!("ghost(F x) at {x:?}"))?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} samples per identity in {:?}", per_case * 4, start.elapsed()))
}

fn criterion_4() -> Outcome {
    let mut total = 0;
    // (p, f, e): residue field F_{p^f}, Frobenius lifting the p^e-power map
    let cases = [(3, 1, 1), (3, 2, 1), (3, 2, 2), (5, 1, 1), (5, 2, 1), (5, 2, 2)];
    for (i, &(p, f, e)) in cases.iter().enumerate() {
        let ring = BaseRing::with_frobenius_degree(p, f, e, 5).unwrap();
        let d = base_derivation(&ring);
        let report = check_delta_axioms_sampled(&d, 500, 400 + i as u64, |r| ring.random(r)).unwrap();
        ensure(report.passed(), || format!("p={p} f={f} e={e}: {report:?}"))?;
        total += report.laws.iter().map(|l| l.samples).sum::<usize>();
    }
    let ring = BaseRing::new(3, 1, 5).unwrap();
    let bad = base_derivation(&ring).corrupted();
    let report = check_delta_axioms_sampled(&bad, 500, 499, |r| ring.random(r)).unwrap();
    ensure(!report.passed(), || "corrupted delta passed".into())?;
    Ok(format!("0 violations in {total} law checks; control flagged {} violations", report.violations()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let base = BaseRing::new(3, 1, 3).unwrap();
    let b = BaseRing::new(3, 1, 2).unwrap();
    let elements: Vec<BaseElem> = (0..9).map(|i| b.from_int(i)).collect();
    let mut total = 0;
    for c in 0..27i64 {
        let x = Poly::var(0, 1, base.one());
        let rel = x.mul(&x).sub(&Poly::constant(base.from_int(c), 1));
        let a = AffinePresentation::new(base.clone(), vec!["x".into()], vec![rel]).unwrap();
        let jet_count = jet::jet_presentation(&a, 1).unwrap().points(&elements).unwrap().len();
        // (a0, a1)^2 = (c, δc) in W_1(Z/9), with (a0, a1)^2 = (a0^2, 2 a0^3 a1 + 3 a1^2)
        let dc = (c - c.pow(3)) / 3;
        let mut witt_count = 0;
        for a0 in 0..9i64 {
            for a1 in 0..9i64 {
                let first = (a0 * a0 - c).rem_euclid(9) == 0;
                let second = (2 * a0.pow(3) * a1 + 3 * a1 * a1 - dc).rem_euclid(9) == 0;
                if first && second {
                    witt_count += 1;
                }
            }
        }
        ensure(jet_count == witt_count, || format!("c = {c}: {jet_count} jet points, {witt_count} Witt points"))?;
        total += jet_count;
    }
    ensure(total > 0, || "no points at all".into())?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{total} points over 27 values of c in {:?}", start.elapsed()))
}

fn criterion_6() -> Outcome {
    let base = BaseRing::new(5, 1, 3).unwrap();
    let kj = kummer::kummer_jet(&base, 4, 1).map_err(|e| e.to_string())?;
    kj.check().map_err(|e| e.to_string())?;
    // numeric back-substitution: h = t0^4 exactly, so
    // δ(t^4 - h) = ((t^5 + 5 t')^4 - h^5 - 5 h') / 5, which must vanish mod 25
    let mut rng = seeded_rng(606);
    let samples = 50;
    for _ in 0..samples {
        let t0 = loop {
            let v: i64 = rng.gen_range(1..125);
            if v % 5 != 0 {
                break v;
            }
        };
        let h = BigInt::from(t0).pow(4);
        let h1: i64 = rng.gen_range(0..125);
        let values = [base.from_bigint(&h), base.from_int(h1)];
        let t1_elem = &kj.specialize(&values).map_err(|e| e.to_string())?[0];
        let tb = base.from_int(t0);
        let mut t1 = base.zero();
        let mut power = base.one();
        for c in t1_elem.coeffs() {
            t1 = t1.add(&c.mul(&power));
            power = power.mul(&tb);
        }
        let t1 = BigInt::from(t1.as_u64().unwrap());
        let t = BigInt::from(t0);
        let five = BigInt::from(5);
        let phi_t = t.pow(5) + &five * &t1;
        let num = phi_t.pow(4) - h.pow(5) - &five * BigInt::from(h1);
        ensure(&num % &five == BigInt::zero(), || format!("not divisible by 5 at t = {t0}"))?;
        let val = (num / &five) % BigInt::from(25);
        ensure(val == BigInt::zero(), || format!("δ(t^4 - h) = {val} mod 25 at t = {t0}, h' = {h1}"))?;
    }
    Ok(format!("symbolic check plus {samples} numeric back-substitutions"))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn valuation(x: &BigRational, p: i64) -> i64 {
    let val = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0;
        while &n % p == BigInt::zero() {
            n /= p;
            v += 1;
        }
        v
    };
    val(x.numer()) - val(x.denom())
}

/// Truncated product of power series in one variable.
fn mul_series(a: &[BigRational], b: &[BigRational], d: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); d + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= d {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let (p, d) = (3i64, 12usize);
    let base = BaseRing::new(3, 1, 6).unwrap();
    let psi = characters::psi_series(&base, d as i64).map_err(|e| e.to_string())?;
    let coeffs: Vec<BigRational> = (0..=d)
        .map(|n| psi.exact_coeff(&[-(p as i32) * n as i32, n as i32]).unwrap())
        .collect();
    // exp(p Ψ) must be 1 + p X, with X = q'/q^p
    let scaled: Vec<BigRational> = coeffs.iter().map(|c| c * rat(p)).collect();
    let mut exp = vec![BigRational::zero(); d + 1];
    exp[0] = BigRational::one();
    let mut term = exp.clone();
    for k in 1..=d {
        term = mul_series(&term, &scaled, d)
            .into_iter()
            .map(|c| c / rat(k as i64))
            .collect();
        for (e, t) in exp.iter_mut().zip(&term) {
            *e += t;
        }
    }
    let mut expected = vec![BigRational::zero(); d + 1];
    expected[0] = BigRational::one();
    expected[1] = rat(p);
    ensure(exp == expected, || format!("exp(pΨ) = {exp:?}"))?;
    ensure(psi.coeff(&[-3, 1]).is_one(), || "leading coefficient is not 1".into())?;
    for n in 1..=d as i64 {
        let v = valuation(&coeffs[n as usize], p);
        let vn = valuation(&rat(n), p);
        ensure(v == n - 1 - vn, || format!("term {n}: valuation {v}"))?;
    }
    // (1 + pX1)(1 + pX2) = 1 + pX with X = X1 + X2 + p X1 X2
    let var = |i| Poly::var(i, 2, BigRational::one());
    let big_x = var(0).add(&var(1)).add(&var(0).mul(&var(1)).scale(&rat(p)));
    let joint = 10;
    let keep = |f: &Poly<BigRational>| f.truncate_weight(&[1, 1], joint);
    let mut lhs = Poly::zero(2, BigRational::one());
    let mut rhs = Poly::zero(2, BigRational::one());
    let mut xp = Poly::one(2, BigRational::one());
    for n in 1..=joint as usize {
        xp = keep(&xp.mul(&big_x));
        lhs = lhs.add(&xp.scale(&coeffs[n]));
        let x1 = Poly::monomial(Monomial::from_exps(vec![n as i32, 0]), coeffs[n].clone());
        let x2 = Poly::monomial(Monomial::from_exps(vec![0, n as i32]), coeffs[n].clone());
        rhs = rhs.add(&x1).add(&x2);
    }
    ensure(keep(&lhs) == rhs, || "Ψ(q1 q2) != Ψ(q1) + Ψ(q2) on coefficients".into())?;
    let defect = characters::psi_additivity_defect(&base, joint).map_err(|e| e.to_string())?;
    ensure(defect.is_zero(), || format!("jet-space additivity defect {defect:?}"))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("12 terms, valuations, additivity to degree 10 in {:?}", start.elapsed()))
}

/// `q Π (1 - q^n)^2 (1 - q^{11n})^2`, coefficients of `q^1..q^bound`.
fn eta_product(bound: usize) -> Vec<i64> {
    let mut s = vec![0i64; bound + 1];
    s[1] = 1;
    for n in 1..=bound {
        for step in [n, 11 * n] {
            for _ in 0..2 {
                for i in (step..=bound).rev() {
                    s[i] -= s[i - step];
                }
            }
        }
    }
    s[1..].to_vec()
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let curve = [0, -1, 1, -10, -20];
    let a = curve_coefficients(&curve, 20).map_err(|e| e.to_string())?;
    ensure(a == eta_product(20), || "point counts disagree with the eta product".into())?;
    let e = EigenformData::new(3, a, None).map_err(|e| e.to_string())?;
    let base = BaseRing::new(3, 1, 8).unwrap();
    let s = characters::f_sharp_series(&e, &base, 20).map_err(|e| format!("integrality: {e}"))?;
    let exact = s.exact.as_ref().ok_or("no exact coefficients")?;
    for (m, c) in exact.terms() {
        ensure(valuation(c, 3) >= 0, || format!("coefficient {c} of {m:?} is not 3-integral"))?;
    }
    let defect = characters::f_sharp_additivity_defect(&e, &base, 8).map_err(|e| e.to_string())?;
    ensure(defect.is_zero(), || format!("additivity defect {defect:?}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} integral terms to weight 20, additive to 8, in {:?}", exact.len(), start.elapsed()))
}

fn criterion_9() -> Outcome {
    let mut rng = seeded_rng(909);
    for p in [5u64, 7] {
        let ring = BaseRing::new(p, 1, 3).unwrap();
        let alg = graded::kummer_over_base(&ring, ring.from_int(3)).unwrap();
        for _ in 0..200 {
            let x = graded::random_elem(&alg, &mut rng);
            let back = graded::reassemble(&alg, &graded::tau_decompose(&x)).unwrap();
            ensure(back == x, || format!("round trip at {x:?}"))?;
        }
        let m = (p - 1) as i64;
        for r in 0..m {
            let k = graded::eigenweight(&alg.t_pow(r)).map_err(|e| e.to_string())?;
            ensure(k as i64 == (-r).rem_euclid(m), || format!("q={p}: t^{r} has weight {k}"))?;
        }
    }
    let ring = BaseRing::new(7, 1, 3).unwrap();
    let alg = graded::kummer_over_base(&ring, ring.from_int(3)).unwrap();
    let shell = graded::synthetic_shell(&alg, 5, 3).unwrap();
    let k = graded::eigenweight(&shell).map_err(|e| e.to_string())?;
    ensure(k == 5, || format!("shell weight {k}"))?;
    let cw = graded::companion_weight(3, 7).unwrap();
    ensure(cw == 7 + 1 - 3, || format!("companion weight {cw}"))?;
    Ok(format!("round trips, all eigenweights, k' = {k}, companion weight {cw}"))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_deltajet");
    let run = || {
        std::process::Command::new(bin)
            .args(["verify", "--suite", "all", "--seed", "12345"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || String::from_utf8_lossy(&a.stdout).into_owned())?;
    ensure(a.stdout == b.stdout, || "reports differ".into())?;
    let (code, text) = cli::run(["deltajet", "verify", "--suite", "all", "--seed", "12345"]);
    ensure(code == 0 && text.as_bytes() == a.stdout, || "library run differs from the binary".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("ghost homomorphism", criterion_1),
        ("universal polynomial integrality", criterion_2),
        ("Witt operator identities", criterion_3),
        ("delta axioms", criterion_4),
        ("jet adjunction at order 1", criterion_5),
        ("Kummer jet", criterion_6),
        ("Psi identities", criterion_7),
        ("f-sharp integrality and additivity", criterion_8),
        ("graded decomposition", criterion_9),
        ("verify determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
