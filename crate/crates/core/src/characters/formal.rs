//! One-dimensional formal groups over `Q`: from a Weierstrass equation via the
//! chord construction, or from a logarithm.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::ring::valuation_rational;

/// A truncated power series `Σ c[n] z^n`.
pub type Series = Vec<BigRational>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Series {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1/a` for `a[0] != 0`.
pub fn series_inverse(a: &[BigRational], len: usize) -> Result<Series> {
    let a0 = a
        .first()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::NotInvertible("series with zero constant term".into()))?;
    let inv0 = a0.recip();
    let mut b: Series = Vec::with_capacity(len);
    b.push(inv0.clone());
    for n in 1..len {
        let mut s = BigRational::zero();
        for k in 1..=n.min(a.len() - 1) {
            s += &a[k] * &b[n - k];
        }
        b.push(-s * &inv0);
    }
    Ok(b)
}

/// `f(g)` for `g[0] = 0`.
pub fn series_compose(f: &[BigRational], g: &[BigRational], len: usize) -> Series {
    let mut acc = vec![BigRational::zero(); len];
    for c in f.iter().take(len).rev() {
        acc = series_mul(&acc, g, len);
        acc[0] += c;
    }
    acc
}

/// `∫ a dz` with zero constant term.
pub fn series_integrate(a: &[BigRational], len: usize) -> Series {
    let mut out = vec![BigRational::zero(); len];
    for n in 1..len {
        if let Some(c) = a.get(n - 1) {
            out[n] = c / q(n as i64);
        }
    }
    out
}

/// Compositional inverse of `l = z + O(z^2)`.
pub fn series_reversion(l: &[BigRational], len: usize) -> Result<Series> {
    if l.len() < 2 || !l[0].is_zero() || !l[1].is_one() {
        return Err(Error::InvalidInput("reversion needs a series z + O(z^2)".into()));
    }
    let mut z = vec![BigRational::zero(); len];
    if len > 1 {
        z[1] = BigRational::one();
    }
    let mut e = z.clone();
    for _ in 1..len {
        let le = series_compose(l, &e, len);
        e = e.iter().zip(&le).zip(&z).map(|((a, b), c)| a - b + c).collect();
    }
    Ok(e)
}

pub type BiSeries = Poly<BigRational>;

fn bi_keep(d: usize) -> impl Fn(&Monomial) -> bool {
    move |m: &Monomial| m.degree() <= d as i64
}

fn bi_mul(a: &BiSeries, b: &BiSeries, d: usize) -> BiSeries {
    a.mul_filtered(b, bi_keep(d))
}

fn bi_const(c: BigRational) -> BiSeries {
    Poly::constant(c, 2)
}

fn bi_var(i: usize) -> BiSeries {
    Poly::var(i, 2, BigRational::one())
}

/// `f(u)` for a bivariate `u` without constant term, to total degree `d`.
pub fn compose_bivariate(f: &[BigRational], u: &BiSeries, d: usize) -> BiSeries {
    let mut acc = bi_const(BigRational::zero());
    for c in f.iter().take(d + 1).rev() {
        acc = bi_mul(&acc, u, d).add(&bi_const(c.clone()));
    }
    acc
}

/// `1/(1 + u)` for `u` without constant term.
fn bi_geometric(u: &BiSeries, d: usize) -> BiSeries {
    let mut acc = bi_const(BigRational::one());
    let neg = u.neg();
    let mut pw = acc.clone();
    for _ in 0..d {
        pw = bi_mul(&pw, &neg, d);
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw);
    }
    acc
}

/// Long Weierstrass coefficients `(a1, a2, a3, a4, a6)`.
pub type Curve = [i64; 5];

/// `Δ` of the curve.
pub fn discriminant(c: &Curve) -> BigInt {
    let [a1, a2, a3, a4, a6] = c.map(BigInt::from);
    let b2: BigInt = &a1 * &a1 + 4 * &a2;
    let b4: BigInt = 2 * &a4 + &a1 * &a3;
    let b6: BigInt = &a3 * &a3 + 4 * &a6;
    let b8: BigInt = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
    let t1: BigInt = &b2 * &b2 * &b8;
    let t2: BigInt = 8 * &b4 * &b4 * &b4;
    let t3: BigInt = 27 * &b6 * &b6;
    let t4: BigInt = 9 * &b2 * &b4 * &b6;
    -t1 - t2 - t3 + t4
}

/// Group law `F(q1, q2)` and logarithm of a one-parameter formal group, both
/// to total degree `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupData {
    pub degree: usize,
    pub law: BiSeries,
    pub log: Series,
}

impl FormalGroupData {
    /// `F(x, y) = x + y`, `l(q) = q`.
    pub fn additive(degree: usize) -> Self {
        let mut log = vec![BigRational::zero(); degree + 1];
        if degree >= 1 {
            log[1] = BigRational::one();
        }
        FormalGroupData {
            degree,
            law: bi_var(0).add(&bi_var(1)),
            log,
        }
    }

    /// `F = l^{-1}(l(q1) + l(q2))`.
    pub fn from_logarithm(log: &[BigRational], degree: usize) -> Result<Self> {
        let len = degree + 1;
        let mut log: Series = log.iter().take(len).cloned().collect();
        log.resize(len, BigRational::zero());
        let exp = series_reversion(&log, len)?;
        let sum = compose_bivariate(&log, &bi_var(0), degree).add(&compose_bivariate(&log, &bi_var(1), degree));
        let law = compose_bivariate(&exp, &sum, degree);
        Ok(FormalGroupData { degree, law, log })
    }

    /// The formal group of `E` at the origin in the parameter `z = -x/y`,
    /// with the logarithm of the invariant differential. Fails when `p`
    /// divides the discriminant.
    pub fn from_weierstrass(curve: &Curve, p: u64, degree: usize) -> Result<Self> {
        let disc = discriminant(curve);
        if disc.is_zero() || (&disc % BigInt::from(p)).is_zero() {
            return Err(Error::BadReduction {
                p,
                discriminant: disc.to_string(),
            });
        }
        let [a1, a2, a3, a4, a6] = curve.map(q);
        let d = degree;
        let len = d + 4;

        // w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3
        let mut w = vec![BigRational::zero(); len];
        for _ in 0..len {
            let w2 = series_mul(&w, &w, len);
            let w3 = series_mul(&w2, &w, len);
            let mut next = vec![BigRational::zero(); len];
            next[3] = BigRational::one();
            for n in 0..len {
                if n >= 1 {
                    next[n] += &a1 * &w[n - 1] + &a4 * &w2[n - 1];
                }
                if n >= 2 {
                    next[n] += &a2 * &w[n - 2];
                }
                next[n] += &a3 * &w2[n] + &a6 * &w3[n];
            }
            w = next;
        }

        // ω = (-2W - z W') / (W (-2 + a1 z + a3 z^3 W)) dz with w = z^3 W
        let big_w: Series = w[3..].to_vec();
        let wl = big_w.len();
        let mut num = vec![BigRational::zero(); wl];
        for n in 0..wl {
            num[n] = q(-2) * &big_w[n] - q(n as i64) * &big_w[n];
        }
        let mut inner = vec![BigRational::zero(); wl];
        inner[0] = q(-2);
        if wl > 1 {
            inner[1] = a1.clone();
        }
        for n in 3..wl {
            inner[n] += &a3 * &big_w[n - 3];
        }
        let den = series_mul(&big_w, &inner, wl);
        let omega = series_mul(&num, &series_inverse(&den, wl)?, wl);
        let log = series_integrate(&omega, d + 1);

        // chord through (z1, w1), (z2, w2): w = λ z + ν
        let mut lambda = bi_const(BigRational::zero());
        for n in 3..=d + 1 {
            let c = &w[n];
            if c.is_zero() {
                continue;
            }
            let terms = (0..n).map(|i| {
                (
                    Monomial::from_exps(vec![i as i32, (n - 1 - i) as i32]),
                    c.clone(),
                )
            });
            lambda = lambda.add(&Poly::from_terms(2, BigRational::one(), terms));
        }
        lambda = lambda.truncate_weight(&[1, 1], d as i64);
        let w1 = compose_bivariate(&w, &bi_var(0), d);
        let nu = w1.sub(&bi_mul(&lambda, &bi_var(0), d));
        let l2 = bi_mul(&lambda, &lambda, d);
        let ln = bi_mul(&lambda, &nu, d);
        // z1 + z2 + z3 = -top / (1 + bottom), from the z^2 coefficient of the cubic
        let top = lambda
            .scale(&a1)
            .add(&l2.scale(&a3))
            .add(&nu.scale(&a2))
            .add(&ln.scale(&(q(2) * &a4)))
            .add(&bi_mul(&l2, &nu, d).scale(&(q(3) * &a6)));
        let bottom = lambda
            .scale(&a2)
            .add(&l2.scale(&a4))
            .add(&bi_mul(&l2, &lambda, d).scale(&a6));
        let z3 = bi_var(0)
            .neg()
            .sub(&bi_var(1))
            .sub(&bi_mul(&top, &bi_geometric(&bottom, d), d));
        // inverse: i(z) = z / (-1 + a1 z + a3 w(z))
        let wz3 = compose_bivariate(&w, &z3, d);
        let u = z3.scale(&a1).add(&wz3.scale(&a3)).neg();
        let law = bi_mul(&z3, &bi_geometric(&u, d), d).neg();
        Ok(FormalGroupData { degree, law, log })
    }

    pub fn law_coeff(&self, i: i32, j: i32) -> BigRational {
        self.law.coeff_of(&[i, j])
    }

    /// `F(q, 0) = q`, `F(q1, q2) = F(q2, q1)` and `l(F) = l(q1) + l(q2)`.
    pub fn check(&self) -> Result<()> {
        let d = self.degree;
        let unit = self
            .law
            .terms()
            .iter()
            .filter(|(m, _)| m.exps()[1] == 0)
            .map(|(m, c)| (m.clone(), c.clone()));
        if Poly::from_terms(2, BigRational::one(), unit) != bi_var(0).truncate_weight(&[1, 1], d as i64) {
            return Err(Error::AxiomViolation {
                law: "F(q, 0) = q".into(),
                witness: format!("{:?}", self.law),
            });
        }
        let swapped = self.law.remap(2, &[1, 0]);
        if swapped != self.law {
            return Err(Error::AxiomViolation {
                law: "F symmetric".into(),
                witness: format!("{:?}", self.law.sub(&swapped)),
            });
        }
        let lhs = compose_bivariate(&self.log, &self.law, d);
        let rhs = compose_bivariate(&self.log, &bi_var(0), d).add(&compose_bivariate(&self.log, &bi_var(1), d));
        if lhs != rhs {
            return Err(Error::AxiomViolation {
                law: "l(F(q1, q2)) = l(q1) + l(q2)".into(),
                witness: format!("{:?}", lhs.sub(&rhs)),
            });
        }
        Ok(())
    }

    /// Smallest `p`-adic valuation among the coefficients of `F`.
    pub fn law_min_valuation(&self, p: u64) -> Option<i64> {
        self.law
            .terms()
            .iter()
            .filter_map(|(_, c)| valuation_rational(c, p))
            .min()
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.law_min_valuation(p).map_or(true, |v| v >= 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURVE_11A: Curve = [0, -1, 1, -10, -20];

    #[test]
    fn discriminant_of_11a() {
        assert_eq!(discriminant(&CURVE_11A), BigInt::from(-161051));
        assert!(matches!(
            FormalGroupData::from_weierstrass(&CURVE_11A, 11, 4),
            Err(Error::BadReduction { p: 11, .. })
        ));
    }

    #[test]
    fn additive_group() {
        let g = FormalGroupData::additive(6);
        g.check().unwrap();
        assert_eq!(g.log[1], BigRational::one());
        assert!(g.log[2..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn multiplicative_group_from_its_logarithm() {
        // log(1 + q): F = q1 + q2 + q1 q2
        let log: Series = (0..7)
            .map(|n| if n == 0 { BigRational::zero() } else { BigRational::new(BigInt::from(if n % 2 == 1 { 1 } else { -1 }), BigInt::from(n)) })
            .collect();
        let g = FormalGroupData::from_logarithm(&log, 6).unwrap();
        g.check().unwrap();
        let want = bi_var(0).add(&bi_var(1)).add(&bi_var(0).mul(&bi_var(1)));
        assert_eq!(g.law, want);
    }

    #[test]
    fn curve_11a_formal_group() {
        let g = FormalGroupData::from_weierstrass(&CURVE_11A, 3, 8).unwrap();
        g.check().unwrap();
        assert!(g.law.terms().iter().all(|(_, c)| c.is_integer()));
        // F = z1 + z2 - a1 z1 z2 - a2 (z1^2 z2 + z1 z2^2) + ...
        assert_eq!(g.law_coeff(1, 1), q(0));
        assert_eq!(g.law_coeff(2, 1), q(1));
    }

    #[test]
    fn series_helpers() {
        let a: Series = vec![q(1), q(1)];
        let inv = series_inverse(&a, 5).unwrap();
        assert_eq!(inv, vec![q(1), q(-1), q(1), q(-1), q(1)]);
        let l: Series = vec![q(0), q(1), q(3), q(-2)];
        let e = series_reversion(&l, 6).unwrap();
        let id = series_compose(&l, &e, 6);
        assert_eq!(id, vec![q(0), q(1), q(0), q(0), q(0), q(0)]);
    }
}
