//! Hecke eigenvalue data, from user input or by counting points on a
//! Weierstrass curve.

use crate::error::{Error, Result};
use crate::ring::is_prime;

use super::formal::{discriminant, Curve};

/// Coefficients `a_1..a_D` of a weight-2 eigenform together with `p` and
/// `a_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenformData {
    pub p: u64,
    /// `coeffs[n - 1] = a_n`.
    pub coeffs: Vec<i64>,
    pub a_p: i64,
}

impl EigenformData {
    /// Takes `a_1..a_D`; `a_p` is read from the list when `p <= D`.
    pub fn new(p: u64, coeffs: Vec<i64>, a_p: Option<i64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if coeffs.first() != Some(&1) {
            return Err(Error::InvalidInput("a_1 must be 1".into()));
        }
        let from_list = coeffs.get(p as usize - 1).copied();
        let a_p = match (from_list, a_p) {
            (Some(x), Some(y)) if x != y => {
                return Err(Error::InvalidInput(format!("a_p given as {y} but the list has {x}")));
            }
            (Some(x), _) | (None, Some(x)) => x,
            (None, None) => return Err(Error::InvalidInput("a_p is not determined".into())),
        };
        Ok(EigenformData { p, coeffs, a_p })
    }

    /// Eigenvalues of the curve's L-series for `n <= bound`.
    pub fn from_curve(curve: &Curve, p: u64, bound: usize) -> Result<Self> {
        let coeffs = curve_coefficients(curve, bound.max(p as usize))?;
        let a_p = coeffs[p as usize - 1];
        let mut coeffs = coeffs;
        coeffs.truncate(bound);
        EigenformData::new(p, coeffs, Some(a_p))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn a(&self, n: usize) -> i64 {
        self.coeffs[n - 1]
    }

    /// Pairs `(m, n)` of coprime indices with `a_{mn} != a_m a_n`.
    pub fn multiplicativity_violations(&self) -> Vec<(usize, usize)> {
        let d = self.coeffs.len();
        let mut out = Vec::new();
        for m in 2..=d {
            for n in m..=d / m {
                if num_integer::Integer::gcd(&m, &n) == 1 && self.a(m * n) != self.a(m) * self.a(n) {
                    out.push((m, n));
                }
            }
        }
        out
    }
}

/// Projective points of the reduction of `curve` over `F_l`, singular
/// points included.
pub fn count_points(curve: &Curve, l: u64) -> u64 {
    let l = l as i64;
    let c: Vec<i64> = curve.iter().map(|a| a.rem_euclid(l)).collect();
    let (a1, a2, a3, a4, a6) = (c[0], c[1], c[2], c[3], c[4]);
    let mut count = 1;
    for x in 0..l {
        let rhs = ((x * x % l * x + a2 * x % l * x + a4 * x + a6) % l + l) % l;
        for y in 0..l {
            let lhs = (y * y + a1 * x % l * y + a3 * y) % l;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}

/// `a_1..a_bound` from `a_l = l + 1 - #E(F_l)`, the Hecke recursion at good
/// primes and `a_{l^k} = a_l^k` at bad ones. The model must be minimal at
/// the bad primes.
pub fn curve_coefficients(curve: &Curve, bound: usize) -> Result<Vec<i64>> {
    let disc = discriminant(curve);
    if num_traits::Zero::is_zero(&disc) {
        return Err(Error::InvalidInput("singular curve".into()));
    }
    let mut a = vec![0i64; bound + 1];
    if bound >= 1 {
        a[1] = 1;
    }
    for l in 2..=bound {
        if !is_prime(l as u64) {
            continue;
        }
        let good = !num_traits::Zero::is_zero(&(&disc % num_bigint::BigInt::from(l)));
        let al = l as i64 + 1 - count_points(curve, l as u64) as i64;
        let (mut prev, mut cur) = (1i64, al);
        let mut pk = l;
        while pk <= bound {
            a[pk] = cur;
            let next = if good { al * cur - l as i64 * prev } else { al * cur };
            prev = cur;
            cur = next;
            pk *= l;
        }
    }
    for n in 2..=bound {
        let mut m = n;
        let l = (2..=n).find(|d| m % d == 0).unwrap();
        let mut pk = 1;
        while m % l == 0 {
            m /= l;
            pk *= l;
        }
        if m > 1 {
            a[n] = a[pk] * a[m];
        }
    }
    Ok(a[1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURVE_11A: Curve = [0, -1, 1, -10, -20];

    /// `q Π (1 - q^n)^2 (1 - q^{11 n})^2`.
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

    #[test]
    fn point_counts_match_the_eta_product() {
        let a = curve_coefficients(&CURVE_11A, 40).unwrap();
        assert_eq!(a, eta_product(40));
        assert_eq!(a[2], -1);
        assert_eq!(a[10], 1);
    }

    #[test]
    fn eigenform_data() {
        let e = EigenformData::from_curve(&CURVE_11A, 3, 20).unwrap();
        assert_eq!(e.a_p, -1);
        assert!(e.multiplicativity_violations().is_empty());
        let probe = EigenformData::new(3, vec![1, 0, 0, 0], None).unwrap();
        assert_eq!(probe.a_p, 0);
        let bad = EigenformData::new(5, vec![1, 2, 3, 5, 0, 1], None).unwrap();
        assert_eq!(bad.multiplicativity_violations(), vec![(2, 3)]);
        assert!(EigenformData::new(7, vec![1, 2], None).is_err());
    }
}
