//! Conway polynomials for small fields and an F_p irreducibility test.

/// Conway polynomial of `F_{p^f}` as low-to-high coefficients (monic, length
/// `f + 1`), for the primes and degrees bundled here.
pub fn conway_polynomial(p: u64, f: usize) -> Option<Vec<u64>> {
    let table: &[(u64, usize, &[u64])] = &[
        (2, 1, &[1, 1]),
        (2, 2, &[1, 1, 1]),
        (2, 3, &[1, 1, 0, 1]),
        (2, 4, &[1, 1, 0, 0, 1]),
        (3, 1, &[1, 1]),
        (3, 2, &[2, 2, 1]),
        (3, 3, &[1, 2, 0, 1]),
        (3, 4, &[2, 0, 0, 2, 1]),
        (5, 1, &[3, 1]),
        (5, 2, &[2, 4, 1]),
        (5, 3, &[3, 3, 0, 1]),
        (5, 4, &[2, 4, 4, 0, 1]),
        (7, 1, &[4, 1]),
        (7, 2, &[3, 6, 1]),
        (7, 3, &[4, 0, 6, 1]),
        (7, 4, &[3, 4, 5, 0, 1]),
        (11, 1, &[9, 1]),
        (11, 2, &[2, 7, 1]),
        (11, 3, &[9, 2, 0, 1]),
        (11, 4, &[2, 10, 8, 0, 1]),
        (13, 1, &[11, 1]),
        (13, 2, &[2, 12, 1]),
        (13, 3, &[11, 2, 0, 1]),
        (13, 4, &[2, 12, 3, 0, 1]),
    ];
    table
        .iter()
        .find(|(tp, tf, _)| *tp == p && *tf == f)
        .map(|(_, _, c)| c.to_vec())
}

/// First monic irreducible polynomial of degree `f` over F_p in
/// lexicographic order of its lower coefficients.
pub fn first_irreducible(p: u64, f: usize) -> Vec<u64> {
    let total = p.pow(f as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(f + 1);
        let mut x = code;
        for _ in 0..f {
            c.push(x % p);
            x /= p;
        }
        c.push(1);
        if is_irreducible_mod_p(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=dm {
            let idx = dr - dm + i;
            r[idx] = (r[idx] + p - c * m[i] % p) % p;
        }
        // the leading coefficient is now zero
        r.pop();
        if r.is_empty() {
            r.push(0);
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mulmod(&b, &b, m, p);
        }
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub_x(a: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    if r.len() < 2 {
        r.resize(2, 0);
    }
    r[1] = (r[1] + p - 1) % p;
    trim(r)
}

/// Rabin's test: `m` (low-to-high) is irreducible over F_p.
pub fn is_irreducible_mod_p(m: &[u64], p: u64) -> bool {
    let m: Vec<u64> = trim(m.iter().map(|c| c % p).collect());
    let f = m.len() - 1;
    if f == 0 {
        return false;
    }
    if f == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^{p^f} == x mod m
    let mut xp = x.clone();
    for _ in 0..f {
        xp = poly_powmod(&xp, p, &m, p);
    }
    if trim(sub_x(&xp, p)) != vec![0] {
        return false;
    }
    let mut primes = Vec::new();
    let mut n = f;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for r in primes {
        let mut xp = x.clone();
        for _ in 0..(f / r) {
            xp = poly_powmod(&xp, p, &m, p);
        }
        let g = poly_gcd(&m, &sub_x(&xp, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_polynomials_are_irreducible() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for f in 1..=4 {
                let c = conway_polynomial(p, f).unwrap();
                assert_eq!(c.len(), f + 1);
                assert!(is_irreducible_mod_p(&c, p), "p={p} f={f}");
            }
        }
    }

    #[test]
    fn reducible_detected() {
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(!is_irreducible_mod_p(&[1, 0, 1], 2));
        // x^2 + 1 is irreducible over F_3
        assert!(is_irreducible_mod_p(&[1, 0, 1], 3));
        // x^4 + 4 factors over F_5 (x^4 = 1 on units so x^4+4 = x^4-1)
        assert!(!is_irreducible_mod_p(&[4, 0, 0, 0, 1], 5));
    }

    #[test]
    fn fallback_search() {
        assert_eq!(first_irreducible(2, 2), vec![1, 1, 1]);
        let c = first_irreducible(17, 3);
        assert!(is_irreducible_mod_p(&c, 17));
    }
}
