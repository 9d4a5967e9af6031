//! Universal Witt polynomials over `Z`, found by solving ghost identities
//! for the top coordinate and dividing exactly by `p^i`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{ExactDivP, RingElem};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 3;
/// Largest supported ghost degree `q^n`.
pub const MAX_GHOST_DEGREE: u64 = 27;

/// Checks `(p, f, n)` against the generation bounds.
pub fn check_bounds(p: u64, f: usize, n: usize) -> Result<()> {
    let q = p
        .checked_pow(f as u32)
        .ok_or_else(|| Error::BoundExceeded(format!("q = {p}^{f} overflows")))?;
    if n > MAX_ORDER {
        return Err(Error::BoundExceeded(format!(
            "Witt order {n} exceeds the bound {MAX_ORDER}"
        )));
    }
    match q.checked_pow(n as u32) {
        Some(d) if d <= MAX_GHOST_DEGREE => Ok(()),
        _ => Err(Error::BoundExceeded(format!(
            "ghost degree q^n = {q}^{n} exceeds {MAX_GHOST_DEGREE}"
        ))),
    }
}

/// Integer polynomials for `W_n` arithmetic at residue cardinality `q = p^f`.
///
/// `sum`, `prod` live in `2(n+1)` variables `x_0..x_n, y_0..y_n`; `neg`, `frob`
/// and `delta` in the `n+1` variables `x_0..x_n`. `frob` and `delta` map
/// `W_n -> W_{n-1}` and so have `n` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalWittPolys {
    pub p: u64,
    pub f: usize,
    pub n: usize,
    pub sum: Vec<Poly<BigInt>>,
    pub prod: Vec<Poly<BigInt>>,
    pub neg: Vec<Poly<BigInt>>,
    pub frob: Vec<Poly<BigInt>>,
    pub delta: Vec<Poly<BigInt>>,
}

impl UniversalWittPolys {
    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn families(&self) -> [(&'static str, &Vec<Poly<BigInt>>); 5] {
        [
            ("sum", &self.sum),
            ("prod", &self.prod),
            ("neg", &self.neg),
            ("frob", &self.frob),
            ("delta", &self.delta),
        ]
    }
}

fn p_pow(p: u64, k: usize) -> BigInt {
    num_traits::pow::Pow::pow(BigInt::from(p), k)
}

/// Ghost components `w_0..w_n` of the coordinates `vars` (variable indices).
pub fn ghost_polys(p: u64, q: u64, vars: &[usize], nvars: usize) -> Vec<Poly<BigInt>> {
    let coords: Vec<Poly<BigInt>> = vars.iter().map(|&v| Poly::int_var(v, nvars)).collect();
    ghost_of(p, q, &coords)
}

/// `w_i = Σ_{j≤i} p^j x_j^{q^{i-j}}` for any coefficient ring.
pub fn ghost_of<C: RingElem>(p: u64, q: u64, coords: &[C]) -> Vec<C> {
    let mut powers: Vec<C> = Vec::with_capacity(coords.len());
    let mut out = Vec::with_capacity(coords.len());
    for x in coords {
        for pw in powers.iter_mut() {
            *pw = RingElem::pow(pw, q);
        }
        powers.push(x.clone());
        let mut w = coords[0].zero_like();
        for (j, pw) in powers.iter().enumerate() {
            w = w.add(&pw.scale_int(&p_pow(p, j)));
        }
        out.push(w);
    }
    out
}

/// Solves `w_i(S_0..S_i) = targets[i]` coordinate by coordinate, failing if
/// a division by `p^i` is not exact. Over `Z[x]` this generates the universal
/// polynomials; over any p-torsion-free ring it inverts the ghost map.
pub fn solve_ghost<C: ExactDivP>(p: u64, q: u64, targets: &[C], label: &str) -> Result<Vec<C>> {
    let mut solved: Vec<C> = Vec::with_capacity(targets.len());
    // powers[j] = S_j^{q^{i-j}} for the current i
    let mut powers: Vec<C> = Vec::new();
    for (i, target) in targets.iter().enumerate() {
        for pw in powers.iter_mut() {
            *pw = RingElem::pow(pw, q);
        }
        let mut acc = target.clone();
        for (j, pw) in powers.iter().enumerate() {
            acc = acc.sub(&pw.scale_int(&p_pow(p, j)));
        }
        let s = ExactDivP::exact_div_p(&acc, p, i as u32)
            .map_err(|e| e.with_context(format!("{label} coordinate {i}")))?;
        powers.push(s.clone());
        solved.push(s);
    }
    Ok(solved)
}

/// Generates every family for `(p, f, n)`.
pub fn generate(p: u64, f: usize, n: usize) -> Result<UniversalWittPolys> {
    check_bounds(p, f, n)?;
    let q = p.pow(f as u32);
    let len = n + 1;
    let pair = 2 * len;
    let xs: Vec<usize> = (0..len).collect();
    let ys: Vec<usize> = (len..pair).collect();
    let gx = ghost_polys(p, q, &xs, pair);
    let gy = ghost_polys(p, q, &ys, pair);

    let sum_t: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| a.add(b)).collect();
    let prod_t: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| a.mul(b)).collect();
    let sum = solve_ghost(p, q, &sum_t, "Witt sum")?;
    let prod = solve_ghost(p, q, &prod_t, "Witt product")?;

    let g = ghost_polys(p, q, &xs, len);
    let neg_t: Vec<_> = g.iter().map(|w| w.neg()).collect();
    let neg = solve_ghost(p, q, &neg_t, "Witt negation")?;

    let frob_t: Vec<_> = g[1..].to_vec();
    let frob = solve_ghost(p, q, &frob_t, "Witt Frobenius")?;

    let mut delta_t = Vec::with_capacity(n);
    for i in 0..n {
        let t = g[i + 1]
            .sub(&g[i].pow(q))
            .exact_div_p(p, 1)
            .map_err(|e| e.with_context(format!("Witt delta ghost target {i}")))?;
        delta_t.push(t);
    }
    let delta = solve_ghost(p, q, &delta_t, "Witt delta")?;

    Ok(UniversalWittPolys {
        p,
        f,
        n,
        sum,
        prod,
        neg,
        frob,
        delta,
    })
}
