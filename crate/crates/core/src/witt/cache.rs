//! Process-wide cache of universal Witt polynomials, backed by one text file
//! per `(p, f, n)`.
//!
//! File layout:
//!
//! ```text
//! deltajet-witt-cache v1
//! p 3 f 1 n 2
//! sha256 <hex digest of every following line>
//! family sum 0 6
//! 1 0 0 0 0 0 1
//! ...
//! ```
//!
//! Each term line is the exponent vector followed by the decimal coefficient.
//! A bad tag, header or digest makes the file count as missing.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::universal::{check_bounds, generate, UniversalWittPolys};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};

pub const CACHE_VERSION: &str = "deltajet-witt-cache v1";
pub const CACHE_DIR_ENV: &str = "DELTAJET_CACHE_DIR";

type Key = (u64, usize, usize);

struct Cache {
    dir: RwLock<Option<PathBuf>>,
    mem: RwLock<HashMap<Key, Arc<UniversalWittPolys>>>,
}

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Cache {
        dir: RwLock::new(default_cache_dir()),
        mem: RwLock::new(HashMap::new()),
    })
}

/// `$DELTAJET_CACHE_DIR`, else `$XDG_DATA_HOME/deltajet`, else
/// `~/.local/share/deltajet`.
pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_DATA_HOME").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d).join("deltajet"));
    }
    std::env::var_os("HOME")
        .filter(|d| !d.is_empty())
        .map(|h| PathBuf::from(h).join(".local/share/deltajet"))
}

/// Redirects (or with `None`, disables) the disk layer for this process.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *cache().dir.write().unwrap() = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    cache().dir.read().unwrap().clone()
}

pub fn cache_file(dir: &Path, p: u64, f: usize, n: usize) -> PathBuf {
    dir.join(format!("witt-p{p}-f{f}-n{n}.txt"))
}

/// Universal polynomials for `(p, f, n)`: memory, then disk, then generation.
pub fn universal_polys(p: u64, f: usize, n: usize) -> Result<Arc<UniversalWittPolys>> {
    check_bounds(p, f, n)?;
    let key = (p, f, n);
    if let Some(hit) = cache().mem.read().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let dir = cache_dir();
    let loaded = dir
        .as_deref()
        .and_then(|d| fs::read_to_string(cache_file(d, p, f, n)).ok())
        .and_then(|text| parse(&text, p, f, n).ok());
    let polys = match loaded {
        Some(u) => u,
        None => {
            let u = generate(p, f, n)?;
            if let Some(d) = dir.as_deref() {
                // a read-only or missing directory only costs regeneration later
                let _ = store(d, &u);
            }
            u
        }
    };
    let mut mem = cache().mem.write().unwrap();
    Ok(mem.entry(key).or_insert_with(|| Arc::new(polys)).clone())
}

/// Drops the in-memory layer (the disk layer is left alone).
pub fn clear_memory() {
    cache().mem.write().unwrap().clear();
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn body(u: &UniversalWittPolys) -> String {
    let mut out = String::new();
    for (name, family) in u.families() {
        for (i, poly) in family.iter().enumerate() {
            let _ = writeln!(out, "family {name} {i} {}", poly.nvars());
            for (m, c) in poly.terms() {
                for e in m.exps() {
                    let _ = write!(out, "{e} ");
                }
                let _ = writeln!(out, "{c}");
            }
        }
    }
    out
}

pub fn serialize(u: &UniversalWittPolys) -> String {
    let body = body(u);
    let digest = hex(&Sha256::digest(body.as_bytes()));
    format!(
        "{CACHE_VERSION}\np {} f {} n {}\nsha256 {digest}\n{body}",
        u.p, u.f, u.n
    )
}

fn store(dir: &Path, u: &UniversalWittPolys) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let target = cache_file(dir, u.p, u.f, u.n);
    let tmp = target.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serialize(u))?;
    fs::rename(&tmp, &target)
}

fn corrupt(why: &str) -> Error {
    Error::Cache(why.to_string())
}

/// Parses a cache file, checking tag, header and digest.
pub fn parse(text: &str, p: u64, f: usize, n: usize) -> Result<UniversalWittPolys> {
    let mut parts = text.splitn(4, '\n');
    if parts.next() != Some(CACHE_VERSION) {
        return Err(corrupt("version tag mismatch"));
    }
    if parts.next() != Some(format!("p {p} f {f} n {n}").as_str()) {
        return Err(corrupt("header mismatch"));
    }
    let digest = parts
        .next()
        .and_then(|l| l.strip_prefix("sha256 "))
        .ok_or_else(|| corrupt("missing checksum"))?;
    let body = parts.next().unwrap_or("");
    if hex(&Sha256::digest(body.as_bytes())) != digest {
        return Err(corrupt("checksum mismatch"));
    }

    let mut families: HashMap<String, Vec<Poly<BigInt>>> = HashMap::new();
    let mut current: Option<(String, usize, Vec<(Monomial, BigInt)>)> = None;
    let flush = |cur: Option<(String, usize, Vec<(Monomial, BigInt)>)>,
                 fams: &mut HashMap<String, Vec<Poly<BigInt>>>| {
        if let Some((name, nvars, terms)) = cur {
            fams.entry(name)
                .or_default()
                .push(Poly::from_terms(nvars, BigInt::from(1), terms));
        }
    };
    for line in body.lines() {
        if let Some(rest) = line.strip_prefix("family ") {
            flush(current.take(), &mut families);
            let fields: Vec<&str> = rest.split(' ').collect();
            if fields.len() != 3 {
                return Err(corrupt("bad family line"));
            }
            let idx: usize = fields[1].parse().map_err(|_| corrupt("bad index"))?;
            if families.get(fields[0]).map_or(0, |v| v.len()) != idx {
                return Err(corrupt("family entries out of order"));
            }
            let nvars = fields[2].parse().map_err(|_| corrupt("bad arity"))?;
            current = Some((fields[0].to_string(), nvars, Vec::new()));
        } else {
            let (_, nvars, terms) = current.as_mut().ok_or_else(|| corrupt("term before family"))?;
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != *nvars + 1 {
                return Err(corrupt("bad term arity"));
            }
            let mut exps = Vec::with_capacity(*nvars);
            for e in &fields[..*nvars] {
                exps.push(e.parse::<i32>().map_err(|_| corrupt("bad exponent"))?);
            }
            let c: BigInt = fields[*nvars].parse().map_err(|_| corrupt("bad coefficient"))?;
            terms.push((Monomial::from_exps(exps), c));
        }
    }
    flush(current.take(), &mut families);

    let mut take = |name: &str, len: usize| -> Result<Vec<Poly<BigInt>>> {
        let v = families.remove(name).unwrap_or_default();
        if v.len() != len {
            return Err(corrupt("family length mismatch"));
        }
        Ok(v)
    };
    Ok(UniversalWittPolys {
        p,
        f,
        n,
        sum: take("sum", n + 1)?,
        prod: take("prod", n + 1)?,
        neg: take("neg", n + 1)?,
        frob: take("frob", n)?,
        delta: take("delta", n)?,
    })
}
