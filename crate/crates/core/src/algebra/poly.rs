//! Polynomials over GF(p), stored as coefficient vectors, constant term first.

use super::numtheory::is_prime;
use crate::error::{Error, Result};

pub type Poly = Vec<u32>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2)
    let (mut acc, mut base, mut e) = (1u64, a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub fn mul(f: &[u32], g: &[u32], p: u32) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a as u64 * b as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `f` modulo a nonzero `g`.
pub fn rem(f: &[u32], g: &[u32], p: u32) -> Poly {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(g[dg], p) as u64;
    let mut r = trim(f.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = r[dr] as u64 * lead_inv % p as u64;
        let shift = dr - dg;
        for (j, &b) in g.iter().enumerate().take(dg + 1) {
            let sub = c * b as u64 % p as u64;
            r[shift + j] = ((r[shift + j] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-p digits of `code`.
fn monic_from_code(code: u64, d: usize, p: u32) -> Poly {
    let mut f = Vec::with_capacity(d + 1);
    let mut c = code;
    for _ in 0..d {
        f.push((c % p as u64) as u32);
        c /= p as u64;
    }
    f.push(1);
    f
}

pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    for dd in 1..=d / 2 {
        for code in 0..(p as u64).pow(dd as u32) {
            let g = monic_from_code(code, dd, p);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The least monic irreducible of degree k, ordering lower coefficients as a base-p
/// integer with the constant term least significant.
pub fn least_irreducible(p: u32, k: usize) -> Poly {
    (0..(p as u64).pow(k as u32))
        .map(|code| monic_from_code(code, k, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Makes `f` monic; fails on the zero polynomial.
pub fn monic(f: &[u32], p: u32) -> Result<Poly> {
    let f = trim(f.to_vec());
    let d = degree(&f).ok_or_else(|| Error::MalformedSpec("zero polynomial".into()))?;
    let inv = inv_mod(f[d], p) as u64;
    Ok(f.iter().map(|&c| (c as u64 * inv % p as u64) as u32).collect())
}

/// Parses `X^2+X+1`, `x^3 + 2x + 1`, `2*X - 1`, or a list of coefficients
/// highest degree first (`1 1 1`, `1,1,1`).
pub fn parse(text: &str, p: u32) -> Result<Poly> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::MalformedSpec("empty polynomial".into()));
    }
    let reduce = |v: i64| (v.rem_euclid(p as i64)) as u32;
    if !t.contains(['x', 'X']) {
        let coeffs: Vec<i64> = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::MalformedSpec(format!("bad coefficient list '{t}'")))?;
        return Ok(trim(coeffs.iter().rev().map(|&c| reduce(c)).collect()));
    }
    let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out: Vec<i64> = Vec::new();
    let bad = || Error::MalformedSpec(format!("bad polynomial '{t}'"));
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        }
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        rest = &rest[end..];
        if term.is_empty() {
            return Err(bad());
        }
        let (coef, exp) = match term.find(['x', 'X']) {
            None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some(i) => {
                let c = term[..i].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<i64>().map_err(|_| bad())? };
                let tail = &term[i + 1..];
                let e = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .ok_or_else(bad)?
                        .parse::<usize>()
                        .map_err(|_| bad())?
                };
                (c, e)
            }
        };
        if out.len() <= exp {
            out.resize(exp + 1, 0);
        }
        out[exp] += sign * coef;
    }
    Ok(trim(out.into_iter().map(reduce).collect()))
}

pub fn format(f: &[u32]) -> String {
    let mut terms = Vec::new();
    for (e, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && e > 0 { String::new() } else { c.to_string() };
        terms.push(match e {
            0 => coef,
            1 => format!("{coef}X"),
            _ => format!("{coef}X^{e}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}
