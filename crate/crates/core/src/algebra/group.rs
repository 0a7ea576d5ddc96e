use std::fmt;
use std::sync::{Arc, OnceLock};

use super::numtheory::factorize;
use super::ring::FiniteRing;
use crate::error::{Error, Result};

/// Index of an element in a finite carrier. Zero is always index 0.
pub type Elem = u32;

/// Finite abelian group on the carrier `0..size`, with 0 as identity.
#[derive(Clone)]
pub struct FiniteAbelianGroup(Arc<GroupInner>);

struct GroupInner {
    size: usize,
    repr: Repr,
    invariants: OnceLock<Vec<u64>>,
    generators: OnceLock<Vec<Elem>>,
}

enum Repr {
    Cyclic(u64),
    Table { add: Vec<Elem>, neg: Vec<Elem> },
    /// Pairs encoded as `a * |H| + b`.
    Product(FiniteAbelianGroup, FiniteAbelianGroup),
    /// t-tuples, first coordinate most significant.
    Power(FiniteAbelianGroup, usize),
    Ring(FiniteRing),
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(size={}, invariants={:?})", self.size(), self.invariant_factors())
    }
}

impl FiniteAbelianGroup {
    fn wrap(size: usize, repr: Repr) -> Self {
        FiniteAbelianGroup(Arc::new(GroupInner {
            size,
            repr,
            invariants: OnceLock::new(),
            generators: OnceLock::new(),
        }))
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if n > u32::MAX as u64 {
            return Err(Error::TooLarge(format!("Z_{n}")));
        }
        Ok(Self::wrap(n as usize, Repr::Cyclic(n)))
    }

    /// Builds a group from a full addition table and checks every axiom.
    pub fn from_table(size: usize, add: Vec<Elem>) -> Result<Self> {
        if size == 0 || add.len() != size * size {
            return Err(Error::InvalidTable("addition table has the wrong size".into()));
        }
        if add.iter().any(|&x| x as usize >= size) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        let g = Self::from_table_unchecked(size, add)?;
        g.check_axioms()?;
        Ok(g)
    }

    pub(crate) fn from_table_unchecked(size: usize, add: Vec<Elem>) -> Result<Self> {
        let mut neg = vec![0; size];
        for a in 0..size {
            match (0..size).find(|&b| add[a * size + b] == 0) {
                Some(b) => neg[a] = b as Elem,
                None => return Err(Error::InvalidTable(format!("{a} has no inverse"))),
            }
        }
        Ok(Self::wrap(size, Repr::Table { add, neg }))
    }

    pub fn product(g: &Self, h: &Self) -> Result<Self> {
        let size = g
            .size()
            .checked_mul(h.size())
            .filter(|&s| s <= u32::MAX as usize)
            .ok_or_else(|| Error::TooLarge("group product".into()))?;
        Ok(Self::wrap(size, Repr::Product(g.clone(), h.clone())))
    }

    pub fn power(g: &Self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Precondition("power must be at least 1".into()));
        }
        let size = (g.size() as u64)
            .checked_pow(t as u32)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or_else(|| Error::TooLarge("group power".into()))?;
        Ok(Self::wrap(size as usize, Repr::Power(g.clone(), t)))
    }

    pub(crate) fn of_ring(r: &FiniteRing) -> Self {
        Self::wrap(r.size(), Repr::Ring(r.clone()))
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.repr {
            Repr::Cyclic(n) => ((a as u64 + b as u64) % n) as Elem,
            Repr::Table { add, .. } => add[a as usize * self.0.size + b as usize],
            Repr::Product(g, h) => {
                let m = h.size() as Elem;
                g.add(a / m, b / m) * m + h.add(a % m, b % m)
            }
            Repr::Power(g, t) => {
                let m = g.size() as Elem;
                let (mut a, mut b) = (a, b);
                let (mut out, mut place) = (0, 1);
                for _ in 0..*t {
                    out += g.add(a % m, b % m) * place;
                    a /= m;
                    b /= m;
                    place = place.wrapping_mul(m);
                }
                out
            }
            Repr::Ring(r) => r.add(a, b),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.repr {
            Repr::Cyclic(n) => ((n - a as u64) % n) as Elem,
            Repr::Table { neg, .. } => neg[a as usize],
            Repr::Product(g, h) => {
                let m = h.size() as Elem;
                g.neg(a / m) * m + h.neg(a % m)
            }
            Repr::Power(g, t) => {
                let m = g.size() as Elem;
                let mut a = a;
                let (mut out, mut place) = (0, 1);
                for _ in 0..*t {
                    out += g.neg(a % m) * place;
                    a /= m;
                    place = place.wrapping_mul(m);
                }
                out
            }
            Repr::Ring(r) => r.neg(a),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `k·a` by double-and-add.
    pub fn mul_int(&self, a: Elem, mut k: u64) -> Elem {
        let (mut acc, mut base) = (0, a);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Additive order of `a`.
    pub fn order(&self, a: Elem) -> u64 {
        let (mut x, mut k) = (a, 1u64);
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// Components of a `Power` or `Product` encoding; the caller knows the shape.
    pub fn split_power(&self, a: Elem, base: usize, t: usize) -> Vec<Elem> {
        let mut out = vec![0; t];
        let mut a = a as usize;
        for slot in out.iter_mut().rev() {
            *slot = (a % base) as Elem;
            a /= base;
        }
        out
    }

    pub fn join_power(parts: &[Elem], base: usize) -> Elem {
        parts.iter().fold(0usize, |acc, &p| acc * base + p as usize) as Elem
    }

    /// Invariant factors `d1 | d2 | ...` with every `d > 1`; empty for the trivial group.
    pub fn invariant_factors(&self) -> &[u64] {
        self.0.invariants.get_or_init(|| self.compute_invariants())
    }

    fn compute_invariants(&self) -> Vec<u64> {
        let n = self.size() as u64;
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, e) in factorize(n) {
            // counts[j] = |{g : p^j g = 0}|
            let full = p.pow(e);
            let mut counts = vec![1u64];
            let mut pj = 1u64;
            while *counts.last().unwrap() < full {
                pj *= p;
                let c = (0..self.size() as Elem)
                    .filter(|&g| self.mul_int(g, pj) == 0)
                    .count() as u64;
                counts.push(c);
            }
            // ranks[j] = number of cyclic factors of exponent > j
            let ranks: Vec<u32> = counts
                .windows(2)
                .map(|w| (w[1] / w[0]).ilog(p))
                .collect();
            let mut exps = Vec::new();
            for (j, &r) in ranks.iter().enumerate() {
                let next = ranks.get(j + 1).copied().unwrap_or(0);
                for _ in 0..(r - next) {
                    exps.push(j as u32 + 1);
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push((p, exps));
        }
        let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for (p, exps) in &per_prime {
            for (i, &e) in exps.iter().enumerate() {
                out[len - 1 - i] *= p.pow(e);
            }
        }
        out
    }

    /// A generating set, chosen greedily by smallest index.
    pub fn generators(&self) -> &[Elem] {
        self.0.generators.get_or_init(|| {
            let n = self.size();
            let mut inside = vec![false; n];
            inside[0] = true;
            let mut members = vec![0 as Elem];
            let mut gens = Vec::new();
            for g in 0..n as Elem {
                if inside[g as usize] {
                    continue;
                }
                gens.push(g);
                let mut fresh = Vec::new();
                let mut mult = g;
                while !inside[mult as usize] {
                    for &h in &members {
                        let s = self.add(h, mult);
                        if !inside[s as usize] {
                            inside[s as usize] = true;
                            fresh.push(s);
                        }
                    }
                    mult = self.add(mult, g);
                }
                members.extend(fresh);
            }
            gens
        })
    }

    /// Exhaustive check of the abelian group axioms.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.size() as Elem;
        for a in 0..n {
            if self.add(a, 0) != a || self.add(0, a) != a {
                return Err(Error::InvalidTable("0 is not the identity".into()));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(Error::InvalidTable(format!("{a} has no inverse")));
            }
            for b in 0..n {
                let ab = self.add(a, b);
                if ab != self.add(b, a) {
                    return Err(Error::InvalidTable("addition is not commutative".into()));
                }
                for c in 0..n {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return Err(Error::InvalidTable("addition is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Subgroup on the sorted member list, with its embedding into `self`.
    pub fn subgroup(&self, members: &[Elem]) -> Result<(Self, Vec<Elem>)> {
        let mut emb = members.to_vec();
        emb.sort_unstable();
        emb.dedup();
        if emb.first() != Some(&0) {
            return Err(Error::Precondition("subgroup must contain 0".into()));
        }
        let mut index = vec![u32::MAX; self.size()];
        for (i, &g) in emb.iter().enumerate() {
            index[g as usize] = i as Elem;
        }
        let m = emb.len();
        let mut add = Vec::with_capacity(m * m);
        for &a in &emb {
            for &b in &emb {
                let s = index[self.add(a, b) as usize];
                if s == u32::MAX {
                    return Err(Error::Precondition("subset is not closed under addition".into()));
                }
                add.push(s);
            }
        }
        Ok((Self::from_table_unchecked(m, add)?, emb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_invariants() {
        let g = FiniteAbelianGroup::cyclic(12).unwrap();
        assert_eq!(g.invariant_factors(), &[12]);
        assert_eq!(g.order(3), 4);
        assert_eq!(g.mul_int(5, 3), 3);
        assert_eq!(g.generators(), &[1]);
    }

    #[test]
    fn product_invariants() {
        let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        let z3 = FiniteAbelianGroup::cyclic(3).unwrap();
        let g = FiniteAbelianGroup::product(&z2, &z4).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 4]);
        let h = FiniteAbelianGroup::product(&g, &z3).unwrap();
        assert_eq!(h.invariant_factors(), &[2, 12]);
        assert_eq!(h.invariant_factors().iter().product::<u64>(), 24);
        let p = FiniteAbelianGroup::power(&z2, 3).unwrap();
        assert_eq!(p.invariant_factors(), &[2, 2, 2]);
        p.check_axioms().unwrap();
        assert_eq!(p.generators().len(), 3);
    }

    #[test]
    fn trivial_group() {
        let g = FiniteAbelianGroup::cyclic(1).unwrap();
        assert!(g.invariant_factors().is_empty());
        assert!(g.generators().is_empty());
    }

    #[test]
    fn table_validation() {
        // Z_3 by table
        let add = vec![0, 1, 2, 1, 2, 0, 2, 0, 1];
        let g = FiniteAbelianGroup::from_table(3, add).unwrap();
        assert_eq!(g.neg(1), 2);
        // not associative / no identity
        let bad = vec![1, 0, 0, 1];
        assert!(FiniteAbelianGroup::from_table(2, bad).is_err());
    }

    #[test]
    fn subgroup_embedding() {
        let g = FiniteAbelianGroup::cyclic(6).unwrap();
        let (h, emb) = g.subgroup(&[0, 2, 4]).unwrap();
        assert_eq!(emb, vec![0, 2, 4]);
        assert_eq!(h.add(1, 2), 0);
        assert!(g.subgroup(&[0, 1]).is_err());
    }
}
