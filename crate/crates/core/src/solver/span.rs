//! Row arithmetic over a faithful scalar ring and left spans of rows.

use std::collections::HashMap;

use crate::algebra::{Elem, FiniteRing};
use crate::error::{Error, Result};

pub type Row = Vec<Elem>;

/// Explicit span sets larger than this are refused.
pub const MAX_SPAN_SET: usize = 1 << 22;
/// Candidate lists larger than this are refused.
pub const MAX_CANDIDATES: usize = 1 << 20;

/// Tabulated ring arithmetic on rows of a fixed width.
pub struct RowArith {
    pub q: usize,
    pub width: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    /// Multiplicative inverses when the ring is a field.
    inv: Option<Vec<Elem>>,
    pub one: Elem,
}

impl RowArith {
    pub fn new(s: &FiniteRing, width: usize) -> Result<Self> {
        let q = s.size();
        if (q as u128).checked_pow(width as u32).is_none_or(|x| x > u64::MAX as u128) {
            return Err(Error::TooLarge(format!("{q}^{width} rows do not fit in 64 bits")));
        }
        let mut add = Vec::with_capacity(q * q);
        let mut mul = Vec::with_capacity(q * q);
        for a in s.elements() {
            for b in s.elements() {
                add.push(s.add(a, b));
                mul.push(s.mul(a, b));
            }
        }
        let neg = s.elements().map(|a| s.neg(a)).collect();
        let inv = s.is_field().then(|| {
            s.elements()
                .map(|a| s.elements().find(|&b| s.mul(a, b) == s.one()).unwrap_or(0))
                .collect()
        });
        Ok(RowArith { q, width, add, mul, neg, inv, one: s.one() })
    }

    pub fn is_field(&self) -> bool {
        self.inv.is_some()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// First coordinate most significant.
    pub fn encode(&self, row: &[Elem]) -> u64 {
        row.iter().fold(0u64, |acc, &x| acc * self.q as u64 + x as u64)
    }

    pub fn decode(&self, mut code: u64) -> Row {
        let mut row = vec![0; self.width];
        for slot in row.iter_mut().rev() {
            *slot = (code % self.q as u64) as Elem;
            code /= self.q as u64;
        }
        row
    }

    pub fn unit(&self, j: usize) -> Row {
        let mut row = vec![0; self.width];
        row[j] = self.one;
        row
    }

    pub fn row_add(&self, a: &[Elem], b: &[Elem]) -> Row {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn scale(&self, s: Elem, a: &[Elem]) -> Row {
        a.iter().map(|&x| self.mul(s, x)).collect()
    }

    /// Left span of `rows`.
    pub fn span(&self, rows: &[Row]) -> Result<Span> {
        if self.is_field() {
            let mut basis = Echelon::default();
            for r in rows {
                basis.insert(self, r.clone());
            }
            Ok(Span::Basis(basis))
        } else {
            let mut set = vec![0u64];
            for r in rows {
                let cyc = self.cyclic(r);
                if cyc.len() == 1 || cyc.iter().all(|c| set.binary_search(c).is_ok()) {
                    continue;
                }
                let decoded: Vec<Row> = set.iter().map(|&c| self.decode(c)).collect();
                let mut next: Vec<u64> = Vec::with_capacity(set.len() * cyc.len());
                for x in &decoded {
                    for &c in &cyc {
                        next.push(self.encode(&self.row_add(x, &self.decode(c))));
                    }
                }
                next.sort_unstable();
                next.dedup();
                if next.len() > MAX_SPAN_SET {
                    return Err(Error::SearchBound(format!("span with more than {MAX_SPAN_SET} rows")));
                }
                set = next;
            }
            Ok(Span::Set(set))
        }
    }

    /// Sorted codes of S·row.
    fn cyclic(&self, row: &[Elem]) -> Vec<u64> {
        let mut out: Vec<u64> = (0..self.q as Elem).map(|s| self.encode(&self.scale(s, row))).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// One generator per maximal cyclic submodule of `span`, ascending by code. A zero span
    /// yields the zero row alone.
    pub fn candidates(&self, span: &Span) -> Result<Vec<Row>> {
        let mut out = match span {
            Span::Basis(b) => {
                if b.rows.is_empty() {
                    return Ok(vec![vec![0; self.width]]);
                }
                let r = b.rows.len();
                let count = (self.q as u128).pow(r as u32).saturating_sub(1) / (self.q as u128 - 1);
                if count > MAX_CANDIDATES as u128 {
                    return Err(Error::SearchBound(format!("{count} candidate rows")));
                }
                // coefficient vectors whose first nonzero entry is 1
                let mut out = Vec::with_capacity(count as usize);
                for lead in 0..r {
                    let free = r - lead - 1;
                    for idx in 0..(self.q as u64).pow(free as u32) {
                        let mut row = b.rows[lead].clone();
                        let mut x = idx;
                        for j in (lead + 1..r).rev() {
                            let c = (x % self.q as u64) as Elem;
                            x /= self.q as u64;
                            if c != 0 {
                                row = self.row_add(&row, &self.scale(c, &b.rows[j]));
                            }
                        }
                        out.push(row);
                    }
                }
                out
            }
            Span::Set(set) => {
                if set.len() == 1 {
                    return Ok(vec![vec![0; self.width]]);
                }
                // least generator of each distinct cyclic submodule
                let mut modules: HashMap<Vec<u64>, u64> = HashMap::new();
                for &y in set.iter().skip(1) {
                    let c = self.cyclic(&self.decode(y));
                    modules.entry(c).or_insert(y);
                }
                let mut by_size: Vec<(Vec<u64>, u64)> = modules.into_iter().collect();
                by_size.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.1.cmp(&b.1)));
                let mut covered: HashMap<u64, usize> = HashMap::new();
                let mut out = Vec::new();
                let mut i = 0;
                while i < by_size.len() {
                    let size = by_size[i].0.len();
                    let mut j = i;
                    while j < by_size.len() && by_size[j].0.len() == size {
                        j += 1;
                    }
                    for (_, g) in &by_size[i..j] {
                        if !covered.contains_key(g) {
                            out.push(self.decode(*g));
                        }
                    }
                    for (m, _) in &by_size[i..j] {
                        for &x in m {
                            covered.entry(x).or_insert(size);
                        }
                    }
                    i = j;
                }
                if out.len() > MAX_CANDIDATES {
                    return Err(Error::SearchBound(format!("{} candidate rows", out.len())));
                }
                out
            }
        };
        out.sort_by_key(|r| self.encode(r));
        Ok(out)
    }

    /// Coefficients c with Σ c_i·gens_i = target, if any.
    pub fn express(&self, target: &[Elem], gens: &[Row]) -> Result<Option<Vec<Elem>>> {
        // first level at which each span element appears, with the coefficient used there
        let mut seen: HashMap<u64, (usize, Elem)> = HashMap::new();
        seen.insert(0, (usize::MAX, 0));
        let mut level: Vec<u64> = vec![0];
        for (i, g) in gens.iter().enumerate() {
            let mut fresh = Vec::new();
            for &x in &level {
                let xr = self.decode(x);
                for s in 1..self.q as Elem {
                    let y = self.encode(&self.row_add(&xr, &self.scale(s, g)));
                    if let std::collections::hash_map::Entry::Vacant(v) = seen.entry(y) {
                        v.insert((i, s));
                        fresh.push(y);
                    }
                }
            }
            level.extend(fresh);
            if level.len() > MAX_SPAN_SET {
                return Err(Error::SearchBound(format!("span with more than {MAX_SPAN_SET} rows")));
            }
        }
        let mut x = self.encode(target);
        let Some(_) = seen.get(&x) else { return Ok(None) };
        let mut coeffs = vec![0; gens.len()];
        while x != 0 {
            let (i, s) = seen[&x];
            coeffs[i] = s;
            let back = self.row_add(&self.decode(x), &self.scale(self.neg(s), &gens[i]));
            x = self.encode(&back);
        }
        Ok(Some(coeffs))
    }
}

/// Reduced row echelon basis over a field.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pub rows: Vec<Row>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    fn reduce(&self, ar: &RowArith, mut row: Row) -> Row {
        for (b, &p) in self.rows.iter().zip(&self.pivots) {
            let c = row[p];
            if c != 0 {
                row = ar.row_add(&row, &ar.scale(ar.neg(c), b));
            }
        }
        row
    }

    fn insert(&mut self, ar: &RowArith, row: Row) {
        let row = self.reduce(ar, row);
        let Some(p) = row.iter().position(|&x| x != 0) else { return };
        let inv = ar.inv.as_ref().expect("field arithmetic")[row[p] as usize];
        let row = ar.scale(inv, &row);
        for b in self.rows.iter_mut() {
            let c = b[p];
            if c != 0 {
                *b = ar.row_add(b, &ar.scale(ar.neg(c), &row));
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, row);
        self.pivots.insert(at, p);
    }
}

/// A left submodule of S^width.
#[derive(Clone, Debug)]
pub enum Span {
    Basis(Echelon),
    /// Sorted codes of every member.
    Set(Vec<u64>),
}

impl Span {
    pub fn size(&self, q: usize) -> u128 {
        match self {
            Span::Basis(b) => (q as u128).saturating_pow(b.rows.len() as u32),
            Span::Set(s) => s.len() as u128,
        }
    }

    pub fn contains(&self, ar: &RowArith, row: &[Elem]) -> bool {
        match self {
            Span::Basis(b) => b.reduce(ar, row.to_vec()).iter().all(|&x| x == 0),
            Span::Set(s) => s.binary_search(&ar.encode(row)).is_ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ring_spec;

    #[test]
    fn field_candidates_are_points() {
        let ar = RowArith::new(&parse_ring_spec("GF 3 1").unwrap(), 3).unwrap();
        let full = ar.span(&[ar.unit(0), ar.unit(1), ar.unit(2)]).unwrap();
        assert_eq!(full.size(3), 27);
        assert_eq!(ar.candidates(&full).unwrap().len(), 13);
        let zero = ar.span(&[]).unwrap();
        assert_eq!(ar.candidates(&zero).unwrap(), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn ring_candidates_z4() {
        let ar = RowArith::new(&parse_ring_spec("Z 4").unwrap(), 2).unwrap();
        let full = ar.span(&[ar.unit(0), ar.unit(1)]).unwrap();
        assert_eq!(full.size(4), 16);
        // free cyclic submodules of Z4^2: generators with a unit coordinate, 12 of them, 2 per module
        assert_eq!(ar.candidates(&full).unwrap().len(), 6);
        let two = ar.span(&[vec![2, 0]]).unwrap();
        assert_eq!(two.size(4), 2);
        assert_eq!(ar.candidates(&two).unwrap(), vec![vec![2, 0]]);
    }

    #[test]
    fn express_recovers_combination() {
        let ar = RowArith::new(&parse_ring_spec("Z 6").unwrap(), 3).unwrap();
        let gens = vec![vec![1, 2, 0], vec![0, 3, 1]];
        let target = ar.row_add(&ar.scale(5, &gens[0]), &ar.scale(2, &gens[1]));
        let c = ar.express(&target, &gens).unwrap().unwrap();
        let back = ar.row_add(&ar.scale(c[0], &gens[0]), &ar.scale(c[1], &gens[1]));
        assert_eq!(back, target);
        assert!(ar.express(&[0, 0, 1], &gens[..1]).unwrap().is_none());
    }
}
