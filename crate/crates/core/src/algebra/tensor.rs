use std::collections::VecDeque;

use super::group::Elem;
use super::ring::{FiniteRing, MAX_TABLE_RING};
use super::smith::smith;
use super::spec::RingSpec;
use crate::error::{Error, Result};

/// R ⊗_Z S with its projection `proj[r * |S| + s]` sending a pure pair to its class.
#[derive(Clone, Debug)]
pub struct TensorRing {
    pub ring: FiniteRing,
    pub projection: Vec<Elem>,
    /// Invariant factors of the additive group, as produced by the Smith form.
    pub invariants: Vec<u64>,
}

impl TensorRing {
    pub fn class(&self, r: Elem, s: Elem, s_size: usize) -> Elem {
        self.projection[r as usize * s_size + s as usize]
    }
}

pub fn tensor_ring(r: &FiniteRing, s: &FiniteRing) -> Result<TensorRing> {
    let (nr, ns) = (r.size(), s.size());
    let gens = nr * ns;
    let id = |a: Elem, b: Elem| a as usize * ns + b as usize;
    let gr = r.additive_group();
    let gs = s.additive_group();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    let relation = |terms: &[(usize, i128)]| {
        let mut row = vec![0i128; gens];
        for &(c, v) in terms {
            row[c] += v;
        }
        row
    };
    for b in s.elements() {
        rows.push(relation(&[(id(0, b), 1)]));
    }
    for a in r.elements() {
        rows.push(relation(&[(id(a, 0), 1)]));
    }
    for a in r.elements() {
        for b in s.elements() {
            for &g in gr.generators() {
                rows.push(relation(&[(id(r.add(a, g), b), 1), (id(a, b), -1), (id(g, b), -1)]));
            }
            for &h in gs.generators() {
                rows.push(relation(&[(id(a, s.add(b, h)), 1), (id(a, b), -1), (id(a, h), -1)]));
            }
        }
    }
    rows.retain(|row| row.iter().any(|&x| x != 0));
    let snf = smith(rows, gens)?;
    // generators beyond the rank would be free; finite groups make every column pivotal
    if snf.diagonal.len() != gens {
        return Err(Error::Precondition("tensor relations do not give a finite group".into()));
    }
    let comps: Vec<(usize, i128)> = snf
        .diagonal
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1)
        .map(|(i, &d)| (i, d))
        .collect();
    let size: u128 = comps.iter().map(|&(_, d)| d as u128).product();
    if size > MAX_TABLE_RING as u128 {
        return Err(Error::TooLarge(format!("tensor product with {size} elements")));
    }
    let size = size as usize;
    let radices: Vec<u64> = comps.iter().map(|&(_, d)| d as u64).collect();
    let encode = |digits: &[u64]| -> Elem {
        digits.iter().zip(&radices).fold(0u64, |acc, (&x, &d)| acc * d + x) as Elem
    };
    let decode = |mut x: u64| -> Vec<u64> {
        let mut out = vec![0; radices.len()];
        for (slot, &d) in out.iter_mut().zip(&radices).rev() {
            *slot = x % d;
            x /= d;
        }
        out
    };
    let projection: Vec<Elem> = (0..gens)
        .map(|g| {
            let digits: Vec<u64> = comps
                .iter()
                .map(|&(i, d)| snf.v[g][i].rem_euclid(d) as u64)
                .collect();
            encode(&digits)
        })
        .collect();
    let add = |x: Elem, y: Elem| -> Elem {
        let (a, b) = (decode(x as u64), decode(y as u64));
        let sum: Vec<u64> = a.iter().zip(&b).zip(&radices).map(|((&u, &v), &d)| (u + v) % d).collect();
        encode(&sum)
    };
    // express every class as a sum of pure tensors
    let mut rep: Vec<Option<(Elem, usize)>> = vec![None; size];
    let mut reached = vec![false; size];
    reached[0] = true;
    let mut queue = VecDeque::from([0 as Elem]);
    let mut pure: Vec<usize> = (0..gens).collect();
    pure.sort_by_key(|&g| projection[g]);
    pure.dedup_by_key(|g| projection[*g]);
    while let Some(x) = queue.pop_front() {
        for &g in &pure {
            let y = add(x, projection[g]);
            if !reached[y as usize] {
                reached[y as usize] = true;
                rep[y as usize] = Some((x, g));
                queue.push_back(y);
            }
        }
    }
    let terms = |mut x: Elem| -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((prev, g)) = rep[x as usize] {
            out.push(g);
            x = prev;
        }
        out
    };
    let reps: Vec<Vec<usize>> = (0..size as Elem).map(terms).collect();
    let mut add_table = Vec::with_capacity(size * size);
    let mut mul_table = Vec::with_capacity(size * size);
    for x in 0..size as Elem {
        for y in 0..size as Elem {
            add_table.push(add(x, y));
            let mut acc = 0;
            for &g in &reps[x as usize] {
                for &h in &reps[y as usize] {
                    let (a, b) = ((g / ns) as Elem, (g % ns) as Elem);
                    let (c, d) = ((h / ns) as Elem, (h % ns) as Elem);
                    acc = add(acc, projection[id(r.mul(a, c), s.mul(b, d))]);
                }
            }
            mul_table.push(acc);
        }
    }
    let one = projection[id(r.one(), s.one())];
    let spec = RingSpec::Derived(format!("TENSOR({}, {})", r.spec(), s.spec()));
    let ring = FiniteRing::from_tables_unchecked(spec, add_table, mul_table, one)?;
    Ok(TensorRing { ring, projection, invariants: radices })
}
