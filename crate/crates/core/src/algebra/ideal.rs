//! Two-sided ideals, quotients, ring isomorphism search, and matrix-field quotients.

use super::group::Elem;
use super::hom::RingHom;
use super::numtheory::prime_power;
use super::ring::FiniteRing;
use super::spec::RingSpec;
use crate::error::{Error, Result};

/// Default largest ring handed to the exhaustive quotient search.
pub const DEFAULT_SEARCH_BOUND: usize = 256;
/// Largest ideal lattice enumerated by `all_ideals`.
pub const MAX_IDEALS: usize = 4096;

/// Membership mask of a two-sided ideal.
pub type IdealMask = Vec<bool>;

fn additive_closure(r: &FiniteRing, mask: &mut IdealMask, members: &mut Vec<Elem>, gens: &[Elem]) {
    for &g in gens {
        if mask[g as usize] {
            continue;
        }
        let base = members.clone();
        let mut mult = g;
        while !mask[mult as usize] {
            for &h in &base {
                let s = r.add(h, mult);
                if !mask[s as usize] {
                    mask[s as usize] = true;
                    members.push(s);
                }
            }
            mult = r.add(mult, g);
        }
    }
}

/// The two-sided ideal generated by `a`: additive span of all x·a·y.
pub fn principal_ideal(r: &FiniteRing, a: Elem) -> IdealMask {
    ideal_generated(r, &[a])
}

pub fn ideal_generated(r: &FiniteRing, elems: &[Elem]) -> IdealMask {
    let n = r.size();
    let mut seen = vec![false; n];
    let mut gens = Vec::new();
    for &a in elems {
        for x in r.elements() {
            let xa = r.mul(x, a);
            for y in r.elements() {
                let v = r.mul(xa, y);
                if !std::mem::replace(&mut seen[v as usize], true) {
                    gens.push(v);
                }
            }
        }
    }
    let mut mask = vec![false; n];
    mask[0] = true;
    let mut members = vec![0];
    additive_closure(r, &mut mask, &mut members, &gens);
    mask
}

pub fn ideal_sum(r: &FiniteRing, a: &IdealMask, b: &IdealMask) -> IdealMask {
    let mut out = vec![false; r.size()];
    let bs: Vec<Elem> = r.elements().filter(|&y| b[y as usize]).collect();
    for x in r.elements().filter(|&x| a[x as usize]) {
        for &y in &bs {
            out[r.add(x, y) as usize] = true;
        }
    }
    out
}

/// Every two-sided ideal, as sums of principal ideals.
pub fn all_ideals(r: &FiniteRing) -> Result<Vec<IdealMask>> {
    let mut principals: Vec<IdealMask> = Vec::new();
    for a in r.elements() {
        let p = principal_ideal(r, a);
        if !principals.contains(&p) {
            principals.push(p);
        }
    }
    let mut ideals = principals.clone();
    let mut i = 0;
    while i < ideals.len() {
        for p in &principals {
            let s = ideal_sum(r, &ideals[i], p);
            if !ideals.contains(&s) {
                ideals.push(s);
                if ideals.len() > MAX_IDEALS {
                    return Err(Error::SearchBound("too many ideals".into()));
                }
            }
        }
        i += 1;
    }
    Ok(ideals)
}

fn is_proper(m: &IdealMask) -> bool {
    m.iter().any(|&x| !x)
}

fn subset(a: &IdealMask, b: &IdealMask) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}

pub fn maximal_ideals(r: &FiniteRing) -> Result<Vec<IdealMask>> {
    let proper: Vec<IdealMask> = all_ideals(r)?.into_iter().filter(is_proper).collect();
    Ok(proper
        .iter()
        .filter(|&i| !proper.iter().any(|j| j != i && subset(i, j)))
        .cloned()
        .collect())
}

/// R/I as a table ring together with the canonical surjection.
pub fn quotient(r: &FiniteRing, ideal: &IdealMask, label: &str) -> Result<RingHom> {
    let n = r.size();
    let members: Vec<Elem> = r.elements().filter(|&x| ideal[x as usize]).collect();
    let mut class = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for a in r.elements() {
        if class[a as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as Elem;
        reps.push(a);
        for &i in &members {
            class[r.add(a, i) as usize] = c;
        }
    }
    let m = reps.len();
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            add.push(class[r.add(a, b) as usize]);
            mul.push(class[r.mul(a, b) as usize]);
        }
    }
    let spec = RingSpec::Derived(format!("{}/{label}", r.spec()));
    let q = FiniteRing::from_tables_unchecked(spec, add, mul, class[r.one() as usize])?;
    Ok(RingHom::new(r.clone(), q, class))
}

/// Greedily grows `start` to a maximal ideal; a single ascending pass suffices.
fn maximal_over(r: &FiniteRing, start: IdealMask) -> Option<IdealMask> {
    if !is_proper(&start) {
        return None;
    }
    let mut j = start;
    for a in r.elements() {
        if j[a as usize] {
            continue;
        }
        let k = ideal_sum(r, &j, &principal_ideal(r, a));
        if is_proper(&k) {
            j = k;
        }
    }
    Some(j)
}

/// The subring generated by `gens`.
pub fn generated_subring(r: &FiniteRing, gens: &[Elem]) -> Vec<bool> {
    let mut mask = vec![false; r.size()];
    let mut known = Vec::new();
    for x in [0, r.one()].into_iter().chain(gens.iter().copied()) {
        if !mask[x as usize] {
            mask[x as usize] = true;
            known.push(x);
        }
    }
    let mut i = 0;
    while i < known.len() {
        let x = known[i];
        for j in 0..=i {
            let y = known[j];
            for z in [r.add(x, y), r.mul(x, y), r.mul(y, x)] {
                if !mask[z as usize] {
                    mask[z as usize] = true;
                    known.push(z);
                }
            }
        }
        i += 1;
    }
    mask
}

/// Ring generators chosen greedily by smallest index.
pub fn ring_generators(r: &FiniteRing) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut mask = generated_subring(r, &gens);
    while let Some(x) = r.elements().find(|&x| !mask[x as usize]) {
        gens.push(x);
        mask = generated_subring(r, &gens);
    }
    gens
}

/// Isomorphism-invariant tag of an element: additive order, multiplicative order
/// (units) or nilpotency index, and idempotency.
fn signature(r: &FiniteRing, x: Elem) -> (u64, u64, u64, bool) {
    let add_order = r.additive_group().order(x);
    let mut mult_order = 0;
    let mut nil = 0;
    if r.is_unit(x) {
        let (mut y, mut k) = (x, 1);
        while y != r.one() {
            y = r.mul(y, x);
            k += 1;
        }
        mult_order = k;
    } else {
        let (mut y, mut k) = (x, 1);
        while y != 0 && k <= r.size() as u64 {
            y = r.mul(y, x);
            k += 1;
        }
        if y == 0 {
            nil = k;
        }
    }
    (add_order, mult_order, nil, r.mul(x, x) == x)
}

fn extend(
    a: &FiniteRing,
    b: &FiniteRing,
    map: &mut [Option<Elem>],
    known: &mut Vec<Elem>,
    mut i: usize,
) -> bool {
    while i < known.len() {
        let x = known[i];
        for j in 0..=i {
            let y = known[j];
            let (fx, fy) = (map[x as usize].unwrap(), map[y as usize].unwrap());
            for (z, fz) in [
                (a.add(x, y), b.add(fx, fy)),
                (a.mul(x, y), b.mul(fx, fy)),
                (a.mul(y, x), b.mul(fy, fx)),
            ] {
                match map[z as usize] {
                    None => {
                        map[z as usize] = Some(fz);
                        known.push(z);
                    }
                    Some(w) if w != fz => return false,
                    _ => {}
                }
            }
        }
        i += 1;
    }
    true
}

/// Searches for a unital ring homomorphism a → b by assigning images to ring generators
/// and closing under + and ·. With `injective`, candidate images must share the element
/// signature and the result must be injective.
pub fn find_homomorphism(a: &FiniteRing, b: &FiniteRing, injective: bool) -> Option<RingHom> {
    if injective && a.size() > b.size() {
        return None;
    }
    let gens = ring_generators(a);
    let sig_b: Vec<_> = if injective {
        b.elements().map(|y| signature(b, y)).collect()
    } else {
        Vec::new()
    };
    let cands: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| {
            if injective {
                let s = signature(a, g);
                b.elements().filter(|&y| sig_b[y as usize] == s).collect()
            } else {
                b.elements().collect()
            }
        })
        .collect();
    let mut map = vec![None; a.size()];
    map[0] = Some(0);
    let mut known = vec![0];
    if a.one() != 0 {
        map[a.one() as usize] = Some(b.one());
        known.push(a.one());
    } else if b.one() != 0 {
        return None;
    }
    if !extend(a, b, &mut map, &mut known, 0) {
        return None;
    }
    fn rec(
        a: &FiniteRing,
        b: &FiniteRing,
        gens: &[Elem],
        cands: &[Vec<Elem>],
        depth: usize,
        map: &[Option<Elem>],
        known: &[Elem],
        injective: bool,
    ) -> Option<RingHom> {
        if depth == gens.len() {
            let table: Vec<Elem> = map.iter().map(|x| x.expect("generators cover the ring")).collect();
            let h = RingHom::new(a.clone(), b.clone(), table);
            return (h.is_valid() && (!injective || h.is_injective())).then_some(h);
        }
        let g = gens[depth];
        if let Some(img) = map[g as usize] {
            return cands[depth]
                .contains(&img)
                .then(|| rec(a, b, gens, cands, depth + 1, map, known, injective))
                .flatten();
        }
        for &y in &cands[depth] {
            let mut m = map.to_vec();
            let mut k = known.to_vec();
            m[g as usize] = Some(y);
            let start = k.len();
            k.push(g);
            // the new element also combines with everything already known
            if !extend(a, b, &mut m, &mut k, start) {
                continue;
            }
            if let Some(h) = rec(a, b, gens, cands, depth + 1, &m, &k, injective) {
                return Some(h);
            }
        }
        None
    }
    rec(a, b, &gens, &cands, 0, &map, &known, injective)
}

pub fn find_isomorphism(a: &FiniteRing, b: &FiniteRing) -> Option<RingHom> {
    if a.size() != b.size()
        || a.characteristic() != b.characteristic()
        || a.units().len() != b.units().len()
        || a.is_commutative() != b.is_commutative()
    {
        return None;
    }
    find_homomorphism(a, b, true)
}

/// A surjection R → M_t(F) onto a matrix ring over a finite field.
#[derive(Clone, Debug)]
pub struct MatrixFieldQuotient {
    pub t: usize,
    pub field: FiniteRing,
    /// `field` when t = 1, otherwise `M t (field)`.
    pub target: FiniteRing,
    pub hom: RingHom,
}

/// Finds t, F and a surjective hom R → M_t(F) through a maximal two-sided ideal.
/// With `prime`, the ideal is chosen to contain p·1 so that F has characteristic p.
pub fn find_matrix_field_quotient(
    r: &FiniteRing,
    prime: Option<u64>,
    bound: usize,
) -> Result<MatrixFieldQuotient> {
    if r.size() > bound {
        return Err(Error::SearchBound(format!(
            "ring has {} elements, bound is {bound}",
            r.size()
        )));
    }
    let start = match prime {
        Some(p) => ideal_generated(r, &[r.from_int(p as i64)]),
        None => {
            let mut m = vec![false; r.size()];
            m[0] = true;
            m
        }
    };
    let maximal = maximal_over(r, start).ok_or_else(|| {
        Error::Precondition(match prime {
            Some(p) => format!("no maximal ideal of {} contains {p}", r.spec()),
            None => "the zero ring has no maximal ideal".into(),
        })
    })?;
    let proj = quotient(r, &maximal, "max")?;
    let q = &proj.target;
    let center: Vec<Elem> = q
        .elements()
        .filter(|&z| q.elements().all(|x| q.mul(z, x) == q.mul(x, z)))
        .collect();
    let (p, s) = prime_power(center.len() as u64)
        .ok_or_else(|| Error::Precondition("center of a simple ring must be a field".into()))?;
    let qsize = center.len() as f64;
    let t = ((q.size() as f64).ln() / qsize.ln()).sqrt().round() as usize;
    if (center.len() as u64).pow((t * t) as u32) != q.size() as u64 {
        return Err(Error::Precondition("simple quotient has unexpected size".into()));
    }
    let field = FiniteRing::galois(p as u32, s, None)?;
    let target = if t == 1 { field.clone() } else { FiniteRing::matrix(&field, t)? };
    let iso = find_isomorphism(q, &target)
        .ok_or_else(|| Error::SearchBound("no isomorphism onto the matrix ring found".into()))?;
    Ok(MatrixFieldQuotient { t, field, target, hom: proj.then(&iso) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ring_spec;

    fn ring(s: &str) -> FiniteRing {
        parse_ring_spec(s).unwrap()
    }

    fn count(m: &IdealMask) -> usize {
        m.iter().filter(|&&x| x).count()
    }

    #[test]
    fn ideals_of_z12() {
        let r = ring("Z 12");
        // one ideal per divisor of 12
        assert_eq!(all_ideals(&r).unwrap().len(), 6);
        let mut max: Vec<usize> = maximal_ideals(&r).unwrap().iter().map(count).collect();
        max.sort();
        assert_eq!(max, vec![4, 6]);
    }

    #[test]
    fn matrix_ring_is_simple() {
        let r = ring("M 2 (GF 2 1)");
        assert_eq!(all_ideals(&r).unwrap().len(), 2);
    }

    #[test]
    fn z6_quotients() {
        let r = ring("Z 6");
        let q = find_matrix_field_quotient(&r, None, DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!((q.t, q.field.size()), (1, 2));
        assert!(q.hom.is_valid() && q.hom.is_surjective());
        let q3 = find_matrix_field_quotient(&r, Some(3), DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(q3.field.size(), 3);
        assert_eq!(q3.hom.map, vec![0, 1, 2, 0, 1, 2]);
        assert!(find_matrix_field_quotient(&r, Some(5), DEFAULT_SEARCH_BOUND).is_err());
    }

    #[test]
    fn field_and_local_ring() {
        let q = find_matrix_field_quotient(&ring("GF 5 1"), None, 256).unwrap();
        assert_eq!(q.t, 1);
        assert_eq!(q.hom.map, vec![0, 1, 2, 3, 4]);
        let r = ring("POLYQ 2 X^2");
        let q = find_matrix_field_quotient(&r, None, 256).unwrap();
        // a + bX ↦ a, with index a + 2b
        assert_eq!(q.hom.map, vec![0, 1, 0, 1]);
        assert!(find_matrix_field_quotient(&ring("Z 512"), None, 256).is_err());
    }

    #[test]
    fn matrix_quotients() {
        let r = ring("M 2 (Z 4)");
        let q = find_matrix_field_quotient(&r, None, 256).unwrap();
        assert_eq!((q.t, q.field.size()), (2, 2));
        assert!(q.hom.is_valid() && q.hom.is_surjective());
        let r = ring("PROD(M 2 (GF 2 1), GF 3 1)");
        let q = find_matrix_field_quotient(&r, Some(2), 256).unwrap();
        assert_eq!((q.t, q.field.size()), (2, 2));
        let q = find_matrix_field_quotient(&r, Some(3), 256).unwrap();
        assert_eq!((q.t, q.field.size()), (1, 3));
        let q = find_matrix_field_quotient(&ring("GF 2 2"), None, 256).unwrap();
        assert_eq!((q.t, q.field.size()), (1, 4));
        assert!(q.hom.is_injective());
    }

    #[test]
    fn isomorphisms() {
        assert!(find_isomorphism(&ring("PROD(Z 2, Z 3)"), &ring("Z 6")).is_some());
        assert!(find_isomorphism(&ring("Z 4"), &ring("POLYQ 2 X^2")).is_none());
        assert!(find_isomorphism(&ring("GF 3 2 X^2+X+2"), &ring("GF 3 2")).is_some());
        let m = ring("M 2 (GF 2 1)");
        assert!(find_isomorphism(&FiniteRing::opposite(&m), &m).is_some());
    }
}
