use super::group::Elem;
use super::ring::FiniteRing;
use crate::error::{Error, Result};

/// A map between finite rings given by its element table.
#[derive(Clone, Debug)]
pub struct RingHom {
    pub source: FiniteRing,
    pub target: FiniteRing,
    pub map: Vec<Elem>,
}

impl RingHom {
    pub fn new(source: FiniteRing, target: FiniteRing, map: Vec<Elem>) -> Self {
        RingHom { source, target, map }
    }

    pub fn identity(r: &FiniteRing) -> Self {
        RingHom::new(r.clone(), r.clone(), r.elements().collect())
    }

    /// Like `new`, but rejects maps that are not homomorphisms.
    pub fn checked(source: FiniteRing, target: FiniteRing, map: Vec<Elem>) -> Result<Self> {
        let h = RingHom::new(source, target, map);
        if h.is_valid() {
            Ok(h)
        } else {
            Err(Error::InvalidHom)
        }
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a as usize]
    }

    /// True iff the map preserves +, · and 1. Additivity is checked against a generating
    /// set of the source group and multiplicativity on pairs of generators, which is exact
    /// by bilinearity.
    pub fn is_valid(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.map.len() != s.size() || self.map.iter().any(|&x| x as usize >= t.size()) {
            return false;
        }
        if self.apply(s.one()) != t.one() {
            return false;
        }
        let grp = s.additive_group();
        let gens = grp.generators();
        for a in s.elements() {
            for &g in gens {
                if self.apply(s.add(a, g)) != t.add(self.apply(a), self.apply(g)) {
                    return false;
                }
            }
        }
        gens.iter().all(|&a| {
            gens.iter()
                .all(|&b| self.apply(s.mul(a, b)) == t.mul(self.apply(a), self.apply(b)))
        })
    }

    /// `other ∘ self`
    pub fn then(&self, other: &RingHom) -> RingHom {
        let map = self.map.iter().map(|&x| other.apply(x)).collect();
        RingHom::new(self.source.clone(), other.target.clone(), map)
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &x in &self.map {
            hit[x as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        self.map.iter().all(|&x| !std::mem::replace(&mut hit[x as usize], true))
    }

    /// Least preimage of every target element, if the map is surjective.
    pub fn section(&self) -> Option<Vec<Elem>> {
        let mut pre = vec![u32::MAX; self.target.size()];
        for (a, &x) in self.map.iter().enumerate().rev() {
            pre[x as usize] = a as Elem;
        }
        pre.iter().all(|&x| x != u32::MAX).then_some(pre)
    }
}

/// Validates a hom; convenience free function mirroring the operation name.
pub fn check_ring_hom(phi: &RingHom) -> bool {
    phi.is_valid()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ring_spec;

    fn full_scan(h: &RingHom) -> bool {
        let (s, t) = (&h.source, &h.target);
        h.apply(s.one()) == t.one()
            && s.elements().all(|a| {
                s.elements().all(|b| {
                    h.apply(s.add(a, b)) == t.add(h.apply(a), h.apply(b))
                        && h.apply(s.mul(a, b)) == t.mul(h.apply(a), h.apply(b))
                })
            })
    }

    #[test]
    fn reductions() {
        let z6 = parse_ring_spec("Z 6").unwrap();
        let z3 = parse_ring_spec("Z 3").unwrap();
        let z4 = parse_ring_spec("Z 4").unwrap();
        let z2 = parse_ring_spec("Z 2").unwrap();
        let h = RingHom::new(z6.clone(), z3, (0..6).map(|x| x % 3).collect());
        assert!(check_ring_hom(&h) && full_scan(&h) && h.is_surjective());
        let h = RingHom::new(z4.clone(), z2.clone(), (0..4).map(|x| x % 2).collect());
        assert!(check_ring_hom(&h));
        let bad = RingHom::new(z2, z4, vec![0, 2]);
        assert!(!check_ring_hom(&bad) && !full_scan(&bad));
        // additive but not multiplicative: x -> 3x on Z_6 sends 1 to 3
        let bad = RingHom::new(z6.clone(), z6, (0..6).map(|x| (3 * x) % 6).collect());
        assert!(!check_ring_hom(&bad));
    }

    #[test]
    fn generator_check_matches_full_scan() {
        let z4 = parse_ring_spec("Z 4").unwrap();
        let z2 = parse_ring_spec("Z 2").unwrap();
        // every map Z_4 -> Z_2 and Z_2 -> Z_4
        for code in 0..16u32 {
            let map: Vec<Elem> = (0..4).map(|i| (code >> i) & 1).collect();
            let h = RingHom::new(z4.clone(), z2.clone(), map);
            assert_eq!(h.is_valid(), full_scan(&h));
        }
        for code in 0..16u32 {
            let map: Vec<Elem> = vec![code % 4, code / 4];
            let h = RingHom::new(z2.clone(), z4.clone(), map);
            assert_eq!(h.is_valid(), full_scan(&h));
        }
    }
}
