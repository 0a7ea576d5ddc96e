use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use super::group::{Elem, FiniteAbelianGroup};
use super::numtheory::is_prime;
use super::poly;
use super::spec::RingSpec;
use crate::error::{Error, Result};

/// Rings up to this size carry full operation tables.
pub const TABLE_CAP: usize = 256;
/// Largest ring built from explicit tables (quotients, tensor products).
pub const MAX_TABLE_RING: usize = 4096;
/// Largest structured ring.
pub const MAX_RING_SIZE: usize = 1 << 24;

/// A finite unital ring on the carrier `0..size`; zero is index 0.
#[derive(Clone)]
pub struct FiniteRing(Arc<RingInner>);

struct RingInner {
    spec: RingSpec,
    size: usize,
    one: Elem,
    arith: Arith,
    tables: Option<Tables>,
    characteristic: OnceLock<u64>,
    commutative: OnceLock<bool>,
    units: OnceLock<Vec<bool>>,
}

struct Tables {
    add: Vec<Elem>,
    neg: Vec<Elem>,
    mul: Vec<Elem>,
}

enum Arith {
    Cyclic(u64),
    /// GF(p)[X]/(modulus); element index is sum c_i p^i.
    Poly { p: u32, modulus: Vec<u32> },
    /// Row-major entries, first entry most significant.
    Matrix { base: FiniteRing, t: usize },
    Product(FiniteRing, FiniteRing),
    Opposite(FiniteRing),
    Table,
    /// Subring of End(G): element i is the map `maps[i*|G]..]`.
    Functions { group: FiniteAbelianGroup, maps: Vec<Elem>, index: HashMap<Vec<Elem>, Elem> },
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({}, size={})", self.spec(), self.size())
    }
}

impl FiniteRing {
    fn build(spec: RingSpec, size: usize, one: Elem, arith: Arith) -> Result<Self> {
        if size > MAX_RING_SIZE {
            return Err(Error::TooLarge(format!("ring {spec} has {size} elements")));
        }
        let mut inner = RingInner {
            spec,
            size,
            one,
            arith,
            tables: None,
            characteristic: OnceLock::new(),
            commutative: OnceLock::new(),
            units: OnceLock::new(),
        };
        if size <= TABLE_CAP && !matches!(inner.arith, Arith::Table) {
            let r = FiniteRing(Arc::new(inner));
            let n = size as Elem;
            let mut add = Vec::with_capacity(size * size);
            let mut mul = Vec::with_capacity(size * size);
            for a in 0..n {
                for b in 0..n {
                    add.push(r.arith_add(a, b));
                    mul.push(r.arith_mul(a, b));
                }
            }
            let neg = (0..n).map(|a| r.arith_neg(a)).collect();
            inner = Arc::try_unwrap(r.0).ok().expect("fresh ring is uniquely owned");
            inner.tables = Some(Tables { add, neg, mul });
        }
        Ok(FiniteRing(Arc::new(inner)))
    }

    pub fn from_spec(spec: &RingSpec) -> Result<Self> {
        match spec {
            RingSpec::Integers(n) => Self::integers(*n),
            RingSpec::Galois { p, k, modulus } => Self::galois(*p, *k, modulus.clone()),
            RingSpec::Matrix { t, base } => Self::matrix(&Self::from_spec(base)?, *t),
            RingSpec::Product(a, b) => Self::product(&Self::from_spec(a)?, &Self::from_spec(b)?),
            RingSpec::Opposite(a) => Ok(Self::opposite(&Self::from_spec(a)?)),
            RingSpec::PolyQuotient { p, modulus } => Self::poly_quotient(*p, modulus.clone()),
            RingSpec::Derived(s) => {
                Err(Error::MalformedSpec(format!("derived ring '{s}' cannot be rebuilt from text")))
            }
        }
    }

    pub fn integers(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if n as usize > MAX_RING_SIZE {
            return Err(Error::TooLarge(format!("Z {n}")));
        }
        Self::build(RingSpec::Integers(n), n as usize, (1 % n) as Elem, Arith::Cyclic(n))
    }

    pub fn galois(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::MalformedSpec("GF degree must be positive".into()));
        }
        let default = poly::least_irreducible(p, k as usize);
        let f = match &modulus {
            Some(m) => {
                let m = poly::monic(m, p)?;
                if poly::degree(&m) != Some(k as usize) {
                    return Err(Error::MalformedSpec("modulus degree differs from k".into()));
                }
                if !poly::is_irreducible(&m, p) {
                    return Err(Error::Reducible(poly::format(&m)));
                }
                m
            }
            None => default.clone(),
        };
        let size = (p as u64)
            .checked_pow(k)
            .filter(|&s| s as usize <= MAX_RING_SIZE)
            .ok_or_else(|| Error::TooLarge(format!("GF({p}^{k})")))?;
        let spec = RingSpec::Galois { p, k, modulus: (f != default).then(|| f.clone()) };
        Self::build(spec, size as usize, 1, Arith::Poly { p, modulus: f })
    }

    pub fn poly_quotient(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let f = poly::trim(modulus);
        if f.is_empty() {
            return Err(Error::ZeroModulus);
        }
        let f = poly::monic(&f, p)?;
        let d = poly::degree(&f).unwrap() as u32;
        if d == 0 {
            return Err(Error::MalformedSpec("POLYQ modulus must have positive degree".into()));
        }
        let size = (p as u64)
            .checked_pow(d)
            .filter(|&s| s as usize <= MAX_RING_SIZE)
            .ok_or_else(|| Error::TooLarge("polynomial quotient".into()))?;
        let spec = RingSpec::PolyQuotient { p, modulus: f.clone() };
        Self::build(spec, size as usize, 1, Arith::Poly { p, modulus: f })
    }

    pub fn matrix(base: &Self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Precondition("matrix size must be positive".into()));
        }
        let size = (base.size() as u64)
            .checked_pow((t * t) as u32)
            .filter(|&s| s as usize <= MAX_RING_SIZE)
            .ok_or_else(|| Error::TooLarge(format!("M {t} ({})", base.spec())))?;
        let mut ident = vec![0; t * t];
        for i in 0..t {
            ident[i * t + i] = base.one();
        }
        let one = Self::encode_digits(&ident, base.size());
        let spec = RingSpec::Matrix { t, base: Box::new(base.spec().clone()) };
        Self::build(spec, size as usize, one, Arith::Matrix { base: base.clone(), t })
    }

    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        let size = a
            .size()
            .checked_mul(b.size())
            .filter(|&s| s <= MAX_RING_SIZE)
            .ok_or_else(|| Error::TooLarge("ring product".into()))?;
        let one = a.one() * b.size() as Elem + b.one();
        let spec = RingSpec::Product(Box::new(a.spec().clone()), Box::new(b.spec().clone()));
        Self::build(spec, size, one, Arith::Product(a.clone(), b.clone()))
    }

    /// Same additive group with `a *op b = b * a`.
    pub fn opposite(r: &Self) -> Self {
        let spec = RingSpec::Opposite(Box::new(r.spec().clone()));
        Self::build(spec, r.size(), r.one(), Arith::Opposite(r.clone()))
            .expect("opposite has the size of its base")
    }

    /// Ring from explicit tables; checks every ring axiom.
    pub fn from_tables(add: Vec<Elem>, mul: Vec<Elem>, one: Elem) -> Result<Self> {
        let r = Self::from_tables_unchecked(RingSpec::Derived("TABLE".into()), add, mul, one)?;
        r.check_axioms()?;
        Ok(r)
    }

    pub(crate) fn from_tables_unchecked(
        spec: RingSpec,
        add: Vec<Elem>,
        mul: Vec<Elem>,
        one: Elem,
    ) -> Result<Self> {
        let size = (add.len() as f64).sqrt().round() as usize;
        if size == 0 || size * size != add.len() || mul.len() != add.len() {
            return Err(Error::InvalidTable("table sizes do not match".into()));
        }
        if size > MAX_TABLE_RING {
            return Err(Error::TooLarge(format!("table ring with {size} elements")));
        }
        if add.iter().chain(&mul).any(|&x| x as usize >= size) || one as usize >= size {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        let mut neg = vec![0; size];
        for (a, slot) in neg.iter_mut().enumerate() {
            *slot = (0..size)
                .find(|&b| add[a * size + b] == 0)
                .ok_or_else(|| Error::InvalidTable(format!("{a} has no additive inverse")))?
                as Elem;
        }
        let mut r = Self::build(spec, size, one, Arith::Table)?;
        Arc::get_mut(&mut r.0).unwrap().tables = Some(Tables { add, neg, mul });
        Ok(r)
    }

    /// Subring of End(G) whose elements are the given maps (closed under + and composition).
    pub(crate) fn from_endomorphisms(
        spec: RingSpec,
        group: &FiniteAbelianGroup,
        mut maps: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        maps.sort();
        maps.dedup();
        let g = group.size();
        let identity: Vec<Elem> = (0..g as Elem).collect();
        let one = maps
            .binary_search(&identity)
            .map_err(|_| Error::Precondition("endomorphism set lacks the identity".into()))?;
        if maps.first().map(|m| m.iter().all(|&x| x == 0)) != Some(true) {
            return Err(Error::Precondition("endomorphism set lacks zero".into()));
        }
        let index = maps
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as Elem))
            .collect();
        let size = maps.len();
        let flat = maps.concat();
        Self::build(
            spec,
            size,
            one as Elem,
            Arith::Functions { group: group.clone(), maps: flat, index },
        )
    }

    pub(crate) fn encode_digits(digits: &[Elem], base: usize) -> Elem {
        digits.iter().fold(0u64, |acc, &d| acc * base as u64 + d as u64) as Elem
    }

    pub(crate) fn decode_digits(mut x: Elem, base: usize, len: usize) -> Vec<Elem> {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = x % base as Elem;
            x /= base as Elem;
        }
        out
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn one(&self) -> Elem {
        self.0.one
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Same object, or both rebuilt from the same parseable spec.
    pub fn same(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (!self.spec().is_derived() && self.spec() == other.spec())
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size() as Elem
    }

    pub fn additive_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::of_ring(self)
    }

    /// The base ring and dimension when this is `M_t(base)`.
    pub fn matrix_parts(&self) -> Option<(&FiniteRing, usize)> {
        match &self.0.arith {
            Arith::Matrix { base, t } => Some((base, *t)),
            _ => None,
        }
    }

    /// The prime and extension degree when this is GF(p^k).
    pub fn galois_parts(&self) -> Option<(u32, u32)> {
        match self.spec() {
            RingSpec::Galois { p, k, .. } => Some((*p, *k)),
            _ => None,
        }
    }

    pub fn matrix_entries(&self, a: Elem) -> Vec<Elem> {
        let (base, t) = self.matrix_parts().expect("not a matrix ring");
        Self::decode_digits(a, base.size(), t * t)
    }

    pub fn matrix_from_entries(&self, entries: &[Elem]) -> Elem {
        let (base, _) = self.matrix_parts().expect("not a matrix ring");
        Self::encode_digits(entries, base.size())
    }

    /// The map of an endomorphism-ring element, if this ring is one.
    pub fn endomorphism(&self, a: Elem) -> Option<&[Elem]> {
        match &self.0.arith {
            Arith::Functions { group, maps, .. } => {
                let g = group.size();
                Some(&maps[a as usize * g..(a as usize + 1) * g])
            }
            _ => None,
        }
    }

    pub fn endomorphism_index(&self, map: &[Elem]) -> Option<Elem> {
        match &self.0.arith {
            Arith::Functions { index, .. } => index.get(map).copied(),
            _ => None,
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.add[a as usize * self.0.size + b as usize],
            None => self.arith_add(a, b),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.neg[a as usize],
            None => self.arith_neg(a),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => t.mul[a as usize * self.0.size + b as usize],
            None => self.arith_mul(a, b),
        }
    }

    /// `k·1`
    pub fn from_int(&self, k: i64) -> Elem {
        let c = self.characteristic() as i64;
        let k = k.rem_euclid(c) as u64;
        let mut acc = 0;
        for _ in 0..k {
            acc = self.add(acc, self.one());
        }
        acc
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut acc, mut base) = (self.one(), a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn arith_add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.arith {
            Arith::Cyclic(n) => ((a as u64 + b as u64) % n) as Elem,
            Arith::Poly { p, modulus } => {
                let d = modulus.len() - 1;
                let (mut a, mut b) = (a, b);
                let (mut out, mut place) = (0, 1);
                for _ in 0..d {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place = place.wrapping_mul(*p);
                }
                out
            }
            Arith::Matrix { base, t } => {
                let x = Self::decode_digits(a, base.size(), t * t);
                let y = Self::decode_digits(b, base.size(), t * t);
                let s: Vec<Elem> = x.iter().zip(&y).map(|(&u, &v)| base.add(u, v)).collect();
                Self::encode_digits(&s, base.size())
            }
            Arith::Product(r, s) => {
                let m = s.size() as Elem;
                r.add(a / m, b / m) * m + s.add(a % m, b % m)
            }
            Arith::Opposite(r) => r.add(a, b),
            Arith::Table => unreachable!("table rings always carry tables"),
            Arith::Functions { group, maps, index } => {
                let g = group.size();
                let (fa, fb) = (&maps[a as usize * g..][..g], &maps[b as usize * g..][..g]);
                let sum: Vec<Elem> = fa.iter().zip(fb).map(|(&x, &y)| group.add(x, y)).collect();
                index[&sum]
            }
        }
    }

    fn arith_neg(&self, a: Elem) -> Elem {
        match &self.0.arith {
            Arith::Cyclic(n) => ((n - a as u64) % n) as Elem,
            Arith::Poly { p, modulus } => {
                let d = modulus.len() - 1;
                let mut a = a;
                let (mut out, mut place) = (0, 1);
                for _ in 0..d {
                    out += ((p - a % p) % p) * place;
                    a /= p;
                    place = place.wrapping_mul(*p);
                }
                out
            }
            Arith::Matrix { base, t } => {
                let x = Self::decode_digits(a, base.size(), t * t);
                let s: Vec<Elem> = x.iter().map(|&u| base.neg(u)).collect();
                Self::encode_digits(&s, base.size())
            }
            Arith::Product(r, s) => {
                let m = s.size() as Elem;
                r.neg(a / m) * m + s.neg(a % m)
            }
            Arith::Opposite(r) => r.neg(a),
            Arith::Table => unreachable!("table rings always carry tables"),
            Arith::Functions { group, maps, index } => {
                let g = group.size();
                let m: Vec<Elem> = maps[a as usize * g..][..g].iter().map(|&x| group.neg(x)).collect();
                index[&m]
            }
        }
    }

    fn arith_mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.arith {
            Arith::Cyclic(n) => ((a as u64 * b as u64) % n) as Elem,
            Arith::Poly { p, modulus } => {
                let d = modulus.len() - 1;
                let x = Self::decode_digits(a, *p as usize, d);
                let y = Self::decode_digits(b, *p as usize, d);
                // decode_digits is most-significant first; polynomials are constant first
                let fx: Vec<u32> = x.into_iter().rev().collect();
                let fy: Vec<u32> = y.into_iter().rev().collect();
                let mut r = poly::rem(&poly::mul(&fx, &fy, *p), modulus, *p);
                r.resize(d, 0);
                r.iter().rev().fold(0, |acc, &c| acc * p + c)
            }
            Arith::Matrix { base, t } => {
                let t = *t;
                let x = Self::decode_digits(a, base.size(), t * t);
                let y = Self::decode_digits(b, base.size(), t * t);
                let mut out = vec![0; t * t];
                for i in 0..t {
                    for j in 0..t {
                        let mut acc = 0;
                        for k in 0..t {
                            acc = base.add(acc, base.mul(x[i * t + k], y[k * t + j]));
                        }
                        out[i * t + j] = acc;
                    }
                }
                Self::encode_digits(&out, base.size())
            }
            Arith::Product(r, s) => {
                let m = s.size() as Elem;
                r.mul(a / m, b / m) * m + s.mul(a % m, b % m)
            }
            Arith::Opposite(r) => r.mul(b, a),
            Arith::Table => unreachable!("table rings always carry tables"),
            Arith::Functions { group, maps, index } => {
                let g = group.size();
                let (fa, fb) = (&maps[a as usize * g..][..g], &maps[b as usize * g..][..g]);
                let comp: Vec<Elem> = fb.iter().map(|&x| fa[x as usize]).collect();
                index[&comp]
            }
        }
    }

    /// Least c ≥ 1 with c·1 = 0.
    pub fn characteristic(&self) -> u64 {
        *self.0.characteristic.get_or_init(|| {
            let (mut x, mut c) = (self.one(), 1u64);
            while x != 0 {
                x = self.add(x, self.one());
                c += 1;
            }
            c
        })
    }

    pub fn is_commutative(&self) -> bool {
        *self.0.commutative.get_or_init(|| match &self.0.arith {
            Arith::Cyclic(_) | Arith::Poly { .. } => true,
            Arith::Opposite(r) => r.is_commutative(),
            Arith::Product(a, b) => a.is_commutative() && b.is_commutative(),
            _ => {
                let grp = self.additive_group();
                let gens = grp.generators();
                gens.iter()
                    .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
            }
        })
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.units_mask()[a as usize]
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    fn units_mask(&self) -> &[bool] {
        self.0.units.get_or_init(|| {
            let n = self.size() as Elem;
            match &self.0.arith {
                Arith::Cyclic(m) => (0..n)
                    .map(|a| num_integer::gcd(a as u64, *m) == 1)
                    .collect(),
                Arith::Opposite(r) => r.units_mask().to_vec(),
                Arith::Product(r, s) => {
                    let m = s.size() as Elem;
                    (0..n).map(|a| r.is_unit(a / m) && s.is_unit(a % m)).collect()
                }
                Arith::Matrix { base, t } if base.is_commutative() => {
                    (0..n).map(|a| base.is_unit(self.det(a, base, *t))).collect()
                }
                Arith::Functions { group, maps, .. } => {
                    let g = group.size();
                    (0..n as usize)
                        .map(|a| {
                            let mut seen = vec![false; g];
                            maps[a * g..(a + 1) * g].iter().all(|&x| {
                                !std::mem::replace(&mut seen[x as usize], true)
                            })
                        })
                        .collect()
                }
                _ => {
                    // finite rings are Dedekind-finite: a right inverse is an inverse
                    (0..n).map(|a| (0..n).any(|b| self.mul(a, b) == self.one())).collect()
                }
            }
        })
    }

    fn det(&self, a: Elem, base: &FiniteRing, t: usize) -> Elem {
        fn rec(m: &[Elem], t: usize, base: &FiniteRing) -> Elem {
            if t == 1 {
                return m[0];
            }
            let mut acc = 0;
            for j in 0..t {
                let mut minor = Vec::with_capacity((t - 1) * (t - 1));
                for i in 1..t {
                    for k in 0..t {
                        if k != j {
                            minor.push(m[i * t + k]);
                        }
                    }
                }
                let term = base.mul(m[j], rec(&minor, t - 1, base));
                acc = if j % 2 == 0 { base.add(acc, term) } else { base.sub(acc, term) };
            }
            acc
        }
        rec(&Self::decode_digits(a, base.size(), t * t), t, base)
    }

    pub fn is_field(&self) -> bool {
        self.size() > 1 && self.is_commutative() && self.units().len() == self.size() - 1
    }

    /// Exhaustive check of the ring axioms (cubic in the size).
    pub fn check_axioms(&self) -> Result<()> {
        self.additive_group().check_axioms()?;
        let n = self.size() as Elem;
        let one = self.one();
        for a in 0..n {
            if self.mul(one, a) != a || self.mul(a, one) != a {
                return Err(Error::InvalidTable("1 is not a multiplicative identity".into()));
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidTable("multiplication is not associative".into()));
                    }
                    let bc = self.add(b, c);
                    if self.mul(a, bc) != self.add(ab, self.mul(a, c))
                        || self.mul(bc, a) != self.add(self.mul(b, a), self.mul(c, a))
                    {
                        return Err(Error::InvalidTable("distributivity fails".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn format_elem(&self, a: Elem) -> String {
        match &self.0.arith {
            Arith::Cyclic(_) => a.to_string(),
            Arith::Poly { p, modulus } => {
                let d = modulus.len() - 1;
                let mut c: Vec<u32> = Self::decode_digits(a, *p as usize, d);
                c.reverse();
                poly::format(&poly::trim(c))
            }
            Arith::Matrix { base, t } => {
                let e = Self::decode_digits(a, base.size(), t * t);
                let rows: Vec<String> = e
                    .chunks(*t)
                    .map(|r| {
                        let cells: Vec<String> = r.iter().map(|&x| base.format_elem(x)).collect();
                        format!("[{}]", cells.join(","))
                    })
                    .collect();
                format!("[{}]", rows.join(","))
            }
            Arith::Product(r, s) => {
                let m = s.size() as Elem;
                format!("({},{})", r.format_elem(a / m), s.format_elem(a % m))
            }
            Arith::Opposite(r) => r.format_elem(a),
            Arith::Table | Arith::Functions { .. } => format!("#{a}"),
        }
    }

    /// JSON report; operation tables are included when `size <= table_cap`.
    pub fn to_json(&self, table_cap: usize) -> Value {
        let mut v = json!({
            "spec": self.spec().to_string(),
            "size": self.size(),
            "characteristic": self.characteristic(),
            "commutative": self.is_commutative(),
            "units": self.units().len(),
        });
        if self.size() <= table_cap {
            let n = self.size() as Elem;
            let table = |f: &dyn Fn(Elem, Elem) -> Elem| -> Vec<Vec<Elem>> {
                (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect()
            };
            v["tables"] = json!({
                "one": self.one(),
                "add": table(&|a, b| self.add(a, b)),
                "mul": table(&|a, b| self.mul(a, b)),
            });
        }
        v
    }
}

pub fn parse_ring_spec(text: &str) -> Result<FiniteRing> {
    FiniteRing::from_spec(&text.parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> FiniteRing {
        parse_ring_spec(s).unwrap()
    }

    #[test]
    fn gf4_arithmetic() {
        let f = ring("GF 2 2");
        assert_eq!(f.size(), 4);
        let alpha = 2;
        // alpha^2 = alpha + 1
        assert_eq!(f.mul(alpha, alpha), f.add(alpha, 1));
        assert_eq!(f.characteristic(), 2);
        assert!(f.is_field());
        f.check_axioms().unwrap();
    }

    #[test]
    fn characteristics() {
        assert_eq!(ring("Z 6").characteristic(), 6);
        assert_eq!(ring("M 2 (GF 3 1)").characteristic(), 3);
        assert_eq!(ring("PROD(Z 2, Z 3)").characteristic(), 6);
        assert_eq!(ring("POLYQ 2 X^2").characteristic(), 2);
        assert_eq!(ring("POLYQ 2 X^2").size(), 4);
    }

    #[test]
    fn structured_matches_axioms() {
        for s in ["Z 6", "GF 3 2", "M 2 (Z 2)", "PROD(Z 2, GF 2 2)", "OP(M 2 (Z 2))", "POLYQ 3 X^2+1"] {
            ring(s).check_axioms().unwrap();
        }
    }

    #[test]
    fn units_and_commutativity() {
        assert_eq!(ring("Z 12").units(), vec![1, 5, 7, 11]);
        assert_eq!(ring("M 2 (GF 2 1)").units().len(), 6);
        assert_eq!(ring("M 2 (Z 4)").units().len(), 96);
        assert!(!ring("M 2 (GF 2 1)").is_commutative());
        assert!(ring("PROD(Z 2, Z 3)").is_commutative());
        assert!(!ring("POLYQ 2 X^2").is_field());
    }

    #[test]
    fn large_matrix_ring_without_tables() {
        let r = ring("M 2 (Z 6)");
        assert_eq!(r.size(), 1296);
        let a = r.matrix_from_entries(&[1, 2, 3, 4]);
        let b = r.matrix_from_entries(&[0, 1, 1, 0]);
        assert_eq!(r.matrix_entries(r.mul(a, b)), vec![2, 1, 4, 3]);
        assert_eq!(r.mul(r.one(), a), a);
    }

    #[test]
    fn opposite_reverses() {
        let r = ring("M 2 (GF 2 1)");
        let op = FiniteRing::opposite(&r);
        for a in r.elements() {
            for b in r.elements() {
                assert_eq!(op.mul(a, b), r.mul(b, a));
            }
        }
    }

    #[test]
    fn explicit_tables() {
        let r = ring("Z 3");
        let add: Vec<Elem> = (0..3).flat_map(|a| (0..3).map(move |b| (a + b) % 3)).collect();
        let mul: Vec<Elem> = (0..3).flat_map(|a| (0..3).map(move |b| (a * b) % 3)).collect();
        let t = FiniteRing::from_tables(add.clone(), mul, 1).unwrap();
        assert_eq!(t.characteristic(), r.characteristic());
        let bad_mul = vec![0, 0, 0, 0, 1, 1, 0, 1, 1];
        assert!(FiniteRing::from_tables(add, bad_mul, 1).is_err());
    }
}
