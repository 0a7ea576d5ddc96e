use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use super::group::{Elem, FiniteAbelianGroup};
use super::hom::RingHom;
use super::numtheory::{factorize, is_prime};
use super::ring::{parse_ring_spec, FiniteRing};
use super::spec::RingSpec;
use crate::error::{Error, Result};

/// Largest action table materialized.
pub const MAX_ACTION_TABLE: usize = 1 << 24;
/// Largest endomorphism subring built for two-sided modules.
pub const MAX_ENDOMORPHISM_RING: usize = 1 << 20;
/// Identity and zero tests scan all of G up to this size, a generating set beyond it.
pub const FULL_SCAN_CAP: usize = 4096;

/// A left module: a finite ring acting on a finite abelian group.
#[derive(Clone)]
pub struct Module(Arc<ModuleInner>);

struct ModuleInner {
    descriptor: String,
    ring: FiniteRing,
    group: FiniteAbelianGroup,
    action: Action,
}

enum Action {
    Table(Vec<Elem>),
    /// Left multiplication of a ring on itself.
    Regular,
    /// The ring is a subring of End(G).
    Evaluate,
    /// M_t(R) on G^t by matrix-vector products.
    Vector { base: Module, t: usize },
    /// R on G^t coordinatewise.
    Diagonal { base: Module, t: usize },
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Module({}, |R|={}, |G|={})",
            self.descriptor(),
            self.ring().size(),
            self.group().size()
        )
    }
}

/// Result of splitting a module along coprime parts of its group.
#[derive(Clone, Debug)]
pub enum CoprimeSplit {
    Split {
        /// Smallest prime dividing |G|.
        p: u64,
        primary: Module,
        primary_embedding: Vec<Elem>,
        complement: Module,
        complement_embedding: Vec<Elem>,
    },
    /// |G| is a prime power; no coprime splitting exists.
    PrimePower(Module),
}

impl Module {
    fn wrap(descriptor: String, ring: FiniteRing, group: FiniteAbelianGroup, action: Action) -> Self {
        Module(Arc::new(ModuleInner { descriptor, ring, group, action }))
    }

    /// R acting on (R,+) by left multiplication.
    pub fn regular(r: &FiniteRing) -> Self {
        Self::wrap(format!("REG({})", r.spec()), r.clone(), r.additive_group(), Action::Regular)
    }

    /// Module from an explicit action table `action[r * |G| + g]`; all axioms are checked.
    pub fn from_table(
        ring: &FiniteRing,
        group: &FiniteAbelianGroup,
        action: Vec<Elem>,
    ) -> Result<Self> {
        let m = Self::from_table_unchecked("TABLE".into(), ring, group, action)?;
        m.check_axioms()?;
        Ok(m)
    }

    fn from_table_unchecked(
        descriptor: String,
        ring: &FiniteRing,
        group: &FiniteAbelianGroup,
        action: Vec<Elem>,
    ) -> Result<Self> {
        if action.len() != ring.size() * group.size() {
            return Err(Error::InvalidTable("action table has the wrong size".into()));
        }
        if action.iter().any(|&x| x as usize >= group.size()) {
            return Err(Error::InvalidTable("action entry out of range".into()));
        }
        Ok(Self::wrap(descriptor, ring.clone(), group.clone(), Action::Table(action)))
    }

    /// Tabulates `f` as an action of `ring` on `group` without checking axioms.
    pub(crate) fn tabulate(
        descriptor: String,
        ring: &FiniteRing,
        group: &FiniteAbelianGroup,
        mut f: impl FnMut(Elem, Elem) -> Elem,
    ) -> Result<Self> {
        let cells = ring.size().saturating_mul(group.size());
        if cells > MAX_ACTION_TABLE {
            return Err(Error::TooLarge(format!("action table with {cells} cells")));
        }
        let mut table = Vec::with_capacity(cells);
        for r in ring.elements() {
            for g in 0..group.size() as Elem {
                table.push(f(r, g));
            }
        }
        Self::from_table_unchecked(descriptor, ring, group, table)
    }

    /// The subring of End(R,+) generated by all maps x ↦ a·x·b, acting by evaluation.
    pub fn two_sided(r: &FiniteRing) -> Result<Self> {
        let n = r.size();
        let mut seen: HashSet<Vec<Elem>> = HashSet::new();
        let mut gens = Vec::new();
        for a in r.elements() {
            for b in r.elements() {
                let m: Vec<Elem> = r.elements().map(|x| r.mul(r.mul(a, x), b)).collect();
                if seen.insert(m.clone()) {
                    gens.push(m);
                }
            }
        }
        let group = r.additive_group();
        let add = |f: &[Elem], g: &[Elem]| -> Vec<Elem> {
            f.iter().zip(g).map(|(&x, &y)| r.add(x, y)).collect()
        };
        // additive closure; the generators are closed under composition and contain 1
        let zero = vec![0 as Elem; n];
        let mut members: Vec<Vec<Elem>> = vec![zero.clone()];
        let mut inside: HashSet<Vec<Elem>> = HashSet::from([zero]);
        for g in &gens {
            if inside.contains(g) {
                continue;
            }
            let base = members.clone();
            let mut mult = g.clone();
            while !inside.contains(&mult) {
                for h in &base {
                    let s = add(h, &mult);
                    if inside.insert(s.clone()) {
                        members.push(s);
                        if members.len() > MAX_ENDOMORPHISM_RING {
                            return Err(Error::TooLarge("two-sided scalar ring".into()));
                        }
                    }
                }
                mult = add(&mult, g);
            }
        }
        let spec = RingSpec::Derived(format!("END2({})", r.spec()));
        let ring = FiniteRing::from_endomorphisms(spec, &group, members)?;
        Ok(Self::wrap(format!("TWOSIDED({})", r.spec()), ring, group, Action::Evaluate))
    }

    /// M_t(R) acting on G^t.
    pub fn vector(m: &Module, t: usize) -> Result<Self> {
        let ring = FiniteRing::matrix(m.ring(), t)?;
        let group = FiniteAbelianGroup::power(m.group(), t)?;
        Ok(Self::wrap(
            format!("VEC {t} ({})", m.descriptor()),
            ring,
            group,
            Action::Vector { base: m.clone(), t },
        ))
    }

    /// R acting coordinatewise on G^t.
    pub fn power(m: &Module, t: usize) -> Result<Self> {
        let group = FiniteAbelianGroup::power(m.group(), t)?;
        Ok(Self::wrap(
            format!("POW {t} ({})", m.descriptor()),
            m.ring().clone(),
            group,
            Action::Diagonal { base: m.clone(), t },
        ))
    }

    /// The R-module structure on H obtained through φ: R → S, where H is an S-module.
    pub fn pullback(phi: &RingHom, h: &Module) -> Result<Self> {
        if !phi.target.same(h.ring()) {
            return Err(Error::Precondition("hom target differs from the module's ring".into()));
        }
        Self::tabulate(
            format!("PULLBACK({})", h.descriptor()),
            &phi.source,
            h.group(),
            |r, g| h.act(phi.apply(r), g),
        )
    }

    pub fn descriptor(&self) -> &str {
        &self.0.descriptor
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.0.ring
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.0.group
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Same object, or equal descriptors that can be rebuilt from text.
    pub fn same(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.descriptor() == other.descriptor() && parse_module_spec(self.descriptor()).is_ok())
    }

    /// `(M, t)` when this module is `VEC t (M)`.
    pub fn vector_parts(&self) -> Option<(&Module, usize)> {
        match &self.0.action {
            Action::Vector { base, t } => Some((base, *t)),
            _ => None,
        }
    }

    pub fn act(&self, r: Elem, g: Elem) -> Elem {
        match &self.0.action {
            Action::Table(t) => t[r as usize * self.group().size() + g as usize],
            Action::Regular => self.ring().mul(r, g),
            Action::Evaluate => self.ring().endomorphism(r).expect("endomorphism ring")[g as usize],
            Action::Vector { base, t } => {
                let (t, gs) = (*t, base.group().size());
                let a = self.ring().matrix_entries(r);
                let v = self.group().split_power(g, gs, t);
                let out: Vec<Elem> = (0..t)
                    .map(|i| {
                        (0..t).fold(0, |acc, j| base.group().add(acc, base.act(a[i * t + j], v[j])))
                    })
                    .collect();
                FiniteAbelianGroup::join_power(&out, gs)
            }
            Action::Diagonal { base, t } => {
                let gs = base.group().size();
                let v = self.group().split_power(g, gs, *t);
                let out: Vec<Elem> = v.iter().map(|&x| base.act(r, x)).collect();
                FiniteAbelianGroup::join_power(&out, gs)
            }
        }
    }

    fn probe_set(&self) -> Vec<Elem> {
        if self.group().size() <= FULL_SCAN_CAP {
            (0..self.group().size() as Elem).collect()
        } else {
            self.group().generators().to_vec()
        }
    }

    /// `r·g = g` for every g.
    pub fn acts_as_one(&self, r: Elem) -> bool {
        self.probe_set().into_iter().all(|g| self.act(r, g) == g)
    }

    /// `r·g = 0` for every g.
    pub fn acts_as_zero(&self, r: Elem) -> bool {
        self.probe_set().into_iter().all(|g| self.act(r, g) == 0)
    }

    /// Image of `r` on a generating set of G; determines the action of r.
    pub fn signature(&self, r: Elem) -> Vec<Elem> {
        self.group().generators().iter().map(|&g| self.act(r, g)).collect()
    }

    /// Every nonzero scalar acts nontrivially.
    pub fn is_faithful(&self) -> bool {
        self.ring().elements().skip(1).all(|r| !self.acts_as_zero_on_generators(r))
    }

    fn acts_as_zero_on_generators(&self, r: Elem) -> bool {
        self.group().generators().iter().all(|&g| self.act(r, g) == 0)
    }

    /// Exhaustive scan of the four module axioms.
    pub fn check_axioms(&self) -> Result<()> {
        let (r, g) = (self.ring(), self.group());
        let gn = g.size() as Elem;
        let fail = |what: &str| Err(Error::InvalidTable(format!("module axiom fails: {what}")));
        for x in 0..gn {
            if self.act(r.one(), x) != x {
                return fail("1·g = g");
            }
        }
        for a in r.elements() {
            for x in 0..gn {
                let ax = self.act(a, x);
                for y in 0..gn {
                    if self.act(a, g.add(x, y)) != g.add(ax, self.act(a, y)) {
                        return fail("r·(g+h) = r·g + r·h");
                    }
                }
                for b in r.elements() {
                    if self.act(r.add(a, b), x) != g.add(ax, self.act(b, x)) {
                        return fail("(r+s)·g = r·g + s·g");
                    }
                    if self.act(r.mul(a, b), x) != self.act(a, self.act(b, x)) {
                        return fail("(rs)·g = r·(s·g)");
                    }
                }
            }
        }
        Ok(())
    }

    /// Annihilator quotient: the surjection R → R/ann(G) and the faithful module it induces.
    pub fn faithful_quotient(&self) -> Result<(RingHom, Module)> {
        let r = self.ring();
        let mut class_of: HashMap<Vec<Elem>, Elem> = HashMap::new();
        let mut reps: Vec<Elem> = Vec::new();
        let mut map = Vec::with_capacity(r.size());
        for a in r.elements() {
            let sig = self.signature(a);
            let next = reps.len() as Elem;
            let c = *class_of.entry(sig).or_insert(next);
            if c == next {
                reps.push(a);
            }
            map.push(c);
        }
        if reps.len() == r.size() {
            return Ok((RingHom::identity(r), self.clone()));
        }
        let n = reps.len();
        let class = |x: Elem| map[x as usize];
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for &a in &reps {
            for &b in &reps {
                add.push(class(r.add(a, b)));
                mul.push(class(r.mul(a, b)));
            }
        }
        let spec = RingSpec::Derived(format!("{}/ann({})", r.spec(), self.descriptor()));
        let s = FiniteRing::from_tables_unchecked(spec, add, mul, class(r.one()))?;
        let m = Self::tabulate(
            format!("FAITHFUL({})", self.descriptor()),
            &s,
            self.group(),
            |c, g| self.act(reps[c as usize], g),
        )?;
        Ok((RingHom::new(r.clone(), s, map), m))
    }

    /// The restriction to an R-stable subgroup, with the subgroup's embedding.
    pub fn submodule(&self, members: &[Elem], descriptor: String) -> Result<(Module, Vec<Elem>)> {
        let (sub, emb) = self.group().subgroup(members)?;
        let mut index = vec![u32::MAX; self.group().size()];
        for (i, &g) in emb.iter().enumerate() {
            index[g as usize] = i as Elem;
        }
        let mut stable = true;
        let m = Self::tabulate(descriptor, self.ring(), &sub, |r, i| {
            let v = index[self.act(r, emb[i as usize]) as usize];
            if v == u32::MAX {
                stable = false;
                0
            } else {
                v
            }
        });
        let m = m?;
        if !stable {
            return Err(Error::Precondition("subgroup is not closed under the action".into()));
        }
        Ok((m, emb))
    }

    /// The p-primary component {g : p^e g = 0}, p^e the exact power of p dividing |G|.
    pub fn split_primary(&self, p: u64) -> Result<(Module, Vec<Elem>)> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = self.group().size() as u64;
        if !n.is_multiple_of(p) {
            return Err(Error::Precondition(format!("{p} does not divide |G| = {n}")));
        }
        let mut pe = 1;
        while n.is_multiple_of(pe * p) {
            pe *= p;
        }
        if pe == n {
            let emb = (0..n as Elem).collect();
            return Ok((self.clone(), emb));
        }
        let members = self.killed_by(pe);
        self.submodule(&members, format!("PRIMARY {p} ({})", self.descriptor()))
    }

    fn killed_by(&self, k: u64) -> Vec<Elem> {
        (0..self.group().size() as Elem)
            .filter(|&g| self.group().mul_int(g, k) == 0)
            .collect()
    }

    /// Splits G into its p-primary part for the smallest prime p and the coprime complement.
    pub fn decompose_coprime(&self) -> Result<CoprimeSplit> {
        let n = self.group().size() as u64;
        let fac = factorize(n);
        if fac.len() <= 1 {
            return Ok(CoprimeSplit::PrimePower(self.clone()));
        }
        let (p, e) = fac[0];
        let pe = p.pow(e);
        let (primary, primary_embedding) = self.split_primary(p)?;
        let rest = self.killed_by(n / pe);
        let (complement, complement_embedding) =
            self.submodule(&rest, format!("COPRIME {p} ({})", self.descriptor()))?;
        Ok(CoprimeSplit::Split { p, primary, primary_embedding, complement, complement_embedding })
    }
}

/// Every module structure of `ring` on `group`, found as ring homs R → End(G) by
/// backtracking over scalars in index order. `cap` bounds |G|^|G|.
pub fn module_structures(ring: &FiniteRing, group: &FiniteAbelianGroup, cap: usize) -> Result<Vec<Module>> {
    let n = group.size();
    let total = (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::SearchBound(format!("{total} candidate maps on a group of size {n}")));
    }
    let mut endos: Vec<Vec<Elem>> = Vec::new();
    let mut f = vec![0 as Elem; n];
    loop {
        let additive = (0..n as Elem)
            .all(|a| (0..n as Elem).all(|b| f[group.add(a, b) as usize] == group.add(f[a as usize], f[b as usize])));
        if additive {
            endos.push(f.clone());
        }
        // next map in odometer order
        let mut i = 0;
        while i < n {
            f[i] += 1;
            if (f[i] as usize) < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let identity: Vec<Elem> = (0..n as Elem).collect();
    let zero_map = vec![0 as Elem; n];
    let compose = |a: &[Elem], b: &[Elem]| -> Vec<Elem> { b.iter().map(|&x| a[x as usize]).collect() };
    let size = ring.size();
    let mut assigned: Vec<Option<usize>> = vec![None; size];
    let idx = |m: &Vec<Elem>| endos.iter().position(|e| e == m).expect("identity and zero are endomorphisms");
    assigned[0] = Some(idx(&zero_map));
    assigned[ring.one() as usize] = Some(idx(&identity));
    let consistent = |assigned: &[Option<usize>], r: usize| -> bool {
        let fr = assigned[r].expect("checked slot is assigned");
        for s in 0..size {
            let Some(fs) = assigned[s] else { continue };
            let checks = [
                (ring.add(r as Elem, s as Elem), endos[fr].iter().zip(&endos[fs]).map(|(&x, &y)| group.add(x, y)).collect::<Vec<_>>()),
                (ring.mul(r as Elem, s as Elem), compose(&endos[fr], &endos[fs])),
                (ring.mul(s as Elem, r as Elem), compose(&endos[fs], &endos[fr])),
            ];
            for (target, map) in checks {
                if let Some(ft) = assigned[target as usize] {
                    if endos[ft] != map {
                        return false;
                    }
                }
            }
        }
        true
    };
    let mut out = Vec::new();
    fn go(
        r: usize,
        assigned: &mut Vec<Option<usize>>,
        choices: usize,
        consistent: &dyn Fn(&[Option<usize>], usize) -> bool,
        found: &mut Vec<Vec<usize>>,
    ) {
        if r == assigned.len() {
            found.push(assigned.iter().map(|x| x.expect("complete assignment")).collect());
            return;
        }
        if assigned[r].is_some() {
            if consistent(assigned, r) {
                go(r + 1, assigned, choices, consistent, found);
            }
            return;
        }
        for c in 0..choices {
            assigned[r] = Some(c);
            if consistent(assigned, r) {
                go(r + 1, assigned, choices, consistent, found);
            }
        }
        assigned[r] = None;
    }
    let mut found = Vec::new();
    go(0, &mut assigned, endos.len(), &consistent, &mut found);
    for choice in found {
        let table: Vec<Elem> = choice.iter().flat_map(|&c| endos[c].iter().copied()).collect();
        out.push(Module::from_table(ring, group, table)?);
    }
    Ok(out)
}

/// Parses a module descriptor:
/// `REG(ring)`, `TWOSIDED(ring)`, `VEC t (module)`, `POW t (module)`,
/// `FAITHFUL(module)`, `PRIMARY p (module)`, or a bare ring spec (regular module when the
/// ring is commutative, two-sided otherwise).
pub fn parse_module_spec(text: &str) -> Result<Module> {
    let t = text.trim();
    let kw_len = t.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(t.len());
    let (kw, rest) = t.split_at(kw_len);
    let rest = rest.trim();
    let number_then_inner = |rest: &str| -> Result<(u64, String)> {
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let n = rest[..len]
            .parse()
            .map_err(|_| Error::MalformedSpec(format!("expected integer in '{t}'")))?;
        Ok((n, unparen(rest[len..].trim()).to_string()))
    };
    match kw.to_ascii_uppercase().as_str() {
        "REG" => Ok(Module::regular(&parse_ring_spec(unparen(rest))?)),
        "TWOSIDED" => Module::two_sided(&parse_ring_spec(unparen(rest))?),
        "VEC" => {
            let (n, inner) = number_then_inner(rest)?;
            if n == 0 {
                return Err(Error::MalformedSpec("VEC dimension must be positive".into()));
            }
            Module::vector(&parse_module_spec(&inner)?, n as usize)
        }
        "POW" => {
            let (n, inner) = number_then_inner(rest)?;
            if n == 0 {
                return Err(Error::MalformedSpec("POW exponent must be positive".into()));
            }
            Module::power(&parse_module_spec(&inner)?, n as usize)
        }
        "FAITHFUL" => Ok(parse_module_spec(unparen(rest))?.faithful_quotient()?.1),
        "PRIMARY" => {
            let (p, inner) = number_then_inner(rest)?;
            Ok(parse_module_spec(&inner)?.split_primary(p)?.0)
        }
        _ => {
            let r = parse_ring_spec(t)?;
            if r.is_commutative() {
                Ok(Module::regular(&r))
            } else {
                Module::two_sided(&r)
            }
        }
    }
}

fn unparen(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        // only strip when the outer parentheses match each other
        let mut depth = 0;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != s.len() - 1 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        return s[1..s.len() - 1].trim();
    }
    s
}
