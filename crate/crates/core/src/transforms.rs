//! Code-to-code maps between networks, modules and rings, each with a certificate.

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    find_matrix_field_quotient, Elem, FiniteRing, Module, RingHom, DEFAULT_SEARCH_BOUND,
};
use crate::codes::{LinearCode, Matrix, RateVector};
use crate::error::{Error, Result};
use crate::network::{BlockProfile, Network};

/// Record of one transport step.
#[derive(Clone, Debug, Serialize)]
pub struct TransportCertificate {
    pub lemma: String,
    pub source_module: String,
    pub target_module: String,
    pub source_profile: BlockProfile,
    pub target_profile: BlockProfile,
    pub source_rate: RateVector,
    pub target_rate: RateVector,
    pub witness: Value,
}

impl TransportCertificate {
    fn new(lemma: &str, from: &LinearCode, to: &LinearCode, witness: Value) -> Self {
        TransportCertificate {
            lemma: lemma.into(),
            source_module: from.module.descriptor().into(),
            target_module: to.module.descriptor().into(),
            source_profile: from.profile.clone(),
            target_profile: to.profile.clone(),
            source_rate: from.rate_vector(),
            target_rate: to.rate_vector(),
            witness,
        }
    }
}

/// A transported code together with its certificate.
#[derive(Clone, Debug)]
pub struct Transported {
    pub code: LinearCode,
    pub certificate: TransportCertificate,
}

fn scale_of(big: &BlockProfile, small: &BlockProfile) -> Result<usize> {
    if big.k.len() != small.k.len() || small.n == 0 || !big.n.is_multiple_of(small.n) {
        return Err(Error::Shape(format!("profile {big:?} is not a multiple of {small:?}")));
    }
    let t = big.n / small.n;
    if big.k.iter().zip(&small.k).any(|(&b, &s)| b != t * s) {
        return Err(Error::Shape(format!("profile {big:?} is not {t} times {small:?}")));
    }
    Ok(t)
}

/// Splits a (t·k, t·n) code for `net` into a t-dimensional vector code (every message and
/// edge of size t) for the (k, n)-fractional network. Returns that network as well.
pub fn code_to_equiv_network(
    net: &Network,
    code: &LinearCode,
    profile: &BlockProfile,
) -> Result<(Network, Transported)> {
    code.check_shapes(net)?;
    let t = scale_of(&code.profile, profile)?;
    let frac = net.fractional(profile)?;
    let topo = net.validate()?;
    let mut edges = Vec::with_capacity(frac.edges.len());
    for m in &code.edges {
        for j in 0..profile.n {
            edges.push(m.row_block(j * t, t));
        }
    }
    let mut decoders = Vec::with_capacity(frac.demands.len());
    for (d, m) in code.decoders.iter().enumerate() {
        for j in 0..profile.k[topo.demand_message[d]] {
            decoders.push(m.row_block(j * t, t));
        }
    }
    let out = LinearCode {
        module: code.module.clone(),
        profile: BlockProfile { k: vec![t; profile.total()], n: t },
        edges,
        decoders,
    };
    out.check_shapes(&frac)?;
    let certificate = TransportCertificate::new(
        "equiv-split",
        code,
        &out,
        json!({ "t": t, "fractional_profile": profile }),
    );
    Ok((frac, Transported { code: out, certificate }))
}

/// Inverse of [`code_to_equiv_network`]: joins the row blocks of a t-dimensional vector
/// code on the (k, n)-fractional network into a (t·k, t·n) code for `net`.
pub fn code_from_equiv_network(
    net: &Network,
    profile: &BlockProfile,
    code: &LinearCode,
) -> Result<Transported> {
    let frac = net.fractional(profile)?;
    code.check_shapes(&frac)?;
    let t = code.profile.n;
    if code.profile.k.iter().any(|&k| k != t) {
        return Err(Error::Shape("vector code must use block size t for every message".into()));
    }
    let topo = net.validate()?;
    let mut edges = Vec::with_capacity(net.edges.len());
    for e in 0..net.edges.len() {
        let blocks = &code.edges[e * profile.n..(e + 1) * profile.n];
        edges.push(Matrix::stack(blocks, blocks[0].cols));
    }
    let mut decoders = Vec::with_capacity(net.demands.len());
    let mut next = 0;
    let widths = LinearCode::zero(net, &code.module, &profile.scaled(t))?;
    for d in 0..net.demands.len() {
        let k = profile.k[topo.demand_message[d]];
        let blocks = &code.decoders[next..next + k];
        next += k;
        decoders.push(Matrix::stack(blocks, widths.decoders[d].cols));
    }
    let out = LinearCode { module: code.module.clone(), profile: profile.scaled(t), edges, decoders };
    out.check_shapes(net)?;
    let certificate =
        TransportCertificate::new("equiv-join", code, &out, json!({ "t": t, "fractional_profile": profile }));
    Ok(Transported { code: out, certificate })
}

/// Flattens a code over M_t(R) acting on G^t into a (t·k, t·n) code over R acting on G.
/// Each G^t symbol becomes t consecutive G symbols.
pub fn vectorize_code(code: &LinearCode) -> Result<Transported> {
    let (base, t) = code
        .module
        .vector_parts()
        .ok_or_else(|| Error::Precondition(format!("{} is not a vector module", code.module.descriptor())))?;
    let r = code.module.ring();
    let expand = |m: &Matrix| -> Matrix {
        let mut out = Matrix::zeros(m.rows * t, m.cols * t);
        for i in 0..m.rows {
            for j in 0..m.cols {
                let block = r.matrix_entries(m.get(i, j));
                for a in 0..t {
                    for b in 0..t {
                        out.set(i * t + a, j * t + b, block[a * t + b]);
                    }
                }
            }
        }
        out
    };
    let out = LinearCode {
        module: base.clone(),
        profile: code.profile.scaled(t),
        edges: code.edges.iter().map(expand).collect(),
        decoders: code.decoders.iter().map(expand).collect(),
    };
    let certificate = TransportCertificate::new("vectorize", code, &out, json!({ "t": t }));
    Ok(Transported { code: out, certificate })
}

/// Inverse of [`vectorize_code`]: groups a (t·k, t·n) code over M into t×t blocks, giving a
/// (k, n) code over `VEC t (M)`.
pub fn devectorize_code(code: &LinearCode, t: usize) -> Result<Transported> {
    if t == 0 {
        return Err(Error::Precondition("t must be positive".into()));
    }
    let small = BlockProfile {
        k: code.profile.k.iter().map(|&k| k / t).collect(),
        n: code.profile.n / t,
    };
    if small.n == 0 || scale_of(&code.profile, &small).ok() != Some(t) {
        return Err(Error::Shape(format!("profile {:?} is not divisible by {t}", code.profile)));
    }
    let module = Module::vector(&code.module, t)?;
    let r = module.ring().clone();
    let shrink = |m: &Matrix| -> Matrix {
        let mut out = Matrix::zeros(m.rows / t, m.cols / t);
        for i in 0..out.rows {
            for j in 0..out.cols {
                let mut block = Vec::with_capacity(t * t);
                for a in 0..t {
                    for b in 0..t {
                        block.push(m.get(i * t + a, j * t + b));
                    }
                }
                out.set(i, j, r.matrix_from_entries(&block));
            }
        }
        out
    };
    let out = LinearCode {
        module,
        profile: small,
        edges: code.edges.iter().map(shrink).collect(),
        decoders: code.decoders.iter().map(shrink).collect(),
    };
    let certificate = TransportCertificate::new("devectorize", code, &out, json!({ "t": t }));
    Ok(Transported { code: out, certificate })
}

fn map_entries(code: &LinearCode, module: &Module, f: impl Fn(Elem) -> Elem) -> LinearCode {
    let map = |m: &Matrix| Matrix { rows: m.rows, cols: m.cols, entries: m.entries.iter().map(|&x| f(x)).collect() };
    LinearCode {
        module: module.clone(),
        profile: code.profile.clone(),
        edges: code.edges.iter().map(map).collect(),
        decoders: code.decoders.iter().map(map).collect(),
    }
}

/// Reinterprets the coefficients of a code over a faithful module G_R over another R-module H.
pub fn transport_same_ring(code: &LinearCode, target: &Module) -> Result<Transported> {
    if !code.module.ring().same(target.ring()) {
        return Err(Error::Precondition("target module has a different scalar ring".into()));
    }
    if !code.module.is_faithful() {
        return Err(Error::NotFaithful);
    }
    let out = map_entries(code, target, |x| x);
    let certificate = TransportCertificate::new("same-ring", code, &out, Value::Null);
    Ok(Transported { code: out, certificate })
}

/// Maps every coefficient of a code over a faithful G_R through φ: R → S, giving a code
/// over the S-module `target`.
pub fn transport_hom(code: &LinearCode, phi: &RingHom, target: &Module) -> Result<Transported> {
    if !phi.source.same(code.module.ring()) || !phi.target.same(target.ring()) {
        return Err(Error::Precondition("hom does not connect the two scalar rings".into()));
    }
    if !phi.is_valid() {
        return Err(Error::InvalidHom);
    }
    if !code.module.is_faithful() {
        return Err(Error::NotFaithful);
    }
    let out = map_entries(code, target, |x| phi.apply(x));
    let certificate = TransportCertificate::new("hom", code, &out, json!({ "map": phi.map }));
    Ok(Transported { code: out, certificate })
}

/// Moves a code over G_R to the faithful module G_{R/ann(G)} on the same group.
pub fn transport_faithful(code: &LinearCode) -> Result<Transported> {
    let (phi, module) = code.module.faithful_quotient()?;
    let out = map_entries(code, &module, |x| phi.apply(x));
    let certificate = TransportCertificate::new("faithful", code, &out, json!({ "map": phi.map }));
    Ok(Transported { code: out, certificate })
}

/// Restricts a code to the p-primary part of its group, keeping the coefficients.
pub fn transport_primary(code: &LinearCode, p: u64) -> Result<Transported> {
    let (module, embedding) = code.module.split_primary(p)?;
    if module.group().size() == 1 {
        return Err(Error::Precondition(format!("the {p}-primary component is trivial")));
    }
    let out = map_entries(code, &module, |x| x);
    let certificate =
        TransportCertificate::new("primary", code, &out, json!({ "prime": p, "embedding": embedding }));
    Ok(Transported { code: out, certificate })
}

/// The regular representation GF(q^t) → M_t(GF(q)) for q prime: column j of the image of a
/// holds the coordinates of a·X^j in the basis 1, X, …, X^{t-1}.
pub fn prime_subfield_representation(field: &FiniteRing) -> Result<(FiniteRing, usize, RingHom)> {
    let (p, t) = match field.galois_parts() {
        Some(pk) => pk,
        None if field.is_field() => (field.size() as u32, 1),
        None => return Err(Error::Precondition(format!("{} is not a field", field.spec()))),
    };
    if t == 1 {
        let base = FiniteRing::galois(p, 1, None)?;
        let map = field.elements().collect();
        return Ok((base.clone(), 1, RingHom::checked(field.clone(), base, map)?));
    }
    let t = t as usize;
    let base = FiniteRing::galois(p, 1, None)?;
    let mat = FiniteRing::matrix(&base, t)?;
    // GF(p^t) elements are indexed by their coefficient digits, constant term first
    let coords = |x: Elem| -> Vec<Elem> {
        let mut x = x;
        (0..t)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    };
    let x = p as Elem;
    let powers: Vec<Elem> = (0..t).map(|j| field.pow(x, j as u64)).collect();
    let map = field
        .elements()
        .map(|a| {
            let cols: Vec<Vec<Elem>> = powers.iter().map(|&xj| coords(field.mul(a, xj))).collect();
            let mut entries = vec![0; t * t];
            for (j, col) in cols.iter().enumerate() {
                for (i, &c) in col.iter().enumerate() {
                    entries[i * t + j] = c;
                }
            }
            mat.matrix_from_entries(&entries)
        })
        .collect();
    Ok((base, t, RingHom::checked(field.clone(), mat, map)?))
}

/// A code over GF(q^t) acting on itself becomes a code over M_t(GF(q)) acting on GF(q)^t.
pub fn reduce_to_prime_subfield(code: &LinearCode) -> Result<Transported> {
    let field = code.module.ring();
    if code.module.group().size() != field.size() || !field.is_field() {
        return Err(Error::Precondition("code must be over a finite field acting on itself".into()));
    }
    let (base, t, phi) = prime_subfield_representation(field)?;
    let base_module = Module::regular(&base);
    let mut out = if t == 1 {
        transport_hom(code, &phi, &base_module)?
    } else {
        let target = Module::vector(&base_module, t)?;
        let phi = RingHom::new(phi.source.clone(), target.ring().clone(), phi.map.clone());
        transport_hom(code, &phi, &target)?
    };
    out.certificate.lemma = "subfield".into();
    Ok(out)
}

/// Output of [`field_reduction_pipeline`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Profile scale factor relative to the input code.
    pub t: usize,
    pub code: LinearCode,
    pub field: FiniteRing,
    pub certificates: Vec<TransportCertificate>,
}

/// Carries a (k, n) code over any module with p | |G| to a (t·k, t·n) code over a field of
/// characteristic p: faithful quotient, p-primary part, faithful quotient, a surjection onto
/// M_t(F), hom transport, flattening. With `target_field`, the result is further moved to
/// the prime subfield and then included into the requested field.
pub fn field_reduction_pipeline(
    code: &LinearCode,
    p: u64,
    target_field: Option<&FiniteRing>,
) -> Result<Reduction> {
    let g = code.module.group().size() as u64;
    if p < 2 || !g.is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} does not divide |G| = {g}")));
    }
    if let Some(f) = target_field {
        if !f.is_field() || f.characteristic() != p {
            return Err(Error::Precondition(format!("{} is not a field of characteristic {p}", f.spec())));
        }
    }
    let mut certs = Vec::new();
    let step = |tr: Transported, certs: &mut Vec<TransportCertificate>| {
        certs.push(tr.certificate);
        tr.code
    };
    let c = step(transport_faithful(code)?, &mut certs);
    let c = step(transport_primary(&c, p)?, &mut certs);
    let c = step(transport_faithful(&c)?, &mut certs);
    let q = find_matrix_field_quotient(c.module.ring(), Some(p), DEFAULT_SEARCH_BOUND)?;
    let field_module = Module::regular(&q.field);
    let mut t = q.t;
    let mut c = if t == 1 {
        step(transport_hom(&c, &q.hom, &field_module)?, &mut certs)
    } else {
        let target = Module::vector(&field_module, t)?;
        let phi = RingHom::new(q.hom.source.clone(), target.ring().clone(), q.hom.map.clone());
        let v = step(transport_hom(&c, &phi, &target)?, &mut certs);
        step(vectorize_code(&v)?, &mut certs)
    };
    let mut field = q.field.clone();
    if let Some(target) = target_field {
        if !field.same(target) {
            let reduced = step(reduce_to_prime_subfield(&c)?, &mut certs);
            if let Some((_, s)) = reduced.module.vector_parts() {
                t *= s;
                c = step(vectorize_code(&reduced)?, &mut certs);
            } else {
                c = reduced;
            }
            // GF(p) sits inside the target through its identity element
            let prime = c.module.ring().clone();
            let map = prime.elements().map(|a| target.from_int(a as i64)).collect();
            let inclusion = RingHom::checked(prime, target.clone(), map)?;
            c = step(transport_hom(&c, &inclusion, &Module::regular(target))?, &mut certs);
            field = target.clone();
        }
    }
    Ok(Reduction { t, code: c, field, certificates: certs })
}
