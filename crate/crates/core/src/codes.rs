//! Fractional linear codes over modules: shapes, transfer matrices, verification.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::algebra::{parse_module_spec, Elem, Module};
use crate::error::{Error, Result};
use crate::network::{BlockProfile, Network, Topology};

/// Row-major matrix of ring element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Elem>], cols: usize) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            m.entries[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Rows `start..start + count`.
    pub fn row_block(&self, start: usize, count: usize) -> Matrix {
        Matrix {
            rows: count,
            cols: self.cols,
            entries: self.entries[start * self.cols..(start + count) * self.cols].to_vec(),
        }
    }

    pub fn stack(blocks: &[Matrix], cols: usize) -> Matrix {
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "stacked blocks must share a width");
            entries.extend_from_slice(&b.entries);
            rows += b.rows;
        }
        Matrix { rows, cols, entries }
    }
}

/// Componentwise k_i / n in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RateVector(pub Vec<Ratio<u64>>);

impl RateVector {
    pub fn of_profile(p: &BlockProfile) -> Self {
        RateVector(p.k.iter().map(|&k| Ratio::new(k as u64, p.n as u64)).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|r| r.to_string()).collect()
    }
}

impl fmt::Display for RateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for RateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Per-edge and per-demand coefficient matrices over a module's scalar ring.
///
/// The input layout of a node is: the k_i columns of each message originating there
/// (message-list order), then n columns per incoming edge (edge-list order).
#[derive(Clone, Debug)]
pub struct LinearCode {
    pub module: Module,
    pub profile: BlockProfile,
    /// Aligned with `network.edges`; shape n × input width of the tail.
    pub edges: Vec<Matrix>,
    /// Aligned with `network.demands`; shape k_i × input width of the receiver.
    pub decoders: Vec<Matrix>,
}

/// Column offset of each message in the global width K = Σ k_i.
pub fn message_offsets(profile: &BlockProfile) -> Vec<usize> {
    profile
        .k
        .iter()
        .scan(0, |acc, &k| {
            let o = *acc;
            *acc += k;
            Some(o)
        })
        .collect()
}

pub fn input_width(topo: &Topology, profile: &BlockProfile, v: usize) -> usize {
    topo.origin_messages[v].iter().map(|&m| profile.k[m]).sum::<usize>()
        + profile.n * topo.in_edges[v].len()
}

impl LinearCode {
    /// The all-zero code of the right shape.
    pub fn zero(net: &Network, module: &Module, profile: &BlockProfile) -> Result<Self> {
        let topo = net.validate()?;
        check_profile(net, profile)?;
        let edges = (0..net.edges.len())
            .map(|e| Matrix::zeros(profile.n, input_width(&topo, profile, topo.tail[e])))
            .collect();
        let decoders = (0..net.demands.len())
            .map(|d| {
                Matrix::zeros(
                    profile.k[topo.demand_message[d]],
                    input_width(&topo, profile, topo.demand_receiver[d]),
                )
            })
            .collect();
        Ok(LinearCode { module: module.clone(), profile: profile.clone(), edges, decoders })
    }

    pub fn check_shapes(&self, net: &Network) -> Result<Topology> {
        let topo = net.validate()?;
        check_profile(net, &self.profile)?;
        if self.edges.len() != net.edges.len() || self.decoders.len() != net.demands.len() {
            return Err(Error::Shape("matrix count differs from the network".into()));
        }
        let size = self.module.ring().size() as Elem;
        for (e, m) in self.edges.iter().enumerate() {
            let w = input_width(&topo, &self.profile, topo.tail[e]);
            if m.rows != self.profile.n || m.cols != w || m.entries.len() != m.rows * m.cols {
                return Err(Error::Shape(format!(
                    "edge {} needs {}x{w}, got {}x{}",
                    net.edges[e].id, self.profile.n, m.rows, m.cols
                )));
            }
            if m.entries.iter().any(|&x| x >= size) {
                return Err(Error::Shape(format!("edge {} has an entry outside the ring", net.edges[e].id)));
            }
        }
        for (d, m) in self.decoders.iter().enumerate() {
            let w = input_width(&topo, &self.profile, topo.demand_receiver[d]);
            let k = self.profile.k[topo.demand_message[d]];
            if m.rows != k || m.cols != w || m.entries.len() != m.rows * m.cols {
                return Err(Error::Shape(format!("decoder {d} needs {k}x{w}, got {}x{}", m.rows, m.cols)));
            }
            if m.entries.iter().any(|&x| x >= size) {
                return Err(Error::Shape(format!("decoder {d} has an entry outside the ring")));
            }
        }
        Ok(topo)
    }

    pub fn rate_vector(&self) -> RateVector {
        RateVector::of_profile(&self.profile)
    }

    pub fn to_json(&self, net: &Network) -> Value {
        let mut edges = Map::new();
        for (e, m) in net.edges.iter().zip(&self.edges) {
            edges.insert(e.id.clone(), json!(m));
        }
        let mut decoders = Map::new();
        for (d, m) in net.demands.iter().zip(&self.decoders) {
            decoders.insert(format!("{}/{}", d.receiver, d.message), json!(m));
        }
        json!({
            "module": self.module.descriptor(),
            "profile": self.profile,
            "edges": edges,
            "decoders": decoders,
        })
    }

    /// Reads a code whose module descriptor can be rebuilt from text.
    pub fn from_json(net: &Network, v: &Value) -> Result<Self> {
        let desc = v["module"]
            .as_str()
            .or_else(|| v["ring_spec"].as_str())
            .ok_or_else(|| Error::Json("code needs a module descriptor".into()))?;
        let module = parse_module_spec(desc)?;
        Self::from_json_with_module(net, v, &module)
    }

    pub fn from_json_with_module(net: &Network, v: &Value, module: &Module) -> Result<Self> {
        let profile: BlockProfile = serde_json::from_value(v["profile"].clone())?;
        let get = |section: &str, key: &str| -> Result<Matrix> {
            let m = v[section]
                .get(key)
                .ok_or_else(|| Error::Json(format!("missing {section} entry '{key}'")))?;
            Ok(serde_json::from_value(m.clone())?)
        };
        let edges = net.edges.iter().map(|e| get("edges", &e.id)).collect::<Result<_>>()?;
        let decoders = net
            .demands
            .iter()
            .map(|d| get("decoders", &format!("{}/{}", d.receiver, d.message)))
            .collect::<Result<_>>()?;
        let code = LinearCode { module: module.clone(), profile, edges, decoders };
        code.check_shapes(net)?;
        Ok(code)
    }
}

fn check_profile(net: &Network, p: &BlockProfile) -> Result<()> {
    if p.k.len() != net.messages.len() {
        return Err(Error::Shape(format!(
            "profile has {} block sizes for {} messages",
            p.k.len(),
            net.messages.len()
        )));
    }
    if p.n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    Ok(())
}

/// Global coefficient rows (width K) of every edge symbol and decoded symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub edges: Vec<Vec<Vec<Elem>>>,
    pub decoders: Vec<Vec<Vec<Elem>>>,
}

pub fn global_transfer(net: &Network, code: &LinearCode) -> Result<Transfer> {
    let topo = code.check_shapes(net)?;
    let r = code.module.ring();
    let p = &code.profile;
    let kk = p.total();
    let offsets = message_offsets(p);
    let mut edges: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); net.edges.len()];
    let mut decoders: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); net.demands.len()];
    let mut demands_at: HashMap<usize, Vec<usize>> = HashMap::new();
    for (d, &v) in topo.demand_receiver.iter().enumerate() {
        demands_at.entry(v).or_default().push(d);
    }
    let apply = |m: &Matrix, inputs: &[Vec<Elem>]| -> Vec<Vec<Elem>> {
        (0..m.rows)
            .map(|i| {
                let mut out = vec![0; kk];
                for (c, input) in inputs.iter().enumerate() {
                    let a = m.get(i, c);
                    if a == 0 {
                        continue;
                    }
                    for (o, &x) in out.iter_mut().zip(input) {
                        *o = r.add(*o, r.mul(a, x));
                    }
                }
                out
            })
            .collect()
    };
    for &v in &topo.order {
        let mut inputs: Vec<Vec<Elem>> = Vec::new();
        for &m in &topo.origin_messages[v] {
            for j in 0..p.k[m] {
                let mut row = vec![0; kk];
                row[offsets[m] + j] = r.one();
                inputs.push(row);
            }
        }
        for &e in &topo.in_edges[v] {
            inputs.extend(edges[e].iter().cloned());
        }
        for &e in &topo.out_edges[v] {
            edges[e] = apply(&code.edges[e], &inputs);
        }
        for &d in demands_at.get(&v).into_iter().flatten() {
            decoders[d] = apply(&code.decoders[d], &inputs);
        }
    }
    Ok(Transfer { edges, decoders })
}

/// True iff every decoder's global matrix acts as the projection onto its demanded block:
/// identity-position coefficients act as 1 on G, all others act as 0.
pub fn verify_solution(net: &Network, code: &LinearCode) -> Result<bool> {
    let t = global_transfer(net, code)?;
    let topo = net.validate()?;
    let offsets = message_offsets(&code.profile);
    let mut one_cache: HashMap<Elem, bool> = HashMap::new();
    let mut zero_cache: HashMap<Elem, bool> = HashMap::new();
    let m = &code.module;
    for (d, rows) in t.decoders.iter().enumerate() {
        let msg = topo.demand_message[d];
        for (j, row) in rows.iter().enumerate() {
            for (c, &a) in row.iter().enumerate() {
                let ok = if c == offsets[msg] + j {
                    *one_cache.entry(a).or_insert_with(|| m.acts_as_one(a))
                } else {
                    *zero_cache.entry(a).or_insert_with(|| m.acts_as_zero(a))
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Symbols on every edge and at every decoder for one message assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub edges: Vec<Vec<Elem>>,
    pub decoded: Vec<Vec<Elem>>,
}

/// Runs the code on concrete message symbols (`messages[i]` has k_i group elements).
pub fn evaluate(net: &Network, code: &LinearCode, messages: &[Vec<Elem>]) -> Result<Evaluation> {
    let topo = code.check_shapes(net)?;
    let p = &code.profile;
    if messages.len() != p.k.len() || messages.iter().zip(&p.k).any(|(m, &k)| m.len() != k) {
        return Err(Error::Shape("message symbols do not match the profile".into()));
    }
    let (m, g) = (&code.module, code.module.group());
    let apply = |a: &Matrix, inputs: &[Elem]| -> Vec<Elem> {
        (0..a.rows)
            .map(|i| {
                inputs
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (c, &x)| g.add(acc, m.act(a.get(i, c), x)))
            })
            .collect()
    };
    let mut edges = vec![Vec::new(); net.edges.len()];
    let mut decoded = vec![Vec::new(); net.demands.len()];
    for &v in &topo.order {
        let mut inputs: Vec<Elem> = Vec::new();
        for &mi in &topo.origin_messages[v] {
            inputs.extend_from_slice(&messages[mi]);
        }
        for &e in &topo.in_edges[v] {
            inputs.extend_from_slice(&edges[e]);
        }
        for &e in &topo.out_edges[v] {
            edges[e] = apply(&code.edges[e], &inputs);
        }
        for (d, &r) in topo.demand_receiver.iter().enumerate() {
            if r == v {
                decoded[d] = apply(&code.decoders[d], &inputs);
            }
        }
    }
    Ok(Evaluation { edges, decoded })
}

pub fn rate_vector(code: &LinearCode) -> RateVector {
    code.rate_vector()
}
