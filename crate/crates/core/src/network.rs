//! Directed acyclic multigraph networks with messages and demands.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub id: String,
    pub origin: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demand {
    pub receiver: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    pub messages: Vec<Message>,
    pub demands: Vec<Demand>,
}

/// Block sizes of a fractional code: k_i symbols per message, n per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockProfile {
    pub k: Vec<usize>,
    pub n: usize,
}

impl BlockProfile {
    pub fn new(k: Vec<usize>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("edge block size n must be at least 1".into()));
        }
        Ok(BlockProfile { k, n })
    }

    pub fn scalar(messages: usize) -> Self {
        BlockProfile { k: vec![1; messages], n: 1 }
    }

    pub fn scaled(&self, t: usize) -> Self {
        BlockProfile { k: self.k.iter().map(|&k| k * t).collect(), n: self.n * t }
    }

    /// Total message width K = Σ k_i.
    pub fn total(&self) -> usize {
        self.k.iter().sum()
    }
}

/// Index structure of a validated network.
#[derive(Clone, Debug)]
pub struct Topology {
    /// Node indices in topological order.
    pub order: Vec<usize>,
    pub node_index: HashMap<String, usize>,
    pub tail: Vec<usize>,
    pub head: Vec<usize>,
    /// Incoming edge indices per node, in edge-list order.
    pub in_edges: Vec<Vec<usize>>,
    pub out_edges: Vec<Vec<usize>>,
    /// Message indices originating at each node, in message-list order.
    pub origin_messages: Vec<Vec<usize>>,
    pub message_origin: Vec<usize>,
    pub demand_receiver: Vec<usize>,
    pub demand_message: Vec<usize>,
}

impl Network {
    pub fn from_json(text: &str) -> Result<Self> {
        let n: Network = serde_json::from_str(text)?;
        n.validate()?;
        Ok(n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("networks serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("networks serialize")
    }

    /// Checks references and acyclicity; returns the index structure with a
    /// deterministic topological order (smallest ready node index first).
    pub fn validate(&self) -> Result<Topology> {
        let mut node_index = HashMap::new();
        for (i, v) in self.nodes.iter().enumerate() {
            if node_index.insert(v.clone(), i).is_some() {
                return Err(Error::Duplicate(format!("node {v}")));
            }
        }
        let node = |v: &str| {
            node_index
                .get(v)
                .copied()
                .ok_or_else(|| Error::Dangling(format!("node {v}")))
        };
        let nn = self.nodes.len();
        let mut edge_ids = HashSet::new();
        let (mut tail, mut head) = (Vec::new(), Vec::new());
        let mut in_edges = vec![Vec::new(); nn];
        let mut out_edges = vec![Vec::new(); nn];
        for (i, e) in self.edges.iter().enumerate() {
            if !edge_ids.insert(e.id.as_str()) {
                return Err(Error::Duplicate(format!("edge {}", e.id)));
            }
            let (t, h) = (node(&e.tail)?, node(&e.head)?);
            tail.push(t);
            head.push(h);
            out_edges[t].push(i);
            in_edges[h].push(i);
        }
        let mut message_index = HashMap::new();
        let mut origin_messages = vec![Vec::new(); nn];
        let mut message_origin = Vec::new();
        for (i, m) in self.messages.iter().enumerate() {
            if message_index.insert(m.id.as_str(), i).is_some() {
                return Err(Error::Duplicate(format!("message {}", m.id)));
            }
            let o = node(&m.origin)?;
            origin_messages[o].push(i);
            message_origin.push(o);
        }
        let (mut demand_receiver, mut demand_message) = (Vec::new(), Vec::new());
        for d in &self.demands {
            demand_receiver.push(node(&d.receiver)?);
            demand_message.push(
                *message_index
                    .get(d.message.as_str())
                    .ok_or_else(|| Error::Dangling(format!("message {}", d.message)))?,
            );
        }
        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..nn).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(nn);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &e in &out_edges[v] {
                indeg[head[e]] -= 1;
                if indeg[head[e]] == 0 {
                    ready.push(Reverse(head[e]));
                }
            }
        }
        if order.len() != nn {
            let stuck = (0..nn).find(|&v| indeg[v] > 0).unwrap();
            return Err(Error::Cycle(self.nodes[stuck].clone()));
        }
        Ok(Topology {
            order,
            node_index,
            tail,
            head,
            in_edges,
            out_edges,
            origin_messages,
            message_origin,
            demand_receiver,
            demand_message,
        })
    }

    /// Topological order as node ids.
    pub fn topological_order(&self) -> Result<Vec<String>> {
        let t = self.validate()?;
        Ok(t.order.iter().map(|&v| self.nodes[v].clone()).collect())
    }

    /// Edge `e` becomes `e.1..e.n`; message `x` becomes `x.1..x.k`; demands follow.
    pub fn fractional(&self, profile: &BlockProfile) -> Result<Network> {
        if profile.k.len() != self.messages.len() {
            return Err(Error::Shape(format!(
                "profile has {} block sizes for {} messages",
                profile.k.len(),
                self.messages.len()
            )));
        }
        if profile.n == 0 {
            return Err(Error::Precondition("n must be at least 1".into()));
        }
        let topo = self.validate()?;
        let edges = self
            .edges
            .iter()
            .flat_map(|e| {
                (1..=profile.n).map(move |j| Edge {
                    id: format!("{}.{j}", e.id),
                    tail: e.tail.clone(),
                    head: e.head.clone(),
                })
            })
            .collect();
        let messages = self
            .messages
            .iter()
            .zip(&profile.k)
            .flat_map(|(m, &k)| {
                (1..=k).map(move |j| Message { id: format!("{}.{j}", m.id), origin: m.origin.clone() })
            })
            .collect();
        let demands = self
            .demands
            .iter()
            .zip(&topo.demand_message)
            .flat_map(|(d, &mi)| {
                (1..=profile.k[mi]).map(move |j| Demand {
                    receiver: d.receiver.clone(),
                    message: format!("{}.{j}", d.message),
                })
            })
            .collect();
        Ok(Network { nodes: self.nodes.clone(), edges, messages, demands })
    }

    /// Disjoint union with every id prefixed by `1.` or `2.`.
    pub fn disjoint_union(&self, other: &Network) -> Network {
        fn tag(n: &Network, p: &str) -> Network {
            let f = |s: &str| format!("{p}.{s}");
            Network {
                nodes: n.nodes.iter().map(|v| f(v)).collect(),
                edges: n
                    .edges
                    .iter()
                    .map(|e| Edge { id: f(&e.id), tail: f(&e.tail), head: f(&e.head) })
                    .collect(),
                messages: n
                    .messages
                    .iter()
                    .map(|m| Message { id: f(&m.id), origin: f(&m.origin) })
                    .collect(),
                demands: n
                    .demands
                    .iter()
                    .map(|d| Demand { receiver: f(&d.receiver), message: f(&d.message) })
                    .collect(),
            }
        }
        let (a, b) = (tag(self, "1"), tag(other, "2"));
        Network {
            nodes: [a.nodes, b.nodes].concat(),
            edges: [a.edges, b.edges].concat(),
            messages: [a.messages, b.messages].concat(),
            demands: [a.demands, b.demands].concat(),
        }
    }

    /// Number of weakly connected components.
    pub fn components(&self) -> Result<usize> {
        let t = self.validate()?;
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in 0..self.edges.len() {
            let (a, b) = (find(&mut parent, t.tail[e]), find(&mut parent, t.head[e]));
            parent[a] = b;
        }
        Ok((0..n).filter(|&v| find(&mut parent, v) == v).count())
    }

    /// Isomorphism up to relabeling of nodes, edges and messages (backtracking over nodes).
    pub fn is_isomorphic(&self, other: &Network) -> bool {
        let (Ok(a), Ok(b)) = (self.validate(), other.validate()) else {
            return false;
        };
        let n = self.nodes.len();
        if n != other.nodes.len()
            || self.edges.len() != other.edges.len()
            || self.messages.len() != other.messages.len()
            || self.demands.len() != other.demands.len()
        {
            return false;
        }
        let profile = |net: &Network, t: &Topology, v: usize| {
            let demanded = t.demand_receiver.iter().filter(|&&r| r == v).count();
            (t.in_edges[v].len(), t.out_edges[v].len(), t.origin_messages[v].len(), demanded, net.nodes.len())
        };
        let pa: Vec<_> = (0..n).map(|v| profile(self, &a, v)).collect();
        let pb: Vec<_> = (0..n).map(|v| profile(other, &b, v)).collect();
        let mult = |t: &Topology, m: usize, x: usize, y: usize| {
            (0..m).filter(|&e| t.tail[e] == x && t.head[e] == y).count()
        };
        let ne = self.edges.len();
        // edge multiplicities must match on mapped pairs
        let ok = |map: &[usize], v: usize| -> bool {
            (0..=v).all(|u| {
                mult(&a, ne, u, v) == mult(&b, ne, map[u], map[v])
                    && mult(&a, ne, v, u) == mult(&b, ne, map[v], map[u])
            })
        };
        // demands as a multiset of (receiver, origin of the demanded message)
        let mut db: Vec<(usize, usize)> = b
            .demand_receiver
            .iter()
            .zip(&b.demand_message)
            .map(|(&r, &m)| (r, b.message_origin[m]))
            .collect();
        db.sort();
        let leaf = |map: &[usize]| -> bool {
            let mut da: Vec<(usize, usize)> = a
                .demand_receiver
                .iter()
                .zip(&a.demand_message)
                .map(|(&r, &m)| (map[r], map[a.message_origin[m]]))
                .collect();
            da.sort();
            da == db
        };
        struct Search<'a> {
            pa: &'a [(usize, usize, usize, usize, usize)],
            pb: &'a [(usize, usize, usize, usize, usize)],
            ok: &'a dyn Fn(&[usize], usize) -> bool,
            leaf: &'a dyn Fn(&[usize]) -> bool,
        }
        fn rec(s: &Search, v: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if v == map.len() {
                return (s.leaf)(map);
            }
            for w in 0..map.len() {
                if used[w] || s.pa[v] != s.pb[w] {
                    continue;
                }
                map[v] = w;
                used[w] = true;
                if (s.ok)(map, v) && rec(s, v + 1, map, used) {
                    return true;
                }
                used[w] = false;
            }
            map[v] = usize::MAX;
            false
        }
        let search = Search { pa: &pa, pb: &pb, ok: &ok, leaf: &leaf };
        rec(&search, 0, &mut vec![usize::MAX; n], &mut vec![false; n])
    }
}

/// Free-function form of [`Network::validate`] returning node ids in order.
pub fn validate_network(n: &Network) -> Result<Vec<String>> {
    n.topological_order()
}

pub fn fractional_network(n: &Network, profile: &BlockProfile) -> Result<Network> {
    n.fractional(profile)
}

pub fn disjoint_union(a: &Network, b: &Network) -> Network {
    a.disjoint_union(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Network {
        Network {
            nodes: vec!["s".into(), "r".into()],
            edges: vec![Edge { id: "e".into(), tail: "s".into(), head: "r".into() }],
            messages: vec![Message { id: "x".into(), origin: "s".into() }],
            demands: vec![Demand { receiver: "r".into(), message: "x".into() }],
        }
    }

    #[test]
    fn single_node() {
        let n = Network { nodes: vec!["a".into()], ..Default::default() };
        assert_eq!(n.topological_order().unwrap(), vec!["a"]);
    }

    #[test]
    fn cycle_detected() {
        let mut n = tiny();
        n.edges.push(Edge { id: "back".into(), tail: "r".into(), head: "s".into() });
        assert!(matches!(n.validate(), Err(Error::Cycle(_))));
    }

    #[test]
    fn dangling_and_duplicates() {
        let mut n = tiny();
        n.demands.push(Demand { receiver: "r".into(), message: "nope".into() });
        assert!(matches!(n.validate(), Err(Error::Dangling(_))));
        let mut n = tiny();
        n.edges.push(n.edges[0].clone());
        assert!(matches!(n.validate(), Err(Error::Duplicate(_))));
    }

    #[test]
    fn json_round_trip() {
        let n = tiny();
        let s = n.to_json();
        assert_eq!(Network::from_json(&s).unwrap().to_json(), s);
    }

    #[test]
    fn fractional_counts() {
        let n = tiny();
        let f = n.fractional(&BlockProfile { k: vec![3], n: 2 }).unwrap();
        assert_eq!(f.edges.len(), 2);
        assert_eq!(f.messages.len(), 3);
        assert_eq!(f.demands.len(), 3);
        assert!(n.fractional(&BlockProfile { k: vec![1], n: 1 }).unwrap().is_isomorphic(&n));
        assert!(n.fractional(&BlockProfile { k: vec![1, 1], n: 1 }).is_err());
    }

    #[test]
    fn union_components() {
        let u = tiny().disjoint_union(&tiny());
        assert_eq!(u.components().unwrap(), 2);
        assert_eq!(u.messages.len(), 2);
        let empty = Network::default();
        assert!(tiny().disjoint_union(&empty).is_isomorphic(&tiny()));
    }
}
