//! Depth-first search over edge rows with dominance and capacity pruning.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use super::span::{Row, RowArith, Span};
use crate::error::Result;
use crate::network::{Network, Topology};

/// Static layout of one search problem.
pub(crate) struct Plan {
    pub topo: Topology,
    /// Edges in assignment order; edges feeding no receiver are absent and stay zero.
    pub order: Vec<usize>,
    /// Position of each edge in `order`.
    pub position: Vec<Option<usize>>,
    /// Receivers whose inputs become complete after assigning `order[i]`.
    pub complete_at: Vec<Vec<usize>>,
    /// Receivers complete before any assignment.
    pub complete_at_root: Vec<usize>,
    /// `order[i]` parallels `order[i - 1]`.
    pub parallel_prev: Vec<bool>,
    pub receivers: Vec<usize>,
    /// Demanded unit columns per receiver.
    pub demanded: HashMap<usize, Vec<usize>>,
}

impl Plan {
    pub fn new(net: &Network) -> Result<Plan> {
        let topo = net.validate()?;
        let nv = topo.node_index.len();
        let mut pos_in_topo = vec![0; nv];
        for (i, &v) in topo.order.iter().enumerate() {
            pos_in_topo[v] = i;
        }
        let mut receivers: Vec<usize> = Vec::new();
        let mut demanded: HashMap<usize, Vec<usize>> = HashMap::new();
        for (d, &r) in topo.demand_receiver.iter().enumerate() {
            if !receivers.contains(&r) {
                receivers.push(r);
            }
            demanded.entry(r).or_default().push(topo.demand_message[d]);
        }
        let mut placed = vec![false; net.edges.len()];
        let mut order = Vec::new();
        for &r in &receivers {
            // ancestors of r, r included
            let mut anc = vec![false; nv];
            let mut stack = vec![r];
            anc[r] = true;
            while let Some(v) = stack.pop() {
                for &e in &topo.in_edges[v] {
                    let t = topo.tail[e];
                    if !anc[t] {
                        anc[t] = true;
                        stack.push(t);
                    }
                }
            }
            let mut new: Vec<usize> =
                (0..net.edges.len()).filter(|&e| !placed[e] && anc[topo.head[e]]).collect();
            new.sort_by_key(|&e| (pos_in_topo[topo.tail[e]], e));
            for e in new {
                placed[e] = true;
                order.push(e);
            }
        }
        let mut position = vec![None; net.edges.len()];
        for (i, &e) in order.iter().enumerate() {
            position[e] = Some(i);
        }
        let mut complete_at = vec![Vec::new(); order.len()];
        let mut complete_at_root = Vec::new();
        for &r in &receivers {
            match topo.in_edges[r].iter().filter_map(|&e| position[e]).max() {
                Some(i) => complete_at[i].push(r),
                None => complete_at_root.push(r),
            }
        }
        let parallel_prev = (0..order.len())
            .map(|i| {
                i > 0 && {
                    let (a, b) = (order[i - 1], order[i]);
                    topo.tail[a] == topo.tail[b] && topo.head[a] == topo.head[b]
                }
            })
            .collect();
        Ok(Plan {
            topo,
            order,
            position,
            complete_at,
            complete_at_root,
            parallel_prev,
            receivers,
            demanded,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Found,
    Exhausted,
    Budget,
    /// Stopped because an earlier partition already holds a solution.
    Aborted,
}

pub(crate) struct Limits {
    pub max_assignments: u64,
    pub deadline: Option<Instant>,
}

/// Per-partition searcher state.
pub(crate) struct Searcher<'a> {
    plan: &'a Plan,
    ar: &'a RowArith,
    limits: &'a Limits,
    /// Row of every edge; unassigned and irrelevant edges are zero.
    pub rows: Vec<Row>,
    pub chosen: Vec<usize>,
    pub assignments: u64,
    span_cache: HashMap<Vec<u64>, Arc<Span>>,
    cand_cache: HashMap<Vec<u64>, Arc<Vec<Row>>>,
    units: Vec<Row>,
    index: usize,
    best: Option<&'a AtomicUsize>,
}

impl<'a> Searcher<'a> {
    pub fn new(
        plan: &'a Plan,
        ar: &'a RowArith,
        limits: &'a Limits,
        index: usize,
        best: Option<&'a AtomicUsize>,
    ) -> Self {
        let units = (0..ar.width).map(|j| ar.unit(j)).collect();
        Searcher {
            plan,
            ar,
            limits,
            rows: vec![vec![0; ar.width]; plan.topo.tail.len()],
            chosen: Vec::new(),
            assignments: 0,
            span_cache: HashMap::new(),
            cand_cache: HashMap::new(),
            units,
            index,
            best,
        }
    }

    /// Input rows of node v from its own messages and its assigned in-edges.
    fn inputs(&self, v: usize, upto: usize, extra: &[usize]) -> Vec<Row> {
        let t = &self.plan.topo;
        let mut rows: Vec<Row> = t.origin_messages[v].iter().map(|&m| self.units[m].clone()).collect();
        for &e in &t.in_edges[v] {
            if self.plan.position[e].is_some_and(|p| p < upto) {
                rows.push(self.rows[e].clone());
            }
        }
        rows.extend(extra.iter().map(|&j| self.units[j].clone()));
        rows
    }

    fn key(&self, rows: &[Row]) -> Vec<u64> {
        let mut k: Vec<u64> = rows.iter().map(|r| self.ar.encode(r)).filter(|&c| c != 0).collect();
        k.sort_unstable();
        k.dedup();
        k
    }

    fn span(&mut self, rows: &[Row]) -> Result<Arc<Span>> {
        let key = self.key(rows);
        if let Some(s) = self.span_cache.get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.ar.span(rows)?);
        if self.span_cache.len() > 200_000 {
            self.span_cache.clear();
        }
        self.span_cache.insert(key, s.clone());
        Ok(s)
    }

    fn candidates(&mut self, rows: &[Row]) -> Result<Arc<Vec<Row>>> {
        let key = self.key(rows);
        if let Some(c) = self.cand_cache.get(&key) {
            return Ok(c.clone());
        }
        let span = self.span(rows)?;
        let c = Arc::new(self.ar.candidates(&span)?);
        if self.cand_cache.len() > 50_000 {
            self.cand_cache.clear();
        }
        self.cand_cache.insert(key, c.clone());
        Ok(c)
    }

    fn decodes(&mut self, r: usize, upto: usize) -> Result<bool> {
        let inputs = self.inputs(r, upto, &[]);
        let span = self.span(&inputs)?;
        Ok(self.plan.demanded[&r].iter().all(|&j| span.contains(self.ar, &self.units[j])))
    }

    /// Upper bound on node v's final input span given the first `upto` edges: a size
    /// bound, and generators of a module that must contain the final span.
    fn upper(&mut self, v: usize, upto: usize, memo: &mut HashMap<usize, (u128, Vec<Row>)>) -> Result<(u128, Vec<Row>)> {
        if let Some(b) = memo.get(&v) {
            return Ok(b.clone());
        }
        let mut gens = self.inputs(v, upto, &[]);
        let mut bound = self.span(&gens)?.size(self.ar.q);
        let pending: Vec<usize> = self.plan.topo.in_edges[v]
            .iter()
            .copied()
            .filter(|&e| self.plan.position[e].is_some_and(|p| p >= upto))
            .collect();
        let mut seen = Vec::new();
        for e in pending {
            let tail = self.plan.topo.tail[e];
            let (b, g) = self.upper(tail, upto, memo)?;
            bound = bound.saturating_mul(b.min(self.ar.q as u128));
            if !seen.contains(&tail) {
                seen.push(tail);
                gens.extend(g);
            }
        }
        let span = self.span(&gens)?;
        bound = bound.min(span.size(self.ar.q));
        let gens = match &*span {
            Span::Basis(ech) => ech.rows.clone(),
            Span::Set(_) => {
                let mut g: Vec<Row> = Vec::new();
                for r in gens {
                    if r.iter().any(|&x| x != 0) && !g.contains(&r) {
                        g.push(r);
                    }
                }
                g
            }
        };
        memo.insert(v, (bound, gens.clone()));
        Ok((bound, gens))
    }

    /// Capacity and reachability test for every receiver still missing inputs.
    fn capacity_ok(&mut self, upto: usize) -> Result<bool> {
        let mut memo = HashMap::new();
        for i in 0..self.plan.receivers.len() {
            let r = self.plan.receivers[i];
            let missing = self.plan.topo.in_edges[r]
                .iter()
                .any(|&e| self.plan.position[e].is_some_and(|p| p >= upto));
            if !missing {
                continue;
            }
            let demanded = self.plan.demanded[&r].clone();
            let need = self.span(&self.inputs(r, upto, &demanded))?.size(self.ar.q);
            let (bound, gens) = self.upper(r, upto, &mut memo)?;
            if need > bound {
                return Ok(false);
            }
            let reach = self.span(&gens)?;
            if !demanded.iter().all(|&j| reach.contains(self.ar, &self.units[j])) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks after the first `upto` edges are assigned.
    fn consistent(&mut self, upto: usize) -> Result<bool> {
        let ready: Vec<usize> = if upto == 0 {
            self.plan.complete_at_root.clone()
        } else {
            self.plan.complete_at[upto - 1].clone()
        };
        for r in ready {
            if !self.decodes(r, upto)? {
                return Ok(false);
            }
        }
        self.capacity_ok(upto)
    }

    pub fn root_ok(&mut self) -> Result<bool> {
        self.consistent(0)
    }

    fn candidates_at(&mut self, pos: usize) -> Result<Arc<Vec<Row>>> {
        let e = self.plan.order[pos];
        let tail = self.plan.topo.tail[e];
        let inputs = self.inputs(tail, pos, &[]);
        self.candidates(&inputs)
    }

    fn assign(&mut self, pos: usize, row: Row, choice: usize) {
        let e = self.plan.order[pos];
        self.rows[e] = row;
        self.chosen.truncate(pos);
        self.chosen.push(choice);
    }

    fn unassign(&mut self, pos: usize) {
        let e = self.plan.order[pos];
        self.rows[e] = vec![0; self.ar.width];
        self.chosen.truncate(pos);
    }

    fn interrupted(&self) -> Option<Outcome> {
        if self.assignments > self.limits.max_assignments {
            return Some(Outcome::Budget);
        }
        if self.assignments.is_multiple_of(256) {
            if self.limits.deadline.is_some_and(|d| Instant::now() > d) {
                return Some(Outcome::Budget);
            }
            if self.best.is_some_and(|b| b.load(Ordering::Relaxed) < self.index) {
                return Some(Outcome::Aborted);
            }
        }
        None
    }

    /// Replays a prefix of candidate indices; false if it no longer applies.
    pub fn replay(&mut self, prefix: &[usize]) -> Result<bool> {
        for (pos, &c) in prefix.iter().enumerate() {
            let cands = self.candidates_at(pos)?;
            let Some(row) = cands.get(c) else { return Ok(false) };
            self.assign(pos, row.clone(), c);
            if !self.consistent(pos + 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All consistent prefixes of the given depth, in search order.
    pub fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<usize>>) -> Result<()> {
        let pos = self.chosen.len();
        if pos == depth || pos == self.plan.order.len() {
            out.push(self.chosen.clone());
            return Ok(());
        }
        let cands = self.candidates_at(pos)?;
        let start = self.start(pos);
        for c in start..cands.len() {
            self.assign(pos, cands[c].clone(), c);
            if self.consistent(pos + 1)? {
                self.prefixes(depth, out)?;
            }
            self.unassign(pos);
        }
        Ok(())
    }

    fn start(&self, pos: usize) -> usize {
        if self.plan.parallel_prev[pos] {
            self.chosen[pos - 1]
        } else {
            0
        }
    }

    pub fn dfs(&mut self, pos: usize) -> Result<Outcome> {
        if pos == self.plan.order.len() {
            return Ok(Outcome::Found);
        }
        let cands = self.candidates_at(pos)?;
        let start = self.start(pos);
        for c in start..cands.len() {
            self.assignments += 1;
            if let Some(stop) = self.interrupted() {
                return Ok(stop);
            }
            self.assign(pos, cands[c].clone(), c);
            if self.consistent(pos + 1)? {
                match self.dfs(pos + 1)? {
                    Outcome::Exhausted => {}
                    other => return Ok(other),
                }
            }
            self.unassign(pos);
        }
        Ok(Outcome::Exhausted)
    }
}
