//! Exhaustive linear solvability search, achievability decisions and rate-region
//! inner bounds.
//!
//! The search runs over the faithful quotient S of the module's ring, where acting as
//! one or zero is ring equality. Every edge carries a row of S^K (its global
//! coefficients); it is chosen among one generator per maximal cyclic submodule of its
//! tail's input span, which loses no solutions because a dominated row can always be
//! recomputed downstream from the dominating one.

mod search;
mod span;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::numtheory::is_prime;
use crate::algebra::{Elem, FiniteRing, Module};
use crate::codes::{verify_solution, LinearCode, RateVector};
use crate::error::{Error, Result};
use crate::generators::char_network_code;
use crate::network::{BlockProfile, Network};
use crate::transforms::code_from_equiv_network;
use search::{Limits, Outcome, Plan, Searcher};
pub use span::{Row, RowArith, Span};

/// Number of partitions the search space is cut into, independent of the thread count.
pub const PARTITIONS: usize = 64;

#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Per partition, so verdicts do not depend on scheduling.
    pub max_assignments: u64,
    pub max_time: Option<Duration>,
    pub max_t: usize,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs sequentially.
    pub threads: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_assignments: 2_000_000, max_time: None, max_t: 1, threads: None }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_assignments == 0 || self.max_t == 0 || self.threads == Some(0) {
            return Err(Error::Precondition("budget fields must be positive".into()));
        }
        if self.max_time.is_some_and(|d| d.is_zero()) {
            return Err(Error::Precondition("budget fields must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Achieved,
    ExhaustedNo,
    BudgetExceeded,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Achieved => "achieved",
            Verdict::ExhaustedNo => "exhausted-no",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub verdict: Verdict,
    /// Verified scalar code over the input module.
    pub code: Option<LinearCode>,
    pub partitions: usize,
    /// Assignments made in partitions up to and including the one that decided.
    pub assignments: u64,
}

/// Looks for a scalar linear solution of `net` over `module`.
pub fn search_scalar_linear(net: &Network, module: &Module, budget: &SearchBudget) -> Result<SearchResult> {
    budget.validate()?;
    let plan = Plan::new(net)?;
    let (phi, faithful) = module.faithful_quotient()?;
    let section = phi.section().ok_or_else(|| Error::Precondition("quotient map is not onto".into()))?;
    let ar = RowArith::new(faithful.ring(), net.messages.len())?;
    let limits = Limits {
        max_assignments: budget.max_assignments,
        deadline: budget.max_time.map(|d| Instant::now() + d),
    };
    let mut root = Searcher::new(&plan, &ar, &limits, 0, None);
    if !root.root_ok()? {
        return Ok(SearchResult { verdict: Verdict::ExhaustedNo, code: None, partitions: 0, assignments: 0 });
    }
    let prefixes = partition(&mut root, plan.order.len())?;
    let outcomes = run_partitions(&plan, &ar, &limits, &prefixes, budget.threads)?;
    let mut assignments = 0;
    let mut any_budget = false;
    for (outcome, rows, count) in outcomes {
        assignments += count;
        match outcome {
            Outcome::Found => {
                let rows = rows.expect("found partitions keep their rows");
                let code = extract(net, module, &section, &ar, &rows)?;
                return Ok(SearchResult {
                    verdict: Verdict::Achieved,
                    code: Some(code),
                    partitions: prefixes.len(),
                    assignments,
                });
            }
            Outcome::Budget => any_budget = true,
            Outcome::Exhausted => {}
            Outcome::Aborted => unreachable!("partitions before a solution are never aborted"),
        }
    }
    let verdict = if any_budget { Verdict::BudgetExceeded } else { Verdict::ExhaustedNo };
    Ok(SearchResult { verdict, code: None, partitions: prefixes.len(), assignments })
}

/// Consistent prefixes at the shallowest depth giving at least [`PARTITIONS`] of them.
fn partition(root: &mut Searcher, len: usize) -> Result<Vec<Vec<usize>>> {
    let mut prefixes = vec![Vec::new()];
    for depth in 1..=len.min(8) {
        let mut next = Vec::new();
        root.prefixes(depth, &mut next)?;
        prefixes = next;
        if prefixes.len() >= PARTITIONS || prefixes.is_empty() {
            break;
        }
    }
    Ok(prefixes)
}

type PartitionResult = (Outcome, Option<Vec<Row>>, u64);

fn run_one(plan: &Plan, ar: &RowArith, limits: &Limits, prefix: &[usize], i: usize, best: Option<&AtomicUsize>) -> Result<PartitionResult> {
    let mut s = Searcher::new(plan, ar, limits, i, best);
    if !s.replay(prefix)? {
        return Ok((Outcome::Exhausted, None, 0));
    }
    let outcome = s.dfs(prefix.len())?;
    if outcome == Outcome::Found {
        if let Some(b) = best {
            b.fetch_min(i, Ordering::Relaxed);
        }
        return Ok((outcome, Some(s.rows), s.assignments));
    }
    Ok((outcome, None, s.assignments))
}

/// Results of the partitions up to the first one holding a solution, in order.
fn run_partitions(
    plan: &Plan,
    ar: &RowArith,
    limits: &Limits,
    prefixes: &[Vec<usize>],
    threads: Option<usize>,
) -> Result<Vec<PartitionResult>> {
    let sequential = || -> Result<Vec<PartitionResult>> {
        let mut out = Vec::new();
        for (i, p) in prefixes.iter().enumerate() {
            let r = run_one(plan, ar, limits, p, i, None)?;
            let found = r.0 == Outcome::Found;
            out.push(r);
            if found {
                break;
            }
        }
        Ok(out)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if threads == Some(1) {
            return sequential();
        }
        let best = AtomicUsize::new(usize::MAX);
        let work = || -> Vec<Result<PartitionResult>> {
            prefixes
                .par_iter()
                .enumerate()
                .map(|(i, p)| {
                    if best.load(Ordering::Relaxed) < i {
                        return Ok((Outcome::Aborted, None, 0));
                    }
                    run_one(plan, ar, limits, p, i, Some(&best))
                })
                .collect()
        };
        let results = match threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Precondition(e.to_string()))?
                .install(work),
            None => work(),
        };
        let mut out = Vec::new();
        for r in results {
            let r = r?;
            let found = r.0 == Outcome::Found;
            out.push(r);
            if found {
                break;
            }
        }
        Ok(out)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        let _ = AtomicUsize::new(0);
        sequential()
    }
}

/// Turns chosen edge rows into a code over `module`, solving for local coefficients.
fn extract(
    net: &Network,
    module: &Module,
    section: &[Elem],
    ar: &RowArith,
    rows: &[Row],
) -> Result<LinearCode> {
    let topo = net.validate()?;
    let profile = BlockProfile::scalar(net.messages.len());
    let mut code = LinearCode::zero(net, module, &profile)?;
    let inputs = |v: usize| -> Vec<Row> {
        let mut out: Vec<Row> = topo.origin_messages[v].iter().map(|&m| ar.unit(m)).collect();
        out.extend(topo.in_edges[v].iter().map(|&e| rows[e].clone()));
        out
    };
    let unsolved = || Error::Precondition("search produced an inexpressible row".into());
    for e in 0..net.edges.len() {
        let c = ar.express(&rows[e], &inputs(topo.tail[e]))?.ok_or_else(unsolved)?;
        code.edges[e].entries = c.iter().map(|&x| section[x as usize]).collect();
    }
    for d in 0..net.demands.len() {
        let target = ar.unit(topo.demand_message[d]);
        let c = ar.express(&target, &inputs(topo.demand_receiver[d]))?.ok_or_else(unsolved)?;
        code.decoders[d].entries = c.iter().map(|&x| section[x as usize]).collect();
    }
    if !verify_solution(net, &code)? {
        return Err(Error::Precondition("search produced a code that does not verify".into()));
    }
    Ok(code)
}

/// Outcome of [`decide_achievable`].
#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    /// The vector dimension at which the profile was achieved.
    pub t: Option<usize>,
    /// Verdict of every dimension tried, in order.
    pub attempts: Vec<(usize, Verdict)>,
    /// A verified (t·k, t·n) code for the original network.
    pub code: Option<LinearCode>,
}

/// Decides whether `profile` is linearly achievable over `module` with vector dimension
/// t ≤ `budget.max_t`. A t-dimensional vector code over `module` on the (k, n)-fractional
/// network is the same thing as a (t·k, t·n) code, which is searched as a scalar code on
/// the (t·k, t·n)-fractional network.
pub fn decide_achievable(
    net: &Network,
    module: &Module,
    profile: &BlockProfile,
    budget: &SearchBudget,
) -> Result<Decision> {
    budget.validate()?;
    net.fractional(profile)?;
    let mut attempts = Vec::new();
    for t in 1..=budget.max_t {
        let scaled = profile.scaled(t);
        let frac = net.fractional(&scaled)?;
        let r = search_scalar_linear(&frac, module, budget)?;
        attempts.push((t, r.verdict));
        if let Some(scalar) = r.code {
            let code = code_from_equiv_network(net, &scaled, &scalar)?.code;
            if !verify_solution(net, &code)? {
                return Err(Error::Precondition("joined code does not verify".into()));
            }
            return Ok(Decision { verdict: Verdict::Achieved, t: Some(t), attempts, code: Some(code) });
        }
    }
    let verdict = if attempts.iter().any(|(_, v)| *v == Verdict::BudgetExceeded) {
        Verdict::BudgetExceeded
    } else {
        Verdict::ExhaustedNo
    };
    Ok(Decision { verdict, t: None, attempts, code: None })
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionPoint {
    pub k: Vec<usize>,
    pub n: usize,
    pub rate: RateVector,
    pub verdict: Verdict,
    pub t: Option<usize>,
}

/// Every lattice profile with k_i ≤ kmax and 1 ≤ n ≤ nmax, with its verdict.
pub fn rate_region_inner(
    net: &Network,
    module: &Module,
    kmax: usize,
    nmax: usize,
    budget: &SearchBudget,
) -> Result<Vec<RegionPoint>> {
    if nmax == 0 {
        return Err(Error::Precondition("nmax must be at least 1".into()));
    }
    let m = net.messages.len();
    let mut points = Vec::new();
    for n in 1..=nmax {
        let mut k = vec![0; m];
        loop {
            let profile = BlockProfile { k: k.clone(), n };
            let d = decide_achievable(net, module, &profile, budget)?;
            points.push(RegionPoint {
                rate: RateVector::of_profile(&profile),
                k: k.clone(),
                n,
                verdict: d.verdict,
                t: d.t,
            });
            // odometer, last coordinate fastest
            let mut i = m;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if k[i] < kmax {
                    k[i] += 1;
                    break;
                }
                k[i] = 0;
            }
            if k.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    Ok(points)
}

/// The distinct rate vectors of the achieved points.
pub fn achieved_rates(points: &[RegionPoint]) -> BTreeSet<Vec<Ratio<u64>>> {
    points
        .iter()
        .filter(|p| p.verdict == Verdict::Achieved)
        .map(|p| p.rate.0.clone())
        .collect()
}

/// Linear capacity of the Char-m network over fields of characteristic p.
#[derive(Clone, Debug)]
pub enum CapacityBound {
    /// p | m: capacity 1, witnessed by the explicit scalar code over GF(p).
    Achieved { m: usize, p: u64, witness: LinearCode },
    /// p ∤ m: the published upper bound 1 − 1/(2m+3); not derived here.
    UpperBound { m: usize, p: u64, value: Ratio<u64> },
}

impl CapacityBound {
    pub fn value(&self) -> Ratio<u64> {
        match self {
            CapacityBound::Achieved { .. } => Ratio::from_integer(1),
            CapacityBound::UpperBound { value, .. } => *value,
        }
    }

    pub fn to_json(&self, net: &Network) -> Value {
        match self {
            CapacityBound::Achieved { m, p, witness } => json!({
                "m": m, "p": p, "kind": "achieved", "value": "1",
                "witness": witness.to_json(net),
            }),
            CapacityBound::UpperBound { m, p, value } => json!({
                "m": m, "p": p, "kind": "upper-bound", "value": value.to_string(),
                "source": "external",
            }),
        }
    }
}

pub fn char_capacity_bound(m: usize, p: u64) -> Result<CapacityBound> {
    if m < 2 {
        return Err(Error::Precondition("m must be at least 2".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if (m as u64).is_multiple_of(p) {
        let field = FiniteRing::galois(p as u32, 1, None)?;
        let witness = char_network_code(m, &field)?;
        Ok(CapacityBound::Achieved { m, p, witness })
    } else {
        let d = 2 * m as u64 + 3;
        Ok(CapacityBound::UpperBound { m, p, value: Ratio::new(d - 1, d) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ring_spec;
    use crate::generators::{butterfly, char_network};

    fn reg(s: &str) -> Module {
        Module::regular(&parse_ring_spec(s).unwrap())
    }

    fn seq() -> SearchBudget {
        SearchBudget { threads: Some(1), ..SearchBudget::default() }
    }

    #[test]
    fn butterfly_over_gf2() {
        let r = search_scalar_linear(&butterfly(), &reg("GF 2 1"), &seq()).unwrap();
        assert_eq!(r.verdict, Verdict::Achieved);
        let code = r.code.unwrap();
        let t = crate::codes::global_transfer(&butterfly(), &code).unwrap();
        assert_eq!(t.edges[4], vec![vec![1, 1]]);
    }

    #[test]
    fn char2_splits_by_characteristic() {
        let net = char_network(2).unwrap();
        for (spec, expect) in [("Z 2", Verdict::Achieved), ("GF 3 1", Verdict::ExhaustedNo), ("Z 4", Verdict::ExhaustedNo)] {
            let r = search_scalar_linear(&net, &reg(spec), &seq()).unwrap();
            assert_eq!(r.verdict, expect, "{spec}");
        }
    }

    #[test]
    fn zero_profile_is_trivial() {
        let d = decide_achievable(&butterfly(), &reg("GF 2 1"), &BlockProfile { k: vec![0, 0], n: 1 }, &seq())
            .unwrap();
        assert_eq!(d.verdict, Verdict::Achieved);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let budget = SearchBudget { max_assignments: 1, threads: Some(1), ..SearchBudget::default() };
        let r = search_scalar_linear(&char_network(2).unwrap(), &reg("GF 3 1"), &budget).unwrap();
        assert_eq!(r.verdict, Verdict::BudgetExceeded);
    }

    #[test]
    fn capacity_table() {
        assert_eq!(char_capacity_bound(2, 3).unwrap().value(), Ratio::new(6, 7));
        assert_eq!(char_capacity_bound(6, 5).unwrap().value(), Ratio::new(14, 15));
        assert!(matches!(char_capacity_bound(2, 2).unwrap(), CapacityBound::Achieved { .. }));
        assert!(char_capacity_bound(2, 4).is_err());
    }

    #[test]
    fn region_rejects_zero_n() {
        assert!(rate_region_inner(&butterfly(), &reg("GF 2 1"), 1, 0, &seq()).is_err());
    }
}
