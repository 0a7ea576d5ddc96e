use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lnc_core::algebra::{
    find_homomorphism, find_matrix_field_quotient, parse_ring_spec, tensor_ring, CoprimeSplit,
    RingHom, DEFAULT_SEARCH_BOUND,
};
use lnc_core::codes::{verify_solution, LinearCode};
use lnc_core::generators::{butterfly, butterfly_code, char_network, char_network_code_over, kn_butterfly};
use lnc_core::network::{disjoint_union, Network};
use lnc_core::solver::{
    char_capacity_bound, decide_achievable, rate_region_inner, search_scalar_linear, RegionPoint, Verdict,
};
use lnc_core::transforms::{
    code_from_equiv_network, code_to_equiv_network, devectorize_code, field_reduction_pipeline,
    reduce_to_prime_subfield, transport_faithful, transport_hom, transport_primary, transport_same_ring,
    vectorize_code, Transported,
};
use serde_json::{json, Value};

use crate::{inputs, repro, Cli, CodeCmd, Command, GenCmd, Lemma, Output, RingCmd};

pub fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Gen(g) => generate(g),
        Command::Ring(r) => ring(r),
        Command::Code(c) => code(c),
        Command::Transport(a) => transport(a),
        Command::Pipeline(a) => {
            let net = inputs::network(&a.net)?;
            let code = inputs::code(&net, &a.code, a.module.as_deref())?;
            let field = a.field.as_deref().map(parse_ring_spec).transpose()?;
            let red = field_reduction_pipeline(&code, a.prime, field.as_ref())?;
            let valid = verify_solution(&net, &red.code)?;
            Ok(Output::json(json!({
                "t": red.t,
                "field": red.field.spec().to_string(),
                "valid": valid,
                "rate": red.code.rate_vector(),
                "code": red.code.to_json(&net),
                "certificates": red.certificates,
            })))
        }
        Command::Solve(a) => {
            let net = inputs::network(&a.net)?;
            let m = inputs::module(&a.module)?;
            let r = search_scalar_linear(&net, &m, &a.budget.budget()?)?;
            Ok(Output::json(json!({
                "verdict": r.verdict,
                "partitions": r.partitions,
                "assignments": r.assignments,
                "code": r.code.map(|c| c.to_json(&net)),
            })))
        }
        Command::Achievable(a) => {
            let net = inputs::network(&a.net)?;
            let m = inputs::module(&a.module)?;
            let profile = inputs::profile(&a.k, a.n)?;
            let d = decide_achievable(&net, &m, &profile, &a.budget.budget()?)?;
            let attempts: Vec<Value> = d.attempts.iter().map(|(t, v)| json!({"t": t, "verdict": v})).collect();
            Ok(Output::json(json!({
                "profile": profile,
                "verdict": d.verdict,
                "t": d.t,
                "attempts": attempts,
                "code": d.code.map(|c| c.to_json(&net)),
            })))
        }
        Command::Region(a) => {
            let net = inputs::network(&a.net)?;
            let m = inputs::module(&a.module)?;
            let points = rate_region_inner(&net, &m, a.kmax, a.nmax, &a.budget.budget()?)?;
            let table = region_table(&net, &points, a.kmax, a.nmax);
            Ok(Output {
                json: json!({ "network": a.net, "module": m.descriptor(), "points": points }),
                table: Some(table),
                ok: true,
            })
        }
        Command::Capacity { m, p } => {
            let b = char_capacity_bound(*m, *p)?;
            let table = format!("Char-{m} over characteristic {p}: {} ({})\n", b.value(), match b {
                lnc_core::solver::CapacityBound::Achieved { .. } => "achieved, witness attached",
                lnc_core::solver::CapacityBound::UpperBound { .. } => "cited upper bound",
            });
            Ok(Output { json: b.to_json(&char_network(*m)?), table: Some(table), ok: true })
        }
        Command::Repro(a) => repro::run(a),
        Command::Batch { manifest } => batch(manifest),
    }
}

fn generate(g: &GenCmd) -> Result<Output> {
    let net = match g {
        GenCmd::Butterfly => butterfly(),
        GenCmd::KnButterfly { kx, ky, n } => kn_butterfly(*kx, *ky, *n)?,
        GenCmd::Char { m } => char_network(*m)?,
        GenCmd::Union { a, b } => disjoint_union(&inputs::network(a)?, &inputs::network(b)?),
        GenCmd::Fractional { net, k, n } => inputs::network(net)?.fractional(&inputs::profile(k, *n)?)?,
    };
    net.validate()?;
    Ok(Output::json(serde_json::to_value(&net)?))
}

fn ring(r: &RingCmd) -> Result<Output> {
    match r {
        RingCmd::Inspect { spec, tables } => {
            let ring = parse_ring_spec(spec)?;
            let mut v = ring.to_json(*tables);
            v["field"] = json!(ring.is_field());
            Ok(Output::json(v))
        }
        RingCmd::Tensor { a, b } => {
            let (ra, rb) = (parse_ring_spec(a)?, parse_ring_spec(b)?);
            let t = tensor_ring(&ra, &rb)?;
            let classes: Vec<Vec<u32>> = ra
                .elements()
                .map(|x| rb.elements().map(|y| t.class(x, y, rb.size())).collect())
                .collect();
            let mut table = format!("{a} (x) {b}: {} elements, invariants {:?}\n", t.ring.size(), t.invariants);
            for (x, row) in classes.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(table, "  [{x} (x) *] -> {}", cells.join(" "));
            }
            Ok(Output {
                json: json!({
                    "left": a, "right": b,
                    "size": t.ring.size(),
                    "invariant_factors": t.invariants,
                    "characteristic": t.ring.characteristic(),
                    "classes": classes,
                    "ring": t.ring.to_json(16),
                }),
                table: Some(table),
                ok: true,
            })
        }
        RingCmd::Quotient { spec, prime } => {
            let ring = parse_ring_spec(spec)?;
            let q = find_matrix_field_quotient(&ring, *prime, DEFAULT_SEARCH_BOUND)?;
            Ok(Output::json(json!({
                "t": q.t,
                "field": q.field.spec().to_string(),
                "target": q.target.spec().to_string(),
                "map": if ring.size() <= 256 { json!(q.hom.map) } else { Value::Null },
            })))
        }
        RingCmd::Hom { source, target, injective } => {
            let (a, b) = (parse_ring_spec(source)?, parse_ring_spec(target)?);
            let phi = find_homomorphism(&a, &b, *injective);
            Ok(Output::json(json!({
                "source": source, "target": target,
                "found": phi.is_some(),
                "map": phi.map(|p| p.map),
            })))
        }
        RingCmd::Module { spec } => {
            let m = inputs::module(spec)?;
            let split = match m.decompose_coprime()? {
                CoprimeSplit::Split { p, primary, complement, .. } => json!({
                    "p": p,
                    "primary": primary.group().size(),
                    "complement": complement.group().size(),
                }),
                CoprimeSplit::PrimePower(_) => Value::Null,
            };
            let (_, q) = m.faithful_quotient()?;
            Ok(Output::json(json!({
                "module": m.descriptor(),
                "ring": m.ring().spec().to_string(),
                "ring_size": m.ring().size(),
                "group_size": m.group().size(),
                "invariant_factors": m.group().invariant_factors(),
                "faithful": m.is_faithful(),
                "faithful_quotient_size": q.ring().size(),
                "coprime_split": split,
            })))
        }
    }
}

fn code(c: &CodeCmd) -> Result<Output> {
    match c {
        CodeCmd::Verify { net, code, module } => {
            let n = inputs::network(net)?;
            let code = inputs::code(&n, code, module.as_deref())?;
            let valid = verify_solution(&n, &code)?;
            Ok(Output::json(json!({ "valid": valid, "rate": code.rate_vector() })))
        }
        CodeCmd::Rate { net, code, module } => {
            let n = inputs::network(net)?;
            let code = inputs::code(&n, code, module.as_deref())?;
            Ok(Output::json(json!({ "profile": code.profile, "rate": code.rate_vector() })))
        }
        CodeCmd::Butterfly { module, kx, ky, n } => {
            let m = inputs::module(module)?;
            let code = butterfly_code(&m, *kx, *ky, *n)?;
            Ok(Output::json(code.to_json(&butterfly())))
        }
        CodeCmd::Char { module, m } => {
            let md = inputs::module(module)?;
            let code = char_network_code_over(*m, &md)?;
            Ok(Output::json(code.to_json(&char_network(*m)?)))
        }
    }
}

fn transported(net: &Network, t: Transported) -> Result<Output> {
    let valid = verify_solution(net, &t.code)?;
    Ok(Output::json(json!({
        "valid": valid,
        "code": t.code.to_json(net),
        "certificate": t.certificate,
    })))
}

fn transport(a: &crate::TransportArgs) -> Result<Output> {
    let net = inputs::network(&a.net)?;
    let small = || -> Result<_> {
        let k = a.k.as_deref().ok_or_else(|| anyhow!("--k is required for {:?}", a.lemma))?;
        let n = a.n.ok_or_else(|| anyhow!("--n is required for {:?}", a.lemma))?;
        inputs::profile(k, n)
    };
    if a.lemma == Lemma::EquivJoin {
        // the input code lives on the fractional network
        let small = small()?;
        let frac = net.fractional(&small)?;
        let code = inputs::code(&frac, &a.code, a.module.as_deref())?;
        return transported(&net, code_from_equiv_network(&net, &small, &code)?);
    }
    let code: LinearCode = inputs::code(&net, &a.code, a.module.as_deref())?;
    let t = match a.lemma {
        Lemma::EquivSplit => {
            let (frac, t) = code_to_equiv_network(&net, &code, &small()?)?;
            let mut out = transported(&frac, t)?;
            out.json["network"] = serde_json::to_value(&frac)?;
            return Ok(out);
        }
        Lemma::EquivJoin => unreachable!(),
        Lemma::Vectorize => vectorize_code(&code)?,
        Lemma::Devectorize => devectorize_code(&code, a.t.ok_or_else(|| anyhow!("--t is required"))?)?,
        Lemma::SameRing => {
            let target = a.target.as_deref().ok_or_else(|| anyhow!("--target is required"))?;
            transport_same_ring(&code, &inputs::module(target)?)?
        }
        Lemma::Hom => {
            let spec = a.target_ring.as_deref().ok_or_else(|| anyhow!("--target-ring is required"))?;
            let target = parse_ring_spec(spec)?;
            let phi: RingHom = find_homomorphism(code.module.ring(), &target, false)
                .ok_or_else(|| anyhow!("no ring homomorphism {} -> {spec}", code.module.ring().spec()))?;
            let h = match &a.target {
                Some(m) => inputs::module(m)?,
                None => lnc_core::algebra::Module::regular(&target),
            };
            transport_hom(&code, &phi, &h)?
        }
        Lemma::Faithful => transport_faithful(&code)?,
        Lemma::Primary => transport_primary(&code, a.prime.ok_or_else(|| anyhow!("--prime is required"))?)?,
        Lemma::Subfield => reduce_to_prime_subfield(&code)?,
    };
    transported(&net, t)
}

fn verdict_mark(v: Verdict) -> char {
    match v {
        Verdict::Achieved => 'Y',
        Verdict::ExhaustedNo => '.',
        Verdict::BudgetExceeded => '?',
    }
}

/// A kx-by-ky grid per n for two-message networks, one line per point otherwise.
pub fn region_table(net: &Network, points: &[RegionPoint], kmax: usize, nmax: usize) -> String {
    let mut out = String::new();
    if net.messages.len() == 2 {
        for n in 1..=nmax {
            let _ = writeln!(out, "n = {n}  (rows k_{}, columns k_{}; Y achieved, . exhausted, ? budget)",
                net.messages[0].id, net.messages[1].id);
            let _ = writeln!(out, "     {}", (0..=kmax).map(|k| format!("{k:>2}")).collect::<String>());
            for kx in 0..=kmax {
                let row: String = (0..=kmax)
                    .map(|ky| {
                        let p = points.iter().find(|p| p.n == n && p.k == [kx, ky]);
                        format!("{:>2}", p.map_or(' ', |p| verdict_mark(p.verdict)))
                    })
                    .collect();
                let _ = writeln!(out, "  {kx:>2} {row}");
            }
        }
        return out;
    }
    for p in points {
        let _ = writeln!(out, "k = {:?}  n = {}  rate = ({})  {}", p.k, p.n, p.rate.to_strings().join(", "), p.verdict.as_str());
    }
    out
}

/// Runs each manifest entry through the same parser as the command line.
fn batch(manifest: &Path) -> Result<Output> {
    use clap::Parser;
    let v = inputs::json_file(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let runs = v["runs"].as_array().ok_or_else(|| anyhow!("manifest needs a \"runs\" array"))?;
    // validate the whole manifest before running anything
    let mut parsed = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        let args: Vec<String> = serde_json::from_value(run["args"].clone())
            .with_context(|| format!("run {i}: \"args\" must be a list of strings"))?;
        let cli = Cli::try_parse_from(std::iter::once("lnc".to_string()).chain(args.iter().cloned()))
            .map_err(|e| anyhow!("run {i}: {}", e.to_string().trim()))?;
        if matches!(cli.command, Command::Batch { .. }) {
            bail!("run {i}: nested batch manifests are not allowed");
        }
        let output = run["output"].as_str().map(|p| base.join(p));
        parsed.push((args, cli, output));
    }
    let mut results = Vec::new();
    let mut ok = true;
    for (args, cli, output) in parsed {
        let entry = match crate::execute(&cli) {
            Ok(out) => {
                ok &= out.ok;
                let text = out.render(cli.pretty);
                match &output {
                    Some(path) => {
                        std::fs::write(path, format!("{text}\n"))
                            .with_context(|| format!("writing {}", path.display()))?;
                        json!({ "args": args, "ok": out.ok, "output": path.display().to_string() })
                    }
                    None => json!({ "args": args, "ok": out.ok, "result": out.json }),
                }
            }
            Err(e) => {
                ok = false;
                json!({ "args": args, "ok": false, "error": crate::error_json(&e)["error"] })
            }
        };
        results.push(entry);
    }
    Ok(Output { json: json!({ "runs": results }), table: None, ok })
}
