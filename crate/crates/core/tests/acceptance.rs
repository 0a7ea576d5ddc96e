//! The ten acceptance experiments, one PASS/FAIL line each.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;

use common::{gauge, message_tuples, SplitMix64};
use lnc_core::algebra::numtheory::is_prime;
use lnc_core::algebra::{
    find_isomorphism, module_structures, parse_ring_spec, tensor_ring, Elem, FiniteAbelianGroup,
    FiniteRing, Module, RingHom,
};
use lnc_core::codes::{evaluate, global_transfer, verify_solution, LinearCode};
use lnc_core::generators::{butterfly, butterfly_code, char_network, char_network_code};
use lnc_core::network::{BlockProfile, Network};
use lnc_core::solver::{
    achieved_rates, char_capacity_bound, decide_achievable, rate_region_inner, search_scalar_linear,
    CapacityBound, SearchBudget, Verdict,
};
use lnc_core::transforms::{
    code_from_equiv_network, code_to_equiv_network, field_reduction_pipeline, transport_hom,
};

fn ring(s: &str) -> FiniteRing {
    parse_ring_spec(s).unwrap()
}

fn reg(s: &str) -> Module {
    Module::regular(&ring(s))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn char_witness_suite() -> String {
    let mut checked = 0;
    for m in 2..=8u64 {
        let net = char_network(m as usize).unwrap();
        let mut specs = vec![format!("Z {m}")];
        specs.extend((2..=m).filter(|p| m % p == 0 && is_prime(*p)).map(|p| format!("GF {p} 1")));
        specs.extend((2..=m).filter(|d| m % d == 0).map(|d| format!("PROD(Z {m}, Z {d})")));
        for spec in specs {
            let r = ring(&spec);
            assert_eq!(m % r.characteristic(), 0);
            let code = char_network_code(m as usize, &r).unwrap();
            assert!(verify_solution(&net, &code).unwrap(), "m={m} over {spec}");
            assert!(code.rate_vector().0.iter().all(|x| *x == Ratio::from_integer(1)));
            // the R receiver's row is x_0 + m·Σ x_i
            let t = global_transfer(&net, &code).unwrap();
            let last = t.decoders.last().unwrap();
            assert_eq!(last[0][0], r.one());
            assert!(last[0][1..].iter().all(|&c| c == r.from_int(m as i64)));
            checked += 1;
        }
    }
    format!("{checked} (m, R) pairs verified")
}

fn char2_over_gf3() -> String {
    let budget = SearchBudget { max_assignments: u64::MAX, threads: Some(4), ..SearchBudget::default() };
    let r = search_scalar_linear(&char_network(2).unwrap(), &reg("GF 3 1"), &budget).unwrap();
    assert_eq!(r.verdict, Verdict::ExhaustedNo);
    format!("exhausted-no after {} assignments in {} partitions", r.assignments, r.partitions)
}

fn butterfly_law() -> String {
    let net = butterfly();
    let m = reg("GF 2 1");
    let budget = SearchBudget { max_t: 2, ..SearchBudget::default() };
    let mut points = 0;
    for n in 1..=2 {
        for kx in 0..=4 {
            for ky in 0..=4 {
                let d = decide_achievable(&net, &m, &BlockProfile { k: vec![kx, ky], n }, &budget).unwrap();
                let expect = kx + ky <= 2 * n;
                assert_eq!(d.verdict == Verdict::Achieved, expect, "({kx}, {ky}, {n})");
                if !expect {
                    assert_eq!(d.verdict, Verdict::ExhaustedNo, "({kx}, {ky}, {n}) must be exhausted");
                }
                if let Some(code) = d.code {
                    assert!(verify_solution(&net, &code).unwrap());
                }
                points += 1;
            }
        }
    }
    format!("{points} profiles match kx + ky <= 2n")
}

fn butterfly_region_inclusion() -> String {
    let net = butterfly();
    let budget = SearchBudget::default();
    let region = |s: &str| {
        let pts = rate_region_inner(&net, &reg(s), 2, 1, &budget).unwrap();
        assert!(pts.iter().all(|p| p.verdict != Verdict::BudgetExceeded));
        achieved_rates(&pts)
    };
    let z6 = region("Z 6");
    let f2 = region("GF 2 1");
    let f3 = region("GF 3 1");
    assert!(z6.is_subset(&f2) && z6.is_subset(&f3));
    format!("|Z6| = {}, |GF2| = {}, |GF3| = {} rate points", z6.len(), f2.len(), f3.len())
}

fn tensor_gcd() -> String {
    for m in 2..=12u64 {
        for n in 2..=12u64 {
            let t = tensor_ring(&ring(&format!("Z {m}")), &ring(&format!("Z {n}"))).unwrap();
            let g = gcd(m, n);
            assert_eq!(t.ring.size() as u64, g, "Z{m} (x) Z{n}");
            let one = t.class(1, 1, n as usize);
            assert_eq!(one, t.ring.one());
            assert_eq!(t.ring.additive_group().order(one), g);
            if g > 1 {
                assert!(find_isomorphism(&t.ring, &ring(&format!("Z {g}"))).is_some());
            }
        }
    }
    let t = tensor_ring(&ring("Z 4"), &ring("Z 2")).unwrap();
    let c = |a, b| t.class(a, b, 2);
    for (a, b) in [(0, 1), (2, 1), (1, 0), (2, 0), (3, 0)] {
        assert_eq!(c(a, b), c(0, 0));
    }
    assert_eq!(c(1, 1), c(3, 1));
    "121 pairs match Z_gcd; Z4 (x) Z2 classes agree".into()
}

/// Codes from the generators with random gauges; Char-2 only over Z2 where it is solvable.
fn random_solutions() -> Vec<(Network, LinearCode)> {
    let mut rng = SplitMix64(0x5EED);
    let mut out = Vec::new();
    let char2 = char_network(2).unwrap();
    let base = char_network_code(2, &ring("Z 2")).unwrap();
    for _ in 0..25 {
        out.push((char2.clone(), gauge(&char2, &base, &mut rng, 8)));
    }
    for spec in ["Z 2", "Z 4", "Z 6"] {
        let m = reg(spec);
        for _ in 0..25 {
            let n = 1 + rng.below(2);
            let kx = rng.below(2 * n + 1);
            let ky = rng.below(2 * n - kx + 1);
            let code = butterfly_code(&m, kx, ky, n).unwrap();
            out.push((butterfly(), gauge(&butterfly(), &code, &mut rng, 12)));
        }
    }
    out
}

fn transport_round_trips() -> String {
    let codes = random_solutions();
    assert_eq!(codes.len(), 100);
    let z6 = ring("Z 6");
    let mut homs = 0;
    for (net, code) in &codes {
        assert!(verify_solution(net, code).unwrap());
        let p = &code.profile;
        let g = p.k.iter().fold(p.n as u64, |a, &k| gcd(a, k as u64)) as usize;
        for t in (1..=g).filter(|t| g.is_multiple_of(*t)) {
            let small = BlockProfile { k: p.k.iter().map(|k| k / t).collect(), n: p.n / t };
            let (frac, v) = code_to_equiv_network(net, code, &small).unwrap();
            assert!(verify_solution(&frac, &v.code).unwrap());
            let back = code_from_equiv_network(net, &small, &v.code).unwrap().code;
            assert_eq!((&back.edges, &back.decoders, &back.profile), (&code.edges, &code.decoders, &code.profile));
        }
        if !code.module.ring().same(&z6) {
            continue;
        }
        for q in [2u64, 3] {
            let target = ring(&format!("Z {q}"));
            let map: Vec<Elem> = (0..6).map(|x| x % q as Elem).collect();
            let phi = RingHom::checked(z6.clone(), target.clone(), map).unwrap();
            let h = Module::regular(&target);
            let moved = transport_hom(code, &phi, &h).unwrap().code;
            assert!(verify_solution(net, &moved).unwrap());
            // the same coefficients over H seen as a Z6-module emit the same symbols
            let pulled = Module::pullback(&phi, &h).unwrap();
            let as_r = LinearCode { module: pulled, ..code.clone() };
            for msgs in message_tuples(&moved) {
                let a = evaluate(net, &moved, &msgs).unwrap();
                let b = evaluate(net, &as_r, &msgs).unwrap();
                assert_eq!(a, b);
            }
            homs += 1;
        }
    }
    format!("100 codes round-trip; {homs} hom transports keep symbols")
}

fn pipeline_char6() -> String {
    let net = char_network(6).unwrap();
    let code = char_network_code(6, &ring("Z 6")).unwrap();
    for (p, q) in [(2, 2), (3, 3)] {
        let red = field_reduction_pipeline(&code, p, None).unwrap();
        assert_eq!(red.t, 1);
        assert!(red.field.is_field() && red.field.size() == q);
        assert!(verify_solution(&net, &red.code).unwrap());
        assert_eq!(red.code.rate_vector(), code.rate_vector());
    }
    "scalar solutions over GF(2) and GF(3)".into()
}

fn gf4_module_facts() -> String {
    let f4 = ring("GF 2 2");
    let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
    let v = FiniteAbelianGroup::power(&z2, 2).unwrap();
    // a0 + α a1 has index a0 + 2 a1; (b0, b1) has index 2 b0 + b1
    let mut table = Vec::new();
    for a in 0..4u32 {
        let (a0, a1) = (a & 1, a >> 1);
        for g in 0..4u32 {
            let (b0, b1) = (g >> 1, g & 1);
            let c0 = (a0 * b0 + a1 * b1) % 2;
            let c1 = (a0 * b1 + a1 * b0 + a1 * b1) % 2;
            table.push(2 * c0 + c1);
        }
    }
    let m = Module::from_table(&f4, &v, table).unwrap();
    // α² = α + 1 in the ring's own arithmetic
    assert_eq!(f4.mul(2, 2), 3);
    assert_eq!(m.act(3, 2), 3, "(1+α)·(1,0) = (1,1)");
    assert_eq!(m.act(2, 1), 3, "α·(0,1) = (1,1)");
    // GF(2)×0 is not stable, so the action is not component-wise
    assert!(f4.elements().any(|a| m.act(a, 2) & 1 == 1));
    assert!(module_structures(&f4, &z2, 1 << 16).unwrap().is_empty());
    "axioms hold, not component-wise, no GF(4)-module of size 2".into()
}

fn two_sided_strictness() -> String {
    let r = ring("M 2 (GF 2 1)");
    let m = Module::two_sided(&r).unwrap();
    let mat = |x: Elem| -> [[u32; 2]; 2] {
        let e = r.matrix_entries(x);
        [[e[0], e[1]], [e[2], e[3]]]
    };
    let mul = |a: [[u32; 2]; 2], b: [[u32; 2]; 2]| {
        let mut c = [[0u32; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % 2;
            }
        }
        c
    };
    let diag: Vec<[[u32; 2]; 2]> = r.elements().map(|x| {
        let a = mat(x);
        [[a[0][0], 0], [0, a[1][1]]]
    }).collect();
    let diag_idx: Vec<Elem> = diag
        .iter()
        .map(|d| r.matrix_from_entries(&[d[0][0], d[0][1], d[1][0], d[1][1]]))
        .collect();
    assert!(m.ring().endomorphism_index(&diag_idx).is_some(), "diagonal extraction is a scalar");
    let mut pairs = 0;
    for a in r.elements() {
        for b in r.elements() {
            let differs = r.elements().any(|x| mul(mul(mat(a), mat(x)), mat(b)) != diag[x as usize]);
            assert!(differs);
            pairs += 1;
        }
    }
    format!("{pairs} pairs (A, B) all differ from diagonal extraction")
}

fn capacity_table() -> String {
    let mut rows = 0;
    for m in 2..=8usize {
        for p in [2u64, 3, 5, 7] {
            let b = char_capacity_bound(m, p).unwrap();
            if (m as u64).is_multiple_of(p) {
                let CapacityBound::Achieved { witness, .. } = &b else { panic!("({m}, {p})") };
                assert!(verify_solution(&char_network(m).unwrap(), witness).unwrap());
                assert_eq!(b.value(), Ratio::from_integer(1));
            } else {
                assert!(matches!(b, CapacityBound::UpperBound { .. }));
                assert_eq!(b.value(), Ratio::new(2 * m as u64 + 2, 2 * m as u64 + 3));
            }
            rows += 1;
        }
    }
    assert_eq!(char_capacity_bound(2, 3).unwrap().value(), Ratio::new(6, 7));
    format!("{rows} (m, p) rows")
}

fn main() {
    let criteria: [(&str, fn() -> String); 10] = [
        ("char-m witness suite", char_witness_suite),
        ("char-2 has no scalar solution over GF(3)", char2_over_gf3),
        ("(kx,ky,n)-butterfly law over GF(2)", butterfly_law),
        ("butterfly region over Z6 inside GF(2) and GF(3)", butterfly_region_inclusion),
        ("tensor Z_m (x) Z_n = Z_gcd", tensor_gcd),
        ("transport round trips", transport_round_trips),
        ("field-reduction pipeline on char-6", pipeline_char6),
        ("GF(4)-module facts", gf4_module_facts),
        ("two-sided strictness over M2(GF(2))", two_sided_strictness),
        ("char-m capacity table", capacity_table),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {:>2} {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
