//! Worked examples for every public operation, checked against values computed here.

mod common;

use common::decodes_everything;
use lnc_core::algebra::{
    check_ring_hom, decompose_coprime, faithful_quotient, find_matrix_field_quotient, is_faithful,
    opposite_ring, parse_module_spec, parse_ring_spec, ring_characteristic, two_sided_module,
    vector_module, CoprimeSplit, Elem, FiniteAbelianGroup, FiniteRing, Module, RingHom,
    DEFAULT_SEARCH_BOUND,
};
use lnc_core::codes::{global_transfer, verify_solution, LinearCode, RateVector};
use lnc_core::generators::{butterfly, butterfly_code, char_network, char_network_code, kn_butterfly};
use lnc_core::network::{disjoint_union, fractional_network, validate_network, BlockProfile, Edge, Network};
use lnc_core::solver::{decide_achievable, search_scalar_linear, SearchBudget, Verdict};
use lnc_core::transforms::{
    code_from_equiv_network, code_to_equiv_network, devectorize_code, field_reduction_pipeline,
    reduce_to_prime_subfield, transport_hom, transport_same_ring, vectorize_code,
};
use lnc_core::Error;

fn ring(s: &str) -> FiniteRing {
    parse_ring_spec(s).unwrap()
}

fn reg(s: &str) -> Module {
    Module::regular(&ring(s))
}

fn reduction(from: u64, to: u64) -> RingHom {
    let map = (0..from as Elem).map(|x| x % to as Elem).collect();
    RingHom::new(ring(&format!("Z {from}")), ring(&format!("Z {to}")), map)
}

#[test]
fn ring_specs() {
    let z6 = ring("Z 6");
    assert_eq!((z6.size(), ring_characteristic(&z6)), (6, 6));
    let f4 = ring("GF 2 2");
    assert_eq!(f4.size(), 4);
    // α = X has index 2, α² = α + 1 has index 3
    assert_eq!(f4.mul(2, 2), 3);
    let q = ring("POLYQ 2 X^2");
    assert_eq!((q.size(), q.characteristic()), (4, 2));
    assert_eq!(q.mul(2, 2), 0);
    for bad in ["Z 0", "GF 4 1", "GF 2 2 1 0 1", "M 2", "PROD(Z 2)", "Q 3"] {
        assert!(parse_ring_spec(bad).is_err(), "{bad}");
    }
}

#[test]
fn characteristics() {
    assert_eq!(ring_characteristic(&ring("Z 6")), 6);
    assert_eq!(ring_characteristic(&ring("GF 2 2")), 2);
    assert_eq!(ring_characteristic(&ring("M 2 (GF 3 1)")), 3);
}

#[test]
fn opposites() {
    let z6 = ring("Z 6");
    let op = opposite_ring(&z6);
    for a in z6.elements() {
        for b in z6.elements() {
            assert_eq!(op.mul(a, b), z6.mul(a, b));
        }
    }
    let m = ring("M 2 (GF 2 1)");
    let op = opposite_ring(&m);
    let opop = opposite_ring(&op);
    for a in m.elements() {
        for b in m.elements() {
            assert_eq!(op.mul(a, b), m.mul(b, a));
            assert_eq!(opop.mul(a, b), m.mul(a, b));
        }
    }
}

#[test]
fn two_sided_over_commutative_ring_is_left_multiplication() {
    let z6 = ring("Z 6");
    let m = two_sided_module(&z6).unwrap();
    assert_eq!(m.ring().size(), 6);
    // every scalar acts as multiplication by its image of 1
    for s in m.ring().elements() {
        let c = m.act(s, 1);
        assert!(z6.elements().all(|x| m.act(s, x) == z6.mul(c, x)));
    }
}

#[test]
fn faithfulness() {
    assert!(is_faithful(&reg("Z 6")));
    let z6_on_z3 = Module::pullback(&reduction(6, 3), &reg("Z 3")).unwrap();
    assert!(!is_faithful(&z6_on_z3));
    assert!(z6_on_z3.acts_as_zero(3));
    let (phi, q) = faithful_quotient(&z6_on_z3).unwrap();
    assert!(is_faithful(&q));
    assert_eq!(q.ring().size(), 3);
    assert!(check_ring_hom(&phi));
    for r in 0..6 {
        for g in 0..3 {
            assert_eq!(q.act(phi.apply(r), g), z6_on_z3.act(r, g));
        }
    }
    let (id, same) = faithful_quotient(&reg("Z 6")).unwrap();
    assert_eq!(id.map, (0..6).collect::<Vec<_>>());
    assert_eq!(same.ring().size(), 6);
}

#[test]
fn vector_modules() {
    let f2 = reg("GF 2 1");
    let v1 = vector_module(&f2, 1).unwrap();
    for r in 0..2 {
        for g in 0..2 {
            assert_eq!(v1.act(r, g), f2.act(r, g));
        }
    }
    let v2 = vector_module(&f2, 2).unwrap();
    assert_eq!((v2.ring().size(), v2.group().size()), (16, 4));
    v2.check_axioms().unwrap();
}

#[test]
fn coprime_decomposition() {
    let m = reg("Z 6");
    let CoprimeSplit::Split { primary, primary_embedding, complement, complement_embedding, .. } =
        decompose_coprime(&m).unwrap()
    else {
        panic!("Z6 splits")
    };
    assert_eq!((primary.group().size(), complement.group().size()), (2, 3));
    // recombining componentwise reproduces the action
    let g = m.group();
    for r in 0..6 {
        for a in 0..2 {
            for b in 0..3 {
                let x = g.add(primary_embedding[a as usize], complement_embedding[b as usize]);
                let y = g.add(
                    primary_embedding[primary.act(r, a) as usize],
                    complement_embedding[complement.act(r, b) as usize],
                );
                assert_eq!(m.act(r, x), y);
            }
        }
    }
    let f4 = reg("GF 2 2");
    assert!(matches!(decompose_coprime(&f4).unwrap(), CoprimeSplit::PrimePower(_)));
}

#[test]
fn matrix_field_quotients() {
    let z6 = ring("Z 6");
    let q = find_matrix_field_quotient(&z6, None, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(q.t, 1);
    let p = q.field.size() as Elem;
    assert!(p == 2 || p == 3);
    assert_eq!(q.hom.map, (0..6).map(|x| x % p).collect::<Vec<_>>());
    let q = find_matrix_field_quotient(&ring("POLYQ 2 X^2"), None, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!((q.t, q.field.size()), (1, 2));
    let q = find_matrix_field_quotient(&ring("M 2 (Z 4)"), None, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!((q.t, q.field.size()), (2, 2));
    assert!(q.hom.is_surjective() && check_ring_hom(&q.hom));
}

#[test]
fn ring_hom_checks() {
    assert!(check_ring_hom(&reduction(6, 3)));
    assert!(check_ring_hom(&reduction(4, 2)));
    let doubling = RingHom::new(ring("Z 2"), ring("Z 4"), vec![0, 2]);
    assert!(!check_ring_hom(&doubling));
}

#[test]
fn networks() {
    let b = butterfly();
    let order = validate_network(&b).unwrap();
    assert_eq!(order.first().unwrap(), "S");
    assert!(order[5..].iter().all(|v| v.starts_with('R')));
    let mut cyc = Network { nodes: vec!["a".into(), "b".into()], ..Default::default() };
    cyc.edges = vec![
        Edge { id: "ab".into(), tail: "a".into(), head: "b".into() },
        Edge { id: "ba".into(), tail: "b".into(), head: "a".into() },
    ];
    assert!(matches!(validate_network(&cyc), Err(Error::Cycle(_))));
    let f = fractional_network(&b, &BlockProfile { k: vec![2, 1], n: 2 }).unwrap();
    assert_eq!((f.edges.len(), f.messages.len(), f.demands.len()), (18, 3, 6));
    assert!(fractional_network(&b, &BlockProfile::scalar(2)).unwrap().is_isomorphic(&b));
    assert!(kn_butterfly(2, 1, 2).unwrap().is_isomorphic(&f));
    let u = disjoint_union(&char_network(2).unwrap(), &char_network(3).unwrap());
    assert_eq!(u.components().unwrap(), 2);
    assert_eq!(u.messages.len(), 4 + 5);
    let text = b.to_json();
    assert_eq!(Network::from_json(&text).unwrap().to_json(), text);
}

#[test]
fn union_solvability_is_conjunction() {
    let budget = SearchBudget::default();
    let f2 = reg("GF 2 1");
    let both = disjoint_union(&butterfly(), &butterfly());
    assert_eq!(search_scalar_linear(&both, &f2, &budget).unwrap().verdict, Verdict::Achieved);
    let f3 = reg("GF 3 1");
    let mixed = disjoint_union(&butterfly(), &char_network(2).unwrap());
    assert_eq!(search_scalar_linear(&butterfly(), &f3, &budget).unwrap().verdict, Verdict::Achieved);
    assert_eq!(search_scalar_linear(&mixed, &f3, &budget).unwrap().verdict, Verdict::ExhaustedNo);
}

#[test]
fn transfer_examples() {
    let b = butterfly();
    let code = butterfly_code(&reg("GF 2 1"), 1, 1, 1).unwrap();
    let t = global_transfer(&b, &code).unwrap();
    assert_eq!(t.edges[4], vec![vec![1, 1]]);
    let zero = LinearCode::zero(&b, &reg("GF 2 1"), &BlockProfile::scalar(2)).unwrap();
    let t = global_transfer(&b, &zero).unwrap();
    assert!(t.edges.iter().chain(&t.decoders).flatten().flatten().all(|&x| x == 0));
    // char-2 over Z2: receiver R reads x0 + 2(x1 + x2 + x3)
    let net = char_network(2).unwrap();
    let code = char_network_code(2, &ring("Z 2")).unwrap();
    let t = global_transfer(&net, &code).unwrap();
    assert_eq!(t.decoders.last().unwrap()[0], vec![1, 0, 0, 0]);
}

#[test]
fn verification_examples() {
    for m in 2..=8 {
        let net = char_network(m).unwrap();
        assert!(verify_solution(&net, &char_network_code(m, &ring(&format!("Z {m}"))).unwrap()).unwrap());
    }
    assert!(verify_solution(&char_network(6).unwrap(), &char_network_code(6, &ring("Z 6")).unwrap()).unwrap());
    // char-2 coefficients moved to GF(3) unchanged
    let net = char_network(2).unwrap();
    let code = char_network_code(2, &ring("Z 2")).unwrap();
    let mut moved = LinearCode { module: reg("GF 3 1"), ..code.clone() };
    // −1 is 2 in GF(3)
    for (d, dem) in net.demands.iter().enumerate() {
        if dem.receiver != "R" {
            moved.decoders[d].set(0, 1, 2);
        }
    }
    assert!(!verify_solution(&net, &moved).unwrap());
    assert!(!decodes_everything(&net, &moved));
    assert!(decodes_everything(&net, &code));
    assert!(char_network_code(2, &ring("GF 3 1")).is_err());
}

#[test]
fn rate_vectors() {
    let r = |k: Vec<usize>, n| RateVector::of_profile(&BlockProfile { k, n }).to_string();
    assert_eq!(r(vec![1, 1], 1), "(1, 1)");
    assert_eq!(r(vec![2, 1], 2), "(1, 1/2)");
    assert_eq!(r(vec![3, 3], 3), "(1, 1)");
}

#[test]
fn equivalent_network_codes() {
    let net = char_network(2).unwrap();
    let code = char_network_code(2, &ring("Z 2")).unwrap();
    let (frac, v) = code_to_equiv_network(&net, &code, &code.profile).unwrap();
    assert!(frac.is_isomorphic(&net));
    assert_eq!(v.code.edges, code.edges);
    let b = butterfly();
    let c = butterfly_code(&reg("GF 2 1"), 2, 2, 2).unwrap();
    let (frac, v) = code_to_equiv_network(&b, &c, &c.profile).unwrap();
    assert!(frac.is_isomorphic(&kn_butterfly(2, 2, 2).unwrap()));
    assert!(verify_solution(&frac, &v.code).unwrap());
    let back = code_from_equiv_network(&b, &c.profile, &v.code).unwrap().code;
    assert_eq!(back.edges, c.edges);
    assert!(code_to_equiv_network(&b, &c, &BlockProfile { k: vec![1, 2], n: 1 }).is_err());
}

#[test]
fn vectorization() {
    let b = butterfly();
    let f2 = reg("GF 2 1");
    let scalar = butterfly_code(&f2, 1, 1, 1).unwrap();
    let v1 = devectorize_code(&scalar, 1).unwrap().code;
    assert_eq!(vectorize_code(&v1).unwrap().code.edges, scalar.edges);
    // a scalar code over M2(GF2) on GF(2)^2 flattens to a (2, 2, 2) code over GF(2)
    let m2 = vector_module(&f2, 2).unwrap();
    let over_m2 = butterfly_code(&m2, 1, 1, 1).unwrap();
    assert!(verify_solution(&b, &over_m2).unwrap());
    let flat = vectorize_code(&over_m2).unwrap().code;
    assert_eq!(flat.profile, BlockProfile { k: vec![2, 2], n: 2 });
    assert!(verify_solution(&b, &flat).unwrap());
    assert!(vectorize_code(&scalar).is_err());
}

#[test]
fn same_ring_and_hom_transport() {
    let net = char_network(2).unwrap();
    let code = char_network_code(2, &ring("Z 2")).unwrap();
    let pair = parse_module_spec("POW 2 (REG(Z 2))").unwrap();
    let moved = transport_same_ring(&code, &pair).unwrap().code;
    assert!(verify_solution(&net, &moved).unwrap());
    assert!(decodes_everything(&net, &moved));
    let unchanged = transport_same_ring(&code, &code.module).unwrap().code;
    assert_eq!(unchanged.edges, code.edges);

    let net6 = char_network(6).unwrap();
    let code6 = char_network_code(6, &ring("Z 6")).unwrap();
    for q in [2, 3] {
        let phi = reduction(6, q);
        let moved = transport_hom(&code6, &phi, &Module::regular(&phi.target)).unwrap().code;
        assert!(verify_solution(&net6, &moved).unwrap());
    }
    let id = RingHom::identity(&ring("Z 6"));
    let moved = transport_hom(&code6, &id, &code6.module).unwrap().code;
    assert_eq!(moved.edges, code6.edges);
}

#[test]
fn prime_subfield_reduction() {
    let b = butterfly();
    let f4 = reg("GF 2 2");
    let code = butterfly_code(&f4, 1, 1, 1).unwrap();
    let red = reduce_to_prime_subfield(&code).unwrap().code;
    let flat = vectorize_code(&red).unwrap().code;
    assert_eq!(flat.profile, BlockProfile { k: vec![2, 2], n: 2 });
    assert!(verify_solution(&b, &flat).unwrap());
    assert_eq!(flat.rate_vector(), code.rate_vector());
    let f5 = butterfly_code(&reg("GF 5 1"), 1, 1, 1).unwrap();
    assert_eq!(reduce_to_prime_subfield(&f5).unwrap().code.edges, f5.edges);
    let z4 = butterfly_code(&reg("Z 4"), 1, 1, 1).unwrap();
    assert!(reduce_to_prime_subfield(&z4).is_err());
}

#[test]
fn pipeline_examples() {
    let net = char_network(6).unwrap();
    let code = char_network_code(6, &ring("Z 6")).unwrap();
    for p in [2, 3] {
        let red = field_reduction_pipeline(&code, p, None).unwrap();
        assert_eq!((red.t, red.field.characteristic()), (1, p));
        assert!(verify_solution(&net, &red.code).unwrap());
        assert!(red.certificates.iter().all(|c| c.source_rate == c.target_rate));
    }
    let f5 = butterfly_code(&reg("GF 5 1"), 1, 1, 1).unwrap();
    assert!(field_reduction_pipeline(&f5, 2, None).is_err());
}

#[test]
fn solver_examples() {
    let budget = SearchBudget::default();
    let b = butterfly();
    let r = search_scalar_linear(&b, &reg("GF 2 1"), &budget).unwrap();
    let t = global_transfer(&b, r.code.as_ref().unwrap()).unwrap();
    assert_eq!(t.edges[4], vec![vec![1, 1]]);
    let c2 = char_network(2).unwrap();
    assert_eq!(search_scalar_linear(&c2, &reg("GF 3 1"), &budget).unwrap().verdict, Verdict::ExhaustedNo);
    assert_eq!(search_scalar_linear(&c2, &reg("Z 4"), &budget).unwrap().verdict, Verdict::ExhaustedNo);
    assert_eq!(search_scalar_linear(&c2, &reg("Z 2"), &budget).unwrap().verdict, Verdict::Achieved);
    let f2 = reg("GF 2 1");
    let d = decide_achievable(&b, &f2, &BlockProfile { k: vec![2, 2], n: 2 }, &budget).unwrap();
    assert_eq!(d.verdict, Verdict::Achieved);
    let d = decide_achievable(&b, &f2, &BlockProfile { k: vec![3, 2], n: 2 }, &budget).unwrap();
    assert_eq!((d.verdict, d.attempts.len()), (Verdict::ExhaustedNo, 1));
    let d = decide_achievable(&b, &f2, &BlockProfile { k: vec![2, 1], n: 1 }, &budget).unwrap();
    assert_eq!(d.verdict, Verdict::ExhaustedNo);
    let f4_group = FiniteAbelianGroup::cyclic(4).unwrap();
    assert_eq!(f4_group.invariant_factors(), &[4]);
}

#[test]
fn kn_butterfly_over_z4() {
    let net = kn_butterfly(3, 2, 2).unwrap();
    let budget = SearchBudget::default();
    for spec in ["GF 2 1", "Z 4"] {
        assert_eq!(search_scalar_linear(&net, &reg(spec), &budget).unwrap().verdict, Verdict::ExhaustedNo);
    }
    let net = kn_butterfly(2, 2, 2).unwrap();
    assert_eq!(search_scalar_linear(&net, &reg("GF 2 1"), &budget).unwrap().verdict, Verdict::Achieved);
}
