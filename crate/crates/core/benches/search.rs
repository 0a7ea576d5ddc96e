use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lnc_core::algebra::parse_module_spec;
use lnc_core::generators::{char_network, kn_butterfly};
use lnc_core::network::Network;
use lnc_core::solver::{search_scalar_linear, SearchBudget};

fn cases() -> Vec<(&'static str, Network, &'static str)> {
    vec![
        ("char2-gf3", char_network(2).unwrap(), "REG(GF 3 1)"),
        ("char3-gf2", char_network(3).unwrap(), "REG(GF 2 1)"),
        ("char4-gf3", char_network(4).unwrap(), "REG(GF 3 1)"),
        ("butterfly-3-2-2-gf2", kn_butterfly(3, 2, 2).unwrap(), "REG(GF 2 1)"),
        ("butterfly-2-2-2-z4", kn_butterfly(2, 2, 2).unwrap(), "REG(Z 4)"),
    ]
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for (name, net, spec) in cases() {
        let module = parse_module_spec(spec).unwrap();
        for (mode, threads) in [("sequential", Some(1)), ("parallel", None)] {
            let budget = SearchBudget { threads, ..SearchBudget::default() };
            group.bench_with_input(BenchmarkId::new(mode, name), &budget, |b, budget| {
                b.iter(|| search_scalar_linear(black_box(&net), &module, budget).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
