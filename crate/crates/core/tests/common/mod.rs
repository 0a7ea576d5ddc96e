//! Test-side helpers: a counter-based generator, random gauges on solutions, and an
//! enumerative decoding oracle.
#![allow(dead_code)]

use lnc_core::algebra::{Elem, FiniteRing};
use lnc_core::codes::{evaluate, message_offsets, LinearCode};
use lnc_core::network::Network;

/// SplitMix64: state advances by a fixed odd constant, output is a mixed counter.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

fn unit_inverse(r: &FiniteRing, u: Elem) -> Elem {
    r.elements().find(|&v| r.mul(u, v) == r.one() && r.mul(v, u) == r.one()).expect("unit")
}

/// Applies random invertible changes of basis to the n symbols of every edge and
/// compensates in every consumer, so solutions stay solutions. Commutative rings only.
pub fn gauge(net: &Network, code: &LinearCode, rng: &mut SplitMix64, rounds: usize) -> LinearCode {
    let topo = net.validate().unwrap();
    let r = code.module.ring().clone();
    let units = r.units();
    let n = code.profile.n;
    let mut out = code.clone();
    // column block of edge e inside its head's input layout
    let block = |e: usize| -> usize {
        let h = topo.head[e];
        let own: usize = topo.origin_messages[h].iter().map(|&m| code.profile.k[m]).sum();
        own + n * topo.in_edges[h].iter().position(|&x| x == e).unwrap()
    };
    for _ in 0..rounds {
        let e = rng.below(net.edges.len());
        let h = topo.head[e];
        let base = block(e);
        let consumers: Vec<(bool, usize)> = topo.out_edges[h]
            .iter()
            .map(|&f| (true, f))
            .chain((0..net.demands.len()).filter(|&d| topo.demand_receiver[d] == h).map(|d| (false, d)))
            .collect();
        let i = rng.below(n);
        if rng.below(2) == 0 || n == 1 {
            // row i scaled by a unit u, column i of consumers by u^-1
            let u = units[rng.below(units.len())];
            let ui = unit_inverse(&r, u);
            let m = &mut out.edges[e];
            for c in 0..m.cols {
                m.set(i, c, r.mul(u, m.get(i, c)));
            }
            for &(is_edge, x) in &consumers {
                let m = if is_edge { &mut out.edges[x] } else { &mut out.decoders[x] };
                for row in 0..m.rows {
                    m.set(row, base + i, r.mul(m.get(row, base + i), ui));
                }
            }
        } else {
            // row i += c·row j, column j of consumers -= c·column i
            let mut j = rng.below(n - 1);
            if j >= i {
                j += 1;
            }
            let c = rng.below(r.size()) as Elem;
            let m = &mut out.edges[e];
            for col in 0..m.cols {
                let v = r.add(m.get(i, col), r.mul(c, m.get(j, col)));
                m.set(i, col, v);
            }
            for &(is_edge, x) in &consumers {
                let m = if is_edge { &mut out.edges[x] } else { &mut out.decoders[x] };
                for row in 0..m.rows {
                    let v = r.sub(m.get(row, base + j), r.mul(m.get(row, base + i), c));
                    m.set(row, base + j, v);
                }
            }
        }
    }
    out
}

/// All message tuples over G for the code's profile, in odometer order.
pub fn message_tuples(code: &LinearCode) -> Vec<Vec<Vec<Elem>>> {
    let g = code.module.group().size();
    let k = &code.profile.k;
    let total: usize = k.iter().sum();
    let count = g.pow(total as u32);
    (0..count)
        .map(|mut x| {
            let mut flat = Vec::with_capacity(total);
            for _ in 0..total {
                flat.push((x % g) as Elem);
                x /= g;
            }
            let offs = message_offsets(&code.profile);
            k.iter().zip(&offs).map(|(&ki, &o)| flat[o..o + ki].to_vec()).collect()
        })
        .collect()
}

/// Decoding correctness by running the code on every message tuple.
pub fn decodes_everything(net: &Network, code: &LinearCode) -> bool {
    let topo = net.validate().unwrap();
    message_tuples(code).iter().all(|msgs| {
        let ev = evaluate(net, code, msgs).unwrap();
        ev.decoded.iter().enumerate().all(|(d, out)| *out == msgs[topo.demand_message[d]])
    })
}
