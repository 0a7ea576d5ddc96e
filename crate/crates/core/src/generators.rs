//! Named network families and their known codes.

use crate::algebra::{Elem, FiniteRing, Module};
use crate::codes::{LinearCode, Matrix};
use crate::error::{Error, Result};
use crate::network::{BlockProfile, Demand, Edge, Message, Network};

fn edge(tail: &str, head: &str) -> Edge {
    Edge { id: format!("{tail}-{head}"), tail: tail.into(), head: head.into() }
}

/// Single source S with messages x, y; relays u1..u4 with bottleneck u3→u4;
/// receivers R1, R2 each demanding x and y.
pub fn butterfly() -> Network {
    let nodes = ["S", "u1", "u2", "u3", "u4", "R1", "R2"].map(String::from).to_vec();
    let edges = [
        ("S", "u1"),
        ("S", "u2"),
        ("u1", "u3"),
        ("u2", "u3"),
        ("u3", "u4"),
        ("u1", "R2"),
        ("u2", "R1"),
        ("u4", "R1"),
        ("u4", "R2"),
    ]
    .iter()
    .map(|(t, h)| edge(t, h))
    .collect();
    let messages = ["x", "y"]
        .iter()
        .map(|m| Message { id: (*m).into(), origin: "S".into() })
        .collect();
    let demands = ["R1", "R2"]
        .iter()
        .flat_map(|r| {
            ["x", "y"].iter().map(move |m| Demand { receiver: (*r).into(), message: (*m).into() })
        })
        .collect();
    Network { nodes, edges, messages, demands }
}

/// The (kx, ky, n)-Butterfly: every edge doubled n times, kx x-messages, ky y-messages.
pub fn kn_butterfly(kx: usize, ky: usize, n: usize) -> Result<Network> {
    butterfly().fractional(&BlockProfile::new(vec![kx, ky], n)?)
}

/// A (kx, ky, n) linear solution for the Butterfly whenever kx + ky ≤ 2n: the first
/// min(n, K) message symbols go through u1, the rest through u2, and the bottleneck
/// carries their coordinatewise sum.
pub fn butterfly_code(module: &Module, kx: usize, ky: usize, n: usize) -> Result<LinearCode> {
    let net = butterfly();
    let k = kx + ky;
    if k > 2 * n {
        return Err(Error::Precondition(format!("kx + ky = {k} exceeds 2n = {}", 2 * n)));
    }
    let profile = BlockProfile::new(vec![kx, ky], n)?;
    let r = module.ring();
    let (one, minus) = (r.one(), r.neg(r.one()));
    let a = k.min(n);
    let b = k - a;
    let mut code = LinearCode::zero(&net, module, &profile)?;
    let unit = |rows: usize, cols: usize, pairs: &[(usize, usize, Elem)]| {
        let mut m = Matrix::zeros(rows, cols);
        for &(i, j, v) in pairs {
            m.set(i, j, v);
        }
        m
    };
    let ident: Vec<(usize, usize, Elem)> = (0..n).map(|i| (i, i, one)).collect();
    // edges: S-u1, S-u2, u1-u3, u2-u3, u3-u4, u1-R2, u2-R1, u4-R1, u4-R2
    code.edges[0] = unit(n, k, &(0..a).map(|i| (i, i, one)).collect::<Vec<_>>());
    code.edges[1] = unit(n, k, &(0..b).map(|i| (i, a + i, one)).collect::<Vec<_>>());
    for e in [2, 3, 5, 6, 7, 8] {
        code.edges[e] = unit(n, n, &ident);
    }
    code.edges[4] = unit(n, 2 * n, &(0..n).flat_map(|i| [(i, i, one), (i, n + i, one)]).collect::<Vec<_>>());
    // R1 sees (B, A+B); R2 sees (A, A+B)
    let r1_row = |j: usize| -> Vec<(usize, Elem)> {
        if j < a {
            if j < b {
                vec![(n + j, one), (j, minus)]
            } else {
                vec![(n + j, one)]
            }
        } else {
            vec![(j - a, one)]
        }
    };
    let r2_row = |j: usize| -> Vec<(usize, Elem)> {
        if j < a {
            vec![(j, one)]
        } else if j - a < a {
            vec![(n + j - a, one), (j - a, minus)]
        } else {
            vec![(n + j - a, one)]
        }
    };
    for (d, dem) in net.demands.iter().enumerate() {
        let (start, len) = if dem.message == "x" { (0, kx) } else { (kx, ky) };
        let rows = |f: &dyn Fn(usize) -> Vec<(usize, Elem)>| {
            let mut m = Matrix::zeros(len, 2 * n);
            for i in 0..len {
                for (c, v) in f(start + i) {
                    m.set(i, c, r.add(m.get(i, c), v));
                }
            }
            m
        };
        code.decoders[d] = if dem.receiver == "R1" { rows(&r1_row) } else { rows(&r2_row) };
    }
    Ok(code)
}

/// The Char-m network: sources S_0..S_{m+1} (message x_i at S_i); u fed by every source
/// with u→v; u_i fed by every source except S_i with u_i→v_i; receiver R_i fed by v and
/// v_i demanding x_i; receiver R fed by v_1..v_{m+1} demanding x_0.
pub fn char_network(m: usize) -> Result<Network> {
    if m < 2 {
        return Err(Error::Precondition("Char-m networks need m >= 2".into()));
    }
    let s = m + 2;
    let mut nodes: Vec<String> = (0..s).map(|i| format!("S{i}")).collect();
    nodes.push("u".into());
    nodes.extend((0..s).map(|i| format!("u{i}")));
    nodes.push("v".into());
    nodes.extend((0..s).map(|i| format!("v{i}")));
    nodes.extend((0..s).map(|i| format!("R{i}")));
    nodes.push("R".into());
    let mut edges = Vec::new();
    for j in 0..s {
        edges.push(edge(&format!("S{j}"), "u"));
    }
    for i in 0..s {
        for j in (0..s).filter(|&j| j != i) {
            edges.push(edge(&format!("S{j}"), &format!("u{i}")));
        }
    }
    edges.push(edge("u", "v"));
    for i in 0..s {
        edges.push(edge(&format!("u{i}"), &format!("v{i}")));
    }
    for i in 0..s {
        edges.push(edge("v", &format!("R{i}")));
    }
    for i in 0..s {
        edges.push(edge(&format!("v{i}"), &format!("R{i}")));
    }
    for i in 1..s {
        edges.push(edge(&format!("v{i}"), "R"));
    }
    let messages = (0..s)
        .map(|i| Message { id: format!("x{i}"), origin: format!("S{i}") })
        .collect();
    let mut demands: Vec<Demand> = (0..s)
        .map(|i| Demand { receiver: format!("R{i}"), message: format!("x{i}") })
        .collect();
    demands.push(Demand { receiver: "R".into(), message: "x0".into() });
    Ok(Network { nodes, edges, messages, demands })
}

/// The scalar code e = Σ x_j, e_i = Σ_{j≠i} x_j with decoders R_i: e − e_i and
/// R: Σ_{i≥1} e_i, over R acting on itself. Requires char(R) | m.
pub fn char_network_code(m: usize, r: &FiniteRing) -> Result<LinearCode> {
    char_network_code_over(m, &Module::regular(r))
}

/// The same code over any module whose scalar ring has characteristic dividing m.
pub fn char_network_code_over(m: usize, module: &Module) -> Result<LinearCode> {
    let r = module.ring();
    let c = r.characteristic();
    if !(m as u64).is_multiple_of(c) {
        return Err(Error::Precondition(format!(
            "characteristic {c} of {} does not divide {m}",
            r.spec()
        )));
    }
    let net = char_network(m)?;
    let profile = BlockProfile::scalar(m + 2);
    let mut code = LinearCode::zero(&net, module, &profile)?;
    let one = r.one();
    for mat in code.edges.iter_mut() {
        mat.entries.iter_mut().for_each(|x| *x = one);
    }
    for (d, dem) in net.demands.iter().enumerate() {
        let mat = &mut code.decoders[d];
        mat.entries.iter_mut().for_each(|x| *x = one);
        if dem.receiver != "R" {
            // inputs are (e from v, e_i from v_i)
            mat.set(0, 1, r.neg(one));
        }
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ring_spec;
    use crate::codes::verify_solution;

    #[test]
    fn butterfly_shape() {
        let b = butterfly();
        assert_eq!(b.topological_order().unwrap(), vec!["S", "u1", "u2", "u3", "u4", "R1", "R2"]);
        assert_eq!((b.messages.len(), b.demands.len()), (2, 4));
    }

    #[test]
    fn char_shape() {
        for m in 2..6 {
            let n = char_network(m).unwrap();
            let t = n.validate().unwrap();
            assert_eq!(n.nodes.len(), 4 * (m + 2) + 3);
            assert_eq!(n.messages.len(), m + 2);
            for i in 0..m + 2 {
                assert_eq!(t.in_edges[t.node_index[&format!("R{i}")]].len(), 2);
            }
            assert_eq!(t.in_edges[t.node_index["R"]].len(), m + 1);
        }
        assert!(char_network(1).is_err());
    }

    #[test]
    fn butterfly_codes_verify() {
        for spec in ["GF 2 1", "Z 4", "Z 6", "GF 3 1"] {
            let module = Module::regular(&parse_ring_spec(spec).unwrap());
            for n in 1..=2 {
                for kx in 0..=2 * n {
                    for ky in 0..=2 * n - kx {
                        let code = butterfly_code(&module, kx, ky, n).unwrap();
                        assert!(verify_solution(&butterfly(), &code).unwrap(), "{spec} {kx} {ky} {n}");
                    }
                }
            }
            assert!(butterfly_code(&module, 2, 1, 1).is_err());
        }
    }

    #[test]
    fn char_code_precondition() {
        let gf3 = parse_ring_spec("GF 3 1").unwrap();
        assert!(char_network_code(2, &gf3).is_err());
        let z2 = parse_ring_spec("Z 2").unwrap();
        assert!(verify_solution(&char_network(2).unwrap(), &char_network_code(2, &z2).unwrap()).unwrap());
    }
}
