//! Reference instances and a seeded random instance generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::{ArcSpec, InstanceSpec};
use crate::network::{build_network, Network};
use crate::rational::{int, rat, Rational};

fn arc(id: &str, tail: &str, head: &str, transit: Rational, capacity: Rational) -> ArcSpec {
    ArcSpec {
        id: id.into(),
        tail: tail.into(),
        head: head.into(),
        transit,
        capacity,
    }
}

fn two_node(arcs: Vec<ArcSpec>, inflow: Rational) -> Network {
    build_network(&InstanceSpec {
        nodes: vec!["s".into(), "t".into()],
        source: "s".into(),
        sink: "t".into(),
        inflow,
        arcs,
        free_arcs: vec![],
    })
    .expect("reference instance is valid")
}

/// One arc `s -> t` with `tau = 1`, `nu = 1`; inflow 2.
pub fn net_a() -> Network {
    two_node(vec![arc("e", "s", "t", int(1), int(1))], int(2))
}

/// Parallel arcs `e1` (`tau = 1`, `nu = 2`) and `e2` (`tau = 3`, `nu = 2`);
/// inflow 1.
pub fn net_b() -> Network {
    two_node(
        vec![
            arc("e1", "s", "t", int(1), int(2)),
            arc("e2", "s", "t", int(3), int(2)),
        ],
        int(1),
    )
}

/// Parallel arcs `e1` (`tau = 1`, `nu = 1`) and `e2` (`tau = 3`, `nu = 2`);
/// inflow 2.
pub fn net_c() -> Network {
    two_node(
        vec![
            arc("e1", "s", "t", int(1), int(1)),
            arc("e2", "s", "t", int(3), int(2)),
        ],
        int(2),
    )
}

/// The arcs of [`net_c`] with inflow 4, above the minimum cut.
pub fn net_d() -> Network {
    net_c().with_inflow(int(4)).expect("valid")
}

pub fn reference_instances() -> Vec<(&'static str, Network)> {
    vec![
        ("net-a", net_a()),
        ("net-b", net_b()),
        ("net-c", net_c()),
        ("net-d", net_d()),
    ]
}

/// Random instance with 3 to 6 nodes and at most 9 arcs. Every node lies on
/// an s-t path; arcs pointing backwards in the construction order have
/// positive transit time, so no zero-transit cycle can arise.
pub fn random_instance(seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_inner = rng.gen_range(1..=4usize);
    let mut nodes = vec!["s".to_string()];
    nodes.extend((1..=n_inner).map(|i| format!("v{i}")));
    nodes.push("t".to_string());
    let n = nodes.len();

    let transits = [rat(0, 1), rat(1, 2), int(1), int(2), int(3)];
    let capacities = [rat(1, 2), int(1), int(2), int(3)];
    let inflows = [rat(1, 2), int(1), int(2), int(3), int(5)];

    let mut arcs: Vec<ArcSpec> = Vec::new();
    let push = |rng: &mut ChaCha8Rng, arcs: &mut Vec<ArcSpec>, u: usize, v: usize| {
        let transit = if u < v {
            transits.choose(rng).unwrap().clone()
        } else {
            transits[2..].choose(rng).unwrap().clone()
        };
        let id = format!("a{}", arcs.len());
        arcs.push(arc(
            &id,
            &nodes[u],
            &nodes[v],
            transit,
            capacities.choose(rng).unwrap().clone(),
        ));
    };

    // A spine through every inner node plus one direct connection.
    for v in 1..n {
        let u = rng.gen_range(0..v);
        push(&mut rng, &mut arcs, u, v);
    }
    for v in 1..n - 1 {
        let w = rng.gen_range(v + 1..n);
        push(&mut rng, &mut arcs, v, w);
    }
    let extra = rng.gen_range(0..=2usize);
    for _ in 0..extra {
        if arcs.len() >= 9 {
            break;
        }
        let u = rng.gen_range(0..n - 1);
        let mut v = rng.gen_range(1..n);
        if v == u {
            v = n - 1;
        }
        push(&mut rng, &mut arcs, u, v);
    }

    build_network(&InstanceSpec {
        nodes,
        source: "s".into(),
        sink: "t".into(),
        inflow: inflows.choose(&mut rng).unwrap().clone(),
        arcs,
        free_arcs: vec![],
    })
    .expect("generator produces valid instances")
}

/// Seeds of the random part of the bundled corpus.
pub const CORPUS_SEEDS: [u64; 16] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16];

/// Reference instances followed by the seeded random ones.
pub fn corpus() -> Vec<(String, Network)> {
    let mut out: Vec<(String, Network)> = reference_instances()
        .into_iter()
        .map(|(n, net)| (n.to_string(), net))
        .collect();
    for seed in CORPUS_SEEDS {
        out.push((format!("random-{seed}"), random_instance(seed)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_respects_size_limits() {
        for seed in 0..200 {
            let net = random_instance(seed);
            assert!(net.node_count() >= 3 && net.node_count() <= 7);
            assert!(net.arc_count() <= 10);
        }
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_instance(42), random_instance(42));
    }

    #[test]
    fn corpus_size() {
        assert!(corpus().len() >= 20);
    }
}
