//! Exact combinatorial flow routines on small graphs: shortest paths,
//! maximum flow and minimum cost flow with lower bounds.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Single-source shortest paths for non-negative lengths. `None` marks
/// unreachable nodes.
pub fn dijkstra(n: usize, edges: &[(usize, usize, Rational)], src: usize) -> Vec<Option<Rational>> {
    let mut adj = vec![Vec::new(); n];
    for (i, (u, _, _)) in edges.iter().enumerate() {
        adj[*u].push(i);
    }
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut done = vec![false; n];
    dist[src] = Some(Rational::zero());
    loop {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(d) = &dist[v] {
                if best.map_or(true, |b| d < dist[b].as_ref().unwrap()) {
                    best = Some(v);
                }
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        let du = dist[u].clone().unwrap();
        for &i in &adj[u] {
            let (_, w, len) = &edges[i];
            let cand = &du + len;
            if dist[*w].as_ref().map_or(true, |d| cand < *d) {
                dist[*w] = Some(cand);
            }
        }
    }
    dist
}

pub struct MaxFlow {
    pub value: Rational,
    pub flow: Vec<Rational>,
    /// Nodes on the source side of a minimum cut.
    pub source_side: Vec<bool>,
}

/// Edmonds-Karp maximum flow.
pub fn max_flow(n: usize, edges: &[(usize, usize, Rational)], s: usize, t: usize) -> MaxFlow {
    let mut flow = vec![Rational::zero(); edges.len()];
    let mut adj = vec![Vec::new(); n];
    for (i, (u, v, _)) in edges.iter().enumerate() {
        adj[*u].push(i);
        adj[*v].push(i);
    }
    let mut value = Rational::zero();
    loop {
        // pred[v] = (edge, forward)
        let mut pred: Vec<Option<(usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &i in &adj[u] {
                let (a, b, cap) = &edges[i];
                let (next, forward) = if *a == u && flow[i] < *cap {
                    (*b, true)
                } else if *b == u && flow[i].is_positive() {
                    (*a, false)
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    pred[next] = Some((i, forward));
                    queue.push_back(next);
                }
            }
        }
        if !seen[t] {
            return MaxFlow {
                value,
                flow,
                source_side: seen,
            };
        }
        let mut bottleneck: Option<Rational> = None;
        let mut v = t;
        while v != s {
            let (i, forward) = pred[v].unwrap();
            let room = if forward {
                &edges[i].2 - &flow[i]
            } else {
                flow[i].clone()
            };
            if bottleneck.as_ref().map_or(true, |b| room < *b) {
                bottleneck = Some(room);
            }
            v = if forward { edges[i].0 } else { edges[i].1 };
        }
        let delta = bottleneck.unwrap();
        let mut v = t;
        while v != s {
            let (i, forward) = pred[v].unwrap();
            if forward {
                flow[i] += &delta;
                v = edges[i].0;
            } else {
                flow[i] -= &delta;
                v = edges[i].1;
            }
        }
        value += delta;
    }
}

#[derive(Clone, Debug)]
pub struct McfArc {
    pub tail: usize,
    pub head: usize,
    pub lower: Rational,
    pub upper: Rational,
    pub cost: Rational,
}

#[derive(Clone, Debug)]
pub struct McfSolution {
    pub flow: Vec<Rational>,
    pub cost: Rational,
    /// Node potentials `d` with `d_w <= d_v + c` on every arc with
    /// `f < upper` and `d_w >= d_v + c` on every arc with `f > lower`.
    pub potential: Vec<Rational>,
}

struct Residual {
    to: Vec<usize>,
    cap: Vec<Rational>,
    cost: Vec<Rational>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual {
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Adds an arc and its reverse; returns the forward index. The reverse
    /// of index `i` is `i ^ 1`.
    fn add(&mut self, u: usize, v: usize, cap: Rational, cost: Rational) -> usize {
        let i = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost.clone());
        self.adj[u].push(i);
        self.to.push(u);
        self.cap.push(Rational::zero());
        self.cost.push(-cost);
        self.adj[v].push(i + 1);
        i
    }
}

/// Minimum cost flow with lower and upper bounds. `supply[v]` is the net
/// outflow required at `v`. Costs must be non-negative. Returns `None` if no
/// feasible flow exists.
pub fn min_cost_flow(n: usize, arcs: &[McfArc], supply: &[Rational]) -> Option<McfSolution> {
    assert!(arcs.iter().all(|a| !a.cost.is_negative()), "negative cost");
    if arcs.iter().any(|a| a.upper < a.lower) {
        return None;
    }
    let mut excess: Vec<Rational> = supply.to_vec();
    for a in arcs {
        excess[a.tail] -= &a.lower;
        excess[a.head] += &a.lower;
    }
    let big_s = n;
    let big_t = n + 1;
    let mut res = Residual::new(n + 2);
    let idx: Vec<usize> = arcs
        .iter()
        .map(|a| res.add(a.tail, a.head, &a.upper - &a.lower, a.cost.clone()))
        .collect();
    let mut need = Rational::zero();
    for (v, e) in excess.iter().enumerate() {
        if e.is_positive() {
            res.add(big_s, v, e.clone(), Rational::zero());
            need += e;
        } else if e.is_negative() {
            res.add(v, big_t, -e.clone(), Rational::zero());
        }
    }

    let total = n + 2;
    let mut pot = vec![Rational::zero(); total];
    let mut sent = Rational::zero();
    while sent < need {
        // Dijkstra on reduced costs, ties broken by hop count.
        let mut dist: Vec<Option<(Rational, usize)>> = vec![None; total];
        let mut pred: Vec<Option<usize>> = vec![None; total];
        let mut done = vec![false; total];
        dist[big_s] = Some((Rational::zero(), 0));
        loop {
            let mut best: Option<usize> = None;
            for v in 0..total {
                if done[v] {
                    continue;
                }
                if let Some(d) = &dist[v] {
                    if best.map_or(true, |b| *d < *dist[b].as_ref().unwrap()) {
                        best = Some(v);
                    }
                }
            }
            let Some(u) = best else { break };
            done[u] = true;
            let (du, hu) = dist[u].clone().unwrap();
            for &i in &res.adj[u] {
                if !res.cap[i].is_positive() {
                    continue;
                }
                let w = res.to[i];
                let reduced = &res.cost[i] + &pot[u] - &pot[w];
                let cand = (&du + reduced, hu + 1);
                if !done[w] && dist[w].as_ref().map_or(true, |d| cand < *d) {
                    dist[w] = Some(cand);
                    pred[w] = Some(i);
                }
            }
        }
        if dist[big_t].is_none() {
            return None;
        }
        let reach_max = dist
            .iter()
            .flatten()
            .map(|(d, _)| d.clone())
            .max()
            .unwrap();
        for v in 0..total {
            match &dist[v] {
                Some((d, _)) => pot[v] += d,
                None => pot[v] += &reach_max,
            }
        }
        let mut delta = &need - &sent;
        let mut v = big_t;
        while v != big_s {
            let i = pred[v].unwrap();
            if res.cap[i] < delta {
                delta = res.cap[i].clone();
            }
            v = res.to[i ^ 1];
        }
        let mut v = big_t;
        while v != big_s {
            let i = pred[v].unwrap();
            res.cap[i] -= &delta;
            res.cap[i ^ 1] += &delta;
            v = res.to[i ^ 1];
        }
        sent += delta;
    }

    let flow: Vec<Rational> = arcs
        .iter()
        .zip(&idx)
        .map(|(a, &i)| &a.lower + &res.cap[i ^ 1])
        .collect();
    let cost = arcs
        .iter()
        .zip(&flow)
        .fold(Rational::zero(), |acc, (a, f)| acc + &a.cost * f);
    let potential = residual_potentials(n, arcs, &flow);
    Some(McfSolution {
        flow,
        cost,
        potential,
    })
}

/// Bellman-Ford distances from a virtual root joined to every node by a
/// zero arc, over the residual graph of `flow`. For an optimal flow there
/// is no negative cycle and the result is a dual certificate.
pub fn residual_potentials(n: usize, arcs: &[McfArc], flow: &[Rational]) -> Vec<Rational> {
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for (a, f) in arcs.iter().zip(flow) {
        if *f < a.upper {
            edges.push((a.tail, a.head, a.cost.clone()));
        }
        if *f > a.lower {
            edges.push((a.head, a.tail, -a.cost.clone()));
        }
    }
    let mut d = vec![Rational::zero(); n];
    for _ in 0..=n {
        let mut changed = false;
        for (u, v, c) in &edges {
            let cand = &d[*u] + c;
            if cand < d[*v] {
                d[*v] = cand;
                changed = true;
            }
        }
        if !changed {
            return d;
        }
    }
    panic!("negative residual cycle: flow is not optimal");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn arc(t: usize, h: usize, l: i64, u: i64, c: i64) -> McfArc {
        McfArc {
            tail: t,
            head: h,
            lower: int(l),
            upper: int(u),
            cost: int(c),
        }
    }

    #[test]
    fn shortest_paths() {
        let e = vec![(0, 1, int(3)), (0, 2, int(1)), (2, 1, int(1))];
        let d = dijkstra(4, &e, 0);
        assert_eq!(d, vec![Some(int(0)), Some(int(2)), Some(int(1)), None]);
    }

    #[test]
    fn max_flow_two_paths() {
        let e = vec![(0, 1, int(1)), (0, 1, int(2)), (1, 2, int(5))];
        let mf = max_flow(3, &e, 0, 2);
        assert_eq!(mf.value, int(3));
        assert_eq!(mf.source_side, vec![true, false, false]);
    }

    #[test]
    fn cheapest_split() {
        // two parallel s-t arcs plus a fixed return arc: the cheap arc
        // saturates first
        let arcs = vec![arc(0, 1, 0, 1, 1), arc(0, 1, 0, 2, 3), arc(1, 0, 2, 2, 0)];
        let sol = min_cost_flow(2, &arcs, &[int(0), int(0)]).unwrap();
        assert_eq!(sol.flow, vec![int(1), int(1), int(2)]);
        assert_eq!(sol.cost, int(4));
        assert_eq!(&sol.potential[1] - &sol.potential[0], int(3));
    }

    #[test]
    fn infeasible_bounds() {
        let arcs = vec![arc(0, 1, 0, 1, 0)];
        assert!(min_cost_flow(2, &arcs, &[int(2), int(-2)]).is_none());
        let arcs = vec![arc(0, 1, 3, 2, 0)];
        assert!(min_cost_flow(2, &arcs, &[int(0), int(0)]).is_none());
    }

    /// Brute force over a grid of flows on a two-path network.
    fn brute(caps: [i64; 3], costs: [i64; 3], demand: i64) -> Option<Rational> {
        // arcs: 0->1, 1->2, 0->2 ; send `demand` from 0 to 2
        let mut best: Option<Rational> = None;
        for direct in 0..=caps[2] {
            let via = demand - direct;
            if via < 0 || via > caps[0] || via > caps[1] {
                continue;
            }
            let c = int(via * (costs[0] + costs[1]) + direct * costs[2]);
            if best.as_ref().map_or(true, |b| c < *b) {
                best = Some(c);
            }
        }
        best
    }

    proptest! {
        #[test]
        fn min_cost_matches_brute_force(
            caps in proptest::array::uniform3(0i64..5),
            costs in proptest::array::uniform3(0i64..5),
            demand in 0i64..8,
        ) {
            let arcs = vec![
                arc(0, 1, 0, caps[0], costs[0]),
                arc(1, 2, 0, caps[1], costs[1]),
                arc(0, 2, 0, caps[2], costs[2]),
            ];
            let sol = min_cost_flow(3, &arcs, &[int(demand), int(0), int(-demand)]);
            let expect = brute(caps, costs, demand);
            prop_assert_eq!(sol.as_ref().map(|s| s.cost.clone()), expect);
            if let Some(sol) = sol {
                let d = &sol.potential;
                for (a, f) in arcs.iter().zip(&sol.flow) {
                    let gap = &d[a.head] - &d[a.tail] - &a.cost;
                    if *f < a.upper { prop_assert!(gap <= int(0)); }
                    if *f > a.lower { prop_assert!(gap >= int(0)); }
                }
            }
        }

        #[test]
        fn max_flow_equals_cut(caps in proptest::collection::vec(1i64..6, 5)) {
            let e = vec![
                (0, 1, int(caps[0])), (0, 2, int(caps[1])), (1, 2, int(caps[2])),
                (1, 3, int(caps[3])), (2, 3, rat(caps[4], 2)),
            ];
            let mf = max_flow(4, &e, 0, 3);
            let cut = e.iter()
                .filter(|(u, v, _)| mf.source_side[*u] && !mf.source_side[*v])
                .fold(int(0), |acc, (_, _, c)| acc + c);
            prop_assert_eq!(mf.value, cut);
        }
    }
}
