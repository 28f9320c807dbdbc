//! Instance model: a directed graph with transit times and capacities, a
//! single source and sink, a constant inflow rate and an optional set of
//! free arcs.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph;
use crate::io::{ArcSpec, InstanceSpec};
use crate::rational::Rational;

pub type NodeId = usize;
pub type ArcId = usize;

/// Id given to the artificial `t -> s` return arc.
pub const RETURN_ARC_ID: &str = "ts";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub id: String,
    pub tail: NodeId,
    pub head: NodeId,
    pub transit: Rational,
    pub capacity: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<String>,
    source: NodeId,
    sink: NodeId,
    inflow: Rational,
    arcs: Vec<Arc>,
    free: Vec<bool>,
    return_arc: Option<ArcId>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
}

impl Network {
    fn assemble(
        nodes: Vec<String>,
        source: NodeId,
        sink: NodeId,
        inflow: Rational,
        arcs: Vec<Arc>,
        free: Vec<bool>,
        return_arc: Option<ArcId>,
    ) -> Self {
        let mut out_arcs = vec![Vec::new(); nodes.len()];
        let mut in_arcs = vec![Vec::new(); nodes.len()];
        for (a, arc) in arcs.iter().enumerate() {
            out_arcs[arc.tail].push(a);
            in_arcs[arc.head].push(a);
        }
        Network {
            nodes,
            source,
            sink,
            inflow,
            arcs,
            free,
            return_arc,
            out_arcs,
            in_arcs,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn node_name(&self, v: NodeId) -> &str {
        &self.nodes[v]
    }

    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn arc_index(&self, id: &str) -> Option<ArcId> {
        self.arcs.iter().position(|a| a.id == id)
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn inflow(&self) -> &Rational {
        &self.inflow
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: ArcId) -> &Arc {
        &self.arcs[a]
    }

    pub fn is_free(&self, a: ArcId) -> bool {
        self.free[a]
    }

    pub fn free_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        (0..self.arcs.len()).filter(move |&a| self.free[a])
    }

    pub fn has_free_arcs(&self) -> bool {
        self.free.iter().any(|&f| f)
    }

    /// The artificial return arc, present only on augmented networks.
    pub fn return_arc(&self) -> Option<ArcId> {
        self.return_arc
    }

    pub fn out_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.out_arcs[v]
    }

    pub fn in_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.in_arcs[v]
    }

    /// Arcs of the instance proper, i.e. everything except the return arc.
    pub fn proper_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        (0..self.arcs.len()).filter(move |&a| Some(a) != self.return_arc)
    }

    /// `kappa = u0 / min_e nu_e`, a Lipschitz bound on every equilibrium
    /// trajectory.
    pub fn lipschitz_constant(&self) -> Rational {
        let min_cap = self
            .proper_arcs()
            .map(|a| &self.arcs[a].capacity)
            .min()
            .expect("network without arcs");
        &self.inflow / min_cap
    }

    /// `max(1, kappa)`: every label derivative lies below it, including
    /// `l'_s = 1` when the inflow is below every capacity.
    pub fn derivative_bound(&self) -> Rational {
        let kappa = self.lipschitz_constant();
        if kappa < Rational::one() {
            Rational::one()
        } else {
            kappa
        }
    }

    /// Minimum capacity of an s-t cut in the network without its free arcs.
    pub fn min_cut_capacity(&self) -> Rational {
        let edges: Vec<(usize, usize, Rational)> = self
            .proper_arcs()
            .filter(|&a| !self.free[a])
            .map(|a| {
                let arc = &self.arcs[a];
                (arc.tail, arc.head, arc.capacity.clone())
            })
            .collect();
        graph::max_flow(self.nodes.len(), &edges, self.source, self.sink).value
    }

    /// Adds the free arc `t -> s` with capacity `u0` and transit time zero.
    pub fn augment_with_return_arc(&self) -> Result<Network> {
        if self.arc_index(RETURN_ARC_ID).is_some() {
            return Err(Error::DuplicateArc(RETURN_ARC_ID.to_string()));
        }
        let mut arcs = self.arcs.clone();
        arcs.push(Arc {
            id: RETURN_ARC_ID.to_string(),
            tail: self.sink,
            head: self.source,
            transit: Rational::zero(),
            capacity: self.inflow.clone(),
        });
        let mut free = self.free.clone();
        free.push(true);
        let ts = arcs.len() - 1;
        Ok(Network::assemble(
            self.nodes.clone(),
            self.source,
            self.sink,
            self.inflow.clone(),
            arcs,
            free,
            Some(ts),
        ))
    }

    /// Restriction to a subset of arcs with a new free set. Arc ids are kept;
    /// no reachability-to-sink requirement is imposed.
    pub fn restricted(&self, keep: &[bool], free: &[bool]) -> Network {
        let mut arcs = Vec::new();
        let mut new_free = Vec::new();
        for (a, arc) in self.arcs.iter().enumerate() {
            if keep[a] && Some(a) != self.return_arc {
                arcs.push(arc.clone());
                new_free.push(free[a]);
            }
        }
        Network::assemble(
            self.nodes.clone(),
            self.source,
            self.sink,
            self.inflow.clone(),
            arcs,
            new_free,
            None,
        )
    }

    pub fn with_transit(&self, a: ArcId, transit: Rational) -> Result<Network> {
        let mut spec = self.to_spec();
        spec.arcs[a].transit = transit;
        build_network(&spec)
    }

    pub fn with_capacity(&self, a: ArcId, capacity: Rational) -> Result<Network> {
        let mut spec = self.to_spec();
        spec.arcs[a].capacity = capacity;
        build_network(&spec)
    }

    pub fn with_inflow(&self, inflow: Rational) -> Result<Network> {
        let mut spec = self.to_spec();
        spec.inflow = inflow;
        build_network(&spec)
    }

    /// Same instance with a capacity change, skipping the reachability
    /// checks so that it also applies to restricted networks.
    pub fn with_capacity_unchecked(&self, a: ArcId, capacity: Rational) -> Network {
        let mut n = self.clone();
        n.arcs[a].capacity = capacity;
        n
    }

    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            nodes: self.nodes.clone(),
            source: self.nodes[self.source].clone(),
            sink: self.nodes[self.sink].clone(),
            inflow: self.inflow.clone(),
            arcs: self
                .proper_arcs()
                .map(|a| {
                    let arc = &self.arcs[a];
                    ArcSpec {
                        id: arc.id.clone(),
                        tail: self.nodes[arc.tail].clone(),
                        head: self.nodes[arc.head].clone(),
                        transit: arc.transit.clone(),
                        capacity: arc.capacity.clone(),
                    }
                })
                .collect(),
            free_arcs: self
                .proper_arcs()
                .filter(|&a| self.free[a])
                .map(|a| self.arcs[a].id.clone())
                .collect(),
        }
    }

    /// Nodes reachable from `from` using arcs selected by `use_arc`.
    pub fn reachable_from(&self, from: NodeId, use_arc: impl Fn(ArcId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for &a in &self.out_arcs[v] {
                let w = self.arcs[a].head;
                if use_arc(a) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Nodes that can reach `to` using arcs selected by `use_arc`.
    pub fn reaching(&self, to: NodeId, use_arc: impl Fn(ArcId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([to]);
        seen[to] = true;
        while let Some(w) = queue.pop_front() {
            for &a in &self.in_arcs[w] {
                let v = self.arcs[a].tail;
                if use_arc(a) && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// True if the arcs selected by `use_arc` contain a directed cycle.
    pub fn has_cycle(&self, use_arc: impl Fn(ArcId) -> bool) -> bool {
        self.topological_order(use_arc).is_none()
    }

    /// Kahn order of the subgraph selected by `use_arc`, `None` if cyclic.
    pub fn topological_order(&self, use_arc: impl Fn(ArcId) -> bool) -> Option<Vec<NodeId>> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for (a, arc) in self.arcs.iter().enumerate() {
            if use_arc(a) {
                indeg[arc.head] += 1;
            }
        }
        let mut queue: VecDeque<NodeId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &a in &self.out_arcs[v] {
                if use_arc(a) {
                    let w = self.arcs[a].head;
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        queue.push_back(w);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Validates a parsed instance description and builds the network.
pub fn build_network(spec: &InstanceSpec) -> Result<Network> {
    let mut index = HashMap::new();
    for (i, name) in spec.nodes.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(Error::InvalidInput(format!("duplicate node {name}")));
        }
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    };
    let source = lookup(&spec.source)?;
    let sink = lookup(&spec.sink)?;
    if source == sink {
        return Err(Error::InvalidInput("source equals sink".into()));
    }
    if !spec.inflow.is_positive() {
        return Err(Error::InvalidInput("inflow must be positive".into()));
    }

    let mut ids = HashSet::new();
    let mut arcs = Vec::with_capacity(spec.arcs.len());
    for a in &spec.arcs {
        if !ids.insert(a.id.as_str()) {
            return Err(Error::DuplicateArc(a.id.clone()));
        }
        if a.transit.is_negative() {
            return Err(Error::NegativeTransit(a.id.clone()));
        }
        if !a.capacity.is_positive() {
            return Err(Error::NonPositiveCapacity(a.id.clone()));
        }
        arcs.push(Arc {
            id: a.id.clone(),
            tail: lookup(&a.tail)?,
            head: lookup(&a.head)?,
            transit: a.transit.clone(),
            capacity: a.capacity.clone(),
        });
    }
    if arcs.is_empty() {
        return Err(Error::InvalidInput("network has no arcs".into()));
    }

    let mut free = vec![false; arcs.len()];
    for id in &spec.free_arcs {
        let a = arcs
            .iter()
            .position(|arc| &arc.id == id)
            .ok_or_else(|| Error::UnknownArc(id.clone()))?;
        free[a] = true;
    }

    let net = Network::assemble(
        spec.nodes.clone(),
        source,
        sink,
        spec.inflow.clone(),
        arcs,
        free,
        None,
    );

    if let Some(v) = zero_cycle_node(&net) {
        return Err(Error::ZeroCycle(net.nodes[v].clone()));
    }
    let from_s = net.reachable_from(source, |_| true);
    let to_t = net.reaching(sink, |_| true);
    for v in 0..net.node_count() {
        if !from_s[v] || !to_t[v] {
            return Err(Error::Unreachable(net.nodes[v].clone()));
        }
    }
    // With free arcs present, (E, E_inf) must itself be a valid
    // configuration; conditions (i) and (ii) follow from reachability.
    if net.has_free_arcs() && net.has_cycle(|_| true) {
        return Err(Error::InvalidInput(
            "free arcs require an acyclic network".into(),
        ));
    }
    Ok(net)
}

fn zero_cycle_node(net: &Network) -> Option<NodeId> {
    let zero = |a: ArcId| net.arcs[a].transit.is_zero();
    if !net.has_cycle(zero) {
        return None;
    }
    // Some node on a zero cycle survives the Kahn peel; report the first.
    let n = net.node_count();
    let mut indeg = vec![0usize; n];
    for (a, arc) in net.arcs.iter().enumerate() {
        if zero(a) {
            indeg[arc.head] += 1;
        }
    }
    let mut removed = vec![false; n];
    let mut queue: VecDeque<NodeId> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = queue.pop_front() {
        removed[v] = true;
        for &a in &net.out_arcs[v] {
            if zero(a) {
                let w = net.arcs[a].head;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
    }
    (0..n).find(|&v| !removed[v])
}

/// Shortest transit-time distances from the source: the labeling of an
/// initially empty network.
pub fn empty_network_labels(net: &Network) -> Vec<Rational> {
    let edges: Vec<(usize, usize, Rational)> = net
        .proper_arcs()
        .map(|a| {
            let arc = net.arc(a);
            (arc.tail, arc.head, arc.transit.clone())
        })
        .collect();
    graph::dijkstra(net.node_count(), &edges, net.source())
        .into_iter()
        .map(|d| d.expect("every node is reachable from the source"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::rational::{int, rat};

    fn spec(arcs: &[(&str, &str, &str, i64, i64)], inflow: i64) -> InstanceSpec {
        let mut nodes: Vec<String> = Vec::new();
        for (_, t, h, _, _) in arcs {
            for n in [t, h] {
                if !nodes.iter().any(|x| x == n) {
                    nodes.push(n.to_string());
                }
            }
        }
        InstanceSpec {
            nodes,
            source: "s".into(),
            sink: "t".into(),
            inflow: int(inflow),
            arcs: arcs
                .iter()
                .map(|(id, t, h, tau, nu)| ArcSpec {
                    id: id.to_string(),
                    tail: t.to_string(),
                    head: h.to_string(),
                    transit: int(*tau),
                    capacity: int(*nu),
                })
                .collect(),
            free_arcs: vec![],
        }
    }

    #[test]
    fn builds_reference_instances() {
        let a = instances::net_a();
        assert_eq!(a.node_count(), 2);
        assert_eq!(a.arc_count(), 1);
        let c = instances::net_c();
        assert_eq!(c.arc_count(), 2);
    }

    #[test]
    fn rejects_zero_cycle() {
        let s = spec(
            &[("e", "s", "t", 1, 1), ("a", "t", "u", 0, 1), ("b", "u", "t", 0, 1), ("c", "u", "t", 1, 1)],
            1,
        );
        assert!(matches!(build_network(&s), Err(Error::ZeroCycle(_))));
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = spec(&[("e", "s", "t", -1, 1)], 1);
        assert!(matches!(build_network(&s), Err(Error::NegativeTransit(_))));
        let s = spec(&[("e", "s", "t", 1, 0)], 1);
        assert!(matches!(build_network(&s), Err(Error::NonPositiveCapacity(_))));
        let s = spec(&[("e", "s", "t", 1, 1), ("f", "s", "u", 1, 1)], 1);
        assert!(matches!(build_network(&s), Err(Error::Unreachable(n)) if n == "u"));
        let s = spec(&[("e", "s", "t", 1, 1), ("e", "s", "t", 2, 1)], 1);
        assert!(matches!(build_network(&s), Err(Error::DuplicateArc(_))));
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(instances::net_a().lipschitz_constant(), int(2));
        assert_eq!(instances::net_c().lipschitz_constant(), int(2));
        assert_eq!(instances::net_d().lipschitz_constant(), int(4));
    }

    /// Brute-force cut enumeration over all node subsets containing s.
    fn brute_min_cut(net: &Network) -> Rational {
        let n = net.node_count();
        let mut best: Option<Rational> = None;
        for mask in 0u32..(1 << n) {
            if mask & (1 << net.source()) == 0 || mask & (1 << net.sink()) != 0 {
                continue;
            }
            let mut cap = Rational::zero();
            for a in net.proper_arcs() {
                let arc = net.arc(a);
                if !net.is_free(a) && mask & (1 << arc.tail) != 0 && mask & (1 << arc.head) == 0 {
                    cap += &arc.capacity;
                }
            }
            if best.as_ref().map_or(true, |b| cap < *b) {
                best = Some(cap);
            }
        }
        best.unwrap()
    }

    #[test]
    fn min_cut_matches_enumeration() {
        assert_eq!(instances::net_a().min_cut_capacity(), int(1));
        assert_eq!(instances::net_c().min_cut_capacity(), int(3));
        assert_eq!(instances::net_b().min_cut_capacity(), int(4));
        for seed in 0..30 {
            let net = instances::random_instance(seed);
            assert_eq!(net.min_cut_capacity(), brute_min_cut(&net), "seed {seed}");
        }
    }

    #[test]
    fn return_arc_augmentation() {
        let a = instances::net_a().augment_with_return_arc().unwrap();
        assert_eq!(a.arc_count(), 2);
        let ts = a.return_arc().unwrap();
        assert!(a.is_free(ts));
        assert_eq!(a.arc(ts).capacity, int(2));
        assert_eq!(a.arc(ts).transit, int(0));
        assert!(matches!(a.augment_with_return_arc(), Err(Error::DuplicateArc(_))));
        let d = instances::net_d().augment_with_return_arc().unwrap();
        assert_eq!(d.arc(d.return_arc().unwrap()).capacity, int(4));
        assert_eq!(d.free_arcs().count(), 1);
    }

    #[test]
    fn empty_start_is_shortest_distance() {
        assert_eq!(empty_network_labels(&instances::net_c()), vec![int(0), int(1)]);
        let _ = rat(1, 2);
    }
}
