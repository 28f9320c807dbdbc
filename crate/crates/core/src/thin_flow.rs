//! Thin flows with resetting: verification, the ordered-partition linear
//! system, a pruned partition search and a brute-force enumeration oracle.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, McfArc};
use crate::labeling::{validity_violation, Configuration};
use crate::linalg::{self, Solution};
use crate::network::{ArcId, Network, NodeId};
use crate::rational::Rational;

/// Largest node count the partition search accepts by default.
pub const DEFAULT_NODE_BUDGET: usize = 9;

/// Flow derivative `x'` per arc and label derivative `l'` per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinFlow {
    pub flow: Vec<Rational>,
    pub direction: Vec<Rational>,
}

/// Node to part index of an ordered partition `(V_1, ..., V_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrderedPartition(pub Vec<usize>);

impl OrderedPartition {
    pub fn from_parts(n: usize, parts: &[Vec<NodeId>]) -> Self {
        let mut p = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                p[v] = i;
            }
        }
        OrderedPartition(p)
    }

    pub fn part_count(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    /// Parts ordered by index, nodes in increasing order.
    pub fn parts(&self) -> Vec<Vec<NodeId>> {
        let mut parts = vec![Vec::new(); self.part_count()];
        for (v, &p) in self.0.iter().enumerate() {
            parts[p].push(v);
        }
        parts
    }

    fn is_well_formed(&self, n: usize) -> bool {
        if self.0.len() != n {
            return false;
        }
        let k = self.part_count();
        let mut used = vec![false; k];
        for &p in &self.0 {
            used[p] = true;
        }
        used.into_iter().all(|u| u)
    }

    /// Groups nodes with equal values, parts in increasing value order.
    pub fn by_value(values: &[Rational]) -> Self {
        let mut distinct: Vec<&Rational> = values.iter().collect();
        distinct.sort();
        distinct.dedup();
        OrderedPartition(
            values
                .iter()
                .map(|v| distinct.binary_search(&v).unwrap())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Flow derivative of an arc is negative.
    NegativeFlow { arc: String, value: Rational },
    /// Inactive arc carries flow.
    InactiveFlow { arc: String, value: Rational },
    /// Conservation fails at a node.
    Conservation { node: String, net_outflow: Rational, expected: Rational },
    /// `l'_s != 1`.
    SourceDerivative { value: Rational },
    /// Minimum of `rho` over entering active arcs differs from `l'_w`.
    MinRho { node: String, arc: Option<String>, min_rho: Option<Rational>, value: Rational },
    /// Arc with positive flow whose `rho` differs from `l'_w`.
    Tight { arc: String, rho: Rational, value: Rational },
    /// Vector lengths do not match the network.
    Shape(String),
}

impl Violation {
    /// Condition label: TF-1 .. TF-4.
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::NegativeFlow { .. }
            | Violation::InactiveFlow { .. }
            | Violation::Conservation { .. }
            | Violation::Shape(_) => "TF-1",
            Violation::SourceDerivative { .. } => "TF-2",
            Violation::MinRho { .. } => "TF-3",
            Violation::Tight { .. } => "TF-4",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.condition();
        match self {
            Violation::NegativeFlow { arc, value } => {
                write!(f, "{c} at arc {arc}: negative flow {value}")
            }
            Violation::InactiveFlow { arc, value } => {
                write!(f, "{c} at arc {arc}: inactive arc carries flow {value}")
            }
            Violation::Conservation { node, net_outflow, expected } => write!(
                f,
                "{c} at node {node}: net outflow {net_outflow}, expected {expected}"
            ),
            Violation::SourceDerivative { value } => {
                write!(f, "{c}: source derivative {value}, expected 1")
            }
            Violation::MinRho { node, arc, min_rho, value } => match (arc, min_rho) {
                (Some(a), Some(r)) => write!(
                    f,
                    "{c} at node {node} via {a}: min rho {r}, label derivative {value}"
                ),
                _ => write!(f, "{c} at node {node}: no entering active arc"),
            },
            Violation::Tight { arc, rho, value } => write!(
                f,
                "{c} at arc {arc}: rho {rho}, head label derivative {value}"
            ),
            Violation::Shape(s) => write!(f, "{c}: {s}"),
        }
    }
}

/// `rho_e(l'_v, x'_e)`
pub fn rho(net: &Network, cfg: &Configuration, a: ArcId, dv: &Rational, x: &Rational) -> Rational {
    let r = x / &net.arc(a).capacity;
    if cfg.is_resetting(a) || r > *dv {
        r
    } else {
        dv.clone()
    }
}

/// Required net outflow per node: `u0` at the source, `-u0` at the sink,
/// or zero everywhere when the return arc makes `x'` a circulation.
pub fn node_balance(net: &Network) -> Vec<Rational> {
    let mut b = vec![Rational::zero(); net.node_count()];
    if net.return_arc().is_none() {
        b[net.source()] = net.inflow().clone();
        b[net.sink()] = -net.inflow().clone();
    }
    b
}

/// Checks TF-1 .. TF-4 exactly and lists every violation.
pub fn verify_thin_flow(net: &Network, cfg: &Configuration, cand: &ThinFlow) -> Vec<Violation> {
    let mut out = Vec::new();
    if cand.flow.len() != net.arc_count() || cand.direction.len() != net.node_count() {
        out.push(Violation::Shape(format!(
            "expected {} arc and {} node values",
            net.arc_count(),
            net.node_count()
        )));
        return out;
    }
    let x = &cand.flow;
    let d = &cand.direction;
    for a in 0..net.arc_count() {
        if x[a].is_negative() {
            out.push(Violation::NegativeFlow { arc: net.arc(a).id.clone(), value: x[a].clone() });
        } else if !cfg.is_active(a) && !x[a].is_zero() {
            out.push(Violation::InactiveFlow { arc: net.arc(a).id.clone(), value: x[a].clone() });
        }
    }
    let balance = node_balance(net);
    for v in 0..net.node_count() {
        let mut net_out = Rational::zero();
        for &a in net.out_arcs(v) {
            net_out += &x[a];
        }
        for &a in net.in_arcs(v) {
            net_out -= &x[a];
        }
        if net_out != balance[v] {
            out.push(Violation::Conservation {
                node: net.node_name(v).to_string(),
                net_outflow: net_out,
                expected: balance[v].clone(),
            });
        }
    }
    if !d[net.source()].is_one() {
        out.push(Violation::SourceDerivative { value: d[net.source()].clone() });
    }
    for w in 0..net.node_count() {
        if w == net.source() {
            continue;
        }
        let mut best: Option<(ArcId, Rational)> = None;
        for &a in net.in_arcs(w) {
            if !cfg.is_active(a) {
                continue;
            }
            let r = rho(net, cfg, a, &d[net.arc(a).tail], &x[a]);
            if best.as_ref().map_or(true, |(_, b)| r < *b) {
                best = Some((a, r));
            }
        }
        match best {
            Some((_, r)) if r == d[w] => {}
            Some((a, r)) => out.push(Violation::MinRho {
                node: net.node_name(w).to_string(),
                arc: Some(net.arc(a).id.clone()),
                min_rho: Some(r),
                value: d[w].clone(),
            }),
            None => out.push(Violation::MinRho {
                node: net.node_name(w).to_string(),
                arc: None,
                min_rho: None,
                value: d[w].clone(),
            }),
        }
    }
    for a in 0..net.arc_count() {
        if cfg.is_active(a) && x[a].is_positive() {
            let arc = net.arc(a);
            let r = rho(net, cfg, a, &d[arc.tail], &x[a]);
            if r != d[arc.head] {
                out.push(Violation::Tight {
                    arc: arc.id.clone(),
                    rho: r,
                    value: d[arc.head].clone(),
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ArcRole {
    Zero,
    /// `x' = nu * y_part`
    Fixed(usize),
    /// Free in `[0, nu * y_part]`; index into the free-arc list.
    Free(usize, usize),
}

fn arc_roles(net: &Network, cfg: &Configuration, pi: &OrderedPartition) -> (Vec<ArcRole>, Vec<ArcId>) {
    let mut roles = Vec::with_capacity(net.arc_count());
    let mut free = Vec::new();
    for (a, arc) in net.arcs().iter().enumerate() {
        let (pv, pw) = (pi.0[arc.tail], pi.0[arc.head]);
        let role = if !cfg.is_active(a) {
            ArcRole::Zero
        } else if cfg.is_resetting(a) || pw > pv {
            ArcRole::Fixed(pw)
        } else if pw < pv {
            ArcRole::Zero
        } else {
            free.push(a);
            ArcRole::Free(free.len() - 1, pw)
        };
        roles.push(role);
    }
    (roles, free)
}

/// Solves the linear system attached to an ordered partition: equal label
/// derivatives within parts, forced flows on resetting and forward arcs,
/// zero flow on backward non-resetting arcs, conservation. Returns the
/// thin flow only if the part values are determined, the remaining flows
/// can be chosen within `[0, nu * l'_w]`, and the result verifies.
pub fn linear_system_for_partition(
    net: &Network,
    cfg: &Configuration,
    pi: &OrderedPartition,
) -> Result<Option<ThinFlow>> {
    if !pi.is_well_formed(net.node_count()) {
        return Err(Error::InvalidInput("malformed ordered partition".into()));
    }
    Ok(solve_partition(net, cfg, pi, false))
}

fn solve_partition(
    net: &Network,
    cfg: &Configuration,
    pi: &OrderedPartition,
    require_sorted: bool,
) -> Option<ThinFlow> {
    let n = net.node_count();
    let k = pi.part_count();
    let (roles, free) = arc_roles(net, cfg, pi);
    let vars = k + free.len();
    let balance = node_balance(net);

    let mut rows = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    for v in 0..n {
        let mut row = vec![Rational::zero(); vars];
        let mut add = |a: ArcId, sign: i32| {
            let nu = &net.arc(a).capacity;
            let col = match roles[a] {
                ArcRole::Zero => return,
                ArcRole::Fixed(p) => p,
                ArcRole::Free(i, _) => k + i,
            };
            let coef = if matches!(roles[a], ArcRole::Fixed(_)) {
                nu.clone()
            } else {
                Rational::one()
            };
            if sign > 0 {
                row[col] += coef;
            } else {
                row[col] -= coef;
            }
        };
        for &a in net.out_arcs(v) {
            add(a, 1);
        }
        for &a in net.in_arcs(v) {
            add(a, -1);
        }
        rows.push(row);
        rhs.push(balance[v].clone());
    }
    let mut row = vec![Rational::zero(); vars];
    row[pi.0[net.source()]] = Rational::one();
    rows.push(row);
    rhs.push(Rational::one());

    let y = match linalg::solve_leading(rows, rhs, vars, k) {
        Solution::Unique(y) => y,
        _ => return None,
    };
    if require_sorted {
        if y.iter().any(|v| v.is_negative()) || y.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
    }

    let mut x = vec![Rational::zero(); net.arc_count()];
    for a in 0..net.arc_count() {
        if let ArcRole::Fixed(p) = roles[a] {
            x[a] = &net.arc(a).capacity * &y[p];
        }
    }
    if !free.is_empty() {
        let mut supply = balance.clone();
        for a in 0..net.arc_count() {
            if matches!(roles[a], ArcRole::Fixed(_)) {
                let arc = net.arc(a);
                supply[arc.tail] -= &x[a];
                supply[arc.head] += &x[a];
            }
        }
        let mut arcs = Vec::with_capacity(free.len());
        for &a in &free {
            let ArcRole::Free(_, p) = roles[a] else { unreachable!() };
            let upper = &net.arc(a).capacity * &y[p];
            if upper.is_negative() {
                return None;
            }
            arcs.push(McfArc {
                tail: net.arc(a).tail,
                head: net.arc(a).head,
                lower: Rational::zero(),
                upper,
                cost: Rational::zero(),
            });
        }
        let sol = graph::min_cost_flow(n, &arcs, &supply)?;
        for (i, &a) in free.iter().enumerate() {
            x[a] = sol.flow[i].clone();
        }
    }
    let direction: Vec<Rational> = (0..n).map(|v| y[pi.0[v]].clone()).collect();
    let tf = ThinFlow { flow: x, direction };
    verify_thin_flow(net, cfg, &tf).is_empty().then_some(tf)
}

/// Among all flows compatible with the direction, the lexicographically
/// least one in arc order.
pub fn lexicographic_flow(net: &Network, cfg: &Configuration, direction: &[Rational]) -> Option<Vec<Rational>> {
    let pi = OrderedPartition::by_value(direction);
    let (roles, free) = arc_roles(net, cfg, &pi);
    let mut x = vec![Rational::zero(); net.arc_count()];
    let mut supply = node_balance(net);
    for a in 0..net.arc_count() {
        if let ArcRole::Fixed(_) = roles[a] {
            let arc = net.arc(a);
            x[a] = &arc.capacity * &direction[arc.head];
            supply[arc.tail] -= &x[a];
            supply[arc.head] += &x[a];
        }
    }
    let mut arcs: Vec<McfArc> = free
        .iter()
        .map(|&a| {
            let arc = net.arc(a);
            McfArc {
                tail: arc.tail,
                head: arc.head,
                lower: Rational::zero(),
                upper: &arc.capacity * &direction[arc.head],
                cost: Rational::zero(),
            }
        })
        .collect();
    for i in 0..arcs.len() {
        arcs[i].cost = Rational::one();
        let sol = graph::min_cost_flow(net.node_count(), &arcs, &supply)?;
        arcs[i].cost = Rational::zero();
        arcs[i].lower = sol.flow[i].clone();
        arcs[i].upper = sol.flow[i].clone();
    }
    if !arcs.is_empty() {
        graph::min_cost_flow(net.node_count(), &arcs, &supply)?;
    }
    for (i, &a) in free.iter().enumerate() {
        x[a] = arcs[i].lower.clone();
    }
    Some(x)
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub thin_flow: ThinFlow,
    /// The partition that produced the direction.
    pub partition: OrderedPartition,
    /// Index of the hint that solved the system, if any did.
    pub hint: Option<usize>,
}

pub fn solve_thin_flow(net: &Network, cfg: &Configuration) -> Result<ThinFlow> {
    Ok(solve_thin_flow_with(net, cfg, &[], DEFAULT_NODE_BUDGET)?.thin_flow)
}

/// Partition search: tries the `hints` in order, then a depth-first insertion of
/// nodes into ordered partitions, pruning any partial partition in which a
/// node has all its entering active arcs coming from strictly higher parts
/// without resetting (TF-3 could not hold there). The returned flow is the
/// lexicographically least one for the found direction.
pub fn solve_thin_flow_with(
    net: &Network,
    cfg: &Configuration,
    hints: &[OrderedPartition],
    node_budget: usize,
) -> Result<Solved> {
    if let Some(why) = validity_violation(net, cfg)? {
        return Err(Error::InvalidInput(format!("configuration is not valid: {why}")));
    }
    if net.node_count() > node_budget {
        return Err(Error::SearchExhausted(node_budget));
    }
    let search = PartitionSearch::new(net, cfg);
    let hinted = hints.iter().enumerate().find_map(|(i, h)| {
        if !h.is_well_formed(net.node_count()) || !search.admits(h) {
            return None;
        }
        solve_partition(net, cfg, h, true).map(|tf| (i, tf))
    });
    let hint = hinted.as_ref().map(|(i, _)| *i);
    let found = hinted.map(|(_, tf)| tf).or_else(|| search.run().map(|(_, tf)| tf));
    let Some(tf) = found else {
        return Err(Error::NoSolution);
    };
    let flow = lexicographic_flow(net, cfg, &tf.direction).ok_or(Error::NoSolution)?;
    let thin_flow = ThinFlow { flow, direction: tf.direction };
    if !verify_thin_flow(net, cfg, &thin_flow).is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(Solved {
        partition: OrderedPartition::by_value(&thin_flow.direction),
        thin_flow,
        hint,
    })
}

struct PartitionSearch<'a> {
    net: &'a Network,
    cfg: &'a Configuration,
    order: Vec<NodeId>,
    /// Position of each node in `order`.
    rank: Vec<usize>,
    /// Active entering arcs per node.
    preds: Vec<Vec<ArcId>>,
}

impl<'a> PartitionSearch<'a> {
    fn new(net: &'a Network, cfg: &'a Configuration) -> Self {
        let n = net.node_count();
        let mut order = vec![net.source()];
        let mut seen = vec![false; n];
        seen[net.source()] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &a in net.out_arcs(v) {
                let w = net.arc(a).head;
                if cfg.is_active(a) && !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
        order.extend((0..n).filter(|&v| !seen[v]));
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let preds = (0..n)
            .map(|w| net.in_arcs(w).iter().copied().filter(|&a| cfg.is_active(a)).collect())
            .collect();
        PartitionSearch { net, cfg, order, rank, preds }
    }

    /// Cheap necessary condition for a complete partition: every node other
    /// than the source is supported.
    fn admits(&self, pi: &OrderedPartition) -> bool {
        (0..self.net.node_count()).all(|w| self.preds[w].is_empty() || self.supported(w, &pi.0))
    }

    fn run(&self) -> Option<(OrderedPartition, ThinFlow)> {
        let mut parts: Vec<Vec<NodeId>> = Vec::new();
        self.dfs(0, &mut parts)
    }

    /// True if `w` has an entering active arc that is resetting or comes
    /// from the same or a lower part. Only meaningful once `w` and all its
    /// predecessors are placed.
    fn supported(&self, w: NodeId, part_of: &[usize]) -> bool {
        w == self.net.source()
            || self.preds[w].iter().any(|&a| {
                self.cfg.is_resetting(a) || part_of[self.net.arc(a).tail] <= part_of[w]
            })
    }

    fn consistent(&self, depth: usize, parts: &[Vec<NodeId>]) -> bool {
        let n = self.net.node_count();
        let mut part_of = vec![usize::MAX; n];
        for (i, p) in parts.iter().enumerate() {
            for &v in p {
                part_of[v] = i;
            }
        }
        let placed = |v: NodeId| self.rank[v] <= depth;
        let v = self.order[depth];
        let mut check = vec![v];
        for &a in self.net.out_arcs(v) {
            if self.cfg.is_active(a) {
                check.push(self.net.arc(a).head);
            }
        }
        check.into_iter().all(|w| {
            !placed(w)
                || !self.preds[w].iter().all(|&a| placed(self.net.arc(a).tail))
                || self.supported(w, &part_of)
        })
    }

    fn dfs(&self, depth: usize, parts: &mut Vec<Vec<NodeId>>) -> Option<(OrderedPartition, ThinFlow)> {
        let n = self.net.node_count();
        if depth == n {
            let pi = OrderedPartition::from_parts(n, parts);
            return solve_partition(self.net, self.cfg, &pi, true).map(|tf| (pi, tf));
        }
        let v = self.order[depth];
        // New singleton parts, latest gap first, then joins.
        for gap in (0..=parts.len()).rev() {
            parts.insert(gap, vec![v]);
            if self.consistent(depth, parts) {
                if let Some(r) = self.dfs(depth + 1, parts) {
                    return Some(r);
                }
            }
            parts.remove(gap);
        }
        for i in (0..parts.len()).rev() {
            parts[i].push(v);
            if self.consistent(depth, parts) {
                if let Some(r) = self.dfs(depth + 1, parts) {
                    return Some(r);
                }
            }
            parts[i].pop();
        }
        None
    }
}

/// Every ordered partition of the nodes, without pruning.
pub fn all_ordered_partitions(n: usize) -> Vec<OrderedPartition> {
    fn rec(v: usize, n: usize, parts: &mut Vec<Vec<NodeId>>, out: &mut Vec<OrderedPartition>) {
        if v == n {
            out.push(OrderedPartition::from_parts(n, parts));
            return;
        }
        for gap in 0..=parts.len() {
            parts.insert(gap, vec![v]);
            rec(v + 1, n, parts, out);
            parts.remove(gap);
        }
        for i in 0..parts.len() {
            parts[i].push(v);
            rec(v + 1, n, parts, out);
            parts[i].pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// Brute-force oracle: every ordered partition whose linear system yields
/// a verified thin flow.
pub fn enumerate_valid_partitions(
    net: &Network,
    cfg: &Configuration,
    node_budget: usize,
) -> Result<Vec<(OrderedPartition, ThinFlow)>> {
    if net.node_count() > node_budget {
        return Err(Error::BudgetExceeded(format!(
            "{} nodes exceed the enumeration budget of {node_budget}",
            net.node_count()
        )));
    }
    Ok(all_ordered_partitions(net.node_count())
        .into_iter()
        .filter_map(|pi| solve_partition(net, cfg, &pi, false).map(|tf| (pi, tf)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{net_a, net_c, net_d};
    use crate::rational::{int, rat};

    fn v(xs: &[Rational]) -> Vec<Rational> {
        xs.to_vec()
    }

    #[test]
    fn single_arc() {
        let a = net_a();
        for reset in [&[][..], &["e"][..]] {
            let cfg = Configuration::from_ids(&a, &["e"], reset).unwrap();
            let tf = solve_thin_flow(&a, &cfg).unwrap();
            assert_eq!(tf.direction, v(&[int(1), int(2)]));
            assert_eq!(tf.flow, v(&[int(2)]));
        }
    }

    #[test]
    fn parallel_arcs_with_queue() {
        let c = net_c();
        let cfg = Configuration::from_ids(&c, &["e1", "e2"], &["e1"]).unwrap();
        let tf = solve_thin_flow(&c, &cfg).unwrap();
        assert_eq!(tf.direction, v(&[int(1), int(1)]));
        assert_eq!(tf.flow, v(&[int(1), int(1)]));
    }

    #[test]
    fn verification_witnesses() {
        let a = net_a();
        let cfg = Configuration::from_ids(&a, &["e"], &[]).unwrap();
        let ok = ThinFlow { flow: v(&[int(2)]), direction: v(&[int(1), int(2)]) };
        assert!(verify_thin_flow(&a, &cfg, &ok).is_empty());
        let bad = ThinFlow { flow: v(&[int(2)]), direction: v(&[int(1), int(1)]) };
        let viol = verify_thin_flow(&a, &cfg, &bad);
        assert!(matches!(&viol[0], Violation::MinRho { node, min_rho: Some(r), .. }
            if node == "t" && *r == int(2)));

        let c = net_c();
        let cfg = Configuration::from_ids(&c, &["e1", "e2"], &["e1"]).unwrap();
        let bad = ThinFlow { flow: v(&[int(2), int(0)]), direction: v(&[int(1), int(2)]) };
        let viol = verify_thin_flow(&c, &cfg, &bad);
        assert!(viol.iter().any(|x| matches!(x, Violation::MinRho { node, arc: Some(e), min_rho: Some(r), .. }
            if node == "t" && e == "e2" && *r == int(1))));
    }

    #[test]
    fn partition_systems() {
        let a = net_a();
        let cfg = Configuration::from_ids(&a, &["e"], &["e"]).unwrap();
        let split = OrderedPartition(vec![0, 1]);
        let tf = linear_system_for_partition(&a, &cfg, &split).unwrap().unwrap();
        assert_eq!(tf.direction, v(&[int(1), int(2)]));
        let merged = OrderedPartition(vec![0, 0]);
        assert!(linear_system_for_partition(&a, &cfg, &merged).unwrap().is_none());

        let d = net_d().augment_with_return_arc().unwrap();
        let cfg = Configuration::from_ids(&d, &["e1", "e2", "ts"], &["e1", "e2", "ts"]).unwrap();
        let tf = linear_system_for_partition(&d, &cfg, &split).unwrap().unwrap();
        assert_eq!(tf.direction, v(&[int(1), rat(4, 3)]));
        assert_eq!(tf.flow, v(&[rat(4, 3), rat(8, 3), int(4)]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_ordered_partitions(2).len(), 3);
        assert_eq!(all_ordered_partitions(3).len(), 13);
        assert_eq!(all_ordered_partitions(4).len(), 75);
        let a = net_a();
        let cfg = Configuration::from_ids(&a, &["e"], &[]).unwrap();
        let all = enumerate_valid_partitions(&a, &cfg, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].0, OrderedPartition(vec![0, 1]));
    }

    #[test]
    fn rejects_invalid_configuration() {
        let c = net_c();
        let cfg = Configuration::from_ids(&c, &["e2"], &["e2"]).unwrap();
        let ok = solve_thin_flow(&c, &cfg);
        assert!(ok.is_ok());
        let cfg = Configuration { active: vec![false, false], resetting: vec![false, false] };
        assert!(matches!(solve_thin_flow(&c, &cfg), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn budget() {
        let a = net_a();
        let cfg = Configuration::from_ids(&a, &["e"], &[]).unwrap();
        assert!(matches!(solve_thin_flow_with(&a, &cfg, &[], 1), Err(Error::SearchExhausted(1))));
        assert!(matches!(enumerate_valid_partitions(&a, &cfg, 1), Err(Error::BudgetExceeded(_))));
    }
}
