//! Reconstruction of arc inflow and outflow rates, queue volumes and
//! cumulative flows from an equilibrium trajectory.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::labeling::{arc_gap, queue_and_slack_of};
use crate::network::{ArcId, Network};
use crate::rational::{min, Rational};
use crate::thin_flow::node_balance;

/// Piecewise-constant rate: zero before `breaks[0]`, `rates[i]` on
/// `[breaks[i], breaks[i+1])`, the last rate forever after.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateFunction {
    pub breaks: Vec<Rational>,
    pub rates: Vec<Rational>,
    /// Cumulative value up to `breaks[0]`.
    pub initial: Rational,
}

impl RateFunction {
    fn piece(&self, xi: &Rational) -> Option<usize> {
        self.breaks.iter().rposition(|b| b <= xi)
    }

    /// Right-continuous rate at `xi`.
    pub fn rate(&self, xi: &Rational) -> Rational {
        self.piece(xi).map_or_else(Rational::zero, |i| self.rates[i].clone())
    }

    /// Integral of the rate up to `xi`, plus the initial value.
    pub fn cumulative(&self, xi: &Rational) -> Rational {
        let mut total = self.initial.clone();
        let Some(last) = self.piece(xi) else { return total };
        for i in 0..last {
            total += &self.rates[i] * (&self.breaks[i + 1] - &self.breaks[i]);
        }
        total + &self.rates[last] * (xi - &self.breaks[last])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcFlow {
    /// `f+` over entry times.
    pub inflow: RateFunction,
    /// `f-` over exit times, including the drain of an initial queue.
    pub outflow: RateFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowOverTime {
    pub arcs: Vec<ArcFlow>,
    /// Phase start times of the underlying trajectory.
    pub thetas: Vec<Rational>,
    /// Cumulative departures `x_e(theta_k)` per arc and phase start.
    pub departures: Vec<Vec<Rational>>,
}

impl FlowOverTime {
    /// `z_e(xi) = F+_e(xi) - F-_e(xi + tau_e)`
    pub fn queue_volume(&self, net: &Network, a: ArcId, xi: &Rational) -> Rational {
        let f = &self.arcs[a];
        f.inflow.cumulative(xi) - f.outflow.cumulative(&(xi + &net.arc(a).transit))
    }

    /// Cumulative flow `x_e(theta)` by departure time.
    pub fn departure_volume(&self, traj: &Trajectory, a: ArcId, theta: &Rational) -> Rational {
        let k = traj.phase_at(theta);
        &self.departures[a][k] + &traj.phases[k].flow[a] * (theta - &self.thetas[k])
    }

    /// Times at which some rate of arc `a` or its queue volume changes slope.
    pub fn arc_breakpoints(&self, net: &Network, a: ArcId) -> Vec<Rational> {
        let f = &self.arcs[a];
        let tau = &net.arc(a).transit;
        let mut pts: Vec<Rational> = f.inflow.breaks.clone();
        pts.extend(f.outflow.breaks.iter().cloned());
        pts.extend(f.outflow.breaks.iter().map(|b| b - tau));
        pts.sort();
        pts.dedup();
        pts
    }
}

/// Builds `f+`, `f-` from the phases: arc `e = vw` receives `x'_e / l'_v` on
/// the entry times `l_v` sweeps during a phase and releases `x'_e / l'_w` on
/// the matching exit times. An initial queue drains at capacity rate before
/// `l_w(0)`.
pub fn reconstruct_flow_over_time(net: &Network, traj: &Trajectory) -> Result<FlowOverTime> {
    for p in &traj.phases {
        if let Some(v) = (0..net.node_count()).find(|&v| !p.direction[v].is_positive()) {
            return Err(Error::DivisionByZeroRate(net.node_name(v).to_string()));
        }
    }
    let first = &traj.phases[0];
    let mut arcs = Vec::with_capacity(net.arc_count());
    let mut departures = Vec::with_capacity(net.arc_count());
    for a in 0..net.arc_count() {
        let arc = net.arc(a);
        let (v, w) = (arc.tail, arc.head);
        let mut inflow = RateFunction { breaks: vec![], rates: vec![], initial: Rational::zero() };
        let mut outflow = inflow.clone();
        let (queue, _) = queue_and_slack_of(net, &first.labels, a);
        if !net.is_free(a) && queue.is_positive() {
            outflow.breaks.push(&first.labels[v] + &arc.transit);
            outflow.rates.push(arc.capacity.clone());
            outflow.initial = -(&arc.capacity * &queue);
        }
        let mut cum = vec![Rational::zero()];
        for (k, p) in traj.phases.iter().enumerate() {
            let x = &p.flow[a];
            inflow.breaks.push(p.labels[v].clone());
            inflow.rates.push(x / &p.direction[v]);
            outflow.breaks.push(p.labels[w].clone());
            outflow.rates.push(x / &p.direction[w]);
            if let Some(end) = traj.phase_end(k) {
                let next = &cum[k] + x * (end - &p.start);
                cum.push(next);
            }
        }
        arcs.push(ArcFlow { inflow, outflow });
        departures.push(cum);
    }
    Ok(FlowOverTime {
        arcs,
        thetas: traj.phases.iter().map(|p| p.start.clone()).collect(),
        departures,
    })
}

/// Sample points for the constancy intervals starting at or after `from`:
/// one point inside each bounded interval and one beyond the last break.
fn interval_samples(points: &[Rational], from: &Rational) -> Vec<Rational> {
    let mut pts: Vec<Rational> = points.iter().filter(|p| *p >= from).cloned().collect();
    pts.push(from.clone());
    pts.sort();
    pts.dedup();
    let two = Rational::from_integer(2.into());
    let mut out: Vec<Rational> = pts.windows(2).map(|w| (&w[0] + &w[1]) / &two).collect();
    out.push(pts.last().expect("nonempty") + Rational::one());
    out
}

/// Flow conservation at every node other than the sink on every constancy
/// interval after the node's first label: entering outflow rates plus the
/// node's supply match leaving inflow rates.
pub fn check_conservation(net: &Network, traj: &Trajectory, fot: &FlowOverTime) -> Vec<String> {
    let mut issues = Vec::new();
    let balance = node_balance(net);
    let first = &traj.phases[0].labels;
    for v in 0..net.node_count() {
        if v == net.sink() {
            continue;
        }
        let mut points = Vec::new();
        for &a in net.out_arcs(v) {
            points.extend(fot.arcs[a].inflow.breaks.iter().cloned());
        }
        for &a in net.in_arcs(v) {
            points.extend(fot.arcs[a].outflow.breaks.iter().cloned());
        }
        for xi in interval_samples(&points, &first[v]) {
            let out: Rational = net.out_arcs(v).iter().map(|&a| fot.arcs[a].inflow.rate(&xi)).sum();
            let inn: Rational = net.in_arcs(v).iter().map(|&a| fot.arcs[a].outflow.rate(&xi)).sum();
            let k = traj.phases.iter().rposition(|p| p.labels[v] <= xi).unwrap_or(0);
            let expected = &balance[v] / &traj.phases[k].direction[v];
            if &out - &inn != expected {
                issues.push(format!(
                    "conservation at node {} time {xi}: net outflow rate {}, expected {expected}",
                    net.node_name(v),
                    &out - &inn
                ));
            }
        }
    }
    issues
}

/// Queues release at capacity while nonempty and pass inflow through up to
/// capacity otherwise. Free arcs are exempt.
pub fn check_queue_rule(net: &Network, traj: &Trajectory, fot: &FlowOverTime) -> Vec<String> {
    let mut issues = Vec::new();
    let first = &traj.phases[0].labels;
    for a in 0..net.arc_count() {
        if net.is_free(a) {
            continue;
        }
        let arc = net.arc(a);
        for xi in interval_samples(&fot.arc_breakpoints(net, a), &first[arc.tail]) {
            let z = fot.queue_volume(net, a, &xi);
            let out = fot.arcs[a].outflow.rate(&(&xi + &arc.transit));
            let expected = if z.is_positive() {
                arc.capacity.clone()
            } else {
                min(&fot.arcs[a].inflow.rate(&xi), &arc.capacity).clone()
            };
            if out != expected {
                issues.push(format!(
                    "queue rule on arc {} at entry time {xi}: queue {z}, outflow rate {out}, expected {expected}",
                    arc.id
                ));
            }
        }
    }
    issues
}

/// `z_e >= 0` at every breakpoint after the first entry time, with a
/// nonnegative final slope when the trajectory is complete; also
/// `z_e(l_v(theta_k)) = nu_e * q_e(theta_k)` at every phase start.
pub fn check_queue_volumes(net: &Network, traj: &Trajectory, fot: &FlowOverTime) -> Vec<String> {
    let mut issues = Vec::new();
    let first = &traj.phases[0].labels;
    for a in 0..net.arc_count() {
        if net.is_free(a) {
            continue;
        }
        let arc = net.arc(a);
        let mut pts: Vec<Rational> = fot
            .arc_breakpoints(net, a)
            .into_iter()
            .filter(|p| *p >= first[arc.tail])
            .collect();
        pts.push(first[arc.tail].clone());
        for xi in &pts {
            let z = fot.queue_volume(net, a, xi);
            if z.is_negative() {
                issues.push(format!("negative queue volume {z} on arc {} at time {xi}", arc.id));
            }
        }
        if !traj.truncated {
            let last = pts.iter().max().expect("nonempty");
            let slope = fot.arcs[a].inflow.rate(last) - fot.arcs[a].outflow.rate(&(last + &arc.transit));
            if slope.is_negative() {
                issues.push(format!("queue volume on arc {} decreases forever from {last}", arc.id));
            }
        }
        for p in &traj.phases {
            let z = fot.queue_volume(net, a, &p.labels[arc.tail]);
            let q = crate::rational::pos_part(&arc_gap(net, &p.labels, a));
            if z != &arc.capacity * &q {
                issues.push(format!(
                    "queue volume {z} on arc {} at theta {} differs from capacity times delay {q}",
                    arc.id, p.start
                ));
            }
        }
    }
    issues
}

/// `F+_e(l_v(theta_k)) = x_e(theta_k) = F-_e(l_w(theta_k))` at every phase
/// start.
pub fn check_equilibrium_identity(net: &Network, traj: &Trajectory, fot: &FlowOverTime) -> Vec<String> {
    let mut issues = Vec::new();
    for a in 0..net.arc_count() {
        let arc = net.arc(a);
        for p in &traj.phases {
            let x = fot.departure_volume(traj, a, &p.start);
            let fin = fot.arcs[a].inflow.cumulative(&p.labels[arc.tail]);
            let fout = fot.arcs[a].outflow.cumulative(&p.labels[arc.head]);
            if fin != x || fout != x {
                issues.push(format!(
                    "arc {} at theta {}: F+ = {fin}, F- = {fout}, x = {x}",
                    arc.id, p.start
                ));
            }
        }
    }
    issues
}

/// All four reconstruction checks.
pub fn verify_flow_over_time(net: &Network, traj: &Trajectory, fot: &FlowOverTime) -> Vec<String> {
    let mut issues = check_conservation(net, traj, fot);
    issues.extend(check_queue_rule(net, traj, fot));
    issues.extend(check_queue_volumes(net, traj, fot));
    issues.extend(check_equilibrium_identity(net, traj, fot));
    issues
}
