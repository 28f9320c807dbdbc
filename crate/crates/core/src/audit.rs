//! The invariant suite run by `check`, and the run report.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::flow_over_time::{reconstruct_flow_over_time, verify_flow_over_time};
use crate::integrator::{integrate, next_event, verify_trajectory, StopPolicy, Trajectory};
use crate::io::{instance_json, Breakpoint};
use crate::labeling::{check_feasible, configuration_of, Labeling};
use crate::network::Network;
use crate::perturb::uniqueness_audit;
use crate::rational::{self, Rational};
use crate::steady::{
    audit_phases, convergence_bounds, phase_slope, phase_slope_by_configuration, steady_state, EtaMode,
    SteadyState, EXHAUSTIVE_ARC_BUDGET,
};
use crate::thin_flow::{solve_thin_flow, verify_thin_flow, ThinFlow};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub property: String,
    pub passed: bool,
    /// Concrete counterexamples; empty when the property holds.
    pub witnesses: Vec<String>,
}

impl CheckResult {
    fn new(property: &str, witnesses: Vec<String>) -> Self {
        CheckResult { property: property.into(), passed: witnesses.is_empty(), witnesses }
    }

    fn from_result(property: &str, r: Result<Vec<String>>) -> Self {
        match r {
            Ok(w) => Self::new(property, w),
            Err(e) => Self::new(property, vec![e.to_string()]),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    /// SHA-256 of the canonical instance JSON.
    pub instance_digest: String,
    pub command: String,
    pub outputs: Vec<String>,
    pub checks: Vec<CheckResult>,
    /// Free-form exact values worth reporting, such as the steady-state time.
    pub notes: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(net: &Network, command: &str) -> Self {
        RunReport {
            instance_digest: instance_digest(net),
            command: command.into(),
            outputs: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }
}

pub fn instance_digest(net: &Network) -> String {
    let hash = Sha256::digest(instance_json(net).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Checks a trajectory read from a file against the thin-flow conditions:
/// each claimed direction is paired with the thin flow computed at its
/// labeling and verified, and consecutive breakpoints must follow the
/// claimed directions up to the next event.
pub fn check_breakpoints(net: &Network, bps: &[Breakpoint]) -> Vec<String> {
    let mut out = Vec::new();
    for (k, b) in bps.iter().enumerate() {
        if let Err(e) = check_feasible(net, &b.labels) {
            out.push(format!("breakpoint {k} at theta {}: {e}", b.theta));
            continue;
        }
        let cfg = configuration_of(net, &b.labels);
        let flow = match solve_thin_flow(net, &cfg) {
            Ok(tf) => tf.flow,
            Err(e) => {
                out.push(format!("breakpoint {k} at theta {}: {e}", b.theta));
                continue;
            }
        };
        let cand = ThinFlow { flow, direction: b.direction.clone() };
        for v in verify_thin_flow(net, &cfg, &cand) {
            out.push(format!("breakpoint {k} at theta {}: {v}", b.theta));
        }
        if let Some(next) = bps.get(k + 1) {
            let dt = &next.theta - &b.theta;
            let expect: Labeling = b.labels.iter().zip(&b.direction).map(|(l, d)| l + &dt * d).collect();
            if expect != next.labels {
                out.push(format!("breakpoint {} at theta {}: labels do not follow the direction", k + 1, next.theta));
            }
            match next_event(net, &b.labels, &b.direction) {
                Ok(Some(alpha)) if alpha == dt => {}
                Ok(event) => out.push(format!(
                    "breakpoint {k} at theta {}: next event after {}, breakpoint after {dt}",
                    b.theta,
                    event.map_or("never".to_string(), |a| a.to_string())
                )),
                Err(e) => out.push(format!("breakpoint {k}: {e}")),
            }
        }
    }
    out
}

fn potential_checks(net: &Network, st: &SteadyState, traj: &Trajectory) -> Result<[Vec<String>; 3]> {
    let mut bounded = Vec::new();
    let mut monotone = Vec::new();
    let mut routes = Vec::new();
    for (k, p) in traj.phases.iter().enumerate() {
        let phi = st.potential(&p.labels);
        if phi > st.opt {
            bounded.push(format!("theta {}: potential {phi} above OPT {}", p.start, st.opt));
        }
        let slope = phase_slope(net, st, traj, k)?;
        let by_cfg = phase_slope_by_configuration(net, st, traj, k)?;
        if slope != by_cfg {
            routes.push(format!("phase {k}: difference quotient {slope}, configuration formula {by_cfg}"));
        }
        if slope.is_negative() {
            monotone.push(format!("phase {k} at theta {}: potential slope {slope}", p.start));
        }
        if phi < st.opt && slope.is_zero() {
            monotone.push(format!(
                "phase {k} at theta {}: potential {phi} below OPT {} with zero slope",
                p.start, st.opt
            ));
        }
    }
    Ok([bounded, monotone, routes])
}

/// Evenly spaced times strictly inside the integrated range.
pub fn audit_times(traj: &Trajectory, count: usize) -> Vec<Rational> {
    let span = traj.last_breakpoint() + Rational::from_integer(1.into());
    (1..=count)
        .map(|i| &span * Rational::new((i as i64).into(), ((count + 1) as i64).into()))
        .collect()
}

/// Integrates from `start` and runs every property of the suite.
pub fn run_checks(net: &Network, start: &[Rational], report: &mut RunReport) -> Result<Trajectory> {
    let st = steady_state(net)?;
    let traj = integrate(net, start, &StopPolicy::Steady { bound: None })?;
    let lambda = &st.lambda[..];
    let settles = traj.settles_at(lambda);
    report.note("phases", traj.phases.len().to_string());
    report.note("opt", rational::format(&st.opt));
    if let Some(t) = &settles {
        report.note("steady_time", rational::format(t));
    }

    report.checks.push(CheckResult::new("thin-flow", verify_trajectory(net, &traj)));

    match potential_checks(net, &st, &traj) {
        Ok([bounded, monotone, routes]) => {
            report.checks.push(CheckResult::new("potential-bounded", bounded));
            report.checks.push(CheckResult::new("potential-monotone", monotone));
            report.checks.push(CheckResult::new("potential-routes", routes));
        }
        Err(e) => report.checks.push(CheckResult::new("potential", vec![e.to_string()])),
    }

    report.checks.push(CheckResult::from_result(
        "steady-characterizations",
        audit_phases(net, &st, &traj).map(|_| vec![]),
    ));

    let uniq = audit_times(&traj, 5)
        .into_iter()
        .map(|t| match uniqueness_audit(net, &traj, &t) {
            Ok(true) => None,
            Ok(false) => Some(format!("re-integration from theta {t} departs from the trajectory")),
            Err(e) => Some(format!("theta {t}: {e}")),
        })
        .collect::<Vec<_>>();
    report.checks.push(CheckResult::new("uniqueness", uniq.into_iter().flatten().collect()));

    let proper = st.augmented.arc_count() - 1;
    let mode = if proper <= EXHAUSTIVE_ARC_BUDGET { EtaMode::Exhaustive } else { EtaMode::Observed(&traj) };
    let bound = convergence_bounds(net, &st, start, mode).map(|b| {
        report.note("t", rational::format(&b.t));
        report.note("eta_mode", if b.exhaustive { "exhaustive" } else { "observed" });
        match &settles {
            Some(s) if *s <= b.t => vec![],
            Some(s) => vec![format!("steady direction reached at {s}, after the bound {}", b.t)],
            None => vec!["trajectory never reaches the steady direction".to_string()],
        }
    });
    report.checks.push(CheckResult::from_result("convergence-bound", bound));

    let mut cco = Vec::new();
    if *net.inflow() <= net.min_cut_capacity() {
        if let Some(v) = (0..net.node_count()).find(|&v| !st.lambda[v].is_one()) {
            cco.push(format!("inflow within the minimum cut but lambda at {} is {}", net.node_name(v), st.lambda[v]));
        }
        if let Some(a) = (0..net.arc_count()).find(|&a| !st.sigma[a].is_zero()) {
            cco.push(format!("inflow within the minimum cut but sigma on {} is {}", net.arc(a).id, st.sigma[a]));
        }
    }
    report.checks.push(CheckResult::new("min-cut", cco));

    let flows = reconstruct_flow_over_time(net, &traj).map(|fot| verify_flow_over_time(net, &traj, &fot));
    report.checks.push(CheckResult::from_result("flow-reconstruction", flows));

    Ok(traj)
}

/// `run_checks` with a failing check in place of a solver error.
pub fn run_checks_reporting(net: &Network, start: &[Rational], report: &mut RunReport) -> Option<Trajectory> {
    match run_checks(net, start, report) {
        Ok(t) => Some(t),
        Err(Error::PhaseCapExceeded { cap, .. }) => {
            report.checks.push(CheckResult::new("integration", vec![format!("phase cap {cap} exceeded")]));
            None
        }
        Err(e) => {
            report.checks.push(CheckResult::new("integration", vec![e.to_string()]));
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{net_c, reference_instances};
    use crate::network::empty_network_labels;
    use crate::rational::int;

    #[test]
    fn reference_instances_pass() {
        for (name, net) in reference_instances() {
            let mut report = RunReport::new(&net, "check");
            run_checks(&net, &empty_network_labels(&net), &mut report).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.checks);
        }
    }

    #[test]
    fn corrupted_direction_has_a_witness() {
        let net = net_c();
        let bps = vec![
            Breakpoint { theta: int(0), labels: vec![int(0), int(1)], direction: vec![int(1), int(3)] },
        ];
        let w = check_breakpoints(&net, &bps);
        assert!(w.iter().any(|s| s.contains("TF-3")), "{w:?}");
        let good = vec![
            Breakpoint { theta: int(0), labels: vec![int(0), int(1)], direction: vec![int(1), int(2)] },
            Breakpoint { theta: int(2), labels: vec![int(2), int(5)], direction: vec![int(1), int(1)] },
        ];
        assert!(check_breakpoints(&net, &good).is_empty());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(instance_digest(&net_c()), instance_digest(&net_c()));
        assert_eq!(instance_digest(&net_c()).len(), 64);
    }
}
