use std::path::Path;

use nashflow_core::audit::{check_breakpoints, run_checks_reporting, CheckResult, RunReport};
use nashflow_core::flow_over_time::reconstruct_flow_over_time;
use nashflow_core::integrator::{integrate_with_cap, StopPolicy, Trajectory, DEFAULT_PHASE_CAP};
use nashflow_core::io::{
    flow_csv, load_instance, parse_configuration, parse_labeling, parse_trajectory_csv, steady_certificate,
    sweep_csv, thin_flow_certificate, trajectory_csv,
};
use nashflow_core::labeling::Labeling;
use nashflow_core::network::{empty_network_labels, Network};
use nashflow_core::perturb::{continuity_sweep, PerturbationSweep, SweepTarget};
use nashflow_core::rational::{self, Rational};
use nashflow_core::steady::{self, convergence_bounds, EtaMode};
use nashflow_core::thin_flow::{solve_thin_flow_with, verify_thin_flow, DEFAULT_NODE_BUDGET};
use nashflow_core::Error;

use crate::{EtaArg, TargetArg};

pub const OK: u8 = 0;
pub const CHECK_FAILED: u8 = 1;
pub const PARSE_ERROR: u8 = 2;
pub const SOLVER_ERROR: u8 = 3;
pub const PHASE_CAP: u8 = 4;
pub const BUDGET: u8 = 5;
pub const INVALID_PERTURBATION: u8 = 6;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) => PARSE_ERROR,
        Error::PhaseCapExceeded { .. } => PHASE_CAP,
        Error::BudgetExceeded(_) => BUDGET,
        Error::InvalidPerturbation(_) => INVALID_PERTURBATION,
        _ => SOLVER_ERROR,
    }
}

fn fail(e: Error) -> u8 {
    eprintln!("error: {e}");
    exit_code(&e)
}

/// Input problems that are not solver errors: unknown ids, malformed
/// arguments.
fn input_error(msg: String) -> u8 {
    eprintln!("error: {msg}");
    PARSE_ERROR
}

fn phase_cap() -> usize {
    std::env::var("NASHFLOW_PHASE_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_PHASE_CAP)
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn start_labels(net: &Network, start: &str) -> Result<Labeling, Error> {
    if start == "empty" {
        Ok(empty_network_labels(net))
    } else {
        parse_labeling(net, &std::fs::read_to_string(start)?)
    }
}

fn parse_stop(stop: &str) -> Result<StopPolicy, Error> {
    let bad = || Error::Parse(format!("invalid stop policy {stop:?}"));
    if stop == "steady" {
        return Ok(StopPolicy::Steady { bound: None });
    }
    match stop.split_once('=') {
        Some(("horizon", h)) => Ok(StopPolicy::Horizon(rational::parse(h)?)),
        Some(("phases", n)) => Ok(StopPolicy::Phases(n.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

pub fn solve_thinflow(instance: &Path, configuration: &Path) -> u8 {
    let run = || -> Result<u8, Error> {
        let net = load_instance(instance)?;
        let cfg = parse_configuration(&net, &std::fs::read_to_string(configuration)?)?;
        let solved = solve_thin_flow_with(&net, &cfg, &[], DEFAULT_NODE_BUDGET)?;
        let violations: Vec<String> =
            verify_thin_flow(&net, &cfg, &solved.thin_flow).iter().map(|v| v.to_string()).collect();
        let cert = thin_flow_certificate(&net, &cfg, &solved.thin_flow, &solved.partition, &violations);
        println!("{}", serde_json::to_string_pretty(&cert).expect("json"));
        Ok(if violations.is_empty() { OK } else { CHECK_FAILED })
    };
    run().unwrap_or_else(fail)
}

fn integration_report(net: &Network, traj: &Trajectory, report: &mut RunReport) {
    if let Ok(st) = steady::steady_state(net) {
        for p in &traj.phases {
            report.note(&format!("potential@{}", p.start), rational::format(&st.potential(&p.labels)));
        }
        report.note("opt", rational::format(&st.opt));
        match traj.settles_at(&st.lambda) {
            Some(t) => report.note("steady_time", rational::format(&t)),
            None => report.note("steady_time", "not reached"),
        }
    }
    report.note("phases", traj.phases.len().to_string());
    report.note("truncated", traj.truncated.to_string());
}

pub fn integrate(
    instance: &Path,
    start: &str,
    stop: &str,
    out: Option<&Path>,
    flow_out: Option<&Path>,
    report_path: Option<&Path>,
) -> u8 {
    let run = || -> Result<u8, Error> {
        let net = load_instance(instance)?;
        let stop = parse_stop(stop)?;
        let start = start_labels(&net, start)?;
        let mut report = RunReport::new(&net, "integrate");
        let (traj, code) = match integrate_with_cap(&net, &start, &stop, phase_cap()) {
            Ok(t) => (t, OK),
            Err(Error::PhaseCapExceeded { cap, partial }) => {
                eprintln!("error: phase cap of {cap} exceeded; partial trajectory written");
                (*partial, PHASE_CAP)
            }
            Err(e) => return Err(e),
        };
        write_or_print(out, &trajectory_csv(&net, &traj))?;
        if let Some(p) = out {
            report.outputs.push(p.display().to_string());
        }
        if let Some(p) = flow_out {
            let fot = reconstruct_flow_over_time(&net, &traj)?;
            std::fs::write(p, flow_csv(&net, &fot))?;
            report.outputs.push(p.display().to_string());
        }
        integration_report(&net, &traj, &mut report);
        if let Some(p) = report_path {
            std::fs::write(p, serde_json::to_string_pretty(&report).expect("json"))?;
        }
        Ok(code)
    };
    run().unwrap_or_else(fail)
}

pub fn steady_state(instance: &Path, eta: EtaArg, start: &str) -> u8 {
    let run = || -> Result<u8, Error> {
        let net = load_instance(instance)?;
        let start = start_labels(&net, start)?;
        let st = steady::steady_state(&net)?;
        let bounds = match eta {
            EtaArg::Exhaustive => convergence_bounds(&net, &st, &start, EtaMode::Exhaustive)?,
            EtaArg::Observed => {
                let traj = integrate_with_cap(&net, &start, &StopPolicy::Steady { bound: None }, phase_cap())?;
                convergence_bounds(&net, &st, &start, EtaMode::Observed(&traj))?
            }
        };
        println!("{}", serde_json::to_string_pretty(&steady_certificate(&st, &bounds)).expect("json"));
        Ok(OK)
    };
    run().unwrap_or_else(fail)
}

pub fn check(instance: &Path, start: &str, trajectory: Option<&Path>) -> u8 {
    let run = || -> Result<u8, Error> {
        let net = load_instance(instance)?;
        let start = start_labels(&net, start)?;
        let mut report = RunReport::new(&net, "check");
        if let Some(path) = trajectory {
            let bps = parse_trajectory_csv(&net, &std::fs::read_to_string(path)?)?;
            report.checks.push(CheckResult {
                property: "trajectory-input".into(),
                passed: false,
                witnesses: check_breakpoints(&net, &bps),
            });
            let last = report.checks.last_mut().expect("pushed");
            last.passed = last.witnesses.is_empty();
        }
        run_checks_reporting(&net, &start, &mut report);
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
        Ok(if report.passed() { OK } else { CHECK_FAILED })
    };
    run().unwrap_or_else(fail)
}

pub fn perturb(
    instance: &Path,
    target: TargetArg,
    arc: Option<&str>,
    node: Option<&str>,
    deltas: &[String],
    horizon: &str,
    out: Option<&Path>,
) -> u8 {
    let net = match load_instance(instance) {
        Ok(n) => n,
        Err(e) => return fail(e),
    };
    let deltas: Vec<Rational> = match deltas.iter().map(|d| rational::parse(d)).collect() {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    if deltas.is_empty() || deltas.iter().any(|d| *d <= Rational::from_integer(0.into())) {
        return input_error("deltas must be positive".into());
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return input_error("deltas must be strictly decreasing".into());
    }
    let horizon = match rational::parse(horizon) {
        Ok(h) => h,
        Err(e) => return fail(e),
    };
    let arc_index = |id: Option<&str>| -> Result<usize, String> {
        let id = id.ok_or("this target needs --arc")?;
        net.arc_index(id).ok_or_else(|| format!("unknown arc {id}"))
    };
    let target = match target {
        TargetArg::Transit => arc_index(arc).map(SweepTarget::Transit),
        TargetArg::Capacity => arc_index(arc).map(SweepTarget::Capacity),
        TargetArg::Inflow => Ok(SweepTarget::Inflow),
        TargetArg::Label => match node {
            None => Ok(SweepTarget::Label(net.sink())),
            Some(n) => net.node_index(n).map(SweepTarget::Label).ok_or_else(|| format!("unknown node {n}")),
        },
    };
    let target = match target {
        Ok(t) => t,
        Err(m) => return input_error(m),
    };
    let sweep = PerturbationSweep { base: net, target, deltas, horizon, start: None };
    let run = || -> Result<u8, Error> {
        let report = continuity_sweep(&sweep)?;
        write_or_print(out, &sweep_csv(&report))?;
        Ok(if report.passed() { OK } else { CHECK_FAILED })
    };
    run().unwrap_or_else(fail)
}
