//! Event-driven integration of the thin-flow vector field.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::labeling::{arc_gap, check_feasible, configuration_of, Configuration, Labeling};
use crate::network::Network;
use crate::rational::Rational;
use crate::steady;
use crate::thin_flow::{solve_thin_flow_with, verify_thin_flow, OrderedPartition, DEFAULT_NODE_BUDGET};

pub const DEFAULT_PHASE_CAP: usize = 10_000;

/// One affine piece of a trajectory, valid from `start` until the next
/// phase's start (or forever for the last phase).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase {
    pub start: Rational,
    pub labels: Labeling,
    pub direction: Vec<Rational>,
    pub flow: Vec<Rational>,
    pub config: Configuration,
    pub partition: OrderedPartition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub phases: Vec<Phase>,
    /// Set when integration stopped before the last phase was known to
    /// last forever.
    pub truncated: bool,
}

impl Trajectory {
    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Labeling)> {
        self.phases.iter().map(|p| (&p.start, &p.labels))
    }

    pub fn terminal_direction(&self) -> &[Rational] {
        &self.phases.last().expect("trajectory has a phase").direction
    }

    pub fn last_breakpoint(&self) -> &Rational {
        &self.phases.last().expect("trajectory has a phase").start
    }

    /// End of phase `k`, `None` for the last phase.
    pub fn phase_end(&self, k: usize) -> Option<&Rational> {
        self.phases.get(k + 1).map(|p| &p.start)
    }

    /// Index of the phase containing `theta`.
    pub fn phase_at(&self, theta: &Rational) -> usize {
        self.phases
            .iter()
            .rposition(|p| p.start <= *theta)
            .unwrap_or(0)
    }

    /// `l(theta)`, extending the last phase indefinitely.
    pub fn evaluate(&self, theta: &Rational) -> Labeling {
        let p = &self.phases[self.phase_at(theta)];
        let dt = theta - &p.start;
        p.labels
            .iter()
            .zip(&p.direction)
            .map(|(l, d)| l + &dt * d)
            .collect()
    }

    /// First time from which the direction stays equal to `target`, if the
    /// final phase has that direction.
    pub fn settles_at(&self, target: &[Rational]) -> Option<Rational> {
        let mut k = self.phases.len();
        while k > 0 && self.phases[k - 1].direction == target {
            k -= 1;
        }
        (k < self.phases.len()).then(|| self.phases[k].start.clone())
    }

    /// Time shift of the whole trajectory by `-offset`.
    pub fn shifted(&self, offset: &Rational) -> Trajectory {
        let mut t = self.clone();
        for p in &mut t.phases {
            p.start -= offset;
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopPolicy {
    /// Until the direction is final; with a bound, also stop at the first
    /// breakpoint at or beyond the bound whose direction is the steady one.
    Steady { bound: Option<Rational> },
    /// Until the next breakpoint would lie beyond the horizon.
    Horizon(Rational),
    /// After a fixed number of phases.
    Phases(usize),
}

/// Direction, flow and configuration of the phase starting at `ell`.
pub fn phase_direction(net: &Network, ell: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>, Configuration)> {
    let (d, x, cfg, _) = phase_direction_with(net, ell, None)?;
    Ok((d, x, cfg))
}

fn phase_direction_with(
    net: &Network,
    ell: &[Rational],
    hint: Option<&OrderedPartition>,
) -> Result<(Vec<Rational>, Vec<Rational>, Configuration, OrderedPartition)> {
    check_feasible(net, ell)?;
    let cfg = configuration_of(net, ell);
    let solved = solve_thin_flow_with(net, &cfg, hint.map(std::slice::from_ref).unwrap_or(&[]), DEFAULT_NODE_BUDGET)?;
    Ok((
        solved.thin_flow.direction,
        solved.thin_flow.flow,
        cfg,
        solved.partition,
    ))
}

/// Length of the phase starting at `ell` with direction `d`: the first time
/// a slack or queue of a non-free arc reaches zero. `None` if none ever
/// does.
pub fn next_event(net: &Network, ell: &[Rational], d: &[Rational]) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for a in 0..net.arc_count() {
        if net.is_free(a) {
            continue;
        }
        let arc = net.arc(a);
        let gap = arc_gap(net, ell, a);
        let rate = &d[arc.head] - &d[arc.tail];
        let hits_zero = (gap.is_negative() && rate.is_positive())
            || (gap.is_positive() && rate.is_negative());
        if !hits_zero {
            continue;
        }
        let alpha = -(&gap / &rate);
        if !alpha.is_positive() {
            return Err(Error::NonPositiveEvent(alpha.to_string()));
        }
        if best.as_ref().map_or(true, |b| alpha < *b) {
            best = Some(alpha);
        }
    }
    Ok(best)
}

pub fn integrate(net: &Network, start: &[Rational], stop: &StopPolicy) -> Result<Trajectory> {
    integrate_with_cap(net, start, stop, DEFAULT_PHASE_CAP)
}

pub fn integrate_with_cap(
    net: &Network,
    start: &[Rational],
    stop: &StopPolicy,
    cap: usize,
) -> Result<Trajectory> {
    integrate_from(net, Rational::zero(), start, stop, cap)
}

/// Integration with the first phase starting at time `theta0`.
pub fn integrate_from(
    net: &Network,
    theta0: Rational,
    start: &[Rational],
    stop: &StopPolicy,
    cap: usize,
) -> Result<Trajectory> {
    check_feasible(net, start)?;
    let steady_dir = match stop {
        StopPolicy::Steady { .. } => Some(steady::steady_direction(net)?),
        _ => None,
    };
    let mut traj = Trajectory { phases: Vec::new(), truncated: false };
    let mut theta = theta0;
    let mut ell: Labeling = start.to_vec();
    let mut hint: Option<OrderedPartition> = None;
    loop {
        if traj.phases.len() == cap {
            traj.truncated = true;
            return Err(Error::PhaseCapExceeded { cap, partial: Box::new(traj) });
        }
        let (d, x, cfg, pi) = phase_direction_with(net, &ell, hint.as_ref())?;
        let alpha = next_event(net, &ell, &d)?;
        traj.phases.push(Phase {
            start: theta.clone(),
            labels: ell.clone(),
            direction: d.clone(),
            flow: x,
            config: cfg,
            partition: pi.clone(),
        });
        hint = Some(pi);

        let Some(alpha) = alpha else {
            if let Some(lambda) = &steady_dir {
                if d != *lambda {
                    return Err(Error::TheoremViolated(format!(
                        "final direction {d:?} differs from the steady direction {lambda:?}"
                    )));
                }
            }
            return Ok(traj);
        };
        match stop {
            StopPolicy::Steady { bound: Some(b) } => {
                if theta >= *b && steady_dir.as_deref() == Some(&d[..]) {
                    traj.truncated = true;
                    return Ok(traj);
                }
            }
            StopPolicy::Steady { bound: None } => {}
            StopPolicy::Horizon(h) => {
                if &theta + &alpha > *h {
                    traj.truncated = true;
                    return Ok(traj);
                }
            }
            StopPolicy::Phases(n) => {
                if traj.phases.len() >= *n {
                    traj.truncated = true;
                    return Ok(traj);
                }
            }
        }
        for (l, dv) in ell.iter_mut().zip(&d) {
            *l += &alpha * dv;
        }
        theta += alpha;
    }
}

/// `max_v sup_{[0,H]} |l1_v - l2_v|`, attained at a breakpoint of either
/// trajectory or at an end of the window.
pub fn trajectory_distance(t1: &Trajectory, t2: &Trajectory, horizon: &Rational) -> Rational {
    let mut points = vec![Rational::zero(), horizon.clone()];
    for p in t1.phases.iter().chain(&t2.phases) {
        if !p.start.is_negative() && p.start <= *horizon {
            points.push(p.start.clone());
        }
    }
    let mut best = Rational::zero();
    for theta in points {
        let a = t1.evaluate(&theta);
        let b = t2.evaluate(&theta);
        for (x, y) in a.iter().zip(&b) {
            let diff = (x - y).abs();
            if diff > best {
                best = diff;
            }
        }
    }
    best
}

/// Re-derives every phase of a trajectory and lists disagreements.
pub fn verify_trajectory(net: &Network, traj: &Trajectory) -> Vec<String> {
    let mut issues = Vec::new();
    let bound = net.derivative_bound();
    for (k, p) in traj.phases.iter().enumerate() {
        if let Err(e) = check_feasible(net, &p.labels) {
            issues.push(format!("phase {k} at {}: {e}", p.start));
            continue;
        }
        let cfg = configuration_of(net, &p.labels);
        if cfg != p.config {
            issues.push(format!("phase {k}: stored configuration differs"));
        }
        let tf = crate::thin_flow::ThinFlow { flow: p.flow.clone(), direction: p.direction.clone() };
        for v in verify_thin_flow(net, &cfg, &tf) {
            issues.push(format!("phase {k} at {}: {v}", p.start));
        }
        if p.direction.iter().any(|d| d.is_negative() || *d > bound) {
            issues.push(format!("phase {k}: direction outside [0, {bound}]"));
        }
        match (next_event(net, &p.labels, &p.direction), traj.phase_end(k)) {
            (Ok(Some(alpha)), Some(end)) => {
                if &p.start + &alpha != *end {
                    issues.push(format!("phase {k}: event at {}, phase ends at {end}", &p.start + &alpha));
                }
                let next = &traj.phases[k + 1].labels;
                let expect: Labeling = p.labels.iter().zip(&p.direction).map(|(l, d)| l + &alpha * d).collect();
                if *next != expect {
                    issues.push(format!("phase {k}: breakpoint labels are not continuous"));
                }
            }
            (Ok(None), Some(_)) => issues.push(format!("phase {k}: unbounded phase followed by another")),
            (Ok(_), None) if traj.truncated => {}
            (Ok(Some(alpha)), None) => issues.push(format!(
                "last phase ends at {} but the trajectory is not marked truncated",
                &p.start + alpha
            )),
            (Ok(None), None) => {}
            (Err(e), _) => issues.push(format!("phase {k}: {e}")),
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{net_a, net_b, net_c};
    use crate::rational::{int, rat};

    fn l(xs: &[i64]) -> Labeling {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn steady() -> StopPolicy {
        StopPolicy::Steady { bound: None }
    }

    #[test]
    fn phase_directions() {
        assert_eq!(phase_direction(&net_a(), &l(&[0, 1])).unwrap().0, l(&[1, 2]));
        let c = net_c();
        let (d, _, cfg) = phase_direction(&c, &l(&[0, 1])).unwrap();
        assert_eq!(d, l(&[1, 2]));
        assert_eq!(cfg, Configuration::from_ids(&c, &["e1"], &[]).unwrap());
        let (d, _, cfg) = phase_direction(&c, &l(&[2, 5])).unwrap();
        assert_eq!(d, l(&[1, 1]));
        assert_eq!(cfg, Configuration::from_ids(&c, &["e1", "e2"], &["e1"]).unwrap());
        assert!(matches!(phase_direction(&net_a(), &l(&[0, 0])), Err(Error::InfeasibleLabeling(_))));
    }

    #[test]
    fn events() {
        let c = net_c();
        assert_eq!(next_event(&c, &l(&[0, 1]), &l(&[1, 2])).unwrap(), Some(int(2)));
        assert_eq!(next_event(&net_a(), &l(&[0, 1]), &l(&[1, 2])).unwrap(), None);
        assert_eq!(next_event(&c, &l(&[2, 5]), &l(&[1, 1])).unwrap(), None);
    }

    #[test]
    fn reference_trajectories() {
        let t = integrate(&net_c(), &l(&[0, 1]), &steady()).unwrap();
        let bps: Vec<_> = t.breakpoints().map(|(a, b)| (a.clone(), b.clone())).collect();
        assert_eq!(bps, vec![(int(0), l(&[0, 1])), (int(2), l(&[2, 5]))]);
        assert_eq!(t.phases[0].direction, l(&[1, 2]));
        assert_eq!(t.terminal_direction(), &l(&[1, 1])[..]);
        assert!(!t.truncated);
        assert_eq!(t.evaluate(&int(1)), l(&[1, 3]));
        assert_eq!(t.evaluate(&int(3)), l(&[3, 6]));
        assert_eq!(t.evaluate(&int(0)), l(&[0, 1]));

        let t = integrate(&net_b(), &l(&[0, 1]), &steady()).unwrap();
        assert_eq!(t.phases.len(), 1);
        assert_eq!(t.terminal_direction(), &l(&[1, 1])[..]);

        let t = integrate(&net_a(), &l(&[0, 1]), &steady()).unwrap();
        assert_eq!(t.phases.len(), 1);
        assert_eq!(t.terminal_direction(), &l(&[1, 2])[..]);
    }

    #[test]
    fn stop_policies() {
        let c = net_c();
        let t = integrate(&c, &l(&[0, 1]), &StopPolicy::Horizon(int(1))).unwrap();
        assert_eq!(t.phases.len(), 1);
        assert!(t.truncated);
        let t = integrate(&c, &l(&[0, 1]), &StopPolicy::Phases(1)).unwrap();
        assert_eq!(t.phases.len(), 1);
        assert!(t.truncated);
        match integrate_with_cap(&c, &l(&[0, 1]), &steady(), 1) {
            Err(Error::PhaseCapExceeded { cap: 1, partial }) => assert_eq!(partial.phases.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn distances() {
        let a = net_a();
        let t1 = integrate(&a, &l(&[0, 1]), &steady()).unwrap();
        let t2 = integrate(&a, &[int(0), rat(11, 10)], &steady()).unwrap();
        assert_eq!(trajectory_distance(&t1, &t1, &int(5)), int(0));
        assert_eq!(trajectory_distance(&t1, &t2, &int(0)), rat(1, 10));
    }

    #[test]
    fn self_verification() {
        let t = integrate(&net_c(), &l(&[0, 1]), &steady()).unwrap();
        assert!(verify_trajectory(&net_c(), &t).is_empty());
    }
}
