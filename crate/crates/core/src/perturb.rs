//! Local networks, trajectory rescaling, uniqueness re-integration,
//! perturbation sweeps and capacity changes during the evolution.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::integrator::{
    integrate_from, integrate_with_cap, trajectory_distance, verify_trajectory, StopPolicy, Trajectory,
    DEFAULT_PHASE_CAP,
};
use crate::labeling::{arc_gap, configuration_of, validity_violation, Configuration, Labeling};
use crate::network::{empty_network_labels, ArcId, Network, NodeId};
use crate::rational::Rational;

/// The network restricted to the arcs active at `center`, with the arcs
/// resetting there made free.
#[derive(Clone, Debug)]
pub struct LocalNetwork {
    pub network: Network,
    /// Base arc index of every local arc.
    pub arc_map: Vec<ArcId>,
    pub center: Labeling,
}

pub fn local_network(net: &Network, center: &[Rational]) -> Result<LocalNetwork> {
    crate::labeling::check_feasible(net, center)?;
    let cfg = configuration_of(net, center);
    let network = net.restricted(&cfg.active, &cfg.resetting);
    let arc_map: Vec<ArcId> = (0..net.arc_count())
        .filter(|&a| cfg.active[a] && Some(a) != net.return_arc())
        .collect();
    for (i, &a) in arc_map.iter().enumerate() {
        if !network.is_free(i) && !arc_gap(net, center, a).is_zero() {
            return Err(Error::TheoremViolated(format!(
                "arc {} of the local network is not tight at the center",
                net.arc(a).id
            )));
        }
    }
    let local = LocalNetwork { network, arc_map, center: center.to_vec() };
    if let Some(why) = validity_violation(&local.network, &local.configuration())? {
        return Err(Error::TheoremViolated(format!("local configuration is not valid: {why}")));
    }
    Ok(local)
}

impl LocalNetwork {
    /// `(E_hat, E_inf)` on the local arc indices.
    pub fn configuration(&self) -> Configuration {
        let m = self.network.arc_count();
        Configuration {
            active: vec![true; m],
            resetting: (0..m).map(|a| self.network.is_free(a)).collect(),
        }
    }

    /// Arc ids of `E_hat` and `E_inf`.
    pub fn arc_sets(&self) -> (Vec<String>, Vec<String>) {
        let cfg = self.configuration();
        (cfg.active_ids(&self.network), cfg.resetting_ids(&self.network))
    }

    /// Membership in the feasible set of the local network.
    pub fn contains(&self, ell: &[Rational]) -> bool {
        crate::labeling::is_feasible_labeling(&self.network, ell)
    }

    /// `center + alpha * (ell - center)`
    pub fn scale_point(&self, ell: &[Rational], alpha: &Rational) -> Labeling {
        ell.iter()
            .zip(&self.center)
            .map(|(l, c)| c + alpha * (l - c))
            .collect()
    }

    /// Equilibrium trajectory of the local network up to a horizon.
    pub fn integrate(&self, start: &[Rational], horizon: &Rational) -> Result<Trajectory> {
        if !self.contains(start) {
            return Err(Error::NotInLocalFeasibleSet(format!("{start:?}")));
        }
        integrate_with_cap(&self.network, start, &StopPolicy::Horizon(horizon.clone()), DEFAULT_PHASE_CAP)
    }
}

/// `theta -> alpha * traj(theta / alpha) + (1 - alpha) * center`, checked
/// to be an equilibrium trajectory of the local network.
pub fn scale_trajectory(local: &LocalNetwork, traj: &Trajectory, alpha: &Rational) -> Result<Trajectory> {
    if !alpha.is_positive() {
        return Err(Error::InvalidInput(format!("scaling factor {alpha} is not positive")));
    }
    let start = &traj.phases[0].labels;
    if !local.contains(start) {
        return Err(Error::NotInLocalFeasibleSet(format!("{start:?}")));
    }
    let mut out = traj.clone();
    for p in &mut out.phases {
        p.start = alpha * &p.start;
        p.labels = local.scale_point(&p.labels, alpha);
    }
    if !local.contains(&out.phases[0].labels) {
        return Err(Error::NotInLocalFeasibleSet(format!("{:?}", out.phases[0].labels)));
    }
    let issues = verify_trajectory(&local.network, &out);
    if let Some(first) = issues.first() {
        return Err(Error::TheoremViolated(format!("rescaled trajectory: {first}")));
    }
    Ok(out)
}

/// Distance between the tail of `traj` after `theta0` and the trajectory
/// re-integrated from `traj(theta0)`, over the remaining phases plus one
/// time unit. The integration uses `stop` for both.
pub fn uniqueness_gap(net: &Network, traj: &Trajectory, theta0: &Rational, stop: &StopPolicy) -> Result<Rational> {
    let ell = traj.evaluate(theta0);
    let tail_stop = match stop {
        StopPolicy::Horizon(h) => StopPolicy::Horizon(h - theta0),
        StopPolicy::Phases(_) => StopPolicy::Horizon(traj.last_breakpoint() - theta0),
        s => s.clone(),
    };
    let again = integrate_with_cap(net, &ell, &tail_stop, DEFAULT_PHASE_CAP)?;
    let shifted = traj.shifted(theta0);
    let mut horizon = traj.last_breakpoint() - theta0;
    if again.last_breakpoint() > &horizon {
        horizon = again.last_breakpoint().clone();
    }
    if horizon.is_negative() {
        horizon = Rational::zero();
    }
    horizon += Rational::one();
    if let StopPolicy::Horizon(h) = &tail_stop {
        if *h < horizon {
            horizon = h.clone();
        }
    }
    Ok(trajectory_distance(&shifted, &again, &horizon))
}

/// True if re-integration from `traj(theta0)` reproduces the tail exactly.
pub fn uniqueness_audit(net: &Network, traj: &Trajectory, theta0: &Rational) -> Result<bool> {
    let stop = if traj.truncated {
        StopPolicy::Horizon(traj.last_breakpoint().clone())
    } else {
        StopPolicy::Steady { bound: None }
    };
    Ok(uniqueness_gap(net, traj, theta0, &stop)?.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    Transit(ArcId),
    Capacity(ArcId),
    Inflow,
    /// Initial label of one node; the base start is given explicitly.
    Label(NodeId),
}

#[derive(Clone, Debug)]
pub struct PerturbationSweep {
    pub base: Network,
    pub target: SweepTarget,
    /// Strictly decreasing positive magnitudes.
    pub deltas: Vec<Rational>,
    pub horizon: Rational,
    /// Start labeling; the empty-network labeling if `None`.
    pub start: Option<Labeling>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub delta: Rational,
    pub distance: Rational,
    pub horizon: Rational,
    pub phases_base: usize,
    pub phases_perturbed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    /// One row per delta in the given order, then the row for zero.
    pub rows: Vec<SweepRow>,
    pub nonincreasing: bool,
    pub zero_at_zero: bool,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.nonincreasing && self.zero_at_zero
    }
}

impl PerturbationSweep {
    fn validate(&self) -> Result<()> {
        if self.deltas.is_empty() {
            return Err(Error::InvalidInput("no perturbation magnitudes".into()));
        }
        if self.deltas.iter().any(|d| !d.is_positive()) {
            return Err(Error::InvalidInput("perturbation magnitudes must be positive".into()));
        }
        if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidInput("perturbation magnitudes must be strictly decreasing".into()));
        }
        if self.horizon.is_negative() {
            return Err(Error::InvalidInput("negative horizon".into()));
        }
        match self.target {
            SweepTarget::Transit(a) | SweepTarget::Capacity(a) if a >= self.base.arc_count() => {
                Err(Error::UnknownArc(format!("#{a}")))
            }
            SweepTarget::Label(v) if v >= self.base.node_count() => Err(Error::UnknownNode(format!("#{v}"))),
            _ => Ok(()),
        }
    }

    /// Perturbed instance and start labeling for magnitude `delta`.
    pub fn perturbed(&self, delta: &Rational) -> Result<(Network, Labeling)> {
        let invalid = |e: Error| Error::InvalidPerturbation(e.to_string());
        let base_start = self.start.clone().unwrap_or_else(|| empty_network_labels(&self.base));
        let net = match self.target {
            SweepTarget::Transit(a) => {
                let t = &self.base.arc(a).transit + delta;
                self.base.with_transit(a, t).map_err(invalid)?
            }
            SweepTarget::Capacity(a) => {
                let c = &self.base.arc(a).capacity + delta;
                self.base.with_capacity(a, c).map_err(invalid)?
            }
            SweepTarget::Inflow => self.base.with_inflow(self.base.inflow() + delta).map_err(invalid)?,
            SweepTarget::Label(_) => self.base.clone(),
        };
        let start = match (&self.target, &self.start) {
            (SweepTarget::Label(v), _) => {
                let mut s = base_start;
                s[*v] += delta;
                s
            }
            (_, Some(s)) => s.clone(),
            (_, None) => empty_network_labels(&net),
        };
        crate::labeling::check_feasible(&net, &start).map_err(invalid)?;
        Ok((net, start))
    }
}

pub fn continuity_sweep(sweep: &PerturbationSweep) -> Result<SweepReport> {
    sweep.validate()?;
    let stop = StopPolicy::Horizon(sweep.horizon.clone());
    let (base_net, base_start) = sweep.perturbed(&Rational::zero())?;
    let base = integrate_with_cap(&base_net, &base_start, &stop, DEFAULT_PHASE_CAP)?;
    let mut rows = Vec::new();
    for delta in sweep.deltas.iter().chain(std::iter::once(&Rational::zero())) {
        let (net, start) = sweep.perturbed(delta)?;
        let traj = integrate_with_cap(&net, &start, &stop, DEFAULT_PHASE_CAP)?;
        rows.push(SweepRow {
            delta: delta.clone(),
            distance: trajectory_distance(&base, &traj, &sweep.horizon),
            horizon: sweep.horizon.clone(),
            phases_base: base.phases.len(),
            phases_perturbed: traj.phases.len(),
        });
    }
    let nonincreasing = rows.windows(2).all(|w| w[1].distance <= w[0].distance);
    let zero_at_zero = rows.last().is_some_and(|r| r.distance.is_zero());
    Ok(SweepReport { rows, nonincreasing, zero_at_zero })
}

/// First departure time at which `l_v + q_e = max(l_v, l_w - tau_e)` equals
/// `xi`. The map is strictly increasing because `l'_v > 0`.
pub fn switch_time(net: &Network, traj: &Trajectory, a: ArcId, xi: &Rational) -> Result<Rational> {
    let arc = net.arc(a);
    let g = |ell: &[Rational]| {
        let late = &ell[arc.head] - &arc.transit;
        if late > ell[arc.tail] {
            late
        } else {
            ell[arc.tail].clone()
        }
    };
    let unreachable = || Error::SwitchTimeUnreachable(format!("{xi} on arc {}", arc.id));
    for (k, p) in traj.phases.iter().enumerate() {
        let end = traj.phase_end(k);
        let slopes = [
            (p.labels[arc.tail].clone(), p.direction[arc.tail].clone()),
            (&p.labels[arc.head] - &arc.transit, p.direction[arc.head].clone()),
        ];
        let mut found: Option<Rational> = None;
        for (base, slope) in slopes {
            if !slope.is_positive() {
                continue;
            }
            let theta = &p.start + (xi - base) / slope;
            let inside = theta >= p.start && end.map_or(true, |e| theta <= *e);
            if inside && g(&traj.evaluate(&theta)) == *xi && found.as_ref().map_or(true, |f| theta < *f) {
                found = Some(theta);
            }
        }
        if let Some(theta) = found {
            return Ok(theta);
        }
    }
    Err(unreachable())
}

/// Trajectory when the capacity of arc `a` changes to `capacity` for all
/// particles leaving its queue from time `xi` on: the original trajectory
/// up to the switch time, then the modified instance from the labels there.
pub fn capacity_change_during_evolution(
    net: &Network,
    traj: &Trajectory,
    a: ArcId,
    xi: &Rational,
    capacity: &Rational,
) -> Result<(Network, Trajectory)> {
    if !capacity.is_positive() {
        return Err(Error::InvalidInput(format!("capacity {capacity} is not positive")));
    }
    let theta = switch_time(net, traj, a, xi)?;
    let modified = net.with_capacity(a, capacity.clone())?;
    let ell = traj.evaluate(&theta);
    let tail = integrate_from(
        &modified,
        theta.clone(),
        &ell,
        &StopPolicy::Steady { bound: None },
        DEFAULT_PHASE_CAP,
    )?;
    let mut phases: Vec<_> = traj.phases.iter().filter(|p| p.start < theta).cloned().collect();
    phases.extend(tail.phases);
    Ok((modified, Trajectory { phases, truncated: tail.truncated }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{net_a, net_b, net_c};
    use crate::integrator::integrate;
    use crate::rational::{int, rat};

    fn l(xs: &[i64]) -> Labeling {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn steady() -> StopPolicy {
        StopPolicy::Steady { bound: None }
    }

    #[test]
    fn local_networks() {
        let c = net_c();
        let local = local_network(&c, &l(&[2, 5])).unwrap();
        assert_eq!(local.arc_sets(), (vec!["e1".into(), "e2".into()], vec!["e1".into()]));
        let local = local_network(&c, &l(&[0, 1])).unwrap();
        assert_eq!(local.arc_sets(), (vec!["e1".into()], vec![]));
        let local = local_network(&net_b(), &l(&[0, 1])).unwrap();
        assert_eq!(local.arc_sets(), (vec!["e1".into()], vec![]));
        assert!(matches!(local_network(&c, &l(&[0, 0])), Err(Error::InfeasibleLabeling(_))));
    }

    #[test]
    fn scaling() {
        let local = local_network(&net_c(), &l(&[2, 5])).unwrap();
        let h = int(6);
        let traj = local.integrate(&[int(2), rat(11, 2)], &h).unwrap();
        assert_eq!(scale_trajectory(&local, &traj, &int(1)).unwrap(), traj);
        let scaled = scale_trajectory(&local, &traj, &int(2)).unwrap();
        assert_eq!(scaled.phases[0].labels, l(&[2, 6]));
        let direct = local.integrate(&l(&[2, 6]), &(int(2) * &h)).unwrap();
        assert_eq!(scaled, direct);
        for alpha in [rat(1, 2), int(3)] {
            assert!(local.contains(&local.scale_point(&[int(2), rat(11, 2)], &alpha)));
        }
        assert!(matches!(
            scale_trajectory(&local, &traj, &int(0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn uniqueness() {
        let c = net_c();
        let traj = integrate(&c, &l(&[0, 1]), &steady()).unwrap();
        assert!(uniqueness_audit(&c, &traj, &int(1)).unwrap());
        assert!(uniqueness_audit(&c, &traj, &int(2)).unwrap());
        let a = net_a();
        let traj = integrate(&a, &l(&[0, 1]), &steady()).unwrap();
        assert!(uniqueness_audit(&a, &traj, &int(5)).unwrap());
    }

    #[test]
    fn transit_sweep() {
        let sweep = PerturbationSweep {
            base: net_c(),
            target: SweepTarget::Transit(1),
            deltas: vec![rat(1, 2), rat(1, 4), rat(1, 8)],
            horizon: int(4),
            start: None,
        };
        let report = continuity_sweep(&sweep).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows.windows(2).all(|w| w[1].distance < w[0].distance));
        assert!(report.passed());
    }

    #[test]
    fn inflow_sweep() {
        let sweep = PerturbationSweep {
            base: net_c(),
            target: SweepTarget::Inflow,
            deltas: vec![rat(1, 10), rat(1, 100)],
            horizon: int(4),
            start: None,
        };
        let report = continuity_sweep(&sweep).unwrap();
        assert!(report.rows[1].distance < report.rows[0].distance);
        assert!(report.passed());
    }

    #[test]
    fn sweep_validation() {
        let mut sweep = PerturbationSweep {
            base: net_c(),
            target: SweepTarget::Inflow,
            deltas: vec![rat(1, 2), int(0)],
            horizon: int(4),
            start: None,
        };
        assert!(matches!(continuity_sweep(&sweep), Err(Error::InvalidInput(_))));
        sweep.deltas = vec![rat(1, 4), rat(1, 2)];
        assert!(matches!(continuity_sweep(&sweep), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn capacity_change() {
        let a = net_a();
        let traj = integrate(&a, &l(&[0, 1]), &steady()).unwrap();
        assert_eq!(switch_time(&a, &traj, 0, &int(3)).unwrap(), rat(3, 2));
        let (_, changed) = capacity_change_during_evolution(&a, &traj, 0, &int(3), &int(2)).unwrap();
        assert_eq!(changed.phases[1].start, rat(3, 2));
        assert_eq!(changed.phases[1].labels, vec![rat(3, 2), int(4)]);
        assert_eq!(changed.terminal_direction(), &l(&[1, 1])[..]);

        let (_, same) = capacity_change_during_evolution(&a, &traj, 0, &int(3), &int(1)).unwrap();
        assert_eq!(trajectory_distance(&same, &traj, &int(10)), int(0));

        let b = net_b();
        let traj = integrate(&b, &l(&[0, 1]), &steady()).unwrap();
        assert_eq!(switch_time(&b, &traj, 0, &rat(1, 3)).unwrap(), rat(1, 3));
        assert!(matches!(switch_time(&b, &traj, 0, &int(-1)), Err(Error::SwitchTimeUnreachable(_))));

        // e1 of Net-C queues from the start: l_t - tau = 2 theta.
        let c = net_c();
        let traj = integrate(&c, &l(&[0, 1]), &steady()).unwrap();
        assert_eq!(switch_time(&c, &traj, 0, &rat(1, 3)).unwrap(), rat(1, 6));
    }
}
