//! Steady-state direction, the min-cost circulation pair (P)/(D), the
//! potential function and the convergence-time bounds.
//!
//! Everything here works on the network augmented by the free return arc
//! `t -> s`; node indices coincide with the original network, arc indices
//! coincide for all original arcs and the return arc comes last.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, McfArc};
use crate::integrator::{next_event, Trajectory};
use crate::labeling::{
    configuration_of, configuration_toward, is_valid_configuration, queue_and_slack_of, Configuration,
};
use crate::network::{ArcId, Network};
use crate::rational::{pos_part, Rational};
use crate::thin_flow::{solve_thin_flow_with, OrderedPartition, ThinFlow, DEFAULT_NODE_BUDGET};

/// Largest arc count for which the exhaustive slope bound is attempted.
pub const EXHAUSTIVE_ARC_BUDGET: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcClass {
    Free,
    /// `lambda_w > lambda_v`
    Greater,
    /// `lambda_w < lambda_v`
    Less,
    /// `lambda_w = lambda_v`
    Equal,
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    pub augmented: Network,
    pub lambda: Vec<Rational>,
    pub sigma: Vec<Rational>,
    pub class: Vec<ArcClass>,
    pub nu_hat: Vec<Rational>,
    pub tau_hat: Vec<Rational>,
    pub primal: Vec<Rational>,
    pub dual_d: Vec<Rational>,
    pub dual_p: Vec<Rational>,
    pub opt: Rational,
}

fn full_configuration(aug: &Network) -> Configuration {
    Configuration {
        active: vec![true; aug.arc_count()],
        resetting: (0..aug.arc_count()).map(|a| aug.is_free(a)).collect(),
    }
}

/// Thin flow direction for `(E, E_inf)` after adding the return arc.
pub fn steady_direction(net: &Network) -> Result<Vec<Rational>> {
    let aug = net.augment_with_return_arc()?;
    let cfg = full_configuration(&aug);
    Ok(solve_thin_flow_with(&aug, &cfg, &[], DEFAULT_NODE_BUDGET)?
        .thin_flow
        .direction)
}

pub fn steady_state(net: &Network) -> Result<SteadyState> {
    let aug = net.augment_with_return_arc()?;
    let lambda = steady_direction(net)?;
    if let Some(v) = (0..aug.node_count()).find(|&v| !lambda[v].is_positive()) {
        return Err(Error::TheoremViolated(format!(
            "steady direction at {} is not positive",
            aug.node_name(v)
        )));
    }
    let m = aug.arc_count();
    let mut sigma = Vec::with_capacity(m);
    let mut class = Vec::with_capacity(m);
    let mut nu_hat = Vec::with_capacity(m);
    let mut tau_hat = Vec::with_capacity(m);
    for a in 0..m {
        let arc = aug.arc(a);
        let diff = &lambda[arc.head] - &lambda[arc.tail];
        let c = if aug.is_free(a) {
            ArcClass::Free
        } else if diff.is_positive() {
            ArcClass::Greater
        } else if diff.is_negative() {
            ArcClass::Less
        } else {
            ArcClass::Equal
        };
        sigma.push(if c == ArcClass::Free { diff } else { pos_part(&diff) });
        class.push(c);
        nu_hat.push(&arc.capacity * &lambda[arc.head]);
        tau_hat.push(&arc.transit / &lambda[arc.head]);
    }

    let arcs: Vec<McfArc> = (0..m)
        .map(|a| {
            let (lower, upper) = match class[a] {
                ArcClass::Free | ArcClass::Greater => (nu_hat[a].clone(), nu_hat[a].clone()),
                ArcClass::Less => (Rational::zero(), Rational::zero()),
                ArcClass::Equal => (Rational::zero(), nu_hat[a].clone()),
            };
            McfArc {
                tail: aug.arc(a).tail,
                head: aug.arc(a).head,
                lower,
                upper,
                cost: tau_hat[a].clone(),
            }
        })
        .collect();
    let zero_supply = vec![Rational::zero(); aug.node_count()];
    let sol = graph::min_cost_flow(aug.node_count(), &arcs, &zero_supply).ok_or(Error::PrimalInfeasible)?;
    let d = sol.potential;
    let p: Vec<Rational> = (0..m)
        .map(|a| {
            let arc = aug.arc(a);
            let slack = &d[arc.head] - &d[arc.tail] - &tau_hat[a];
            match class[a] {
                ArcClass::Free | ArcClass::Greater => slack,
                ArcClass::Equal => pos_part(&slack),
                ArcClass::Less => Rational::zero(),
            }
        })
        .collect();
    let dual_obj = -(0..m).fold(Rational::zero(), |acc, a| acc + &nu_hat[a] * &p[a]);
    if dual_obj != sol.cost {
        return Err(Error::DualityGap {
            primal: sol.cost.to_string(),
            dual: dual_obj.to_string(),
        });
    }
    let st = SteadyState {
        augmented: aug,
        lambda,
        sigma,
        class,
        nu_hat,
        tau_hat,
        primal: sol.flow,
        dual_d: d,
        dual_p: p,
        opt: sol.cost,
    };
    if let Some(why) = st.dual_violation(&st.dual_d, &st.dual_p) {
        return Err(Error::FeasibilityViolation(why));
    }
    Ok(st)
}

impl SteadyState {
    fn in_fixed(&self, a: ArcId) -> bool {
        matches!(self.class[a], ArcClass::Free | ArcClass::Greater)
    }

    /// First violated constraint of (D), if any.
    pub fn dual_violation(&self, d: &[Rational], p: &[Rational]) -> Option<String> {
        let aug = &self.augmented;
        for a in 0..aug.arc_count() {
            let arc = aug.arc(a);
            if self.class[a] != ArcClass::Less {
                let lhs = &d[arc.head] - &d[arc.tail] - &p[a];
                if lhs > self.tau_hat[a] {
                    return Some(format!(
                        "arc {}: d_w - d_v - p = {lhs} exceeds {}",
                        arc.id, self.tau_hat[a]
                    ));
                }
            }
            if matches!(self.class[a], ArcClass::Equal | ArcClass::Less) && p[a].is_negative() {
                return Some(format!("arc {}: p = {} is negative", arc.id, p[a]));
            }
        }
        None
    }

    /// Strong duality residual `sum tau_hat f + sum nu_hat p`.
    pub fn duality_residual(&self) -> Rational {
        (0..self.augmented.arc_count()).fold(Rational::zero(), |acc, a| {
            acc + &self.tau_hat[a] * &self.primal[a] + &self.nu_hat[a] * &self.dual_p[a]
        })
    }

    fn scaled_gap(&self, ell: &[Rational], a: ArcId) -> Rational {
        let arc = self.augmented.arc(a);
        &ell[arc.head] / &self.lambda[arc.head] - &ell[arc.tail] / &self.lambda[arc.tail] - &self.tau_hat[a]
    }

    /// Potential of a labeling of the original network.
    pub fn potential(&self, ell: &[Rational]) -> Rational {
        let aug = &self.augmented;
        let cfg = configuration_of(aug, ell);
        let mut phi = Rational::zero();
        for a in 0..aug.arc_count() {
            let nu = &aug.arc(a).capacity;
            if self.in_fixed(a) {
                phi -= &self.nu_hat[a] * self.scaled_gap(ell, a);
            }
            let (q, s) = queue_and_slack_of(aug, ell, a);
            if cfg.is_resetting(a) && !self.in_fixed(a) {
                phi -= nu * q;
            }
            if self.class[a] == ArcClass::Greater && !cfg.is_active(a) {
                phi -= nu * s;
            }
        }
        phi
    }

    /// Slope of the potential for a configuration of the augmented network
    /// and a label direction.
    pub fn potential_slope(&self, cfg: &Configuration, d: &[Rational]) -> Rational {
        let aug = &self.augmented;
        let mut slope = Rational::zero();
        for a in 0..aug.arc_count() {
            let arc = aug.arc(a);
            let nu = &arc.capacity;
            let rate = &d[arc.head] - &d[arc.tail];
            if self.in_fixed(a) {
                slope -= &self.nu_hat[a]
                    * (&d[arc.head] / &self.lambda[arc.head] - &d[arc.tail] / &self.lambda[arc.tail]);
            }
            if cfg.is_resetting(a) && !self.in_fixed(a) {
                slope -= nu * &rate;
            }
            if self.class[a] == ArcClass::Greater && !cfg.is_active(a) {
                slope += nu * &rate;
            }
        }
        slope
    }

    /// The dual solution attached to a labeling; its objective is the
    /// potential.
    pub fn dual_from_labeling(&self, ell: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>, Rational)> {
        let aug = &self.augmented;
        let cfg = configuration_of(aug, ell);
        let d: Vec<Rational> = ell.iter().zip(&self.lambda).map(|(l, lam)| l / lam).collect();
        let mut p = Vec::with_capacity(aug.arc_count());
        for a in 0..aug.arc_count() {
            let lam_w = &self.lambda[aug.arc(a).head];
            let (q, s) = queue_and_slack_of(aug, ell, a);
            let value = if self.class[a] == ArcClass::Free
                || (self.class[a] == ArcClass::Greater && cfg.is_active(a))
            {
                self.scaled_gap(ell, a)
            } else if self.class[a] == ArcClass::Greater {
                self.scaled_gap(ell, a) + s / lam_w
            } else if cfg.is_resetting(a) {
                q / lam_w
            } else {
                Rational::zero()
            };
            p.push(value);
        }
        if let Some(why) = self.dual_violation(&d, &p) {
            return Err(Error::FeasibilityViolation(why));
        }
        let obj = -(0..aug.arc_count()).fold(Rational::zero(), |acc, a| acc + &self.nu_hat[a] * &p[a]);
        Ok((d, p, obj))
    }

    /// Shortest-path labels from the source over non-`Less` arcs with slack
    /// costs; `None` for unreachable nodes.
    pub fn slack_labels(&self, ell: &[Rational]) -> Vec<Option<Rational>> {
        let aug = &self.augmented;
        let edges: Vec<(usize, usize, Rational)> = (0..aug.arc_count())
            .filter(|&a| self.class[a] != ArcClass::Less)
            .map(|a| {
                let arc = aug.arc(a);
                (arc.tail, arc.head, queue_and_slack_of(aug, ell, a).1)
            })
            .collect();
        graph::dijkstra(aug.node_count(), &edges, aug.source())
    }

    /// `Delta = max |lambda_v - lambda_w|^-1` over node pairs with distinct
    /// steady values, zero if all agree.
    pub fn delta(&self) -> Rational {
        let mut best = Rational::zero();
        for (i, a) in self.lambda.iter().enumerate() {
            for b in &self.lambda[i + 1..] {
                if a != b {
                    let inv = (a - b).abs().recip();
                    if inv > best {
                        best = inv;
                    }
                }
            }
        }
        best
    }

    /// Thin flow in the augmented network at a labeling.
    pub fn augmented_thin_flow(&self, ell: &[Rational]) -> Result<(Configuration, ThinFlow)> {
        let cfg = configuration_of(&self.augmented, ell);
        let tf = solve_thin_flow_with(&self.augmented, &cfg, &[], DEFAULT_NODE_BUDGET)?.thin_flow;
        Ok((cfg, tf))
    }

    /// The three characterizations of a steady-state direction for a
    /// labeling and its augmented thin flow, using the configuration just
    /// after the labeling in the thin flow direction.
    pub fn steady_verdicts(&self, ell: &[Rational], tf: &ThinFlow) -> [bool; 3] {
        let aug = &self.augmented;
        let cfg = configuration_toward(aug, ell, &tf.direction);
        let d = &tf.direction;
        let x = &tf.flow;
        let in_s: Vec<bool> = (0..aug.node_count()).map(|v| d[v] == self.lambda[v]).collect();
        let inside = |a: ArcId| in_s[aug.arc(a).tail] && in_s[aug.arc(a).head];

        let q_rate_ok = (0..aug.arc_count()).all(|a| {
            let arc = aug.arc(a);
            let rate = &d[arc.head] - &d[arc.tail];
            let q_rate = if cfg.is_resetting(a) {
                rate
            } else if cfg.is_active(a) {
                pos_part(&rate)
            } else {
                Rational::zero()
            };
            q_rate == self.sigma[a]
        });

        let no_leaving_flow = (0..aug.arc_count()).all(|a| {
            let arc = aug.arc(a);
            !(in_s[arc.tail] && !in_s[arc.head]) || x[a].is_zero()
        });

        let third = (0..aug.arc_count()).all(|a| inside(a) || x[a].is_zero())
            && (0..aug.arc_count()).all(|a| self.class[a] != ArcClass::Greater || cfg.is_resetting(a))
            && (0..aug.arc_count()).all(|a| !cfg.is_resetting(a) || inside(a))
            && (0..aug.arc_count()).all(|a| !(cfg.is_resetting(a) && self.class[a] == ArcClass::Less));

        [q_rate_ok, no_leaving_flow, third]
    }

    /// Whether `(x', ell / lambda)` is primal feasible and satisfies
    /// complementary slackness with the pointwise minimal `p`.
    pub fn check_optimality(&self, ell: &[Rational], tf: &ThinFlow) -> bool {
        let aug = &self.augmented;
        let x = &tf.flow;
        let d: Vec<Rational> = ell.iter().zip(&self.lambda).map(|(l, lam)| l / lam).collect();
        for a in 0..aug.arc_count() {
            let feasible = match self.class[a] {
                ArcClass::Free | ArcClass::Greater => x[a] == self.nu_hat[a],
                ArcClass::Less => x[a].is_zero(),
                ArcClass::Equal => !x[a].is_negative() && x[a] <= self.nu_hat[a],
            };
            if !feasible {
                return false;
            }
        }
        let balance_ok = (0..aug.node_count()).all(|v| {
            let out = aug.out_arcs(v).iter().fold(Rational::zero(), |acc, &a| acc + &x[a]);
            let inn = aug.in_arcs(v).iter().fold(Rational::zero(), |acc, &a| acc + &x[a]);
            out == inn
        });
        if !balance_ok {
            return false;
        }
        for a in 0..aug.arc_count() {
            let arc = aug.arc(a);
            let diff = &d[arc.head] - &d[arc.tail];
            // With p minimal, the constraints of free and Greater arcs are
            // tight by construction; only Equal arcs carry conditions.
            if self.class[a] != ArcClass::Equal {
                continue;
            }
            if x[a].is_positive() && diff < self.tau_hat[a] {
                return false;
            }
            if diff > self.tau_hat[a] && x[a] != self.nu_hat[a] {
                return false;
            }
        }
        true
    }
}

/// Steadiness and optimality verdicts for one phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVerdict {
    pub phase: usize,
    pub theta: Rational,
    pub verdicts: [bool; 3],
    pub optimal: bool,
}

/// A point strictly inside phase `k`: the midpoint for bounded phases, one
/// time unit in for the final unbounded phase.
pub fn phase_interior(net: &Network, traj: &Trajectory, k: usize) -> Result<(Rational, Vec<Rational>)> {
    let p = &traj.phases[k];
    let len = match traj.phase_end(k) {
        Some(end) => Some(end - &p.start),
        None => next_event(net, &p.labels, &p.direction)?,
    };
    let dt = match len {
        Some(l) => l / Rational::from_integer(2.into()),
        None => Rational::one(),
    };
    let ell = p.labels.iter().zip(&p.direction).map(|(l, d)| l + &dt * d).collect();
    Ok((&p.start + dt, ell))
}

/// Evaluates the steadiness characterizations and the optimality test in
/// the interior of every phase. Disagreement is an error.
pub fn audit_phases(net: &Network, st: &SteadyState, traj: &Trajectory) -> Result<Vec<PhaseVerdict>> {
    let mut out = Vec::with_capacity(traj.phases.len());
    for k in 0..traj.phases.len() {
        let (theta, ell) = phase_interior(net, traj, k)?;
        let (_, tf) = st.augmented_thin_flow(&ell)?;
        if tf.direction != traj.phases[k].direction {
            return Err(Error::TheoremViolated(format!(
                "phase {k}: augmented direction differs from the phase direction"
            )));
        }
        let verdicts = st.steady_verdicts(&ell, &tf);
        if verdicts[0] != verdicts[1] || verdicts[1] != verdicts[2] {
            return Err(Error::EquivalenceBroken(format!("phase {k} at {theta}: {verdicts:?}")));
        }
        let optimal = st.check_optimality(&ell, &tf);
        if optimal != verdicts[0] {
            return Err(Error::TheoremViolated(format!(
                "phase {k} at {theta}: optimality {optimal}, steady {}",
                verdicts[0]
            )));
        }
        out.push(PhaseVerdict { phase: k, theta, verdicts, optimal });
    }
    Ok(out)
}

/// Potential slope of phase `k`, from the difference quotient of the
/// potential across the phase.
pub fn phase_slope(net: &Network, st: &SteadyState, traj: &Trajectory, k: usize) -> Result<Rational> {
    let p = &traj.phases[k];
    let len = match traj.phase_end(k) {
        Some(end) => end - &p.start,
        None => next_event(net, &p.labels, &p.direction)?.unwrap_or_else(Rational::one),
    };
    let end: Vec<Rational> = p.labels.iter().zip(&p.direction).map(|(l, d)| l + &len * d).collect();
    Ok((st.potential(&end) - st.potential(&p.labels)) / len)
}

/// Potential slope of phase `k` from the configuration formula at an
/// interior point.
pub fn phase_slope_by_configuration(net: &Network, st: &SteadyState, traj: &Trajectory, k: usize) -> Result<Rational> {
    let (_, ell) = phase_interior(net, traj, k)?;
    let cfg = configuration_of(&st.augmented, &ell);
    Ok(st.potential_slope(&cfg, &traj.phases[k].direction))
}

#[derive(Clone, Debug)]
pub enum EtaMode<'a> {
    Exhaustive,
    Observed(&'a Trajectory),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Smallest positive potential slope found; `None` if there is none.
    pub eta: Option<Rational>,
    pub delta: Rational,
    pub t1: Rational,
    pub t2: Rational,
    pub t: Rational,
    pub exhaustive: bool,
}

/// Smallest positive potential slope over all valid configurations
/// `E_inf <= E* <= E'` of the augmented network.
pub fn exhaustive_eta(st: &SteadyState) -> Result<Option<Rational>> {
    let aug = &st.augmented;
    let choice: Vec<ArcId> = (0..aug.arc_count()).filter(|&a| !aug.is_free(a)).collect();
    if choice.len() > EXHAUSTIVE_ARC_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{} arcs exceed the exhaustive budget of {EXHAUSTIVE_ARC_BUDGET}",
            choice.len()
        )));
    }
    let total = 3usize.pow(choice.len() as u32);
    let chunk = 729;
    let per_chunk = |lo: usize| -> Result<Option<Rational>> {
        let mut best: Option<Rational> = None;
        let mut cfg = full_configuration(aug);
        // Partitions that solved earlier configurations, most recent first.
        let mut seen: Vec<OrderedPartition> = Vec::new();
        for code in lo..(lo + chunk).min(total) {
            let mut c = code;
            for &a in &choice {
                cfg.active[a] = c % 3 != 0;
                cfg.resetting[a] = c % 3 == 2;
                c /= 3;
            }
            if !is_valid_configuration(aug, &cfg)? {
                continue;
            }
            let solved = solve_thin_flow_with(aug, &cfg, &seen, DEFAULT_NODE_BUDGET)?;
            let slope = st.potential_slope(&cfg, &solved.thin_flow.direction);
            match solved.hint {
                Some(i) => seen[..=i].rotate_right(1),
                None => seen.insert(0, solved.partition),
            }
            if slope.is_positive() && best.as_ref().map_or(true, |b| slope < *b) {
                best = Some(slope);
            }
        }
        Ok(best)
    };
    let partial: Vec<Option<Rational>> = (0..total)
        .into_par_iter()
        .step_by(chunk)
        .map(per_chunk)
        .collect::<Result<_>>()?;
    Ok(partial.into_iter().flatten().min())
}

/// Smallest positive potential slope over the phases of a trajectory.
pub fn observed_eta(net: &Network, st: &SteadyState, traj: &Trajectory) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for k in 0..traj.phases.len() {
        let slope = phase_slope(net, st, traj, k)?;
        if slope.is_positive() && best.as_ref().map_or(true, |b| slope < *b) {
            best = Some(slope);
        }
    }
    Ok(best)
}

pub fn convergence_bounds(net: &Network, st: &SteadyState, start: &[Rational], mode: EtaMode) -> Result<Bounds> {
    let (eta, exhaustive) = match mode {
        EtaMode::Exhaustive => (exhaustive_eta(st)?, true),
        EtaMode::Observed(traj) => (observed_eta(net, st, traj)?, false),
    };
    let gap = &st.opt - st.potential(start);
    let t1 = if gap.is_zero() {
        Rational::zero()
    } else {
        match &eta {
            Some(e) => &gap / e,
            None => {
                return Err(Error::TheoremViolated(
                    "potential below its bound but no positive slope found".into(),
                ))
            }
        }
    };
    let aug = &st.augmented;
    let max_slack = (0..aug.arc_count())
        .filter(|&a| st.class[a] != ArcClass::Less)
        .map(|a| queue_and_slack_of(aug, start, a).1)
        .max()
        .unwrap_or_else(Rational::zero);
    let delta = st.delta();
    let arcs = Rational::from_integer(net.arc_count().into());
    let t2 = &delta * arcs * (&t1 * net.derivative_bound() + max_slack);
    let t = &t1 + &t2;
    Ok(Bounds { eta, delta, t1, t2, t, exhaustive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{net_a, net_c, net_d};
    use crate::integrator::{integrate, StopPolicy};
    use crate::rational::{int, rat};

    fn l(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn steady_directions() {
        let a = steady_state(&net_a()).unwrap();
        assert_eq!(a.lambda, l(&[1, 2]));
        assert_eq!(a.sigma[0], int(1));
        assert_eq!(a.class[0], ArcClass::Greater);
        let c = steady_state(&net_c()).unwrap();
        assert_eq!(c.lambda, l(&[1, 1]));
        assert_eq!(&c.sigma[..2], &l(&[0, 0])[..]);
        assert_eq!(&c.class[..2], &[ArcClass::Equal, ArcClass::Equal]);
        let d = steady_state(&net_d()).unwrap();
        assert_eq!(d.lambda, vec![int(1), rat(4, 3)]);
        assert_eq!(&d.sigma[..2], &[rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn primal_and_dual() {
        let a = steady_state(&net_a()).unwrap();
        assert_eq!(a.primal, l(&[2, 2]));
        assert_eq!(a.opt, int(1));
        let c = steady_state(&net_c()).unwrap();
        assert_eq!(c.primal, l(&[1, 1, 2]));
        assert_eq!(c.opt, int(4));
        assert_eq!(&c.dual_d[1] - &c.dual_d[0], int(3));
        assert_eq!(c.dual_p, l(&[2, 0, -3]));
        let d = steady_state(&net_d()).unwrap();
        assert_eq!(d.primal, vec![rat(4, 3), rat(8, 3), int(4)]);
        assert_eq!(d.opt, int(7));
        for st in [a, c, d] {
            assert!(st.duality_residual().is_zero());
        }
    }

    #[test]
    fn potentials() {
        let c = steady_state(&net_c()).unwrap();
        assert_eq!(c.potential(&l(&[0, 1])), int(2));
        assert_eq!(c.potential(&l(&[2, 5])), int(4));
        let a = steady_state(&net_a()).unwrap();
        assert_eq!(a.potential(&l(&[0, 1])), int(1));
        let (d, p, obj) = a.dual_from_labeling(&l(&[0, 1])).unwrap();
        assert_eq!(d, vec![int(0), rat(1, 2)]);
        assert_eq!(p, vec![int(0), rat(-1, 2)]);
        assert_eq!(obj, int(1));
        let (d, _, obj) = c.dual_from_labeling(&l(&[0, 1])).unwrap();
        assert_eq!(d, l(&[0, 1]));
        assert_eq!(obj, int(2));
    }

    #[test]
    fn verdicts_on_reference_phases() {
        let c = net_c();
        let st = steady_state(&c).unwrap();
        let (_, tf) = st.augmented_thin_flow(&l(&[2, 5])).unwrap();
        assert_eq!(tf.flow, l(&[1, 1, 2]));
        assert_eq!(st.steady_verdicts(&l(&[2, 5]), &tf), [true; 3]);
        assert!(st.check_optimality(&l(&[2, 5]), &tf));
        let (_, tf) = st.augmented_thin_flow(&l(&[0, 1])).unwrap();
        assert_eq!(st.steady_verdicts(&l(&[0, 1]), &tf), [false; 3]);
        assert!(!st.check_optimality(&l(&[0, 1]), &tf));

        let st = steady_state(&net_a()).unwrap();
        let (_, tf) = st.augmented_thin_flow(&l(&[0, 1])).unwrap();
        assert_eq!(st.steady_verdicts(&l(&[0, 1]), &tf), [true; 3]);
    }

    #[test]
    fn slack_label_examples() {
        let st = steady_state(&net_c()).unwrap();
        assert_eq!(st.slack_labels(&l(&[2, 5])), vec![Some(int(0)), Some(int(0))]);
        assert_eq!(st.slack_labels(&l(&[0, 1])), vec![Some(int(0)), Some(int(0))]);
    }

    #[test]
    fn bounds() {
        let c = net_c();
        let st = steady_state(&c).unwrap();
        let traj = integrate(&c, &l(&[0, 1]), &StopPolicy::Steady { bound: None }).unwrap();
        let b = convergence_bounds(&c, &st, &l(&[0, 1]), EtaMode::Observed(&traj)).unwrap();
        assert_eq!(b.eta, Some(int(1)));
        assert_eq!(b.delta, int(0));
        assert_eq!(b.t1, int(2));
        assert_eq!(b.t2, int(0));
        assert_eq!(b.t, int(2));
        assert_eq!(phase_slope(&c, &st, &traj, 0).unwrap(), int(1));
        assert_eq!(phase_slope_by_configuration(&c, &st, &traj, 0).unwrap(), int(1));

        let a = net_a();
        let st = steady_state(&a).unwrap();
        let b = convergence_bounds(&a, &st, &l(&[0, 1]), EtaMode::Exhaustive).unwrap();
        assert_eq!(b.t1, int(0));
        assert_eq!(steady_state(&net_d()).unwrap().delta(), int(3));
    }
}
