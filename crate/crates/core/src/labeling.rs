//! Labelings, configurations and the feasibility predicates built on them.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::network::{ArcId, Network};
use crate::rational::{pos_part, Rational};

/// One earliest-arrival value per node.
pub type Labeling = Vec<Rational>;

/// Active arcs `E'` and resetting arcs `E*` as membership vectors indexed by
/// arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub active: Vec<bool>,
    pub resetting: Vec<bool>,
}

impl Configuration {
    /// Builds a configuration from arc ids. Rejects unknown ids and
    /// `E*` not contained in `E'`.
    pub fn from_ids(net: &Network, active: &[&str], resetting: &[&str]) -> Result<Self> {
        let mut cfg = Configuration {
            active: vec![false; net.arc_count()],
            resetting: vec![false; net.arc_count()],
        };
        for id in active {
            let a = net.arc_index(id).ok_or_else(|| Error::UnknownArc(id.to_string()))?;
            cfg.active[a] = true;
        }
        for id in resetting {
            let a = net.arc_index(id).ok_or_else(|| Error::UnknownArc(id.to_string()))?;
            cfg.resetting[a] = true;
        }
        cfg.check_nested()?;
        Ok(cfg)
    }

    pub fn check_nested(&self) -> Result<()> {
        if self.active.len() != self.resetting.len() {
            return Err(Error::InvalidInput("configuration size mismatch".into()));
        }
        if let Some(a) = (0..self.active.len()).find(|&a| self.resetting[a] && !self.active[a]) {
            return Err(Error::InvalidInput(format!(
                "resetting arc #{a} is not active"
            )));
        }
        Ok(())
    }

    pub fn is_active(&self, a: ArcId) -> bool {
        self.active[a]
    }

    pub fn is_resetting(&self, a: ArcId) -> bool {
        self.resetting[a]
    }

    pub fn active_ids(&self, net: &Network) -> Vec<String> {
        ids(net, &self.active)
    }

    pub fn resetting_ids(&self, net: &Network) -> Vec<String> {
        ids(net, &self.resetting)
    }
}

fn ids(net: &Network, set: &[bool]) -> Vec<String> {
    (0..set.len())
        .filter(|&a| set[a])
        .map(|a| net.arc(a).id.clone())
        .collect()
}

/// `ell_w - ell_v - tau_e`
pub fn arc_gap(net: &Network, ell: &[Rational], a: ArcId) -> Rational {
    let arc = net.arc(a);
    &ell[arc.head] - &ell[arc.tail] - &arc.transit
}

/// Active arcs satisfy `ell_w >= ell_v + tau`, resetting ones strictly;
/// free arcs are always both.
pub fn configuration_of(net: &Network, ell: &[Rational]) -> Configuration {
    let m = net.arc_count();
    let mut cfg = Configuration {
        active: vec![false; m],
        resetting: vec![false; m],
    };
    for a in 0..m {
        if net.is_free(a) {
            cfg.active[a] = true;
            cfg.resetting[a] = true;
            continue;
        }
        let gap = arc_gap(net, ell, a);
        cfg.active[a] = !gap.is_negative();
        cfg.resetting[a] = gap.is_positive();
    }
    cfg
}

/// Configuration just after `ell` when moving in direction `d`: tight arcs
/// whose gap grows become resetting, tight arcs whose gap shrinks become
/// inactive.
pub fn configuration_toward(net: &Network, ell: &[Rational], d: &[Rational]) -> Configuration {
    let mut cfg = configuration_of(net, ell);
    for a in 0..net.arc_count() {
        if net.is_free(a) || !cfg.active[a] || cfg.resetting[a] {
            continue;
        }
        let arc = net.arc(a);
        let rate = &d[arc.head] - &d[arc.tail];
        if rate.is_positive() {
            cfg.resetting[a] = true;
        } else if rate.is_negative() {
            cfg.active[a] = false;
        }
    }
    cfg
}

/// Returns the first violated validity condition, if any. The return arc
/// of an augmented network is ignored by the path and cycle conditions.
pub fn validity_violation(net: &Network, cfg: &Configuration) -> Result<Option<String>> {
    cfg.check_nested()?;
    if cfg.active.len() != net.arc_count() {
        return Err(Error::InvalidInput("configuration size mismatch".into()));
    }
    let ret = net.return_arc();
    let usable = |a: ArcId| cfg.active[a] && Some(a) != ret;
    let from_s = net.reachable_from(net.source(), usable);
    if let Some(v) = (0..net.node_count()).find(|&v| !from_s[v]) {
        return Ok(Some(format!(
            "node {} is not reachable from the source via active arcs",
            net.node_name(v)
        )));
    }
    let to_t = net.reaching(net.sink(), usable);
    for a in 0..net.arc_count() {
        if cfg.resetting[a] && Some(a) != ret {
            let arc = net.arc(a);
            if !from_s[arc.tail] || !to_t[arc.head] {
                return Ok(Some(format!(
                    "resetting arc {} is not on an active s-t path",
                    arc.id
                )));
            }
        }
    }
    let any_resetting = (0..net.arc_count()).any(|a| cfg.resetting[a] && Some(a) != ret);
    if any_resetting && net.has_cycle(usable) {
        return Ok(Some(
            "active arcs contain a cycle while some arc is resetting".into(),
        ));
    }
    Ok(None)
}

/// The three validity conditions. Errors only if `E*` is not contained in
/// `E'`.
pub fn is_valid_configuration(net: &Network, cfg: &Configuration) -> Result<bool> {
    Ok(validity_violation(net, cfg)?.is_none())
}

/// True if the active arcs (return arc excluded) contain a directed cycle.
pub fn has_active_cycle(net: &Network, cfg: &Configuration) -> bool {
    let ret = net.return_arc();
    net.has_cycle(|a| cfg.active[a] && Some(a) != ret)
}

pub fn is_feasible_labeling(net: &Network, ell: &[Rational]) -> bool {
    ell.len() == net.node_count()
        && validity_violation(net, &configuration_of(net, ell))
            .expect("derived configurations are nested")
            .is_none()
}

pub fn check_feasible(net: &Network, ell: &[Rational]) -> Result<()> {
    if ell.len() != net.node_count() {
        return Err(Error::InfeasibleLabeling(format!(
            "expected {} labels, got {}",
            net.node_count(),
            ell.len()
        )));
    }
    match validity_violation(net, &configuration_of(net, ell))? {
        None => Ok(()),
        Some(why) => Err(Error::InfeasibleLabeling(why)),
    }
}

/// Queue delay and slack of one arc; slack is zero on free arcs.
pub fn queue_and_slack_of(net: &Network, ell: &[Rational], a: ArcId) -> (Rational, Rational) {
    let gap = arc_gap(net, ell, a);
    let slack = if net.is_free(a) {
        Rational::from_integer(0.into())
    } else {
        pos_part(&-gap.clone())
    };
    (pos_part(&gap), slack)
}

pub fn queue_and_slack(net: &Network, ell: &[Rational]) -> Vec<(Rational, Rational)> {
    (0..net.arc_count())
        .map(|a| queue_and_slack_of(net, ell, a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{net_a, net_c};
    use crate::rational::int;
    use proptest::prelude::*;

    fn ell(v: &[i64]) -> Labeling {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn configurations() {
        let a = net_a();
        let cfg = configuration_of(&a, &ell(&[0, 1]));
        assert_eq!(cfg, Configuration::from_ids(&a, &["e"], &[]).unwrap());
        let cfg = configuration_of(&a, &ell(&[0, 2]));
        assert_eq!(cfg, Configuration::from_ids(&a, &["e"], &["e"]).unwrap());
        let c = net_c();
        let cfg = configuration_of(&c, &ell(&[0, 1]));
        assert_eq!(cfg, Configuration::from_ids(&c, &["e1"], &[]).unwrap());
    }

    #[test]
    fn validity() {
        let a = net_a();
        let cfg = Configuration::from_ids(&a, &["e"], &[]).unwrap();
        assert!(is_valid_configuration(&a, &cfg).unwrap());
        let c = net_c();
        assert!(matches!(
            Configuration::from_ids(&c, &["e1"], &["e2"]),
            Err(Error::InvalidInput(_))
        ));
        let aug = a.augment_with_return_arc().unwrap();
        let cfg = Configuration::from_ids(&aug, &["e", "ts"], &["ts"]).unwrap();
        assert!(is_valid_configuration(&aug, &cfg).unwrap());
    }

    #[test]
    fn feasibility() {
        assert!(is_feasible_labeling(&net_a(), &ell(&[0, 1])));
        assert!(!is_feasible_labeling(&net_a(), &ell(&[0, 0])));
        assert!(is_feasible_labeling(&net_c(), &ell(&[2, 5])));
        assert!(matches!(
            check_feasible(&net_a(), &ell(&[0, 0])),
            Err(Error::InfeasibleLabeling(_))
        ));
    }

    #[test]
    fn queues_and_slacks() {
        assert_eq!(queue_and_slack(&net_a(), &ell(&[0, 2])), vec![(int(1), int(0))]);
        let c = net_c();
        assert_eq!(
            queue_and_slack(&c, &ell(&[2, 5])),
            vec![(int(2), int(0)), (int(0), int(0))]
        );
        assert_eq!(queue_and_slack(&c, &ell(&[0, 1]))[1], (int(0), int(2)));
    }

    proptest! {
        #[test]
        fn shift_invariance(a in -20i64..20, b in -20i64..20, c in -20i64..20) {
            let net = net_c();
            let l = ell(&[a, b]);
            let shifted = ell(&[a + c, b + c]);
            prop_assert_eq!(configuration_of(&net, &l), configuration_of(&net, &shifted));
        }

        #[test]
        fn queue_slack_trichotomy(a in -20i64..20, b in -20i64..20) {
            let net = net_c();
            for (q, s) in queue_and_slack(&net, &ell(&[a, b])) {
                let n = [q.is_positive(), s.is_positive()].iter().filter(|x| **x).count();
                prop_assert!(n <= 1);
                prop_assert!(!q.is_negative() && !s.is_negative());
            }
        }
    }
}
