//! File formats: instance JSON, trajectory and flow CSV, certificates.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::flow_over_time::FlowOverTime;
use crate::integrator::Trajectory;
use crate::labeling::{Configuration, Labeling};
use crate::network::{build_network, Network};
use crate::perturb::SweepReport;
use crate::rational::{self, Rational};
use crate::steady::{Bounds, SteadyState};
use crate::thin_flow::{OrderedPartition, ThinFlow};

/// Significant digits of the display-only decimal columns.
pub const DECIMAL_DIGITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    #[serde(with = "rational::as_string")]
    pub transit: Rational,
    #[serde(with = "rational::as_string")]
    pub capacity: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub nodes: Vec<String>,
    pub source: String,
    pub sink: String,
    #[serde(with = "rational::as_string")]
    pub inflow: Rational,
    pub arcs: Vec<ArcSpec>,
    #[serde(default)]
    pub free_arcs: Vec<String>,
}

pub fn parse_instance(text: &str) -> Result<Network> {
    let spec: InstanceSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    build_network(&spec)
}

pub fn load_instance(path: &Path) -> Result<Network> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn instance_json(net: &Network) -> String {
    serde_json::to_string_pretty(&net.to_spec()).expect("instance serializes")
}

/// Configuration file: `{"active": [ids], "resetting": [ids]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationSpec {
    pub active: Vec<String>,
    #[serde(default)]
    pub resetting: Vec<String>,
}

pub fn parse_configuration(net: &Network, text: &str) -> Result<Configuration> {
    let spec: ConfigurationSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let active: Vec<&str> = spec.active.iter().map(String::as_str).collect();
    let resetting: Vec<&str> = spec.resetting.iter().map(String::as_str).collect();
    Configuration::from_ids(net, &active, &resetting)
}

/// Labeling file: `{"node": "p/q", ...}` covering every node.
pub fn parse_labeling(net: &Network, text: &str) -> Result<Labeling> {
    let map: std::collections::BTreeMap<String, String> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut ell = vec![None; net.node_count()];
    for (name, value) in &map {
        let v = net.node_index(name).ok_or_else(|| Error::UnknownNode(name.clone()))?;
        ell[v] = Some(rational::parse(value)?);
    }
    ell.into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::Parse(format!("no label for node {}", net.node_name(v)))))
        .collect()
}

fn dec(r: &Rational) -> String {
    rational::to_decimal(r, DECIMAL_DIGITS)
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub const TRAJECTORY_HEADER: [&str; 7] = [
    "theta",
    "node",
    "label",
    "direction",
    "theta_decimal",
    "label_decimal",
    "direction_decimal",
];

/// One row per phase start and node.
pub fn trajectory_csv(net: &Network, traj: &Trajectory) -> String {
    let mut rows = Vec::new();
    for p in &traj.phases {
        for v in 0..net.node_count() {
            rows.push(vec![
                rational::format(&p.start),
                net.node_name(v).to_string(),
                rational::format(&p.labels[v]),
                rational::format(&p.direction[v]),
                dec(&p.start),
                dec(&p.labels[v]),
                dec(&p.direction[v]),
            ]);
        }
    }
    csv_text(&TRAJECTORY_HEADER, rows)
}

/// A breakpoint read back from a trajectory CSV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub theta: Rational,
    pub labels: Labeling,
    pub direction: Vec<Rational>,
}

/// Reads the exact columns of a trajectory CSV; decimal columns are ignored.
pub fn parse_trajectory_csv(net: &Network, text: &str) -> Result<Vec<Breakpoint>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("missing column {name}")))
    };
    let (ct, cn, cl, cd) = (col("theta")?, col("node")?, col("label")?, col("direction")?);
    let mut out: Vec<(Rational, Vec<Option<Rational>>, Vec<Option<Rational>>)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |i: usize| rec.get(i).ok_or_else(|| Error::Parse("short row".into()));
        let theta = rational::parse(field(ct)?)?;
        let v = net
            .node_index(field(cn)?)
            .ok_or_else(|| Error::UnknownNode(field(cn).unwrap_or_default().to_string()))?;
        if out.last().map_or(true, |b| b.0 != theta) {
            if out.last().is_some_and(|b| b.0 > theta) {
                return Err(Error::Parse(format!("theta {theta} out of order")));
            }
            out.push((theta, vec![None; net.node_count()], vec![None; net.node_count()]));
        }
        let b = out.last_mut().expect("pushed");
        b.1[v] = Some(rational::parse(field(cl)?)?);
        b.2[v] = Some(rational::parse(field(cd)?)?);
    }
    out.into_iter()
        .map(|(theta, l, d)| {
            let missing = || Error::Parse(format!("incomplete breakpoint at theta {theta}"));
            let labels = l.into_iter().collect::<Option<Vec<_>>>().ok_or_else(missing)?;
            let direction = d.into_iter().collect::<Option<Vec<_>>>().ok_or_else(missing)?;
            Ok(Breakpoint { theta, labels, direction })
        })
        .collect()
}

pub const FLOW_HEADER: [&str; 9] = [
    "arc",
    "time",
    "f_plus",
    "f_minus",
    "queue_volume",
    "time_decimal",
    "f_plus_decimal",
    "f_minus_decimal",
    "queue_volume_decimal",
];

/// Rates and queue volume of every arc at each of its breakpoints.
pub fn flow_csv(net: &Network, fot: &FlowOverTime) -> String {
    let mut rows = Vec::new();
    for a in 0..net.arc_count() {
        for xi in fot.arc_breakpoints(net, a) {
            let fp = fot.arcs[a].inflow.rate(&xi);
            let fm = fot.arcs[a].outflow.rate(&xi);
            let z = fot.queue_volume(net, a, &xi);
            rows.push(vec![
                net.arc(a).id.clone(),
                rational::format(&xi),
                rational::format(&fp),
                rational::format(&fm),
                rational::format(&z),
                dec(&xi),
                dec(&fp),
                dec(&fm),
                dec(&z),
            ]);
        }
    }
    csv_text(&FLOW_HEADER, rows)
}

pub const SWEEP_HEADER: [&str; 6] = [
    "delta",
    "distance",
    "horizon",
    "phases_base",
    "phases_perturbed",
    "distance_decimal",
];

pub fn sweep_csv(report: &SweepReport) -> String {
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                rational::format(&r.delta),
                rational::format(&r.distance),
                rational::format(&r.horizon),
                r.phases_base.to_string(),
                r.phases_perturbed.to_string(),
                dec(&r.distance),
            ]
        })
        .collect();
    csv_text(&SWEEP_HEADER, rows)
}

fn by_node(net: &Network, values: &[Rational]) -> Value {
    let mut m = Map::new();
    for v in 0..net.node_count() {
        m.insert(net.node_name(v).to_string(), json!(rational::format(&values[v])));
    }
    Value::Object(m)
}

fn by_arc<T: Serialize>(net: &Network, values: &[T]) -> Value {
    let mut m = Map::new();
    for a in 0..net.arc_count() {
        m.insert(net.arc(a).id.clone(), json!(values[a]));
    }
    Value::Object(m)
}

fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::format).collect()
}

/// `{l_prime, x_prime, configuration, partition, violations}`.
pub fn thin_flow_certificate(
    net: &Network,
    cfg: &Configuration,
    tf: &ThinFlow,
    partition: &OrderedPartition,
    violations: &[String],
) -> Value {
    let parts: Vec<Vec<&str>> = partition
        .parts()
        .iter()
        .map(|p| p.iter().map(|&v| net.node_name(v)).collect())
        .collect();
    json!({
        "l_prime": by_node(net, &tf.direction),
        "x_prime": by_arc(net, &rationals(&tf.flow)),
        "configuration": {
            "active": cfg.active_ids(net),
            "resetting": cfg.resetting_ids(net),
        },
        "partition": parts,
        "verified": violations.is_empty(),
        "violations": violations,
    })
}

/// `{lambda, sigma, classification, primal, dual, opt, eta, delta, t1, t2, t}`
/// on the augmented network.
pub fn steady_certificate(st: &SteadyState, bounds: &Bounds) -> Value {
    let aug = &st.augmented;
    json!({
        "lambda": by_node(aug, &st.lambda),
        "sigma": by_arc(aug, &rationals(&st.sigma)),
        "classification": by_arc(aug, &st.class),
        "primal": by_arc(aug, &rationals(&st.primal)),
        "dual": {
            "d": by_node(aug, &st.dual_d),
            "p": by_arc(aug, &rationals(&st.dual_p)),
        },
        "opt": rational::format(&st.opt),
        "eta": bounds.eta.as_ref().map(rational::format),
        "eta_mode": if bounds.exhaustive { "exhaustive" } else { "observed" },
        "delta": rational::format(&bounds.delta),
        "t1": rational::format(&bounds.t1),
        "t2": rational::format(&bounds.t2),
        "t": rational::format(&bounds.t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::rational::rat;

    #[test]
    fn instance_round_trip() {
        for net in [instances::net_a(), instances::net_d(), instances::random_instance(3)] {
            let text = instance_json(&net);
            assert_eq!(parse_instance(&text).unwrap(), net);
        }
    }

    #[test]
    fn parses_rationals_exactly() {
        let text = r#"{"nodes":["s","t"],"source":"s","sink":"t","inflow":"7/3",
            "arcs":[{"id":"e","tail":"s","head":"t","transit":"1/3","capacity":"2"}]}"#;
        let net = parse_instance(text).unwrap();
        assert_eq!(*net.inflow(), rat(7, 3));
        assert_eq!(net.arc(0).transit, rat(1, 3));
    }

    #[test]
    fn trajectory_csv_round_trip() {
        use crate::integrator::{integrate, StopPolicy};
        let net = instances::net_d();
        let start = crate::network::empty_network_labels(&net);
        let traj = integrate(&net, &start, &StopPolicy::Steady { bound: None }).unwrap();
        let text = trajectory_csv(&net, &traj);
        assert!(text.starts_with("theta,node,label,direction,theta_decimal"));
        let back = parse_trajectory_csv(&net, &text).unwrap();
        assert_eq!(back.len(), traj.phases.len());
        for (b, p) in back.iter().zip(&traj.phases) {
            assert_eq!((&b.theta, &b.labels, &b.direction), (&p.start, &p.labels, &p.direction));
        }
        assert!(text.contains(",4/3,"));
        assert!(text.contains("1.3333333333333333333"));
    }

    #[test]
    fn configuration_and_labeling_files() {
        let net = instances::net_c();
        let cfg = parse_configuration(&net, r#"{"active":["e1","e2"],"resetting":["e1"]}"#).unwrap();
        assert!(cfg.is_resetting(0) && cfg.is_active(1) && !cfg.is_resetting(1));
        assert!(matches!(
            parse_configuration(&net, r#"{"active":["e1"],"resetting":["e2"]}"#),
            Err(Error::InvalidInput(_))
        ));
        let ell = parse_labeling(&net, r#"{"s":"0","t":"1/2"}"#).unwrap();
        assert_eq!(ell, vec![rat(0, 1), rat(1, 2)]);
        assert!(matches!(parse_labeling(&net, r#"{"s":"0"}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        assert!(matches!(parse_instance("{"), Err(Error::Parse(_))));
        let text = r#"{"nodes":["s","t"],"source":"s","sink":"t","inflow":"0.5","arcs":[]}"#;
        assert!(matches!(parse_instance(text), Err(Error::Parse(_))));
    }
}
