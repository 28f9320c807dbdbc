//! Exact computation and certification of dynamic equilibria (Nash flows
//! over time) in the fluid queueing model.

pub mod audit;
pub mod error;
pub mod flow_over_time;
pub mod graph;
pub mod instances;
pub mod integrator;
pub mod io;
pub mod labeling;
pub mod linalg;
pub mod network;
pub mod perturb;
pub mod rational;
pub mod steady;
pub mod thin_flow;

pub use error::{Error, Result};
pub use rational::Rational;
