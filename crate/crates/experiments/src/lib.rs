//! Experiment layer on top of `consensus-core`: plain-text configs,
//! reproducible sweeps and demos, CSV/SVG emission, and the CLI plumbing.
//!
//! Every runner writes its resolved configuration (seeds and version
//! included) into the output directory; re-running from that directory
//! reproduces all CSVs byte-identically.

pub mod config;
pub mod formation;
pub mod output;
pub mod runcfg;
pub mod svg;
pub mod sweep;
pub mod third_order;

pub use config::ConfigMap;
pub use formation::{run_formation_demo, FormationReport};
pub use runcfg::{DisturbanceSpec, ExperimentConfig};
pub use sweep::{run_scaling_sweep, SweepReport};
pub use third_order::{run_third_order_demo, ThirdOrderReport};
