//! Typed experiment configuration with the desk-scale defaults, file
//! overrides, and the canonical resolved echo written into every output
//! directory.

use crate::config::ConfigMap;
use consensus_core::dynamics::ConsensusGains;
use consensus_core::generators::{FamilyKind, FamilySpec};
use consensus_core::{Error, Result};
use std::path::{Path, PathBuf};

/// Disturbance knobs; unspecified fields fall back to the per-demo default.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceSpec {
    /// 0-based node id; demos default to a non-leader node.
    pub node: Option<usize>,
    pub deriv_order: Option<usize>,
    pub magnitude: Option<f64>,
    pub time: f64,
}

impl Default for DisturbanceSpec {
    fn default() -> Self {
        DisturbanceSpec {
            node: None,
            deriv_order: None,
            magnitude: None,
            time: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: FamilyKind,
    pub weight: f64,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub gains: Vec<f64>,
    pub a_max: Option<f64>,
    /// 0-based leader id for grounded runs.
    pub leader: usize,
    pub disturbance: DisturbanceSpec,
    pub t_final: Option<f64>,
    pub dt: f64,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// Connectivity-scaling sweep defaults: perfect-square sizes so the same
    /// N serves both the torus and the random family.
    pub fn sweep_defaults() -> ExperimentConfig {
        ExperimentConfig {
            name: "scaling-sweep".into(),
            kind: FamilyKind::RandomRegular { k: 4 },
            weight: 1.0,
            sizes: vec![64, 121, 256, 529, 1024],
            seeds: vec![1, 2, 3, 4, 5],
            gains: vec![1.0],
            a_max: None,
            leader: 0,
            disturbance: DisturbanceSpec::default(),
            t_final: None,
            dt: 0.01,
            out_dir: PathBuf::from("out/sweep"),
        }
    }

    /// Vehicular-formation demo defaults: second order, small and large
    /// networks, a sudden unit deceleration of the last vehicle at t = 1 s.
    pub fn formation_defaults() -> ExperimentConfig {
        ExperimentConfig {
            name: "formation".into(),
            kind: FamilyKind::RandomRegular { k: 4 },
            weight: 1.0,
            sizes: vec![20, 100],
            seeds: vec![1],
            gains: vec![1.0, 2.0],
            a_max: None,
            leader: 0,
            disturbance: DisturbanceSpec {
                node: None,
                deriv_order: Some(1),
                magnitude: Some(-1.0),
                time: 1.0,
            },
            t_final: None,
            dt: 0.01,
            out_dir: PathBuf::from("out/formation"),
        }
    }

    /// Third-order fragility demo defaults: N = 60 degree-4 random graph,
    /// gains (0.1, 1, 1), acceleration impulses at node 10 (1-based),
    /// grounding of node 1 at t = 30 s.
    pub fn third_order_defaults() -> ExperimentConfig {
        ExperimentConfig {
            name: "third-order".into(),
            kind: FamilyKind::RandomRegular { k: 4 },
            weight: 1.0,
            sizes: vec![60],
            seeds: vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
            gains: vec![0.1, 1.0, 1.0],
            a_max: None,
            leader: 0,
            disturbance: DisturbanceSpec {
                node: Some(9),
                deriv_order: Some(2),
                magnitude: Some(0.1),
                time: 1.0,
            },
            t_final: Some(60.0),
            dt: 0.01,
            out_dir: PathBuf::from("out/third-order"),
        }
    }

    /// Apply file overrides on top of `self`. External node ids are 1-based
    /// and mapped to internal 0-based ids here.
    pub fn apply(mut self, map: &ConfigMap) -> Result<ExperimentConfig> {
        if let Some(name) = map.get("experiment", "name") {
            self.name = name.to_string();
        }
        if let Some(sizes) = map.parse_list::<usize>("experiment", "sizes")? {
            self.sizes = sizes;
        }
        if let Some(seeds) = map.parse_list::<u64>("experiment", "seeds")? {
            self.seeds = seeds;
        }
        if let Some(out) = map.get("experiment", "out") {
            self.out_dir = PathBuf::from(out);
        }
        if let Some(leader) = map.parse_value::<usize>("experiment", "leader")? {
            self.leader = external_to_internal(leader, "leader")?;
        }
        if map.get("family", "kind").is_some()
            || map.get("family", "k").is_some()
            || map.get("family", "rows").is_some()
            || map.get("family", "bridge_nodes").is_some()
        {
            self.kind = parse_family_kind(map, self.kind.clone())?;
        }
        if let Some(w) = map.parse_value::<f64>("family", "weight")? {
            self.weight = w;
        }
        if let Some(a) = map.parse_list::<f64>("gains", "a")? {
            self.gains = a;
        }
        self.a_max = map.parse_value::<f64>("gains", "a_max")?.or(self.a_max);
        if let Some(t) = map.parse_value::<f64>("sim", "t_final")? {
            self.t_final = Some(t);
        }
        if let Some(dt) = map.parse_value::<f64>("sim", "dt")? {
            self.dt = dt;
        }
        if let Some(node) = map.parse_value::<usize>("disturbance", "node")? {
            self.disturbance.node = Some(external_to_internal(node, "disturbance node")?);
        }
        if let Some(d) = map.parse_value::<usize>("disturbance", "deriv_order")? {
            self.disturbance.deriv_order = Some(d);
        }
        if let Some(m) = map.parse_value::<f64>("disturbance", "magnitude")? {
            self.disturbance.magnitude = Some(m);
        }
        if let Some(t) = map.parse_value::<f64>("disturbance", "time")? {
            self.disturbance.time = t;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidInput("sizes must be nonempty".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidInput("seeds must be nonempty".into()));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidInput("dt must be positive".into()));
        }
        self.consensus_gains()?;
        Ok(())
    }

    pub fn consensus_gains(&self) -> Result<ConsensusGains> {
        match self.a_max {
            Some(cap) => ConsensusGains::new(self.gains.clone(), cap),
            None => ConsensusGains::from_coefficients(self.gains.clone()),
        }
    }

    pub fn family_spec(&self, seed: u64) -> FamilySpec {
        FamilySpec {
            kind: self.kind.clone(),
            seed,
            weight: self.weight,
        }
    }

    /// Degree bound for the configured family, when it is structurally
    /// fixed (k-regular / torus).
    pub fn family_degree_bound(&self) -> Option<usize> {
        match self.kind {
            FamilyKind::RandomRegular { k } => Some(k),
            FamilyKind::Lattice2dTorus { .. } => Some(4),
            FamilyKind::Ring | FamilyKind::Path => Some(2),
            FamilyKind::BinaryTree => Some(3),
            _ => None,
        }
    }

    /// Canonical resolved form, including the software version.
    pub fn to_map(&self) -> ConfigMap {
        let mut map = ConfigMap::default();
        map.set("experiment", "name", &self.name);
        map.set("experiment", "version", env!("CARGO_PKG_VERSION"));
        map.set("experiment", "sizes", join(&self.sizes));
        map.set("experiment", "seeds", join(&self.seeds));
        map.set("experiment", "leader", (self.leader + 1).to_string());
        map.set("experiment", "out", self.out_dir.display().to_string());
        map.set("family", "kind", self.kind.name());
        match self.kind {
            FamilyKind::RandomRegular { k } => map.set("family", "k", k.to_string()),
            FamilyKind::Barbell { bridge_nodes } => {
                map.set("family", "bridge_nodes", bridge_nodes.to_string())
            }
            FamilyKind::Lattice2dTorus {
                rows: Some(r),
                cols: Some(c),
            } => {
                map.set("family", "rows", r.to_string());
                map.set("family", "cols", c.to_string());
            }
            _ => {}
        }
        map.set("family", "weight", self.weight.to_string());
        map.set("gains", "a", join(&self.gains));
        if let Some(cap) = self.a_max {
            map.set("gains", "a_max", cap.to_string());
        }
        if let Some(t) = self.t_final {
            map.set("sim", "t_final", t.to_string());
        }
        map.set("sim", "dt", self.dt.to_string());
        if let Some(node) = self.disturbance.node {
            map.set("disturbance", "node", (node + 1).to_string());
        }
        if let Some(d) = self.disturbance.deriv_order {
            map.set("disturbance", "deriv_order", d.to_string());
        }
        if let Some(m) = self.disturbance.magnitude {
            map.set("disturbance", "magnitude", m.to_string());
        }
        map.set("disturbance", "time", self.disturbance.time.to_string());
        map
    }

    /// Write the resolved config into the output directory.
    pub fn write_resolved(&self) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join("config.resolved");
        self.to_map().write(&path)?;
        Ok(path)
    }
}

/// Map a 1-based external node label to the internal 0-based id.
pub fn external_to_internal(label: usize, what: &str) -> Result<usize> {
    if label == 0 {
        return Err(Error::InvalidInput(format!("{what} labels are 1-based")));
    }
    Ok(label - 1)
}

pub fn parse_family_kind(map: &ConfigMap, fallback: FamilyKind) -> Result<FamilyKind> {
    let name = map.get("family", "kind").unwrap_or(fallback.name());
    family_kind_from_parts(
        name,
        map.parse_value::<usize>("family", "k")?,
        map.parse_value::<usize>("family", "rows")?,
        map.parse_value::<usize>("family", "cols")?,
        map.parse_value::<usize>("family", "bridge_nodes")?,
    )
}

/// Assemble a family kind from its name and optional parameters.
pub fn family_kind_from_parts(
    name: &str,
    k: Option<usize>,
    rows: Option<usize>,
    cols: Option<usize>,
    bridge_nodes: Option<usize>,
) -> Result<FamilyKind> {
    match name {
        "path" => Ok(FamilyKind::Path),
        "ring" => Ok(FamilyKind::Ring),
        "star" => Ok(FamilyKind::Star),
        "complete" => Ok(FamilyKind::Complete),
        "lattice2d_torus" => Ok(FamilyKind::Lattice2dTorus { rows, cols }),
        "binary_tree" => Ok(FamilyKind::BinaryTree),
        "barbell" => Ok(FamilyKind::Barbell {
            bridge_nodes: bridge_nodes.unwrap_or(1),
        }),
        "random_regular" => Ok(FamilyKind::RandomRegular {
            k: k.unwrap_or(4),
        }),
        other => Err(Error::InvalidInput(format!("unknown family kind {other:?}"))),
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Load overrides from an optional config file path.
pub fn load_overrides(path: Option<&Path>) -> Result<ConfigMap> {
    match path {
        Some(p) => ConfigMap::read(p),
        None => Ok(ConfigMap::default()),
    }
}
