use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuits::IterationRule;
use crate::error::{Error, Result};
use crate::qec::CodeId;

/// Pauli rates spanned by the default sweep grid.
pub const DEFAULT_P_MIN: f64 = 1e-6 / 3.0;
pub const DEFAULT_P_MAX: f64 = 1e-1 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    QecSweep,
    GroverSweep,
    CliffordHeatmap,
    EntropyTable,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::QecSweep => "qec_sweep",
            ExperimentKind::GroverSweep => "grover_sweep",
            ExperimentKind::CliffordHeatmap => "clifford_heatmap",
            ExperimentKind::EntropyTable => "entropy_table",
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            ExperimentKind::QecSweep => 1,
            ExperimentKind::GroverSweep => 2,
            ExperimentKind::CliffordHeatmap => 3,
            ExperimentKind::EntropyTable => 4,
        }
    }
}

/// Which noise families a sweep runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    Continuous,
    Pauli,
    #[default]
    Both,
}

impl NoiseModel {
    pub fn continuous(self) -> bool {
        matches!(self, NoiseModel::Continuous | NoiseModel::Both)
    }

    pub fn pauli(self) -> bool {
        matches!(self, NoiseModel::Pauli | NoiseModel::Both)
    }
}

/// The sampler behind the continuous model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuousFamily {
    /// Independent `N(0, σ²)` angles.
    #[default]
    Gaussian,
    /// vMF axis tilt with the matched `κ`.
    Vmf,
}

/// What the numbers in `grid` are.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridAxis {
    /// Pauli rates; continuous points use the entropy-matched width.
    #[default]
    P,
    /// Gaussian widths; Pauli points use the entropy-matched rate.
    Sigma,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Overlap,
    Shots,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QecParams {
    pub codes: Vec<CodeId>,
    pub m: Vec<usize>,
    pub ec: Vec<u8>,
    /// Also run the propagated-noise approximation (rows with model `approx`).
    pub approximation: bool,
    /// Accumulate approximation noise over the encoding as well as the
    /// logical Hadamards.
    pub approx_include_encoding: bool,
}

impl Default for QecParams {
    fn default() -> Self {
        QecParams {
            codes: vec![CodeId::Five, CodeId::Steane],
            m: vec![10, 50, 100],
            ec: vec![0, 1],
            approximation: false,
            approx_include_encoding: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroverParams {
    pub n: Vec<usize>,
    /// Marked state pattern, cycled or truncated to each `N` (qubit 0 first).
    pub marked: String,
    pub iterations: IterationRule,
}

impl Default for GroverParams {
    fn default() -> Self {
        GroverParams { n: vec![3, 4, 5, 6, 7], marked: "101".into(), iterations: IterationRule::Paper }
    }
}

impl GroverParams {
    pub fn marked_for(&self, n: usize) -> String {
        self.marked.chars().cycle().take(n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatmapParams {
    pub n_qubits: usize,
    pub n_h: Vec<usize>,
    pub n_cnot: Vec<usize>,
    pub circuits_per_cell: usize,
}

impl Default for HeatmapParams {
    fn default() -> Self {
        let axis: Vec<usize> = (1..=10).map(|k| 10 * k).collect();
        HeatmapParams { n_qubits: 5, n_h: axis.clone(), n_cnot: axis, circuits_per_cell: 100 }
    }
}

/// Everything one experiment run needs. Mirrors the TOML config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub noise_model: NoiseModel,
    pub continuous_family: ContinuousFamily,
    pub grid_axis: GridAxis,
    /// Noise strengths; empty means `grid_points` log-spaced Pauli rates
    /// over `[1e-6/3, 1e-1/3]`.
    pub grid: Vec<f64>,
    pub grid_points: usize,
    pub n_instances: usize,
    pub n_shots: usize,
    pub metric: Metric,
    pub master_seed: u64,
    pub output: Option<PathBuf>,
    pub qec: QecParams,
    pub grover: GroverParams,
    pub heatmap: HeatmapParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::QecSweep,
            noise_model: NoiseModel::Both,
            continuous_family: ContinuousFamily::Gaussian,
            grid_axis: GridAxis::P,
            grid: Vec::new(),
            grid_points: 11,
            n_instances: 1000,
            n_shots: 100,
            metric: Metric::Overlap,
            master_seed: 0,
            output: None,
            qec: QecParams::default(),
            grover: GroverParams::default(),
            heatmap: HeatmapParams::default(),
        }
    }
}

impl ExperimentConfig {
    /// Defaults suited to `kind`.
    pub fn for_kind(kind: ExperimentKind) -> Self {
        let mut c = ExperimentConfig { kind, ..Default::default() };
        if kind == ExperimentKind::CliffordHeatmap {
            c.grid_axis = GridAxis::Sigma;
            c.grid = vec![0.05];
            c.noise_model = NoiseModel::Continuous;
        }
        c
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// The grid actually swept.
    pub fn grid_values(&self) -> Vec<f64> {
        if !self.grid.is_empty() {
            return self.grid.clone();
        }
        log_space(DEFAULT_P_MIN, DEFAULT_P_MAX, self.grid_points)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.grid.is_empty() && self.grid_points == 0 {
            return bad("grid is empty".into());
        }
        for &g in &self.grid_values() {
            let ok = match (self.kind, self.grid_axis) {
                (ExperimentKind::EntropyTable, _) => (0.0..=0.75).contains(&g),
                // p = 3/4 matches an infinitely wide rotation, which cannot be sampled
                (_, GridAxis::P) => (0.0..0.75).contains(&g),
                (_, GridAxis::Sigma) => g >= 0.0 && g.is_finite(),
            };
            if !ok {
                return bad(format!("grid value {g} is outside the {:?} axis range", self.grid_axis));
            }
        }
        if self.kind == ExperimentKind::EntropyTable && self.grid_axis == GridAxis::Sigma {
            return bad("the entropy table is indexed by Pauli rate; use grid_axis = \"p\"".into());
        }
        if self.n_instances == 0 {
            return bad("n_instances must be >= 1".into());
        }
        if self.metric == Metric::Shots && self.n_shots == 0 {
            return bad("n_shots must be >= 1 with the shots metric".into());
        }
        match self.kind {
            ExperimentKind::QecSweep => {
                let q = &self.qec;
                if q.codes.is_empty() || q.m.is_empty() || q.ec.is_empty() {
                    return bad("qec codes, m and ec lists must be nonempty".into());
                }
                if q.ec.iter().any(|&e| e > 1) {
                    return bad("ec values must be 0 or 1".into());
                }
            }
            ExperimentKind::GroverSweep => {
                let g = &self.grover;
                if g.n.is_empty() || g.n.iter().any(|&n| n < 2) {
                    return bad("grover n list must be nonempty with every N >= 2".into());
                }
                if g.marked.is_empty() || !g.marked.chars().all(|c| c == '0' || c == '1') {
                    return bad(format!("marked pattern {:?} must be a nonempty bitstring", g.marked));
                }
            }
            ExperimentKind::CliffordHeatmap => {
                let h = &self.heatmap;
                if h.n_h.is_empty() || h.n_cnot.is_empty() || h.circuits_per_cell == 0 {
                    return bad("heatmap axes and circuits_per_cell must be nonempty".into());
                }
                if h.n_qubits < 2 && h.n_cnot.iter().any(|&c| c > 0) {
                    return bad("CNOT cells need at least 2 qubits".into());
                }
            }
            ExperimentKind::EntropyTable => {}
        }
        Ok(())
    }
}

/// `n` points from `lo` to `hi` evenly spaced in `log10`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
        }
    }
}
