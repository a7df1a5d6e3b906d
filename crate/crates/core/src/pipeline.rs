//! End-to-end runs: reconstruct, train over seeded trials, assign, score.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use ndarray::Array2;
use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{Contingency, NmiNormalization};
use crate::graph::{Graph, GroundTruth};
use crate::hop::MAX_ORDER;
use crate::reconstruct::{reconstruct_iterative, PassRecord, Threshold, MAX_PASSES};
use crate::solver::{assign, sgn_train, snmf_train, SgnConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    #[default]
    Sgn,
    Snmf,
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgn" => Ok(SolverKind::Sgn),
            "snmf" => Ok(SolverKind::Snmf),
            other => Err(Error::param(format!("unknown solver `{other}` (expected sgn or snmf)"))),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Finite(e) => s.serialize_f64(*e),
            Threshold::Disabled => s.serialize_str("disabled"),
        }
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Threshold::new(v).map_err(de::Error::custom),
            Raw::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}

/// Every knob of a run. `k = None` takes the ground-truth community count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub k: Option<usize>,
    pub theta: f64,
    pub lambda: f64,
    pub epsilon: Threshold,
    pub r: usize,
    pub d: usize,
    pub beta: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverKind,
    pub reconstruct: bool,
    pub nmi_normalization: NmiNormalization,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            k: None,
            theta: 0.125,
            lambda: 1.0,
            epsilon: Threshold::Finite(5.0),
            r: 2,
            d: 3,
            beta: 0.5,
            tol: 1e-3,
            max_iters: 200,
            trials: 10,
            seed: 0,
            solver: SolverKind::Sgn,
            reconstruct: true,
            nmi_normalization: NmiNormalization::Geometric,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_ORDER).contains(&self.r) {
            return Err(Error::param(format!("r must be in 1..={MAX_ORDER}, got {}", self.r)));
        }
        if !(1..=MAX_PASSES).contains(&self.d) {
            return Err(Error::param(format!("d must be in 1..={MAX_PASSES}, got {}", self.d)));
        }
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if let Threshold::Finite(e) = self.epsilon {
            Threshold::new(e)?;
        }
        self.sgn_config(self.k.unwrap_or(1), self.seed).validate()
    }

    fn sgn_config(&self, k: usize, seed: u64) -> SgnConfig {
        SgnConfig {
            k,
            theta: self.theta,
            lambda: self.lambda,
            beta: self.beta,
            tol: self.tol,
            max_iters: self.max_iters,
            seed,
        }
    }

    fn reconstruction_enabled(&self) -> bool {
        self.reconstruct && !self.epsilon.is_disabled()
    }

    /// Which model this configuration amounts to.
    pub fn model_label(&self) -> &'static str {
        match (self.solver, self.reconstruction_enabled()) {
            (SolverKind::Sgn, true) => "HSGN",
            (SolverKind::Sgn, false) => "HSGN-I (SGN without reconstruction)",
            (SolverKind::Snmf, true) => "HOP reconstruction + SNMF baseline (HSGN-II-style, not GSNMF)",
            (SolverKind::Snmf, false) => "SNMF baseline",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSummary {
    pub passes: Vec<PassRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub iters: usize,
    pub objective: f64,
    pub nmi: Option<f64>,
    pub purity: Option<f64>,
    /// Objective after each iteration.
    pub trace: Vec<f64>,
    /// Excluded from any determinism comparison.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub nmi_mean: Option<f64>,
    pub nmi_std: Option<f64>,
    pub purity_mean: Option<f64>,
    pub purity_std: Option<f64>,
    /// Always `"population"`: std divides by the trial count.
    pub std_convention: String,
}

impl Aggregate {
    pub fn from_trials(trials: &[TrialRecord]) -> Self {
        let collect = |f: fn(&TrialRecord) -> Option<f64>| -> Option<Vec<f64>> { trials.iter().map(f).collect() };
        let (nmi_mean, nmi_std) = mean_std(collect(|t| t.nmi));
        let (purity_mean, purity_std) = mean_std(collect(|t| t.purity));
        Self {
            nmi_mean,
            nmi_std,
            purity_mean,
            purity_std,
            std_convention: "population".into(),
        }
    }
}

/// Population mean and standard deviation.
fn mean_std(values: Option<Vec<f64>>) -> (Option<f64>, Option<f64>) {
    match values {
        Some(v) if !v.is_empty() => {
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
            (Some(mean), Some(var.sqrt()))
        }
        _ => (None, None),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub nodes: usize,
    pub edges: usize,
    pub enhanced_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub model: String,
    pub config: PipelineConfig,
    pub network: NetworkSummary,
    pub reconstruction: ReconstructionSummary,
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
}

impl RunReport {
    /// Human-readable summary with metrics as percentages.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: n={} m={} enhanced m={} K={} trials={}\n",
            self.model,
            self.network.nodes,
            self.network.edges,
            self.network.enhanced_edges,
            self.config.k.unwrap_or(0),
            self.trials.len()
        );
        for (i, p) in self.reconstruction.passes.iter().enumerate() {
            s += &format!("  pass {}: +{} edges ({} -> {})\n", i + 1, p.edges_added, p.edges_before, p.edges_after);
        }
        let pct = |m: Option<f64>, sd: Option<f64>| match (m, sd) {
            (Some(m), Some(sd)) => format!("{:.2}±{:.2}%", 100.0 * m, 100.0 * sd),
            _ => "n/a".to_owned(),
        };
        s += &format!(
            "  NMI {}  Purity {}\n",
            pct(self.aggregate.nmi_mean, self.aggregate.nmi_std),
            pct(self.aggregate.purity_mean, self.aggregate.purity_std)
        );
        s
    }
}

/// A report plus the artifacts the CLI can dump.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub report: RunReport,
    pub enhanced: Graph,
    /// Final community indicator `X` of every trial, in trial order.
    pub indicators: Vec<Array2<f64>>,
}

fn resolve_k(cfg: &PipelineConfig, truth: Option<&GroundTruth>) -> Result<usize> {
    match (cfg.k, truth) {
        (Some(k), _) => Ok(k),
        (None, Some(t)) => Ok(t.community_count()),
        (None, None) => Err(Error::param("K is required when no ground truth is given")),
    }
}

pub fn run_pipeline(graph: &Graph, truth: Option<&GroundTruth>, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let k = resolve_k(cfg, truth)?;
    if let Some(t) = truth {
        if t.len() != graph.node_count() {
            return Err(Error::Shape(format!(
                "ground truth labels {} nodes, graph has {}",
                t.len(),
                graph.node_count()
            )));
        }
    }
    let mut cfg = cfg.clone();
    cfg.k = Some(k);

    let (passes, enhanced) = if cfg.reconstruction_enabled() {
        let rep = reconstruct_iterative(graph, cfg.r, cfg.epsilon, cfg.d)?;
        (rep.passes, rep.final_graph)
    } else {
        (Vec::new(), graph.clone())
    };

    let results: Vec<(TrialRecord, Array2<f64>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(&enhanced, truth, &cfg, k, cfg.seed.wrapping_add(t as u64)))
        .collect::<Result<_>>()?;
    let (trials, indicators): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let report = RunReport {
        model: cfg.model_label().to_owned(),
        network: NetworkSummary {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            enhanced_edges: enhanced.edge_count(),
        },
        reconstruction: ReconstructionSummary { passes },
        aggregate: Aggregate::from_trials(&trials),
        trials,
        config: cfg,
    };
    Ok(PipelineOutput {
        report,
        enhanced,
        indicators,
    })
}

fn run_trial(
    enhanced: &Graph,
    truth: Option<&GroundTruth>,
    cfg: &PipelineConfig,
    k: usize,
    seed: u64,
) -> Result<(TrialRecord, Array2<f64>)> {
    let start = Instant::now();
    let (x, iters, objective, trace) = match cfg.solver {
        SolverKind::Sgn => {
            let out = sgn_train(enhanced, &cfg.sgn_config(k, seed))?;
            let (iters, obj) = (out.iterations(), out.final_objective());
            (out.factors.x, iters, obj, out.trace)
        }
        SolverKind::Snmf => {
            let out = snmf_train(enhanced, k, seed, cfg.tol, cfg.max_iters)?;
            let (iters, obj) = (out.iterations(), out.final_objective());
            (out.x, iters, obj, out.trace)
        }
    };
    let partition = assign(&x);
    let (nmi, purity) = match truth {
        Some(t) => {
            let c = Contingency::from_labels(&partition.assignment, t.labels())?;
            (Some(c.nmi(cfg.nmi_normalization)), Some(c.purity()))
        }
        None => (None, None),
    };
    let record = TrialRecord {
        seed,
        iters,
        objective,
        nmi,
        purity,
        trace,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok((record, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Theta,
    Lambda,
    Epsilon,
    R,
    D,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axes: Vec<&str> = s.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        if axes.len() != 1 {
            return Err(Error::param(format!("exactly one sweep axis is allowed, got `{s}`")));
        }
        match axes[0] {
            "theta" => Ok(SweepAxis::Theta),
            "lambda" => Ok(SweepAxis::Lambda),
            "epsilon" => Ok(SweepAxis::Epsilon),
            "r" => Ok(SweepAxis::R),
            "d" => Ok(SweepAxis::D),
            other => Err(Error::param(format!("unknown sweep axis `{other}`"))),
        }
    }
}

impl SweepAxis {
    /// The grid searched for this axis during tuning.
    pub fn default_grid(&self) -> Vec<String> {
        let v: Vec<String> = match self {
            SweepAxis::Theta => [-8, -5, -3, -1, 0, 1].iter().map(|e| 2f64.powi(*e).to_string()).collect(),
            SweepAxis::Lambda => ["0.01", "0.1", "1", "10", "100", "1000"].map(String::from).into(),
            SweepAxis::Epsilon => ["2", "5", "10", "15", "20"].map(String::from).into(),
            SweepAxis::R | SweepAxis::D => (1..=6).map(|i| i.to_string()).collect(),
        };
        v
    }

    fn apply(&self, base: &PipelineConfig, value: &str) -> Result<PipelineConfig> {
        let bad = || Error::param(format!("invalid {self:?} grid value `{value}`"));
        let mut cfg = base.clone();
        match self {
            SweepAxis::Theta => cfg.theta = value.trim().parse().map_err(|_| bad())?,
            SweepAxis::Lambda => cfg.lambda = value.trim().parse().map_err(|_| bad())?,
            SweepAxis::Epsilon => cfg.epsilon = value.parse()?,
            SweepAxis::R => cfg.r = value.trim().parse().map_err(|_| bad())?,
            SweepAxis::D => cfg.d = value.trim().parse().map_err(|_| bad())?,
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub index: usize,
    pub value: String,
    pub report: RunReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
}

/// Runs the pipeline once per grid value with every other setting fixed.
pub fn sweep(
    graph: &Graph,
    truth: Option<&GroundTruth>,
    base: &PipelineConfig,
    axis: SweepAxis,
    grid: &[String],
) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(Error::param("sweep grid is empty"));
    }
    let configs: Vec<PipelineConfig> = grid.iter().map(|v| axis.apply(base, v)).collect::<Result<_>>()?;
    let points = configs
        .iter()
        .zip(grid)
        .enumerate()
        .map(|(index, (cfg, value))| {
            Ok(SweepPoint {
                index,
                value: value.trim().to_owned(),
                report: run_pipeline(graph, truth, cfg)?.report,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport { axis, points })
}

/// One row per node, `K` values in scientific notation with 9 significant digits.
pub fn write_matrix<W: Write>(m: &Array2<f64>, mut out: W) -> Result<()> {
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.8e}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
