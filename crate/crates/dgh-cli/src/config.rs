//! Run configuration: JSON file merged with command-line overrides
//! (command line wins), echoed verbatim into every output header so runs
//! are reproducible from their artifacts alone.

use clap::Args;
use serde::{Deserialize, Serialize};

use dgh_waves::{
    constants_from_roots, make_problem, GridSpec, ModelParams, SweepAxes, SynthesisOptions,
    TravelingWaveProblem,
};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub c0: Option<f64>,
    pub gamma: Option<f64>,
    pub c: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    pub m: Option<f64>,
    #[serde(rename = "M")]
    pub big_m: Option<f64>,
    pub cluster_tol: Option<f64>,
    pub tail_tol: Option<f64>,
    pub residual_tol: Option<f64>,
    pub n_samples: Option<usize>,
    pub plateau_lengths: Option<Vec<f64>>,
    pub n_tests: Option<usize>,
    pub seed: Option<u64>,
    pub axes: Option<String>,
    pub a1_min: Option<f64>,
    pub a1_max: Option<f64>,
    pub n1: Option<usize>,
    pub a2_min: Option<f64>,
    pub a2_max: Option<f64>,
    pub n2: Option<usize>,
    pub n_modes: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub snapshot_stride: Option<usize>,
    pub output: Option<String>,
}

/// Command-line face of [`FileConfig`]; every key can also be overridden
/// on the command line, which takes precedence.
#[derive(Debug, Clone, Args, Default)]
pub struct ConfigArgs {
    /// JSON configuration file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<String>,

    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// First integration constant of the quadrature form.
    #[arg(long = "A")]
    pub a: Option<f64>,
    /// Second integration constant of the quadrature form.
    #[arg(long = "B")]
    pub b: Option<f64>,
    /// Lower prescribed root (alternative to A/B).
    #[arg(long)]
    pub m: Option<f64>,
    /// Upper prescribed root (alternative to A/B).
    #[arg(long = "M")]
    pub big_m: Option<f64>,

    /// Relative tolerance for clustering nearby roots.
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    /// Relative truncation of exponential tails.
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Pass threshold for residual-based gates.
    #[arg(long)]
    pub residual_tol: Option<f64>,
    /// Minimum samples per monotone branch.
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Plateau lengths for stumpon synthesis, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub plateau_lengths: Option<Vec<f64>>,
    /// Number of weak-form test functions.
    #[arg(long)]
    pub n_tests: Option<usize>,
    /// Seed for the weak-form test functions.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Sweep plane: "roots" for (m, M), "constants" for (A, B).
    #[arg(long)]
    pub axes: Option<String>,
    #[arg(long)]
    pub a1_min: Option<f64>,
    #[arg(long)]
    pub a1_max: Option<f64>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub a2_min: Option<f64>,
    #[arg(long)]
    pub a2_max: Option<f64>,
    #[arg(long)]
    pub n2: Option<usize>,

    /// Spectral modes for evolution (power of two).
    #[arg(long)]
    pub n_modes: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Steps between evolution snapshots.
    #[arg(long)]
    pub snapshot_stride: Option<usize>,

    /// Output file path.
    #[arg(long)]
    pub output: Option<String>,
}

/// Fully resolved configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha: f64,
    pub c0: f64,
    pub gamma: f64,
    pub c: f64,
    pub constants: ProblemSpec,
    pub cluster_tol: f64,
    pub tail_tol: f64,
    pub residual_tol: f64,
    pub n_samples: usize,
    pub plateau_lengths: Vec<f64>,
    pub n_tests: usize,
    pub seed: u64,
    pub axes: String,
    pub a1_min: f64,
    pub a1_max: f64,
    pub n1: usize,
    pub a2_min: f64,
    pub a2_max: f64,
    pub n2: usize,
    pub n_modes: usize,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub enum ProblemSpec {
    Constants { a: f64, b: f64 },
    Roots { m: f64, big_m: f64 },
}

pub fn resolve(args: &ConfigArgs) -> Result<RunConfig, String> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            serde_json::from_str(&text).map_err(|e| format!("malformed config {path}: {e}"))?
        }
        None => FileConfig::default(),
    };
    macro_rules! pick {
        ($field:ident) => {
            args.$field.clone().or(file.$field.clone())
        };
    }
    let alpha = pick!(alpha).ok_or("missing parameter: alpha")?;
    let c0 = pick!(c0).ok_or("missing parameter: c0")?;
    let gamma = pick!(gamma).ok_or("missing parameter: gamma")?;
    let c = pick!(c).ok_or("missing parameter: c")?;

    let a = pick!(a);
    let b = pick!(b);
    let m = pick!(m);
    let big_m = pick!(big_m);
    let constants = match (a, b, m, big_m) {
        (Some(a), Some(b), None, None) => ProblemSpec::Constants { a, b },
        (None, None, Some(m), Some(big_m)) => ProblemSpec::Roots { m, big_m },
        _ => {
            return Err(
                "exactly one of the pairs (A, B) or (m, M) must be given".to_string(),
            )
        }
    };

    Ok(RunConfig {
        alpha,
        c0,
        gamma,
        c,
        constants,
        cluster_tol: pick!(cluster_tol).unwrap_or(1e-9),
        tail_tol: pick!(tail_tol).unwrap_or(1e-6),
        residual_tol: pick!(residual_tol).unwrap_or(1e-5),
        n_samples: pick!(n_samples).unwrap_or(512),
        plateau_lengths: pick!(plateau_lengths).unwrap_or_default(),
        n_tests: pick!(n_tests).unwrap_or(20),
        seed: pick!(seed).unwrap_or(0),
        axes: pick!(axes).unwrap_or_else(|| "roots".to_string()),
        a1_min: pick!(a1_min).unwrap_or(-1.0),
        a1_max: pick!(a1_max).unwrap_or(1.0),
        n1: pick!(n1).unwrap_or(41),
        a2_min: pick!(a2_min).unwrap_or(-1.0),
        a2_max: pick!(a2_max).unwrap_or(1.0),
        n2: pick!(n2).unwrap_or(41),
        n_modes: pick!(n_modes).unwrap_or(256),
        dt: pick!(dt).unwrap_or(1e-4),
        t_end: pick!(t_end).unwrap_or(1.0),
        snapshot_stride: pick!(snapshot_stride).unwrap_or(0),
        output: pick!(output),
    })
}

impl RunConfig {
    pub fn problem(&self) -> Result<TravelingWaveProblem, dgh_waves::DghError> {
        let params = ModelParams::new(self.alpha, self.c0, self.gamma)?;
        let (a, b) = match self.constants {
            ProblemSpec::Constants { a, b } => (a, b),
            ProblemSpec::Roots { m, big_m } => {
                let (a, b, _) = constants_from_roots(&params, self.c, m, big_m);
                (a, b)
            }
        };
        make_problem(params, self.c, a, b)
    }

    pub fn synthesis_options(&self) -> SynthesisOptions {
        SynthesisOptions {
            n: self.n_samples,
            tail_tol: self.tail_tol,
        }
    }

    pub fn sweep_axes(&self) -> Result<SweepAxes, String> {
        match self.axes.as_str() {
            "roots" | "mM" => Ok(SweepAxes::RootInterval),
            "constants" | "AB" => Ok(SweepAxes::Constants),
            other => Err(format!("unknown sweep axes '{other}'")),
        }
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            x_min: self.a1_min,
            x_max: self.a1_max,
            nx: self.n1,
            y_min: self.a2_min,
            y_max: self.a2_max,
            ny: self.n2,
        }
    }

    /// Deterministic `# key=value` header block for every output file.
    pub fn header(&self) -> String {
        let mut out = String::new();
        let (spec_kind, v1, v2) = match self.constants {
            ProblemSpec::Constants { a, b } => ("AB", a, b),
            ProblemSpec::Roots { m, big_m } => ("mM", m, big_m),
        };
        out.push_str(&format!("# alpha={}\n", self.alpha));
        out.push_str(&format!("# c0={}\n", self.c0));
        out.push_str(&format!("# gamma={}\n", self.gamma));
        out.push_str(&format!("# c={}\n", self.c));
        out.push_str(&format!("# problem_spec={spec_kind}\n"));
        match self.constants {
            ProblemSpec::Constants { .. } => {
                out.push_str(&format!("# A={v1}\n# B={v2}\n"));
            }
            ProblemSpec::Roots { .. } => {
                out.push_str(&format!("# m={v1}\n# M={v2}\n"));
            }
        }
        out.push_str(&format!("# cluster_tol={}\n", self.cluster_tol));
        out.push_str(&format!("# tail_tol={}\n", self.tail_tol));
        out.push_str(&format!("# residual_tol={}\n", self.residual_tol));
        out.push_str(&format!("# n_samples={}\n", self.n_samples));
        out.push_str(&format!(
            "# plateau_lengths={}\n",
            self.plateau_lengths
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
        out.push_str(&format!("# n_tests={}\n", self.n_tests));
        out.push_str(&format!("# seed={}\n", self.seed));
        out.push_str(&format!("# axes={}\n", self.axes));
        out.push_str(&format!(
            "# sweep=[{},{}]x{} [{},{}]x{}\n",
            self.a1_min, self.a1_max, self.n1, self.a2_min, self.a2_max, self.n2
        ));
        out.push_str(&format!("# n_modes={}\n", self.n_modes));
        out.push_str(&format!("# dt={}\n", self.dt));
        out.push_str(&format!("# t_end={}\n", self.t_end));
        out.push_str(&format!("# snapshot_stride={}\n", self.snapshot_stride));
        out
    }
}
