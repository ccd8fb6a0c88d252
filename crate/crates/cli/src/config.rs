use std::path::{Path, PathBuf};

use clap::Args;
use oweno::claw::{Problem, ProblemKind};
use oweno::{DataMode, Scalar, Variant, WeightParams};
use serde::Deserialize;

use crate::error::CliError;

/// Settings shared by every subcommand. Each field can come from the command
/// line or from a TOML file given with `--config`; flags win.
#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// TOML file with the same keys as the flags (kebab-case).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Stencil half-width, 3..=6 (order 2r-1).
    #[arg(long)]
    pub r: Option<usize>,

    /// point, cell or both.
    #[arg(long)]
    pub mode: Option<String>,

    /// Comma-separated weight designs: js, z, yc, oweno.
    #[arg(long, value_delimiter = ',')]
    pub variants: Option<Vec<String>>,

    #[arg(long)]
    pub s1: Option<u32>,

    #[arg(long)]
    pub s2: Option<f64>,

    #[arg(long)]
    pub eps: Option<f64>,

    /// Arithmetic for order studies: f64 or dd.
    #[arg(long)]
    pub precision: Option<String>,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Number of refinement levels in order studies.
    #[arg(long)]
    pub levels: Option<usize>,

    /// Critical-point orders for the smooth study.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,

    /// Jump offsets for the discontinuous study.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<i64>>,

    /// advection, burgers, burgers-shock, cubic-zero or shu-osher.
    #[arg(long)]
    pub problem: Option<String>,

    /// Comma-separated grid sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,

    #[arg(long)]
    pub cfl: Option<f64>,

    #[arg(long)]
    pub t_final: Option<f64>,

    /// Write a per-level record of indicators and weights to this CSV file.
    #[arg(long)]
    pub trace: Option<PathBuf>,

    /// Also write solution snapshots in `convergence`.
    #[arg(long)]
    #[serde(default)]
    pub dump: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    F64,
    Dd,
}

impl RunConfig {
    /// Reads `--config` if given and fills every unset flag from it.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let file = load(&path)?;
        Ok(RunConfig {
            config: self.config,
            r: self.r.or(file.r),
            mode: self.mode.or(file.mode),
            variants: self.variants.or(file.variants),
            s1: self.s1.or(file.s1),
            s2: self.s2.or(file.s2),
            eps: self.eps.or(file.eps),
            precision: self.precision.or(file.precision),
            out: self.out.or(file.out),
            levels: self.levels.or(file.levels),
            k: self.k.or(file.k),
            theta: self.theta.or(file.theta),
            problem: self.problem.or(file.problem),
            n: self.n.or(file.n),
            cfl: self.cfl.or(file.cfl),
            t_final: self.t_final.or(file.t_final),
            trace: self.trace.or(file.trace),
            dump: self.dump || file.dump,
        })
    }

    pub fn r(&self) -> usize {
        self.r.unwrap_or(3)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("oweno-out"))
    }

    pub fn modes(&self, default: &[DataMode]) -> Result<Vec<DataMode>, CliError> {
        match self.mode.as_deref() {
            None => Ok(default.to_vec()),
            Some("both") => Ok(vec![DataMode::PointValues, DataMode::CellAverages]),
            Some(m) => Ok(vec![m.parse().map_err(CliError::Usage)?]),
        }
    }

    pub fn variants(&self, default: &[Variant]) -> Result<Vec<Variant>, CliError> {
        let Some(names) = &self.variants else { return Ok(default.to_vec()) };
        if names.is_empty() {
            return Err(CliError::Usage("variant list is empty".into()));
        }
        names.iter().map(|s| s.parse().map_err(CliError::Usage)).collect()
    }

    pub fn precision(&self, default: Precision) -> Result<Precision, CliError> {
        match self.precision.as_deref() {
            None => Ok(default),
            Some("f64") => Ok(Precision::F64),
            Some("dd") => Ok(Precision::Dd),
            Some(p) => Err(CliError::Usage(format!("unknown precision `{p}` (expected f64 or dd)"))),
        }
    }

    pub fn params<S: Scalar>(&self, variant: Variant, r: usize) -> Result<WeightParams<S>, CliError> {
        let mut p = WeightParams::<S>::default_for(variant, r);
        if self.s1.is_some() || self.s2.is_some() {
            p = p.with_exponents(self.s1.unwrap_or(p.s1), self.s2.unwrap_or(p.s2));
        }
        if let Some(eps) = self.eps {
            p = p.with_eps(S::from_f64(eps));
        }
        p.validate(r)?;
        Ok(p)
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        let name = self.problem.as_deref().ok_or_else(|| CliError::Usage("--problem is required".into()))?;
        let kind: ProblemKind = name.parse().map_err(CliError::Usage)?;
        let mut p = Problem::preset(kind);
        if let Some(cfl) = self.cfl {
            p.cfl = cfl;
        }
        if let Some(t) = self.t_final {
            p.t_final = t;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn grid_sizes(&self, default: &[usize]) -> Result<Vec<usize>, CliError> {
        let n = self.n.clone().unwrap_or_else(|| default.to_vec());
        if n.is_empty() {
            return Err(CliError::Usage("grid list is empty".into()));
        }
        Ok(n)
    }
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
