use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cover_lrc::block_codes::TamoBarg;
use cover_lrc::counting::{Construction, Mode};
use cover_lrc::Field;
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "COVER_LRC_SEED";

/// Invalid configuration; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Errors,
    Erasures,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Errors => Mode::Errors,
            ModeArg::Erasures => Mode::Erasures,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionArg {
    Cover,
    Rank,
    Both,
}

impl ConstructionArg {
    pub fn includes(self, c: Construction) -> bool {
        matches!(
            (self, c),
            (ConstructionArg::Both, _)
                | (ConstructionArg::Cover, Construction::Cover)
                | (ConstructionArg::Rank, Construction::Rank)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Field given as `p,m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
}

impl std::str::FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (p, m) = s
            .split_once(',')
            .ok_or_else(|| format!("expected p,m, got {s:?}"))?;
        let p = p
            .trim()
            .parse()
            .map_err(|e| format!("bad characteristic {p:?}: {e}"))?;
        let m = m
            .trim()
            .parse()
            .map_err(|e| format!("bad degree {m:?}: {e}"))?;
        Ok(FieldSpec { p, m })
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        format!("{},{}", f.p, f.m)
    }
}

/// Every setting, from flags or a JSON file. Flags win over the file; the
/// seed falls back to `COVER_LRC_SEED`, then 0.
#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// JSON file with any of these settings
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Array size n (n x n)
    #[arg(long)]
    pub n: Option<usize>,
    /// Array code dimension, n * k'
    #[arg(long)]
    pub k: Option<usize>,
    /// Constituent code dimension k'
    #[arg(long)]
    pub kprime: Option<usize>,
    /// Locality r
    #[arg(long)]
    pub r: Option<usize>,
    /// Local distance rho
    #[arg(long)]
    pub rho: Option<usize>,
    /// Field as p,m; default is the smallest field that fits
    #[arg(long)]
    pub field: Option<FieldSpec>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub construction: Option<ConstructionArg>,
    #[arg(long)]
    pub t_min: Option<usize>,
    #[arg(long)]
    pub t_max: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// RNG seed [env: COVER_LRC_SEED]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! merge_fields {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl ExperimentConfig {
    /// Fills unset flags from the config file, if one was given.
    pub fn load(mut self) -> anyhow::Result<Self> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            let file: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| invalid(format!("bad config {}: {e}", path.display())))?;
            merge_fields!(self, file; n, k, kprime, r, rho, field, mode, construction,
                t_min, t_max, trials, seed, out, format);
        }
        Ok(self)
    }

    pub fn seed(&self) -> anyhow::Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| invalid(format!("{SEED_ENV}={v:?} is not a u64"))),
            Err(_) => Ok(0),
        }
    }

    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn any_code_param(&self) -> bool {
        self.n.is_some()
            || self.k.is_some()
            || self.kprime.is_some()
            || self.r.is_some()
            || self.rho.is_some()
    }

    /// Code parameters. With none given, the 9 x 9 instance with k' = 4,
    /// r = 2, rho = 2.
    pub fn code_params(&self, need_kprime: bool) -> anyhow::Result<CodeParams> {
        if !self.any_code_param() {
            return Ok(CodeParams {
                n: 9,
                kprime: Some(4),
                r: 2,
                rho: 2,
            });
        }
        let n = self.n.ok_or_else(|| invalid("--n is required"))?;
        let r = self.r.ok_or_else(|| invalid("--r is required"))?;
        let rho = self.rho.ok_or_else(|| invalid("--rho is required"))?;
        if n == 0 || r == 0 || rho == 0 {
            return Err(invalid("n, r and rho must be positive"));
        }
        let from_k = match self.k {
            Some(k) if k % n != 0 => {
                return Err(invalid(format!("n = {n} does not divide k = {k}")))
            }
            Some(k) => Some(k / n),
            None => None,
        };
        let kprime = match (from_k, self.kprime) {
            (Some(a), Some(b)) if a != b => {
                return Err(invalid(format!("k / n = {a} disagrees with k' = {b}")))
            }
            (a, b) => a.or(b),
        };
        if need_kprime && kprime.is_none() {
            return Err(invalid("one of --k or --kprime is required"));
        }
        let n_l = r + rho - 1;
        if n % n_l != 0 {
            return Err(invalid(format!(
                "n_l = r + rho - 1 = {n_l} does not divide n = {n}"
            )));
        }
        Ok(CodeParams { n, kprime, r, rho })
    }

    pub fn field_for(&self, p: &CodeParams) -> anyhow::Result<Field> {
        match self.field {
            Some(FieldSpec { p: ch, m }) => Field::new(ch, m).map_err(|e| invalid(e.to_string())),
            None => TamoBarg::smallest_field(p.n, p.n_l()).map_err(|e| invalid(e.to_string())),
        }
    }

    /// Inclusive t-range, defaulting to `default`, checked against `[0, 2n]`.
    pub fn t_range(&self, n: usize, default: (usize, usize)) -> anyhow::Result<(usize, usize)> {
        let lo = self.t_min.unwrap_or(default.0);
        let hi = self.t_max.unwrap_or(default.1);
        if lo > hi {
            return Err(invalid(format!("t-min {lo} exceeds t-max {hi}")));
        }
        if hi > 2 * n {
            return Err(invalid(format!("t-max {hi} exceeds 2n = {}", 2 * n)));
        }
        Ok((lo, hi))
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub kprime: Option<usize>,
    pub r: usize,
    pub rho: usize,
}

impl CodeParams {
    pub fn n_l(&self) -> usize {
        self.r + self.rho - 1
    }
}
