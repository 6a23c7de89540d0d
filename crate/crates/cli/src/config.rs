//! Run configuration: command-line flags layered over an optional TOML file
//! layered over built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use flopgw::algebra::rational::parse_rational;
use flopgw::batyrev::GaussianRational;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flags shared by every subcommand. Unset flags fall through to the config
/// file, then to the defaults.
#[derive(Args, Debug, Default, Clone)]
pub struct Opts {
    /// r values: a single value, a range `a..b` (inclusive) or a list `1,3,5`
    #[arg(long)]
    pub r: Option<String>,
    /// truncation order for series checks
    #[arg(long)]
    pub order: Option<u32>,
    /// largest degree in the genus-one table
    #[arg(long)]
    pub dmax: Option<u32>,
    /// order N of the R-matrix recursion
    #[arg(long = "rmatrix-order")]
    pub rmatrix_order: Option<usize>,
    /// largest m for delta^m G
    #[arg(long = "max-m")]
    pub max_m: Option<u32>,
    /// largest n for the n-point invariance chain
    #[arg(long = "max-n")]
    pub max_n: Option<u32>,
    /// numeric sample point (q1, q2) as "re,im re,im"
    #[arg(long)]
    pub sample: Option<String>,
    /// agreement tolerance between the two eigenvalue routes
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// minimal pairwise eigenvalue gap
    #[arg(long = "gap-tolerance")]
    pub gap_tolerance: Option<f64>,
    /// vector-space dimension N of the quantization toy
    #[arg(long)]
    pub dim: Option<usize>,
    /// loop-space cutoff K of the quantization toy
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// omit wall-clock timing from reports
    #[arg(long = "no-timing")]
    pub no_timing: bool,
    /// TOML config file
    #[arg(long, env = "FLOPGW_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(untagged)]
enum RSpec {
    Single(u32),
    Text(String),
    #[default]
    Unset,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    r: RSpec,
    order: Option<u32>,
    dmax: Option<u32>,
    rmatrix_order: Option<usize>,
    max_m: Option<u32>,
    max_n: Option<u32>,
    sample: Option<String>,
    tolerance: Option<f64>,
    gap_tolerance: Option<f64>,
    dim: Option<usize>,
    cutoff: Option<usize>,
    format: Option<Format>,
    out: Option<PathBuf>,
    timing: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub r: Vec<u32>,
    pub order: u32,
    pub dmax: u32,
    pub rmatrix_order: usize,
    pub max_m: u32,
    pub max_n: u32,
    pub sample: (GaussianRational, GaussianRational),
    pub tolerance: f64,
    pub gap_tolerance: f64,
    pub dim: usize,
    pub cutoff: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

pub const DEFAULT_SAMPLE: &str = "3/10,0 7/10,0";

/// Parses `2`, `1..3`, `1..=3` or `1,3,5`. Ranges are inclusive.
pub fn parse_r(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    let parse = |t: &str| -> Result<u32> {
        let v: u32 = t.trim().parse().with_context(|| format!("invalid r value {t:?}"))?;
        if v == 0 {
            bail!("r must be positive");
        }
        Ok(v)
    };
    let out = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
        if a > b {
            bail!("empty r range {s:?}");
        }
        (a..=b).collect()
    } else {
        let mut v = s.split(',').map(parse).collect::<Result<Vec<_>>>()?;
        v.sort_unstable();
        v.dedup();
        v
    };
    Ok(out)
}

fn parse_gaussian(s: &str) -> Result<GaussianRational> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = parse_rational(re).map_err(|e| anyhow::anyhow!("{e}"))?;
    let im = parse_rational(im).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(GaussianRational::new(re, im))
}

pub fn parse_sample(s: &str) -> Result<(GaussianRational, GaussianRational)> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 2 {
        bail!("sample must be two points \"re,im re,im\", got {s:?}");
    }
    Ok((parse_gaussian(parts[0])?, parse_gaussian(parts[1])?))
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(name: &str, v: T) -> Result<T> {
    if v <= T::default() {
        bail!("{name} must be positive, got {v}");
    }
    Ok(v)
}

impl RunConfig {
    pub fn resolve(opts: &Opts) -> Result<Self> {
        let file = match &opts.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        let r = match (&opts.r, &file.r) {
            (Some(s), _) => parse_r(s)?,
            (None, RSpec::Single(v)) => parse_r(&v.to_string())?,
            (None, RSpec::Text(s)) => parse_r(s)?,
            (None, RSpec::Unset) => vec![1, 2, 3],
        };
        let sample = opts.sample.clone().or(file.sample).unwrap_or_else(|| DEFAULT_SAMPLE.to_string());
        let tolerance = opts.tolerance.or(file.tolerance).unwrap_or(1e-9);
        let gap_tolerance = opts.gap_tolerance.or(file.gap_tolerance).unwrap_or(1e-6);
        if !(tolerance > 0.0 && gap_tolerance > 0.0) {
            bail!("tolerances must be positive");
        }
        Ok(RunConfig {
            r,
            order: positive("order", opts.order.or(file.order).unwrap_or(10))?,
            dmax: positive("dmax", opts.dmax.or(file.dmax).unwrap_or(10))?,
            rmatrix_order: positive("rmatrix-order", opts.rmatrix_order.or(file.rmatrix_order).unwrap_or(2))?,
            max_m: positive("max-m", opts.max_m.or(file.max_m).unwrap_or(7))?,
            max_n: positive("max-n", opts.max_n.or(file.max_n).unwrap_or(6))?,
            sample: parse_sample(&sample)?,
            tolerance,
            gap_tolerance,
            dim: positive("dim", opts.dim.or(file.dim).unwrap_or(2))?,
            cutoff: positive("cutoff", opts.cutoff.or(file.cutoff).unwrap_or(5))?,
            format: opts.format.or(file.format).unwrap_or(Format::Json),
            out: opts.out.clone().or(file.out),
            timing: !opts.no_timing && file.timing.unwrap_or(true),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_forms() {
        assert_eq!(parse_r("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_r("2..=4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_r("5").unwrap(), vec![5]);
        assert_eq!(parse_r("3,1,3").unwrap(), vec![1, 3]);
        assert!(parse_r("0..2").is_err());
        assert!(parse_r("3..1").is_err());
        assert!(parse_r("x").is_err());
    }

    #[test]
    fn sample_parsing() {
        let (a, b) = parse_sample("3/10,0 7/10,1/2").unwrap();
        assert_eq!(a, GaussianRational::new(parse_rational("3/10").unwrap(), parse_rational("0").unwrap()));
        assert_eq!(b.im, parse_rational("1/2").unwrap());
        assert!(parse_sample("1,0").is_err());
    }

    #[test]
    fn defaults_and_precedence() {
        let cfg = RunConfig::resolve(&Opts::default()).unwrap();
        assert_eq!(cfg.r, vec![1, 2, 3]);
        assert_eq!((cfg.order, cfg.dmax, cfg.rmatrix_order), (10, 10, 2));
        assert_eq!(cfg.format, Format::Json);

        let dir = std::env::temp_dir().join(format!("flopgw-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.toml");
        std::fs::write(&path, "r = \"2..4\"\ndmax = 4\norder = 7\nformat = \"csv\"\n").unwrap();
        let opts = Opts { config: Some(path.clone()), order: Some(12), ..Default::default() };
        let cfg = RunConfig::resolve(&opts).unwrap();
        assert_eq!(cfg.r, vec![2, 3, 4]);
        assert_eq!(cfg.dmax, 4);
        assert_eq!(cfg.order, 12);
        assert_eq!(cfg.format, Format::Csv);

        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(RunConfig::resolve(&Opts { config: Some(path), ..Default::default() }).is_err());
    }

    #[test]
    fn bounds_must_be_positive() {
        assert!(RunConfig::resolve(&Opts { dmax: Some(0), ..Default::default() }).is_err());
        assert!(RunConfig::resolve(&Opts { tolerance: Some(-1.0), ..Default::default() }).is_err());
    }
}
