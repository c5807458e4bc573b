use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// Optional `key = value` file; every key is overridden by the matching flag.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub grid: Option<usize>,
    pub alpha: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub max_iters: Option<usize>,
    pub symmetrize_every: Option<usize>,
    pub step0: Option<f64>,
    pub vol_tol: Option<f64>,
    pub stop_tol: Option<f64>,
    pub smooth_cells: Option<f64>,
    pub init_area: Option<f64>,
    pub init_center: Option<String>,
    pub grids: Option<String>,
    pub n: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
            }
        }
    }
}

/// Comma-separated list of integers, e.g. `64,128,256`.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad integer {t:?} in {s:?}")))
        .collect()
}

/// Dimension list: `4`, `2,3,5`, `2..8` or `2..=8` (ranges are inclusive).
pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let dims = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().with_context(|| format!("bad range {s:?}"))?;
        let b: usize = b.trim().trim_start_matches('=').parse().with_context(|| format!("bad range {s:?}"))?;
        if b < a {
            bail!("empty dimension range {s:?}");
        }
        (a..=b).collect()
    } else {
        parse_list(s)?
    };
    if let Some(d) = dims.iter().find(|d| !(2..=8).contains(*d)) {
        bail!("dimension {d} outside 2..=8");
    }
    Ok(dims)
}

/// `x,y` pair.
pub fn parse_point(s: &str) -> Result<[f64; 2]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in {s:?}")))
        .collect::<Result<_>>()?;
    match v[..] {
        [x, y] => Ok([x, y]),
        _ => bail!("expected x,y, got {s:?}"),
    }
}
