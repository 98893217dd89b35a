//! Run configuration: JSON file merged with command-line flags.

use std::path::{Path, PathBuf};

use qha::multiplier::{bochner_riesz, constant, gaussian_symbol, sine_symbol};
use qha::{io, LineGrid, MultiplierSymbol, PhaseGrid};
use serde::Deserialize;

use crate::Flags;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: Option<usize>,
    pub length: Option<f64>,
    pub d: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    pub family: String,
    pub delta: Option<f64>,
    pub eps: Option<f64>,
    pub value: Option<f64>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub grid: GridConfig,
    pub symbol: Option<SymbolConfig>,
    pub seed: Option<u64>,
    pub eps2: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub ladder: Option<Vec<usize>>,
}

/// Fully resolved settings for one command.
#[derive(Debug)]
pub struct Settings {
    pub n: usize,
    pub length: f64,
    pub seed: u64,
    pub symbol: Option<SymbolConfig>,
    pub eps2: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub ladder: Vec<usize>,
    pub out: PathBuf,
    pub frozen_clock: bool,
    /// Base directory for relative symbol paths.
    pub base: PathBuf,
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t {
                "inf" | "infinity" | "Infinity" => Ok(f64::INFINITY),
                _ => t.parse::<f64>().map_err(|_| format!("cannot parse {t:?} as a number")),
            }
        })
        .collect()
}

impl Settings {
    pub fn resolve(flags: &Flags, default_n: usize, default_length: f64) -> Result<Self, String> {
        let (file, base) = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let cfg: FileConfig =
                    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))?;
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                (cfg, base)
            }
            None => (FileConfig::default(), PathBuf::new()),
        };
        if let Some(d) = file.grid.d {
            if d != 1 {
                return Err(format!("only d = 1 is supported, config asks for d = {d}"));
            }
        }
        let symbol = match &flags.symbol {
            Some(family) => Some(SymbolConfig {
                family: family.clone(),
                delta: flags.delta,
                eps: flags.eps,
                value: flags.value,
                path: flags.path.clone(),
            }),
            None => file.symbol,
        };
        let list = |flag: &Option<String>, file: Option<Vec<f64>>| -> Result<Option<Vec<f64>>, String> {
            match flag {
                Some(s) => parse_list(s).map(Some),
                None => Ok(file),
            }
        };
        if flags.config.is_some() && file.seed.is_none() && flags.seed.is_none() {
            return Err("config must specify a seed".into());
        }
        Ok(Self {
            n: flags.n.or(file.grid.n).unwrap_or(default_n),
            length: flags.length.or(file.grid.length).unwrap_or(default_length),
            seed: flags.seed.or(file.seed).unwrap_or(0x5eed),
            symbol,
            eps2: list(&flags.eps2, file.eps2)?,
            p: list(&flags.p, file.p)?,
            q: list(&flags.q, file.q)?,
            ladder: file.ladder.unwrap_or_else(|| vec![16, 32, 64, 128]),
            out: flags.out.clone(),
            frozen_clock: flags.frozen_clock,
            base,
        })
    }

    pub fn line(&self) -> Result<LineGrid, String> {
        LineGrid::with_length(self.n, self.length).map_err(|e| e.to_string())
    }

    pub fn phase(&self) -> Result<PhaseGrid, String> {
        Ok(PhaseGrid::new(self.line()?))
    }
}

impl SymbolConfig {
    pub fn build(&self, grid: &PhaseGrid, base: &Path) -> Result<MultiplierSymbol, String> {
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| format!("symbol family {} needs {key:?}", self.family));
        let m = match self.family.as_str() {
            "bochner_riesz" => bochner_riesz(grid, need(self.delta, "delta")?),
            "gaussian" => gaussian_symbol(grid, need(self.eps, "eps")?),
            "sine" => Ok(sine_symbol(grid)),
            "constant" => Ok(constant(grid, need(self.value, "value")?)),
            "csv" => {
                let path = self.path.as_ref().ok_or("symbol family csv needs \"path\"")?;
                let path = if path.is_absolute() { path.clone() } else { base.join(path) };
                let table = io::read_phase_csv(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                if table.grid.n() != grid.n() || (table.grid.x.h() - grid.x.h()).abs() > 1e-12 * grid.x.h() {
                    return Err(format!(
                        "symbol table has n = {}, h = {}; run grid has n = {}, h = {}",
                        table.grid.n(),
                        table.grid.x.h(),
                        grid.n(),
                        grid.x.h()
                    ));
                }
                let table = qha::PhaseFunction::new(grid.clone(), table.values).map_err(|e| e.to_string())?;
                MultiplierSymbol::new(path.display().to_string(), table, None)
            }
            other => return Err(format!("unknown symbol family {other:?}")),
        };
        m.map_err(|e| e.to_string())
    }
}
