use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dyadic::WindowFamily;
use crate::error::{Error, Result};
use crate::operators::TGrid;
use crate::spectral::Grid;
use crate::symbols::{from_family, Symbol, FAMILIES};

use super::corpus::CorpusSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub n: usize,
    pub half_width: f64,
}

impl GridSpec {
    pub fn with_nyquist(dim: usize, n: usize, nyquist: f64) -> GridSpec {
        GridSpec {
            dim,
            n,
            half_width: n as f64 / (4.0 * nyquist),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dim, self.n, self.half_width)
    }

    fn from_grid(g: &Grid) -> GridSpec {
        GridSpec {
            dim: g.dim(),
            n: g.samples_per_axis(),
            half_width: g.half_width(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl SymbolSpec {
    pub fn new(family: &str, params: &[(&str, f64)]) -> SymbolSpec {
        SymbolSpec {
            family: family.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn build(&self) -> Result<Symbol> {
        from_family(&self.family, &self.params)
    }
}

/// Everything an experiment run depends on. Two runs with equal configs
/// produce identical metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: String,
    /// Grid for test functions and operators.
    pub grid: GridSpec,
    /// Grid whose frequency lattice carries sampled symbols for norms.
    pub symbol_grid: GridSpec,
    pub window: WindowFamily,
    pub tgrid: TGrid,
    pub epsilon: f64,
    pub symbols: Vec<SymbolSpec>,
    pub corpus: CorpusSpec,
    #[serde(default)]
    pub p_values: Vec<f64>,
    #[serde(default)]
    pub s_values: Vec<f64>,
    /// Experiment-specific scalars.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub refined: bool,
    pub output_dir: String,
}

impl ExperimentConfig {
    /// Shared defaults; each experiment adjusts them in its registry entry.
    pub fn base(experiment: &str) -> ExperimentConfig {
        let grid = GridSpec::with_nyquist(1, 4096, 1.0);
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.into(),
            grid,
            symbol_grid: GridSpec::with_nyquist(1, 8192, 2.0),
            window: WindowFamily::default(),
            tgrid: TGrid::default(),
            epsilon: 0.05,
            symbols: Vec::new(),
            corpus: CorpusSpec::for_nyquist(1.0),
            p_values: Vec::new(),
            s_values: Vec::new(),
            params: BTreeMap::new(),
            refined: false,
            output_dir: format!("out/{experiment}"),
        }
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema version {} (supported: {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let g = self.grid.grid()?;
        self.symbol_grid.grid()?;
        self.window.validate()?;
        self.tgrid.validate()?;
        crate::fraccalc::check_epsilon(self.epsilon)?;
        for s in &self.symbols {
            if !FAMILIES.contains(&s.family.as_str()) {
                return bad(format!("unknown symbol family {:?}", s.family));
            }
            s.build()?;
        }
        self.corpus.validate(&g)?;
        if self.p_values.iter().any(|p| p.is_nan() || *p < 1.0) {
            return bad("p values must be >= 1".into());
        }
        Ok(())
    }

    pub fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn fingerprint(&self) -> String {
        super::fingerprint(self)
    }

    /// Twice the samples on every grid and twice the dilation density.
    /// Operator grids keep their box, so test functions are unchanged;
    /// symbol grids keep their Nyquist frequency and halve the spacing.
    pub fn refined(&self) -> ExperimentConfig {
        let mut c = self.clone();
        if let Ok(g) = self.grid.grid() {
            c.grid = GridSpec::from_grid(&g.refined());
        }
        if let Ok(g) = self.symbol_grid.grid() {
            c.symbol_grid = GridSpec::from_grid(&g.refined_spectrum());
        }
        c.tgrid = self.tgrid.refined();
        c.refined = true;
        c
    }

    pub fn build_symbols(&self) -> Result<Vec<Symbol>> {
        self.symbols.iter().map(SymbolSpec::build).collect()
    }
}
