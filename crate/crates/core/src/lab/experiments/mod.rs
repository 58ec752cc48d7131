mod analysis;
mod norm_laws;
mod operator_laws;

use std::collections::BTreeMap;

use super::config::{ExperimentConfig, GridSpec, SymbolSpec};
use super::corpus::{CorpusKind, CorpusSpec};
use super::report::{Case, Table};
use crate::error::Result;

/// CSV artifacts keyed by file name.
pub type Tables = BTreeMap<String, Table>;

type Runner = fn(&ExperimentConfig, &mut Tables) -> Result<Vec<Case>>;

pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    pub default_config: fn() -> ExperimentConfig,
    pub run: Runner,
}

pub fn registry() -> &'static [Experiment] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

static REGISTRY: &[Experiment] = &[
    Experiment {
        name: "partition",
        summary: "dyadic windows sum to one at random frequencies",
        default_config: partition_config,
        run: analysis::partition,
    },
    Experiment {
        name: "retract",
        summary: "R(S(m)) = m for compactly supported symbols",
        default_config: retract_config,
        run: analysis::retract,
    },
    Experiment {
        name: "fraccalc",
        summary: "fractional integrals and derivatives against closed forms",
        default_config: fraccalc_config,
        run: analysis::fraccalc,
    },
    Experiment {
        name: "reproduction",
        summary: "m(t xi) rebuilt from m~ by a fractional integral",
        default_config: reproduction_config,
        run: analysis::reproduction,
    },
    Experiment {
        name: "domination",
        summary: "pointwise |M_m f|^2 <= C G_m~(f)^2 over the corpus",
        default_config: domination_config,
        run: operator_laws::domination,
    },
    Experiment {
        name: "theorem_ratio",
        summary: "||M_m f||_p / (||m||_Sigma2(B) ||f||_p) and its stability",
        default_config: theorem_ratio_config,
        run: operator_laws::theorem_ratio,
    },
    Experiment {
        name: "embedding",
        summary: "norms of m~ bounded by shell norms of m",
        default_config: embedding_config,
        run: norm_laws::embedding,
    },
    Experiment {
        name: "scaling_claim",
        summary: "||m - m(s.)|| against (1-s)^(1/2+2eps) ||m||",
        default_config: scaling_config,
        run: norm_laws::scaling_claim,
    },
    Experiment {
        name: "norm_equivalence",
        summary: "weighted integral forms against dyadic Sobolev norms",
        default_config: equivalence_config,
        run: norm_laws::norm_equivalence,
    },
    Experiment {
        name: "slow_decay",
        summary: "shell-norm decay law and summability threshold of e^{i|xi|^a}|xi|^-b",
        default_config: slow_decay_config,
        run: norm_laws::slow_decay,
    },
    Experiment {
        name: "convergence",
        summary: "half-wave difference quotients as t -> 0",
        default_config: convergence_config,
        run: operator_laws::convergence,
    },
    Experiment {
        name: "limited_decay",
        summary: "shell laws of the limited-decay model and sphere-mean convergence",
        default_config: limited_decay_config,
        run: operator_laws::limited_decay,
    },
];

fn sym(family: &str, params: &[(&str, f64)]) -> SymbolSpec {
    SymbolSpec::new(family, params)
}

fn band_limited_family() -> Vec<SymbolSpec> {
    vec![
        sym("window", &[]),
        sym("ring", &[("c", 1.0)]),
        sym("oscillating_ring", &[("k", 2.0)]),
    ]
}

fn partition_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("partition");
    c.params.insert("samples".into(), 10_000.0);
    c
}

fn retract_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("retract");
    c.symbol_grid = GridSpec::with_nyquist(1, 4096, 4.0);
    c.window = crate::dyadic::WindowFamily::new(-4, 4).expect("valid range");
    c.symbols = band_limited_family();
    c
}

fn fraccalc_config() -> ExperimentConfig {
    ExperimentConfig::base("fraccalc")
}

fn reproduction_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("reproduction");
    c.symbols = vec![
        sym("window", &[]),
        sym("ring", &[("c", 1.0)]),
        sym("slow_decay", &[("alpha", 0.5), ("beta", 1.0), ("cutoff", 1.0)]),
    ];
    c.s_values = vec![0.6, 0.8, 1.0, 1.3, 1.7];
    c
}

fn domination_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("domination");
    c.symbols = band_limited_family();
    c.symbols
        .push(sym("slow_decay", &[("alpha", 0.5), ("beta", 1.0), ("cutoff", 1.0)]));
    c.symbols.push(sym("limited_decay", &[("a", 1.0), ("b", 2.0)]));
    c
}

fn theorem_ratio_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("theorem_ratio");
    c.symbols = vec![
        sym("window", &[]),
        sym("ring", &[("c", 1.0)]),
        sym("slow_decay", &[("alpha", 0.5), ("beta", 1.0), ("cutoff", 1.0)]),
        sym("bump", &[]),
    ];
    c.p_values = vec![4.0 / 3.0, 2.0, 4.0];
    c.params.insert("delta".into(), 0.1);
    c
}

fn embedding_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("embedding");
    c.symbols = band_limited_family();
    c.symbols.push(sym("oscillating_ring", &[("k", 6.0)]));
    c.s_values = vec![0.0, 1.0];
    c
}

fn scaling_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("scaling_claim");
    c.symbols = band_limited_family();
    c.symbols
        .push(sym("slow_decay", &[("alpha", 0.5), ("beta", 1.0), ("cutoff", 1.0)]));
    c.symbols.push(sym("limited_decay", &[("a", 1.0), ("b", 2.0)]));
    c.s_values = vec![0.9, 0.99, 0.999];
    c
}

fn equivalence_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("norm_equivalence");
    c.symbol_grid = GridSpec::with_nyquist(1, 16384, 8.0);
    c.window = crate::dyadic::WindowFamily::new(-8, 8).expect("valid range");
    c.symbols = band_limited_family();
    c.params.insert("alpha".into(), 0.3);
    c
}

fn slow_decay_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("slow_decay");
    c.symbol_grid = GridSpec::with_nyquist(1, 65536, 2.0);
    c.s_values = (0..=20).map(|k| 1.0 + 0.1 * k as f64).collect();
    c
}

fn convergence_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("convergence");
    c.corpus = CorpusSpec {
        kind: CorpusKind::Packet,
        count: 5,
        ..CorpusSpec::for_nyquist(1.0)
    };
    c.p_values = vec![2.0, 3.0];
    c.params.insert("alpha".into(), 0.5);
    c.params.insert("beta".into(), 0.75);
    c.params.insert("levels".into(), 12.0);
    c
}

fn limited_decay_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::base("limited_decay");
    c.grid = GridSpec::with_nyquist(3, 64, 2.0);
    c.corpus = CorpusSpec {
        count: 4,
        ..CorpusSpec::for_nyquist(2.0)
    };
    c.symbol_grid = GridSpec::with_nyquist(1, 65536, 2.0);
    c.symbols = vec![sym("limited_decay", &[("a", 1.0), ("b", 2.0)])];
    c.s_values = vec![0.0, 1.0, 2.0];
    c.params.insert("alpha".into(), 0.5);
    c.params.insert("levels".into(), 10.0);
    c
}
