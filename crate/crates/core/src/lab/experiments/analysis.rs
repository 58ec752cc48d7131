//! Checks of the analytic building blocks against closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Tables;
use crate::error::Result;
use crate::fraccalc::{
    marchaud_derivative, reconstruct, reproduce_symbol, rl_derivative_oracle, rl_integral, FracOrder, TildeQuadrature,
};
use crate::lab::config::ExperimentConfig;
use crate::lab::report::{num, Case, Table};
use crate::operators::{domination_constant, sharp_domination_constant};
use crate::special::gamma;

pub fn partition(cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let samples = cfg.param("samples", 10_000.0) as usize;
    let w = &cfg.window;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.corpus.seed);
    let mut table = Table::new(&["dim", "max_error"]);
    let mut cases = Vec::new();
    for d in 1..=3usize {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let r = 2f64.powf(rng.gen_range(-9.0..=9.0));
            let mut u: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let len = u.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
            u.iter_mut().for_each(|v| *v *= r / len);
            let s = w.partition_sum(&u, w.shell_min, w.shell_max)?;
            worst = worst.max((s - 1.0).abs());
        }
        table.row(vec![d.to_string(), num(worst)]);
        let mut c = Case::new(format!("d={d}"));
        c.metric("max_error", worst).le("max_error", 1e-12);
        cases.push(c.finish());
    }
    tables.insert("partition.csv".into(), table);
    Ok(cases)
}

pub fn retract(cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let grid = cfg.symbol_grid.grid()?;
    let w = &cfg.window;
    let mut table = Table::new(&["symbol", "sup_error", "sup_symbol"]);
    let mut cases = Vec::new();
    for m in cfg.build_symbols()? {
        let seq = w.retract_s(&m, &grid)?;
        let back = w.retract_r(&seq, &grid)?;
        let exact = m.sample(&grid, 1.0)?;
        let err = back
            .values()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let peak = exact.iter().map(|v| v.norm()).fold(0.0, f64::max);
        table.row(vec![m.label(), num(err), num(peak)]);
        let mut c = Case::new(m.label());
        c.metric("sup_error", err)
            .metric("sup_symbol", peak)
            .le("sup_error", 1e-8);
        cases.push(c.finish());
    }
    tables.insert("retract.csv".into(), table);
    Ok(cases)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn fraccalc(_cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let mut table = Table::new(&["test", "function", "order", "value", "reference", "rel_error"]);
    let mut worst = |name: &str, func: &str, a: f64, v: f64, r: f64, acc: &mut f64| {
        let e = rel(v, r);
        table.row(vec![name.into(), func.into(), num(a), num(v), num(r), num(e)]);
        *acc = acc.max(e);
    };
    let orders = [0.25, 0.5, 0.75];
    let t = 1.7;

    let mut e_int = 0.0;
    for &a in &orders {
        for k in [0.0, 0.5, 1.0, 2.0] {
            let v = rl_integral(|s: f64| s.powf(k), FracOrder::new(a)?, t)?;
            let r = gamma(k + 1.0) / gamma(k + 1.0 + a) * t.powf(k + a);
            worst("integral", &format!("t^{k}"), a, v, r, &mut e_int);
        }
    }
    let mut e_der = 0.0;
    for &a in &orders {
        for k in [1.0, 2.0, 3.0] {
            let v = marchaud_derivative(|s: f64| s.powf(k), FracOrder::new(a)?, t)?.value;
            let r = gamma(k + 1.0) / gamma(k + 1.0 - a) * t.powf(k - a);
            worst("derivative", &format!("t^{k}"), a, v, r, &mut e_der);
        }
    }

    type F = fn(f64) -> f64;
    let smooth: [(&str, F); 4] = [
        ("sin", f64::sin),
        ("cos", f64::cos),
        ("exp(-t)", |s| (-s).exp()),
        ("1+t^2", |s| 1.0 + s * s),
    ];
    let mut e_orc = 0.0;
    for (name, f) in smooth {
        for &a in &orders {
            let o = FracOrder::new(a)?;
            let v = marchaud_derivative(f, o, 1.3)?.value;
            let r = rl_derivative_oracle(f, o, 1.3)?;
            worst("marchaud_vs_oracle", name, a, v, r, &mut e_orc);
        }
    }

    let vanishing: [(&str, F); 3] = [("sin", f64::sin), ("t exp(-t)", |s| s * (-s).exp()), ("t^2", |s| s * s)];
    let mut e_rec = 0.0;
    for (name, f) in vanishing {
        for a in [0.3, 0.7] {
            let v = reconstruct(f, FracOrder::new(a)?, 1.2)?;
            worst("reconstruction", name, a, v, f(1.2), &mut e_rec);
        }
    }
    tables.insert("fraccalc.csv".into(), table);

    let case = |name: &str, e: f64, tol: f64| {
        let mut c = Case::new(name);
        c.metric("max_rel_error", e).le("max_rel_error", tol);
        c.finish()
    };
    Ok(vec![
        case("power_law_integral", e_int, 1e-6),
        case("power_law_derivative", e_der, 1e-6),
        case("marchaud_vs_oracle", e_orc, 1e-4),
        case("reconstruction", e_rec, 1e-3),
    ])
}

pub fn reproduction(cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let eps = cfg.epsilon;
    let q = TildeQuadrature::new(eps)?;
    let mut table = Table::new(&[
        "symbol",
        "xi",
        "t",
        "reproduced_re",
        "reproduced_im",
        "exact_re",
        "exact_im",
        "rel_error",
    ]);
    let mut cases = Vec::new();
    for m in cfg.build_symbols()? {
        // dilates of xi cross the inner transition of the symbol
        let xi = m.meta().inner_radius.map_or(1.0, |a| 2.0 * a);
        let mut worst = 0.0f64;
        for &t in &cfg.s_values {
            let v = reproduce_symbol(&m, &q, &[xi], t)?;
            let exact = m.eval(&[t * xi]);
            let e = (v - exact).norm() / exact.norm();
            worst = worst.max(e);
            table.row(vec![
                m.label(),
                num(xi),
                num(t),
                num(v.re),
                num(v.im),
                num(exact.re),
                num(exact.im),
                num(e),
            ]);
        }
        let mut c = Case::new(m.label());
        c.metric("max_rel_error", worst).le("max_rel_error", 1e-3);
        cases.push(c.finish());
    }
    tables.insert("reproduction.csv".into(), table);

    // closed forms through the reflection formulas
    let pi = std::f64::consts::PI;
    let beta = pi / (2.0 * pi * eps).sin();
    let loose = beta / gamma(0.5 - eps).powi(2);
    let sharp = beta * ((pi * eps).cos() / pi).powi(2);
    let mut c = Case::new("constants");
    c.metric("loose_rel_error", rel(domination_constant(eps), loose))
        .metric("sharp_rel_error", rel(sharp_domination_constant(eps), sharp))
        .le("loose_rel_error", 1e-12)
        .le("sharp_rel_error", 1e-12);
    cases.push(c.finish());
    Ok(cases)
}
