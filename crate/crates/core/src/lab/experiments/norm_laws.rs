//! Experiments on multiplier norms.

use super::Tables;
use crate::error::Result;
use crate::fraccalc::{tilde_table, TildeQuadrature};
use crate::lab::config::ExperimentConfig;
use crate::lab::report::{num, Case, Table};
use crate::norms::{
    equivalence_seminorm, fit_slope, hnorm_sup, sigma_norm, sobolev_norms, weighted_sobolev_norm, NormReport, SpaceTag,
};
use crate::operators::TGrid;
use crate::spectral::Grid;
use crate::symbols::{make_slow_decay, Symbol};

fn shell_rows(table: &mut Table, label: &str, quantity: &str, r: &NormReport) {
    for s in &r.shells {
        table.row(vec![label.into(), quantity.into(), s.j.to_string(), num(s.norm)]);
    }
}

fn axis_directions(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|a| (0..d).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
        .collect()
}

struct EmbeddingRun {
    /// `(name, lhs, rhs)` per symbol.
    ratios: Vec<Vec<(String, f64, f64)>>,
    notes: Vec<Vec<String>>,
}

fn embedding_run(
    cfg: &ExperimentConfig,
    tildes: &[Symbol],
    symbols: &[Symbol],
    sgrid: &Grid,
    tg: &TGrid,
    mut shells: Option<&mut Table>,
) -> Result<EmbeddingRun> {
    let eps = cfg.epsilon;
    let w = &cfg.window;
    let mut ratios = Vec::new();
    let mut notes = Vec::new();
    for (m, mt) in symbols.iter().zip(tildes) {
        let mut row = Vec::new();
        let mut warn = Vec::new();
        let h = hnorm_sup(mt, &axis_directions(sgrid.dim()), tg)?;
        let rh = sigma_norm(m, SpaceTag::Hoelder { gamma: 0.5 + 3.0 * eps }, 0.0, w, sgrid)?;
        warn.extend(h.warnings);
        warn.extend(rh.warnings.iter().cloned());
        row.push(("hoelder".to_string(), h.value, rh.total));
        if let Some(t) = shells.as_deref_mut() {
            shell_rows(t, &m.label(), "hoelder_m", &rh);
        }
        for &beta in &cfg.s_values {
            let l = sigma_norm(mt, SpaceTag::SobolevL2 { s: beta }, 0.0, w, sgrid)?;
            let r = sigma_norm(
                m,
                SpaceTag::SobolevL2 {
                    s: beta + 0.5 + 3.0 * eps,
                },
                0.0,
                w,
                sgrid,
            )?;
            warn.extend(l.warnings.iter().cloned());
            warn.extend(r.warnings.iter().cloned());
            if let Some(t) = shells.as_deref_mut() {
                shell_rows(t, &m.label(), &format!("sobolev_{beta}_m_tilde"), &l);
                shell_rows(t, &m.label(), &format!("sobolev_{beta}_m"), &r);
            }
            row.push((format!("sobolev_{beta}"), l.total, r.total));
        }
        ratios.push(row);
        notes.push(warn);
    }
    Ok(EmbeddingRun { ratios, notes })
}

pub fn embedding(cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let q = TildeQuadrature::new(cfg.epsilon)?;
    let symbols = cfg.build_symbols()?;
    let sgrid = cfg.symbol_grid.grid()?;
    let w = &cfg.window;
    let tg = cfg.tgrid;
    // every radius the shells or the dilation grid can reach
    let r_lo = 2f64.powi(w.shell_min - 1).min(tg.t_min);
    let r_hi = 2f64.powi(w.shell_max + 1).max(tg.t_max) * (sgrid.dim() as f64).sqrt();
    let tildes = symbols
        .iter()
        .map(|m| tilde_table(m, q, r_lo, r_hi, 32))
        .collect::<Result<Vec<_>>>()?;
    let mut shells = Table::new(&["symbol", "quantity", "j", "norm"]);
    let base = embedding_run(cfg, &tildes, &symbols, &sgrid, &tg, Some(&mut shells))?;
    let fine = embedding_run(cfg, &tildes, &symbols, &sgrid.refined_spectrum(), &tg.refined(), None)?;
    let mut summary = Table::new(&["symbol", "quantity", "lhs", "rhs", "ratio", "ratio_refined"]);
    let mut cases = Vec::new();
    let kinds = base.ratios.first().map(|r| r.len()).unwrap_or(0);
    let mut per_kind: Vec<Vec<f64>> = vec![Vec::new(); kinds];
    for (i, m) in symbols.iter().enumerate() {
        let mut c = Case::new(m.label());
        let mut drift = 0.0f64;
        for (k, ((name, l, r), (_, lf, rf))) in base.ratios[i].iter().zip(&fine.ratios[i]).enumerate() {
            let ratio = l / r;
            let ratio_f = lf / rf;
            per_kind[k].push(ratio);
            drift = drift.max((ratio_f / ratio - 1.0).abs());
            summary.row(vec![
                m.label(),
                name.clone(),
                num(*l),
                num(*r),
                num(ratio),
                num(ratio_f),
            ]);
            let key = format!("ratio_{name}");
            c.metric(format!("lhs_{name}"), *l)
                .metric(format!("rhs_{name}"), *r)
                .metric(key.clone(), ratio)
                .le(&key, f64::MAX);
        }
        for n in &base.notes[i] {
            if !c.notes.contains(n) {
                c.note(n.clone());
            }
        }
        c.metric("refine_drift", drift)
            .le("refine_drift", 0.2)
            .headline("ratio_hoelder");
        cases.push(c.finish());
    }
    let mut band = Case::new("family_band");
    for (k, vals) in per_kind.iter().enumerate() {
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let key = format!("spread_{}", base.ratios[0][k].0);
        band.metric(key.clone(), hi / lo).le(&key, 20.0);
    }
    cases.push(band.finish());
    tables.insert("shells.csv".into(), shells);
    tables.insert("embedding.csv".into(), summary);
    Ok(cases)
}

pub fn scaling_claim(cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let eps = cfg.epsilon;
    let sgrid = cfg.symbol_grid.grid()?;
    let w = &cfg.window;
    let power = 0.5 + 2.0 * eps;
    let mut table = Table::new(&["symbol", "s", "lhs", "rhs", "ratio"]);
    let mut cases = Vec::new();
    for m in cfg.build_symbols()? {
        let rhs = sigma_norm(&m, SpaceTag::SobolevL2 { s: power }, 0.0, w, &sgrid)?;
        let mut c = Case::new(m.label());
        c.metric("rhs", rhs.total);
        let mut ratios = Vec::new();
        for &s in &cfg.s_values {
            let lhs = sigma_norm(&m.difference(s)?, SpaceTag::Lp { p: 2.0 }, 0.0, w, &sgrid)?;
            let r = lhs.total / ((1.0 - s).powf(power) * rhs.total);
            table.row(vec![m.label(), num(s), num(lhs.total), num(rhs.total), num(r)]);
            c.metric(format!("ratio_s={s}"), r);
            ratios.push(r);
            for n in lhs.warnings {
                c.note(n);
            }
        }
        let step = ratios.windows(2).map(|p| p[1] / p[0]).fold(0.0, f64::max);
        c.metric("max_step_ratio", step)
            .le("max_step_ratio", 1.2)
            .headline(&format!("ratio_s={}", cfg.s_values[0]));
        // compactly supported smooth symbols decrease strictly toward s = 1
        if m.meta().outer_radius.is_some() {
            c.le("max_step_ratio", 1.0);
        }
        if rhs.total == 0.0 {
            c.vacuous("zero symbol");
        }
        cases.push(c.finish());
    }
    tables.insert("scaling.csv".into(), table);
    Ok(cases)
}

pub fn norm_equivalence(cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let sgrid = cfg.symbol_grid.grid()?;
    let fine = sgrid.refined_spectrum();
    let alpha = cfg.param("alpha", 0.3);
    let w = &cfg.window;
    let sigma_sq = |m: &Symbol, s: f64, g: &Grid| -> Result<f64> {
        Ok(sigma_norm(m, SpaceTag::SobolevL2 { s }, 0.0, w, g)?.total.powi(2))
    };
    let mut table = Table::new(&["symbol", "form", "ratio", "ratio_dilated", "ratio_refined"]);
    let mut cases = Vec::new();
    for m in cfg.build_symbols()? {
        let m2 = m.dilate(2.0)?;
        type Form<'a> = Box<dyn Fn(&Symbol, &Grid) -> Result<f64> + 'a>;
        let mut forms: Vec<(String, Form)> = Vec::new();
        for n in [1usize, 2] {
            forms.push((
                format!("weighted_n={n}"),
                Box::new(move |m: &Symbol, g: &Grid| {
                    Ok(weighted_sobolev_norm(m, 2.0, n, 0.0, g)? / sigma_sq(m, n as f64, g)?)
                }),
            ));
        }
        forms.push((
            format!("seminorm_alpha={alpha}"),
            Box::new(|m: &Symbol, g: &Grid| Ok(equivalence_seminorm(m, alpha, 0.0, g)? / sigma_sq(m, alpha, g)?)),
        ));
        for (name, form) in forms {
            let r = form(&m, &sgrid)?;
            let rd = form(&m2, &sgrid)?;
            let rf = form(&m, &fine)?;
            table.row(vec![m.label(), name.clone(), num(r), num(rd), num(rf)]);
            let mut c = Case::new(format!("{}:{name}", m.label()));
            c.metric("ratio", r)
                .metric("drift_dilation", (rd / r - 1.0).abs())
                .metric("drift_refine", (rf / r - 1.0).abs())
                .le("drift_dilation", 0.02)
                .le("drift_refine", 0.1)
                .headline("ratio");
            cases.push(c.finish());
        }
    }
    tables.insert("equivalence.csv".into(), table);
    Ok(cases)
}

/// Converging shells decay at least this fast per shell (log2 slope).
pub const CONVERGING_SLOPE: f64 = -0.025;

pub fn slow_decay(cfg: &ExperimentConfig, tables: &mut Tables) -> Result<Vec<Case>> {
    let sgrid = cfg.symbol_grid.grid()?;
    let w = &cfg.window;
    let mut shells = Table::new(&["alpha", "beta", "s", "j", "norm"]);
    // shells j, and for each the L^2_s norms at the requested s
    let norms = |alpha: f64, beta: f64, js: &[i32], ss: &[f64]| -> Result<Vec<Vec<f64>>> {
        let m = make_slow_decay(alpha, beta, 1.0)?;
        crate::par::try_map_range(js.len(), |i| sobolev_norms(&w.shell_localize(&m, js[i], &sgrid)?, ss))
    };
    let slope = |js: &[i32], vals: &[f64]| {
        let pts: Vec<(f64, f64)> = js.iter().zip(vals).map(|(&j, v)| (j as f64, v.log2())).collect();
        fit_slope(&pts).unwrap_or(f64::NAN)
    };
    let mut cases = Vec::new();
    let mut law = |alpha: f64, beta: f64, s: f64, js: &[i32], vals: &[f64], shells: &mut Table| {
        for (&j, v) in js.iter().zip(vals) {
            shells.row(vec![num(alpha), num(beta), num(s), j.to_string(), num(*v)]);
        }
        let fitted = slope(js, vals);
        let expected = -(beta - s * alpha);
        let mut c = Case::new(format!("law:alpha={alpha},beta={beta},s={s}"));
        c.metric("slope", fitted)
            .metric("expected", expected)
            .metric("rel_error", ((fitted - expected) / expected).abs())
            .le("rel_error", 0.1)
            .headline("slope");
        cases.push(c.finish());
    };

    // alpha = 1/2: the laws at s = 0 and 1 and the summability sweep share shells
    let js_half: Vec<i32> = (cfg.param("j_first", 16.0) as i32..=cfg.param("j_last", 30.0) as i32).collect();
    let mut ss = vec![0.0, 1.0];
    ss.extend(&cfg.s_values);
    let half = norms(0.5, 1.0, &js_half, &ss)?;
    let column = |k: usize| half.iter().map(|v| v[k]).collect::<Vec<f64>>();
    law(0.5, 1.0, 1.0, &js_half, &column(1), &mut shells);
    law(0.5, 1.0, 0.0, &js_half, &column(0), &mut shells);

    // alpha = 1/4 converges slowly toward its law; fit far out
    let js_quarter: Vec<i32> = (30..=60).step_by(2).collect();
    let quarter = norms(0.25, 1.0, &js_quarter, &[2.0])?;
    law(
        0.25,
        1.0,
        2.0,
        &js_quarter,
        &quarter.iter().map(|v| v[0]).collect::<Vec<_>>(),
        &mut shells,
    );

    let mut sweep = Table::new(&["s", "slope", "converging"]);
    let classes: Vec<(f64, bool)> = cfg
        .s_values
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let sl = slope(&js_half, &column(k + 2));
            let conv = sl <= CONVERGING_SLOPE;
            sweep.row(vec![num(s), num(sl), conv.to_string()]);
            (s, conv)
        })
        .collect();
    let flips = classes.windows(2).filter(|p| p[0].1 != p[1].1).count();
    let flip = classes.iter().find(|c| !c.1).map(|c| c.0).unwrap_or(f64::INFINITY);
    let threshold = 1.0 / 0.5;
    let step = cfg.s_values.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max);
    let mut c = Case::new("summability_threshold");
    c.metric("first_divergent_s", flip)
        .metric("threshold", threshold)
        .metric("flip_error", (flip - threshold).abs())
        .metric("class_changes", flips as f64)
        .le("flip_error", step + 1e-9)
        .le("class_changes", 1.0)
        .headline("first_divergent_s");
    cases.push(c.finish());
    tables.insert("shells.csv".into(), shells);
    tables.insert("sweep.csv".into(), sweep);
    Ok(cases)
}
