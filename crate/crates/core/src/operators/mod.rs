//! Multiplier operators: `T_m`, the maximal operator over a dilation grid,
//! the square function and the half-wave difference operator.

mod tgrid;

pub use tgrid::TGrid;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fraccalc::{tilde_table, TildeQuadrature};
use crate::special::{beta, gamma};
use crate::spectral::{Domain, Field, Grid, SpectralPlan};
use crate::symbols::{make_halfwave_difference, Symbol};
use crate::C64;

/// Fraction of the Nyquist frequency above which spectral mass counts as
/// an aliasing risk.
pub const ALIAS_FRACTION: f64 = 0.8;

/// An operator result together with its diagnostics.
#[derive(Debug, Clone)]
pub struct Output {
    pub field: Field,
    /// For the maximal operator: the t-node index achieving the maximum.
    pub achiever: Option<Vec<u32>>,
    pub warnings: Vec<String>,
}

/// `f` transformed once, ready for repeated multiplier application.
pub struct Prepared {
    plan: SpectralPlan,
    fhat: Vec<C64>,
    warnings: Vec<String>,
}

impl Prepared {
    pub fn new(f: &Field) -> Result<Self> {
        f.expect_domain(Domain::Physical)?;
        let plan = SpectralPlan::new(*f.grid());
        let mut fhat = f.values().to_vec();
        plan.forward_in_place(&mut fhat);
        let mut warnings = Vec::new();
        let grid = f.grid();
        let cut = ALIAS_FRACTION * grid.nyquist();
        let d = grid.dim();
        let (mut outside, mut all) = (0.0, 0.0);
        for (k, v) in fhat.iter().enumerate() {
            let p = grid.freq_point(k);
            let e = v.norm_sqr();
            all += e;
            if p[..d].iter().any(|x| x.abs() > cut) {
                outside += e;
            }
        }
        if all > 0.0 && (outside / all).sqrt() > 1e-6 {
            warnings.push(format!(
                "aliasing risk: relative spectral mass {:.2e} beyond {ALIAS_FRACTION} Nyquist",
                (outside / all).sqrt()
            ));
        }
        Ok(Prepared { plan, fhat, warnings })
    }

    pub fn grid(&self) -> &Grid {
        self.plan.grid()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_zero(&self) -> bool {
        self.fhat.iter().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// Physical samples of `T_{m(t.)} f`.
    pub fn apply(&self, m: &Symbol, t: f64) -> Result<Vec<C64>> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("dilation {t} must be positive")));
        }
        let mut v = m.sample(self.grid(), t)?;
        for (a, b) in v.iter_mut().zip(&self.fhat) {
            *a *= b;
        }
        self.plan.inverse_in_place(&mut v);
        Ok(v)
    }
}

/// `T_{m(t.)} f`.
pub fn apply_multiplier(m: &Symbol, f: &Field, t: f64) -> Result<Output> {
    let prep = Prepared::new(f)?;
    let values = prep.apply(m, t)?;
    Ok(Output {
        field: Field::new(*f.grid(), Domain::Physical, values)?,
        achiever: None,
        warnings: prep.warnings,
    })
}

/// Nodes are processed in batches so memory stays bounded by the batch.
const BATCH: usize = 16;

/// Run `T_{m(t_k.)} f` for every node and fold each batch into `acc`.
fn fold_nodes<F>(prep: &Prepared, m: &Symbol, nodes: &[f64], mut fold: F) -> Result<()>
where
    F: FnMut(usize, &[C64]),
{
    for start in (0..nodes.len()).step_by(BATCH) {
        let end = (start + BATCH).min(nodes.len());
        let batch = crate::par::try_map_range(end - start, |i| prep.apply(m, nodes[start + i]))?;
        for (i, v) in batch.iter().enumerate() {
            fold(start + i, v);
        }
    }
    Ok(())
}

fn real_field(grid: &Grid, v: Vec<f64>) -> Result<Field> {
    Field::new(
        *grid,
        Domain::Physical,
        v.into_iter().map(|x| C64::new(x, 0.0)).collect(),
    )
}

/// `sup_k |T_{m(t_k.)} f|` with the achieving node index at every point.
pub fn maximal_operator(m: &Symbol, f: &Field, tg: &TGrid) -> Result<Output> {
    let prep = Prepared::new(f)?;
    maximal_prepared(m, &prep, tg)
}

pub fn maximal_prepared(m: &Symbol, prep: &Prepared, tg: &TGrid) -> Result<Output> {
    let grid = *prep.grid();
    let nodes = tg.nodes();
    let mut best = vec![0.0f64; grid.len()];
    let mut arg = vec![0u32; grid.len()];
    fold_nodes(prep, m, &nodes, |k, v| {
        for (i, x) in v.iter().enumerate() {
            let a = x.norm();
            if a > best[i] {
                best[i] = a;
                arg[i] = k as u32;
            }
        }
    })?;
    let mut warnings = prep.warnings.clone();
    let peak = best.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        let last = (nodes.len() - 1) as u32;
        let active: Vec<usize> = (0..best.len()).filter(|&i| best[i] > 1e-8 * peak).collect();
        let edge = active.iter().filter(|&&i| arg[i] == 0 || arg[i] == last).count();
        let frac = edge as f64 / active.len() as f64;
        if frac > 0.05 {
            warnings.push(format!(
                "{:.1}% of points achieve the maximum at an end of the dilation grid",
                100.0 * frac
            ));
        }
    }
    Ok(Output {
        field: real_field(&grid, best)?,
        achiever: Some(arg),
        warnings,
    })
}

/// `(sum_k w_k |T_{m(t_k.)} f|^2)^{1/2}`.
pub fn square_function(m: &Symbol, f: &Field, tg: &TGrid) -> Result<Output> {
    let prep = Prepared::new(f)?;
    square_prepared(m, &prep, tg)
}

pub fn square_prepared(m: &Symbol, prep: &Prepared, tg: &TGrid) -> Result<Output> {
    let grid = *prep.grid();
    let nodes = tg.nodes();
    let w = tg.weight();
    let mut acc = vec![0.0f64; grid.len()];
    let mut energy = vec![0.0f64; nodes.len()];
    fold_nodes(prep, m, &nodes, |k, v| {
        let mut e = 0.0;
        for (a, x) in acc.iter_mut().zip(v) {
            let s = x.norm_sqr();
            *a += w * s;
            e += s;
        }
        energy[k] = e.sqrt();
    })?;
    let mut warnings = prep.warnings.clone();
    let peak = energy.iter().cloned().fold(0.0, f64::max);
    let (first, last) = (energy[0], energy[energy.len() - 1]);
    if peak > 0.0 && first.max(last) > 1e-8 * peak {
        warnings.push(format!(
            "square function tails not decayed: ||T f|| / peak = {:.2e} at t_min, {:.2e} at t_max",
            first / peak,
            last / peak
        ));
    }
    Ok(Output {
        field: real_field(&grid, acc.into_iter().map(f64::sqrt).collect())?,
        achiever: None,
        warnings,
    })
}

/// `U_{alpha,beta} f(., t)`: the multiplier `(e^{i t |xi|^alpha} - 1) / t^beta`.
pub fn halfwave_difference(f: &Field, alpha: f64, beta: f64, t: f64) -> Result<Output> {
    let m = make_halfwave_difference(alpha, beta, t)?;
    apply_multiplier(&m, f, 1.0)
}

/// Constant of the pointwise bound `|M_m f|^2 <= C G_{m~}(f)^2` as used for
/// the verdict: `B(2 eps, 1 - 2 eps) / Gamma(1/2 - eps)^2`.
pub fn domination_constant(eps: f64) -> f64 {
    beta(2.0 * eps, 1.0 - 2.0 * eps) / gamma(0.5 - eps).powi(2)
}

/// The constant Cauchy-Schwarz gives for the reproducing formula
/// `m(t xi) = I^(1/2+eps)[s^(-1/2-eps) m~(s xi)](t) / Gamma(1/2 - eps)`:
/// `B(2 eps, 1 - 2 eps) / (Gamma(1/2 + eps) Gamma(1/2 - eps))^2`.
pub fn sharp_domination_constant(eps: f64) -> f64 {
    beta(2.0 * eps, 1.0 - 2.0 * eps) / (gamma(0.5 + eps) * gamma(0.5 - eps)).powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub epsilon: f64,
    pub constant: f64,
    pub sharp_constant: f64,
    /// `max M^2 / (C G^2)` over points where `G > 1e-8 peak`.
    pub max_ratio: f64,
    pub max_ratio_sharp: f64,
    pub points: usize,
    pub pass: bool,
    pub warnings: Vec<String>,
}

pub const DOMINATION_SLACK: f64 = 1.05;

/// The radial `m~` cache covering every dilated lattice radius of `grid`
/// under `tg`.
pub fn tilde_for(m: &Symbol, eps: f64, grid: &Grid, tg: &TGrid) -> Result<Symbol> {
    let q = TildeQuadrature::new(eps)?;
    let r_lo = tg.t_min * grid.freq_spacing();
    let r_hi = tg.t_max * grid.nyquist() * (grid.dim() as f64).sqrt() * 2.0;
    tilde_table(m, q, r_lo, r_hi, 32)
}

/// Pointwise check of `|M_m f|^2 <= C_eps G_{m~}(f)^2`.
pub fn domination_check(m: &Symbol, f: &Field, eps: f64, tg: &TGrid) -> Result<DominationReport> {
    let mt = tilde_for(m, eps, f.grid(), tg)?;
    let prep = Prepared::new(f)?;
    domination_prepared(m, &mt, &prep, eps, tg)
}

/// [`domination_check`] with a precomputed `m~` (see [`tilde_for`]).
pub fn domination_prepared(
    m: &Symbol,
    m_tilde: &Symbol,
    prep: &Prepared,
    eps: f64,
    tg: &TGrid,
) -> Result<DominationReport> {
    let origin = m.value_at_origin(prep.grid().dim())?;
    if origin.norm() > 1e-12 {
        return Err(Error::Precondition(format!(
            "{} does not vanish at the origin (m(0) = {origin})",
            m.label()
        )));
    }
    let constant = domination_constant(eps);
    let sharp_constant = sharp_domination_constant(eps);
    let maximal = maximal_prepared(m, prep, tg)?;
    let square = square_prepared(m_tilde, prep, tg)?;
    let big = maximal.field.values();
    let g = square.field.values();
    let peak = g.iter().map(|v| v.re).fold(0.0, f64::max);
    let mut max_ratio = 0.0f64;
    let mut points = 0;
    for (mv, gv) in big.iter().zip(g) {
        if peak > 0.0 && gv.re > 1e-8 * peak {
            points += 1;
            max_ratio = max_ratio.max(mv.re * mv.re / (constant * gv.re * gv.re));
        }
    }
    let mut warnings = maximal.warnings;
    warnings.extend(square.warnings);
    warnings.dedup();
    Ok(DominationReport {
        epsilon: eps,
        constant,
        sharp_constant,
        max_ratio,
        max_ratio_sharp: max_ratio * constant / sharp_constant,
        points,
        pass: max_ratio <= DOMINATION_SLACK,
        warnings,
    })
}

#[cfg(test)]
mod tests;
