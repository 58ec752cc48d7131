//! Power-weighted integral norms of a symbol sampled on a frequency lattice.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operators::TGrid;
use crate::spectral::{Grid, SpectralPlan};
use crate::symbols::Symbol;
use crate::C64;

fn radius(grid: &Grid, k: usize) -> f64 {
    let p = grid.freq_point(k);
    p[..grid.dim()].iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Multi-indices of order `l` in `d` variables with their multinomial
/// multiplicities.
fn multi_indices(d: usize, l: usize) -> Vec<([usize; 3], f64)> {
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    let mut out = Vec::new();
    for a in 0..=l {
        for b in 0..=(l - a) {
            let c = l - a - b;
            let idx = [a, b, c];
            if idx[d..].iter().any(|&v| v != 0) {
                continue;
            }
            out.push((idx, fact(l) / (fact(a) * fact(b) * fact(c))));
        }
    }
    out
}

/// `|D^l m|^2` (Frobenius norm of the derivative tensor) at every lattice
/// point, by spectral differentiation of the samples.
fn derivative_sq(samples: &[C64], grid: &Grid, l: usize) -> Vec<f64> {
    if l == 0 {
        return samples.iter().map(|v| v.norm_sqr()).collect();
    }
    let dual = grid.dual();
    let plan = SpectralPlan::new(dual);
    let mut hat = samples.to_vec();
    plan.forward_in_place(&mut hat);
    let d = grid.dim();
    let mut acc = vec![0.0; samples.len()];
    for (mi, mult) in multi_indices(d, l) {
        let mut v = crate::par::map_range(hat.len(), |k| {
            let z = dual.freq_point(k);
            let mut f = C64::new(1.0, 0.0);
            for a in 0..d {
                f *= C64::new(0.0, 2.0 * PI * z[a]).powu(mi[a] as u32);
            }
            hat[k] * f
        });
        plan.inverse_in_place(&mut v);
        for (a, x) in acc.iter_mut().zip(&v) {
            *a += mult * x.norm_sqr();
        }
    }
    acc
}

/// `sum_{l=0}^{gamma} int |D^l m(x)|^p |x|^{p l + theta - d} dx` over the
/// grid's frequency lattice, the origin excluded.
///
/// Derivatives are spectral, so `m` should be smooth and negligible near
/// the lattice edge.
pub fn weighted_sobolev_norm(m: &Symbol, p: f64, gamma: usize, theta: f64, grid: &Grid) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid(format!("exponent {p} must be finite and >= 1")));
    }
    let samples = m.sample(grid, 1.0)?;
    let d = grid.dim() as f64;
    let h = grid.freq_spacing();
    let cell = grid.freq_cell_volume();
    let mut total = 0.0;
    for l in 0..=gamma {
        let dsq = derivative_sq(&samples, grid, l);
        let e = p * l as f64 + theta - d;
        let peak = dsq.iter().cloned().fold(0.0, f64::max).sqrt();
        if p * l as f64 + theta <= 0.0 && m.meta().inner_radius.is_none() {
            let near = (0..grid.len())
                .filter(|&k| {
                    let r = radius(grid, k);
                    r > 0.0 && r <= 4.0 * h
                })
                .map(|k| dsq[k].sqrt())
                .fold(0.0, f64::max);
            if near > 1e-10 * peak {
                return Err(Error::Precondition(format!(
                    "weight |x|^{e} is not integrable against D^{l} m near the origin"
                )));
            }
        }
        let terms = crate::par::map_range(grid.len(), |k| {
            let r = radius(grid, k);
            if r == 0.0 || dsq[k] == 0.0 {
                0.0
            } else {
                dsq[k].powf(0.5 * p) * r.powf(e)
            }
        });
        total += cell * terms.iter().sum::<f64>();
    }
    Ok(total)
}

fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

/// `int ( int_{|y-x|<|x|/2} |m(x)-m(y)|^2 / |x-y|^{d+2 alpha} dy ) |x|^{2 alpha + 2 theta - d} dx
///  + int |m|^2 |x|^{2 theta - d} dx`.
///
/// `m` must vanish beyond half the Nyquist frequency so that every `x`
/// whose ball reaches the support is on the lattice.
/// The inner integral is a lattice sum over `y != x`. The excluded cell is
/// replaced by a ball of equal volume on which `m` is taken linear, with
/// the gradient from nearest-neighbour quotients.
pub fn equivalence_seminorm(m: &Symbol, alpha: f64, theta: f64, grid: &Grid) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha {alpha} not in (0,1)")));
    }
    let samples = m.sample(grid, 1.0)?;
    // every x whose ball meets the support must lie on the lattice
    let peak = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let outside = (0..grid.len())
        .filter(|&k| radius(grid, k) > 0.5 * grid.nyquist())
        .map(|k| samples[k].norm())
        .fold(0.0, f64::max);
    if outside > 1e-10 * peak {
        return Err(Error::Precondition(format!(
            "{} does not vanish beyond half the Nyquist frequency {}",
            m.label(),
            grid.nyquist()
        )));
    }
    let d = grid.dim();
    let n = grid.samples_per_axis() as isize;
    let h = grid.freq_spacing();
    let cell = grid.freq_cell_volume();
    let area = sphere_area(d);
    let rho = (d as f64 * cell / area).powf(1.0 / d as f64);
    let core_factor = area * rho.powf(2.0 - 2.0 * alpha) / ((2.0 - 2.0 * alpha) * d as f64);
    let at = |idx: &[isize; 3]| -> C64 {
        let mut flat = 0usize;
        for &i in &idx[..d] {
            if i < 0 || i >= n {
                return C64::new(0.0, 0.0);
            }
            flat = flat * n as usize + i as usize;
        }
        samples[flat]
    };
    let max_reach = (grid.nyquist() / (2.0 * h)).ceil() as isize;
    let span = |a: usize, reach: isize| if a < d { -reach..=reach } else { 0..=0 };
    let expo = -(d as f64) - 2.0 * alpha;
    // in one dimension the kernel depends on |a| only
    let line: Vec<f64> = if d == 1 {
        (0..=max_reach).map(|a| (h * a as f64).powf(expo)).collect()
    } else {
        Vec::new()
    };
    let parts = crate::par::map_range(grid.len(), |k| {
        let r = radius(grid, k);
        if r == 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let u = grid.unflatten(k);
        let x = [u[0] as isize, u[1] as isize, u[2] as isize];
        let mx = samples[k];
        let reach = ((0.5 * r / h).ceil() as isize).min(max_reach);
        let mut inner = 0.0;
        for a in span(0, reach) {
            for b in span(1, reach) {
                for c in span(2, reach) {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let dist = h * ((a * a + b * b + c * c) as f64).sqrt();
                    if dist >= 0.5 * r {
                        continue;
                    }
                    let my = at(&[x[0] + a, x[1] + b, x[2] + c]);
                    let kern = if d == 1 {
                        line[a.unsigned_abs()]
                    } else {
                        dist.powf(expo)
                    };
                    inner += (mx - my).norm_sqr() * kern;
                }
            }
        }
        inner *= cell;
        let mut grad = 0.0;
        for a in 0..d {
            let mut p = x;
            let mut q = x;
            p[a] += 1;
            q[a] -= 1;
            grad += ((at(&p) - at(&q)) / (2.0 * h)).norm_sqr();
        }
        // the core ball only lies inside the integration region when rho < |x|/2
        let core = if rho < 0.5 * r { grad * core_factor } else { 0.0 };
        let w = r.powf(2.0 * alpha + 2.0 * theta - d as f64);
        let plain = mx.norm_sqr() * r.powf(2.0 * theta - d as f64);
        (inner * w, core * w, plain)
    });
    let double: f64 = parts.iter().map(|p| p.0).sum::<f64>() * cell;
    let core: f64 = parts.iter().map(|p| p.1).sum::<f64>() * cell;
    let plain: f64 = parts.iter().map(|p| p.2).sum::<f64>() * cell;
    if core > 0.5 * (double + core) {
        return Err(Error::Accuracy {
            coarse: double,
            fine: double + core,
            tolerance: 0.5,
        });
    }
    Ok(double + core + plain)
}

/// `sup_u (int_0^inf |m(t u)|^2 dt/t)^{1/2}` over a set of unit directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HNorm {
    pub value: f64,
    pub per_direction: Vec<f64>,
    pub warnings: Vec<String>,
}

pub fn hnorm_sup(m: &Symbol, directions: &[Vec<f64>], tg: &TGrid) -> Result<HNorm> {
    if directions.is_empty() {
        return Err(invalid("empty direction set"));
    }
    let nodes = tg.nodes();
    let w = tg.weight();
    let mut per_direction = Vec::with_capacity(directions.len());
    let mut warnings = Vec::new();
    for u in directions {
        let len = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (len - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("direction {u:?} is not a unit vector")));
        }
        let vals = crate::par::try_map_range(nodes.len(), |k| {
            let xi: Vec<f64> = u.iter().map(|v| v * nodes[k]).collect();
            m.try_eval(&xi).map(|v| v.norm())
        })?;
        let peak = vals.iter().cloned().fold(0.0, f64::max);
        let (first, last) = (vals[0], vals[vals.len() - 1]);
        if peak > 0.0 && first.max(last) > 1e-10 * peak {
            warnings.push(format!(
                "direction {u:?}: tails not decayed (|m| = {first:.2e} at t_min, {last:.2e} at t_max, peak {peak:.2e})"
            ));
        }
        per_direction.push((w * vals.iter().map(|v| v * v).sum::<f64>()).sqrt());
    }
    let value = per_direction.iter().cloned().fold(0.0, f64::max);
    Ok(HNorm {
        value,
        per_direction,
        warnings,
    })
}
