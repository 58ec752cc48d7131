//! Norms of a single piece of shell data.

use super::SpaceTag;
use crate::dyadic::{transition, window};
use crate::error::{contract, Result};
use crate::spectral::{lp_of_values, Domain, Field, SpectralPlan};
use crate::C64;

/// Pair subsampling for the Hoelder seminorm.
pub const HOELDER_STRIDE: usize = 4;
pub const HOELDER_RADIUS: f64 = 0.25;

/// Norm of frequency-side shell data `g` in the space `space`.
///
/// Sobolev and Besov norms treat `g` as a function of its own variable and
/// transform it on the dual grid; the resulting variable is called `zeta`.
pub fn base_norm(g: &Field, space: SpaceTag) -> Result<f64> {
    space.validate()?;
    g.expect_domain(Domain::Frequency)?;
    check_compact(g)?;
    let cell = g.cell_measure();
    match space {
        SpaceTag::Lp { p } => lp_of_values(g.values(), cell, p),
        SpaceTag::LInf => Ok(g.max_abs()),
        SpaceTag::SobolevL2 { s } => sobolev(g, s),
        SpaceTag::BesovDiag { p, s } => besov(g, p, s),
        SpaceTag::Hoelder { gamma } => hoelder(g, gamma),
    }
}

fn check_compact(g: &Field) -> Result<()> {
    let grid = g.grid();
    let n = grid.samples_per_axis();
    let d = grid.dim();
    let peak = g.max_abs();
    if peak == 0.0 {
        return Ok(());
    }
    let edge = g
        .values()
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let idx = grid.unflatten(*k);
            idx[..d].iter().any(|&i| i == 0 || i == n - 1)
        })
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    if edge > 1e-10 * peak {
        return Err(contract(format!(
            "shell data not compactly supported: boundary value {edge:.3e} vs peak {peak:.3e}"
        )));
    }
    Ok(())
}

/// Transform of the shell data in its own variable, with the dual grid.
fn transform(g: &Field) -> Result<(Field, SpectralPlan)> {
    let phys = g.clone().reinterpret_as_physical()?;
    let plan = SpectralPlan::new(*phys.grid());
    let hat = plan.forward(&phys)?;
    Ok((hat, plan))
}

fn zeta_norm(grid: &crate::spectral::Grid, k: usize) -> f64 {
    let p = grid.freq_point(k);
    p[..grid.dim()].iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn sobolev(g: &Field, s: f64) -> Result<f64> {
    let (hat, _) = transform(g)?;
    let grid = *hat.grid();
    let weighted = crate::par::map_range(grid.len(), |k| {
        let z = zeta_norm(&grid, k);
        hat.values()[k] * (1.0 + z * z).powf(0.5 * s)
    });
    lp_of_values(&weighted, hat.cell_measure(), 2.0)
}

/// `L^2_s` norms of the same shell data for several `s`, from one transform.
pub fn sobolev_norms(g: &Field, s: &[f64]) -> Result<Vec<f64>> {
    g.expect_domain(Domain::Frequency)?;
    check_compact(g)?;
    for &v in s {
        SpaceTag::SobolevL2 { s: v }.validate()?;
    }
    let (hat, _) = transform(g)?;
    let grid = *hat.grid();
    let z2: Vec<f64> = (0..grid.len()).map(|k| zeta_norm(&grid, k).powi(2)).collect();
    let cell = hat.cell_measure();
    Ok(crate::par::map(s, |&e| {
        let sum: f64 = hat
            .values()
            .iter()
            .zip(&z2)
            .map(|(v, z)| v.norm_sqr() * (1.0 + z).powf(e))
            .sum();
        (sum * cell).sqrt()
    }))
}

fn besov(g: &Field, p: f64, s: f64) -> Result<f64> {
    let (hat, plan) = transform(g)?;
    let grid = *hat.grid();
    let block = |mult: &(dyn Fn(f64) -> f64 + Sync)| -> Result<f64> {
        let mut v = crate::par::map_range(grid.len(), |k| hat.values()[k] * mult(zeta_norm(&grid, k)));
        plan.inverse_in_place(&mut v);
        lp_of_values(&v, grid.cell_volume(), p)
    };
    // S_0 = sum_{j<=0} psi_j, whose multiplier is chi(|zeta|)
    let low = block(&transition)?;
    // blocks psi_j, j >= 1, up to the last one inside the lattice
    let top = (grid.nyquist().log2().floor() as i32 + 1).max(1);
    let mut terms = Vec::new();
    for j in 1..=top {
        let scale = 2f64.powi(-j);
        let b = block(&|z| window(z * scale))?;
        terms.push(2f64.powf(j as f64 * s) * b);
    }
    let high = if p.is_infinite() {
        terms.iter().cloned().fold(0.0, f64::max)
    } else {
        let peak = terms.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            0.0
        } else {
            peak * terms.iter().map(|t| (t / peak).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    };
    Ok(low + high)
}

fn hoelder(g: &Field, gamma: f64) -> Result<f64> {
    let grid = g.grid();
    let d = grid.dim();
    let n = grid.samples_per_axis();
    let h = grid.freq_spacing();
    let sup = g.max_abs();
    if sup == 0.0 {
        return Ok(0.0);
    }
    let step = HOELDER_STRIDE as isize;
    let reach = (HOELDER_RADIUS / (h * HOELDER_STRIDE as f64)).floor() as isize;
    // half of the symmetric offset set: first nonzero component positive
    let mut offsets: Vec<([isize; 3], f64)> = Vec::new();
    let span = |a: usize| if a < d { -reach..=reach } else { 0..=0 };
    for a in span(0) {
        for b in span(1) {
            for c in span(2) {
                let o = [a, b, c];
                let first = o.iter().find(|v| **v != 0);
                if !matches!(first, Some(v) if *v > 0) {
                    continue;
                }
                let dist = h * step as f64 * ((a * a + b * b + c * c) as f64).sqrt();
                if dist <= HOELDER_RADIUS {
                    offsets.push(([a * step, b * step, c * step], dist.powf(gamma)));
                }
            }
        }
    }
    // sublattice points touching the support
    let points: Vec<usize> = (0..grid.len())
        .filter(|&k| {
            let idx = grid.unflatten(k);
            idx[..d].iter().all(|i| i % HOELDER_STRIDE == 0)
        })
        .collect();
    let vals = g.values();
    let quotient = crate::par::map(&points, |&k| {
        let idx = grid.unflatten(k);
        let gx = vals[k];
        let mut best = 0.0f64;
        for (o, w) in &offsets {
            let mut flat = 0usize;
            let mut inside = true;
            for a in 0..d {
                let i = idx[a] as isize + o[a];
                if i < 0 || i >= n as isize {
                    inside = false;
                    break;
                }
                flat = flat * n + i as usize;
            }
            let gy = if inside { vals[flat] } else { C64::new(0.0, 0.0) };
            let q = (gx - gy).norm() / w;
            best = best.max(q);
        }
        best
    });
    Ok(sup + quotient.into_iter().fold(0.0, f64::max))
}
