//! Multiplier norms: single-shell base spaces, the dyadic aggregate
//! `Sigma^2_theta(B)`, the power-weighted Sobolev form, the double-integral
//! seminorm and the direction-wise `L^2(dt/t)` norm.

mod base;
mod weighted;

pub use base::{base_norm, sobolev_norms, HOELDER_RADIUS, HOELDER_STRIDE};
pub use weighted::{equivalence_seminorm, hnorm_sup, weighted_sobolev_norm, HNorm};

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dyadic::WindowFamily;
use crate::error::{invalid, Result};
use crate::spectral::Grid;
use crate::symbols::Symbol;

/// Base space for a single shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpaceTag {
    Lp {
        #[serde(with = "exponent")]
        p: f64,
    },
    SobolevL2 {
        s: f64,
    },
    BesovDiag {
        #[serde(with = "exponent")]
        p: f64,
        s: f64,
    },
    Hoelder {
        gamma: f64,
    },
    LInf,
}

impl SpaceTag {
    pub fn validate(&self) -> Result<()> {
        let ok_p = |p: f64| p >= 1.0;
        let ok = match *self {
            SpaceTag::Lp { p } => ok_p(p),
            SpaceTag::SobolevL2 { s } => s >= 0.0 && s.is_finite(),
            SpaceTag::BesovDiag { p, s } => ok_p(p) && s >= 0.0 && s.is_finite(),
            SpaceTag::Hoelder { gamma } => gamma > 0.0 && gamma <= 1.0,
            SpaceTag::LInf => true,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("unsupported space {self:?}")))
        }
    }

    pub fn label(&self) -> String {
        let p = |p: f64| {
            if p.is_infinite() {
                "inf".to_string()
            } else {
                format!("{p}")
            }
        };
        match *self {
            SpaceTag::Lp { p: e } => format!("L^{}", p(e)),
            SpaceTag::SobolevL2 { s } => format!("L^2_{s}"),
            SpaceTag::BesovDiag { p: e, s } => format!("B^{s}_{}", p(e)),
            SpaceTag::Hoelder { gamma } => format!("C^0,{gamma}"),
            SpaceTag::LInf => "L^inf".into(),
        }
    }
}

/// Exponents serialize as numbers, with `"inf"` for infinity.
mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(de::Error::custom(format!("bad exponent {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellNorm {
    pub j: i32,
    pub norm: f64,
}

/// A `Sigma^2_theta(B)` evaluation over a finite shell range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub symbol: String,
    pub space: SpaceTag,
    pub theta: f64,
    /// `(sum_j 2^{2 j theta} shells_j^2)^{1/2}` over the computed range.
    pub total: f64,
    pub shells: Vec<ShellNorm>,
    /// Extrapolated contribution of the shells outside the range, combined
    /// in `l^2`; `None` when a side does not decay.
    pub tail: Option<f64>,
    pub tail_low: Option<f64>,
    pub tail_high: Option<f64>,
    pub warnings: Vec<String>,
    pub config_fingerprint: String,
}

impl NormReport {
    pub fn weighted(&self, s: &ShellNorm) -> f64 {
        2f64.powf(s.j as f64 * self.theta) * s.norm
    }

    /// Recompute the total from the stored shells.
    pub fn recompute_total(&self) -> f64 {
        self.shells.iter().map(|s| self.weighted(s).powi(2)).sum::<f64>().sqrt()
    }

    pub fn diverging(&self) -> bool {
        self.tail.is_none()
    }

    /// Least-squares slope of `log2` of the weighted shell norms over `js`.
    pub fn slope(&self, js: impl IntoIterator<Item = i32>) -> Option<f64> {
        let pts: Vec<(f64, f64)> = js
            .into_iter()
            .filter_map(|j| self.shells.iter().find(|s| s.j == j))
            .filter(|s| s.norm > 0.0)
            .map(|s| (s.j as f64, self.weighted(s).log2()))
            .collect();
        crate::norms::fit_slope(&pts)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "j,norm,weighted")?;
        for s in &self.shells {
            writeln!(w, "{},{:e},{:e}", s.j, s.norm, self.weighted(s))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Least-squares slope through `(x, y)` points; `None` with fewer than 2.
pub fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// `Sigma^2_theta(B)` norm of `m` over the window family's shell range.
pub fn sigma_norm(m: &Symbol, space: SpaceTag, theta: f64, w: &WindowFamily, grid: &Grid) -> Result<NormReport> {
    space.validate()?;
    w.validate()?;
    if !theta.is_finite() {
        return Err(invalid("theta must be finite"));
    }
    let js: Vec<i32> = w.shells().collect();
    let norms = crate::par::try_map_range(js.len(), |i| base_norm(&w.shell_localize(m, js[i], grid)?, space))?;
    let shells: Vec<ShellNorm> = js.iter().zip(&norms).map(|(&j, &norm)| ShellNorm { j, norm }).collect();
    let weighted: Vec<f64> = shells.iter().map(|s| 2f64.powf(s.j as f64 * theta) * s.norm).collect();
    let total = weighted.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut warnings = Vec::new();
    let mut side = |vals: Vec<f64>, name: &str| match edge_tail(&vals) {
        Tail::Converging(t) => Some(t),
        Tail::Diverging(r) => {
            warnings.push(format!(
                "{name} shells do not decay (edge ratio {r:.3}); sum truncated to the computed range"
            ));
            None
        }
    };
    // outermost four on each side, ordered toward the edge
    let k = weighted.len().min(4);
    let low: Vec<f64> = weighted[..k].iter().rev().cloned().collect();
    let high: Vec<f64> = weighted[weighted.len() - k..].to_vec();
    let tail_low = side(low, "low");
    let tail_high = side(high, "high");
    let tail = match (tail_low, tail_high) {
        (Some(a), Some(b)) => Some(a.hypot(b)),
        _ => None,
    };

    let fingerprint = crate::lab::fingerprint(&(m.label(), space, theta, w, grid));
    Ok(NormReport {
        symbol: m.label(),
        space,
        theta,
        total,
        shells,
        tail,
        tail_low,
        tail_high,
        warnings,
        config_fingerprint: fingerprint,
    })
}

enum Tail {
    Converging(f64),
    Diverging(f64),
}

/// Geometric extrapolation beyond the last entry of `vals` (ordered toward
/// the edge). Shells that vanish at the edge give a zero tail.
fn edge_tail(vals: &[f64]) -> Tail {
    let edge = match vals.last() {
        Some(&e) => e,
        None => return Tail::Converging(0.0),
    };
    if edge == 0.0 {
        return Tail::Converging(0.0);
    }
    let pts: Vec<(f64, f64)> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, v)| (i as f64, v.ln()))
        .collect();
    let r = match fit_slope(&pts) {
        Some(s) => s.exp(),
        None => return Tail::Diverging(f64::INFINITY),
    };
    if r >= 1.0 {
        return Tail::Diverging(r);
    }
    Tail::Converging(edge * r / (1.0 - r * r).sqrt())
}

#[cfg(test)]
mod tests;
