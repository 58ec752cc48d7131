use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Geometric dilation grid `t_k = t_min ratio^k` covering `[t_min, t_max]`,
/// with the `dt/t` weight `log(ratio)` per node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub ratio: f64,
}

impl Default for TGrid {
    fn default() -> Self {
        TGrid {
            t_min: 2f64.powi(-10),
            t_max: 2f64.powi(10),
            ratio: 2f64.powf(1.0 / 16.0),
        }
    }
}

impl TGrid {
    pub fn new(t_min: f64, t_max: f64, ratio: f64) -> Result<Self> {
        let g = TGrid { t_min, t_max, ratio };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return Err(invalid(format!(
                "dilation range [{}, {}] invalid",
                self.t_min, self.t_max
            )));
        }
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return Err(invalid(format!("dilation ratio {} must exceed 1", self.ratio)));
        }
        Ok(())
    }

    /// Number of nodes `K + 1`.
    pub fn len(&self) -> usize {
        let steps = (self.t_max / self.t_min).ln() / self.ratio.ln();
        (steps - 1e-9).ceil() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> Vec<f64> {
        let lr = self.ratio.ln();
        (0..self.len()).map(|k| self.t_min * (k as f64 * lr).exp()).collect()
    }

    pub fn weight(&self) -> f64 {
        self.ratio.ln()
    }

    /// Twice the node density over the same range.
    pub fn refined(&self) -> TGrid {
        TGrid {
            ratio: self.ratio.sqrt(),
            ..*self
        }
    }
}
