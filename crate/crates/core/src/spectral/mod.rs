//! Periodic sampling grids, complex fields and the scaled discrete Fourier
//! transform.
//!
//! A [`Grid`] samples the box `[-L, L)^d` with `N` points per axis. Its
//! frequency lattice is centered: index `i` on an axis corresponds to the
//! signed frequency `(i - N/2) / (2L)`. With the convention
//! `f^(xi) = \int f(x) e^{-2 pi i x.xi} dx`, [`forward_transform`] is the
//! Riemann sum of that integral and [`inverse_transform`] is its exact
//! discrete inverse.

mod container;
mod transform;

pub use container::{read_field, read_index_map, write_field, write_index_map, MAGIC};
pub use transform::{forward_transform, inverse_transform, SpectralPlan};

use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    half_width: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, half_width: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(invalid(format!("grid dimension {dim} not in 1..=3")));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(invalid(format!("samples per axis {n} must be a power of two >= 4")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(invalid(format!("half width {half_width} must be positive")));
        }
        Ok(Grid { dim, n, half_width })
    }

    /// Grid with the given Nyquist frequency, `L = N / (4 nyquist)`.
    pub fn with_nyquist(dim: usize, n: usize, nyquist: f64) -> Result<Self> {
        if !(nyquist.is_finite() && nyquist > 0.0) {
            return Err(invalid(format!("nyquist {nyquist} must be positive")));
        }
        Grid::new(dim, n, n as f64 / (4.0 * nyquist))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn samples_per_axis(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical spacing `h = 2L / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Frequency spacing `1 / (2L)`.
    pub fn freq_spacing(&self) -> f64 {
        0.5 / self.half_width
    }

    pub fn nyquist(&self) -> f64 {
        self.n as f64 / (4.0 * self.half_width)
    }

    /// Cell volume of the physical lattice.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Cell volume of the frequency lattice.
    pub fn freq_cell_volume(&self) -> f64 {
        self.freq_spacing().powi(self.dim as i32)
    }

    /// The grid whose physical lattice is this grid's frequency lattice.
    pub fn dual(&self) -> Grid {
        Grid {
            dim: self.dim,
            n: self.n,
            half_width: self.nyquist(),
        }
    }

    /// Same box, twice the samples per axis.
    pub fn refined(&self) -> Grid {
        Grid { n: self.n * 2, ..*self }
    }

    /// Same Nyquist frequency, half the frequency spacing (`2N` samples on
    /// a box twice as wide). Refines data that lives on the frequency
    /// lattice, such as sampled symbols.
    pub fn refined_spectrum(&self) -> Grid {
        Grid {
            n: self.n * 2,
            half_width: self.half_width * 2.0,
            ..*self
        }
    }

    /// Per-axis indices of a flat row-major index (last axis fastest).
    pub fn unflatten(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx[..self.dim].iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn frequency(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.freq_spacing()
    }

    /// Physical point of a flat index; unused trailing components are zero.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.coordinate(idx[a]);
        }
        p
    }

    /// Frequency point of a flat index; unused trailing components are zero.
    pub fn freq_point(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.frequency(idx[a]);
        }
        p
    }

    /// True when any per-axis index sits on the lower edge of the box.
    pub fn on_boundary(&self, flat: usize) -> bool {
        let idx = self.unflatten(flat);
        idx[..self.dim].contains(&0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Physical,
    Frequency,
}

impl Domain {
    pub fn tag(self) -> u8 {
        match self {
            Domain::Physical => 0,
            Domain::Frequency => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    domain: Domain,
    values: Vec<C64>,
}

impl Field {
    pub fn new(grid: Grid, domain: Domain, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(contract(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, domain, values })
    }

    pub fn zeros(grid: Grid, domain: Domain) -> Self {
        Field {
            grid,
            domain,
            values: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Sample `f` at every lattice point of the requested domain.
    pub fn from_fn<F>(grid: Grid, domain: Domain, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Sync + Send,
    {
        let d = grid.dim();
        let values = crate::par::map_range(grid.len(), |k| {
            let p = match domain {
                Domain::Physical => grid.point(k),
                Domain::Frequency => grid.freq_point(k),
            };
            f(&p[..d])
        });
        Field { grid, domain, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn expect_domain(&self, domain: Domain) -> Result<()> {
        if self.domain != domain {
            return Err(contract(format!("expected a {domain:?} field, got {:?}", self.domain)));
        }
        Ok(())
    }

    /// Read frequency samples as a physical field on the dual grid. The
    /// values are shared index for index; no data is moved.
    pub fn reinterpret_as_physical(self) -> Result<Field> {
        self.expect_domain(Domain::Frequency)?;
        Ok(Field {
            grid: self.grid.dual(),
            domain: Domain::Physical,
            values: self.values,
        })
    }

    /// Measure of one lattice cell in this field's domain.
    pub fn cell_measure(&self) -> f64 {
        match self.domain {
            Domain::Physical => self.grid.cell_volume(),
            Domain::Frequency => self.grid.freq_cell_volume(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&mut self, s: C64) {
        for v in &mut self.values {
            *v *= s;
        }
    }

    /// `a * self + b * other`, both on the same grid and domain.
    pub fn combine(&self, a: C64, other: &Field, b: C64) -> Result<Field> {
        if self.grid != other.grid || self.domain != other.domain {
            return Err(contract("combining fields on different grids or domains"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Field {
            grid: self.grid,
            domain: self.domain,
            values,
        })
    }
}

/// Frequency-lattice samples of `keep(r) * h(r)`, `r = |xi|`, with `h`
/// called once per distinct lattice radius where `keep(r) != 0`. Other
/// points are zero. Radii are keyed by the exact integer `|k|^2`.
pub fn sample_radial<K, H, E>(grid: &Grid, keep: K, h: H) -> std::result::Result<Vec<C64>, E>
where
    K: Fn(f64) -> f64 + Sync + Send,
    H: Fn(f64) -> std::result::Result<C64, E> + Sync + Send,
    E: Send,
{
    let d = grid.dim();
    let half = (grid.samples_per_axis() / 2) as i64;
    let dxi = grid.freq_spacing();
    let key_of = |flat: usize| -> u64 {
        let idx = grid.unflatten(flat);
        idx[..d]
            .iter()
            .map(|&i| {
                let k = i as i64 - half;
                (k * k) as u64
            })
            .sum()
    };
    let keys: Vec<u64> = crate::par::map_range(grid.len(), key_of);
    let mut distinct = keys.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let weights: Vec<f64> = crate::par::map(&distinct, |&k| keep((k as f64).sqrt() * dxi));
    let vals = crate::par::try_map_range(distinct.len(), |i| {
        if weights[i] == 0.0 {
            Ok(C64::new(0.0, 0.0))
        } else {
            Ok(h((distinct[i] as f64).sqrt() * dxi)? * weights[i])
        }
    })?;
    Ok(crate::par::map(&keys, |k| {
        let i = distinct.binary_search(k).expect("key present");
        vals[i]
    }))
}

/// Riemann-sum `L^p` norm with the lattice cell measure of the field's
/// domain; `p = f64::INFINITY` gives the grid maximum of `|f|`.
pub fn lebesgue_norm(f: &Field, p: f64) -> Result<f64> {
    lp_of_values(f.values(), f.cell_measure(), p)
}

pub(crate) fn lp_of_values(values: &[C64], measure: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid(format!("L^p exponent {p} must be >= 1")));
    }
    if p.is_infinite() {
        return Ok(values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    if p == 2.0 {
        let s: f64 = values.iter().map(|v| v.norm_sqr()).sum();
        return Ok((measure * s).sqrt());
    }
    // scale by the max to stay finite for large p
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = values.iter().map(|v| (v.norm() / peak).powf(p)).sum();
    Ok(peak * (measure * s).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_derived_quantities() {
        let g = Grid::new(1, 1024, 16.0).unwrap();
        assert_eq!(g.spacing() * 1024.0, 32.0);
        assert_eq!(g.freq_spacing(), 1.0 / 32.0);
        assert_eq!(g.nyquist(), 16.0);
        assert_eq!(g.frequency(512), 0.0);
        assert_eq!(g.frequency(0), -16.0);
        assert_eq!(g.coordinate(0), -16.0);
        let dual = g.dual();
        for i in [0, 17, 512, 1023] {
            assert_eq!(dual.coordinate(i), g.frequency(i));
        }
    }

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(Grid::new(4, 16, 1.0).is_err());
        assert!(Grid::new(1, 12, 1.0).is_err());
        assert!(Grid::new(2, 16, 0.0).is_err());
    }

    #[test]
    fn flat_index_roundtrip() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        for k in [0, 1, 9, 77, 511] {
            assert_eq!(g.flatten(&g.unflatten(k)), k);
        }
    }

    #[test]
    fn plateau_l2_norm() {
        // indicator of [-1, 1): measure 2
        let g = Grid::new(1, 4096, 8.0).unwrap();
        let f = Field::from_fn(g, Domain::Physical, |x| {
            C64::new(if x[0] >= -1.0 && x[0] < 1.0 { 1.0 } else { 0.0 }, 0.0)
        });
        let n = lebesgue_norm(&f, 2.0).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 2.0 * g.spacing());
    }

    #[test]
    fn gaussian_l2_norm() {
        let g = Grid::new(1, 1024, 16.0).unwrap();
        let f = Field::from_fn(g, Domain::Physical, |x| {
            C64::new((-std::f64::consts::PI * x[0] * x[0]).exp(), 0.0)
        });
        let n = lebesgue_norm(&f, 2.0).unwrap();
        let exact = 2f64.powf(-0.25);
        assert!((n - exact).abs() / exact < 1e-8);
    }

    #[test]
    fn sup_norm_is_grid_max() {
        let g = Grid::new(1, 64, 1.0).unwrap();
        let f = Field::from_fn(g, Domain::Physical, |x| C64::new(x[0], -2.0 * x[0]));
        let expected = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert_eq!(lebesgue_norm(&f, f64::INFINITY).unwrap(), expected);
    }

    #[test]
    fn lp_rejects_small_exponent() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        let f = Field::zeros(g, Domain::Physical);
        assert!(matches!(lebesgue_norm(&f, 0.5), Err(crate::Error::InvalidParameter(_))));
    }
}
