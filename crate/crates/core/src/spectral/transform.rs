use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::{Domain, Field, Grid};
use crate::error::Result;
use crate::C64;

/// Cached FFT plans for one grid. Cheap to clone; safe to share between
/// threads.
#[derive(Clone)]
pub struct SpectralPlan {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralPlan {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.samples_per_axis();
        SpectralPlan {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Physical samples -> centered frequency samples, in place.
    pub fn forward_in_place(&self, values: &mut [C64]) {
        let h = self.grid.spacing();
        self.along_axes(values, |line, scratch| {
            self.forward.process_with_scratch(line, scratch);
            recenter(line, h);
        });
    }

    /// Centered frequency samples -> physical samples, in place.
    pub fn inverse_in_place(&self, values: &mut [C64]) {
        let dxi = self.grid.freq_spacing();
        self.along_axes(values, |line, scratch| {
            decenter(line, dxi);
            self.inverse.process_with_scratch(line, scratch);
        });
    }

    pub fn forward(&self, f: &Field) -> Result<Field> {
        f.expect_domain(Domain::Physical)?;
        let mut values = f.values().to_vec();
        self.forward_in_place(&mut values);
        Field::new(*f.grid(), Domain::Frequency, values)
    }

    pub fn inverse(&self, f: &Field) -> Result<Field> {
        f.expect_domain(Domain::Frequency)?;
        let mut values = f.values().to_vec();
        self.inverse_in_place(&mut values);
        Field::new(*f.grid(), Domain::Physical, values)
    }

    fn along_axes<F>(&self, values: &mut [C64], op: F)
    where
        F: Fn(&mut [C64], &mut [C64]) + Sync + Send,
    {
        let n = self.grid.samples_per_axis();
        let dim = self.grid.dim();
        let scratch_len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        let run = |lines: &mut [C64]| {
            let mut scratch = vec![C64::new(0.0, 0.0); scratch_len];
            for line in lines.chunks_mut(n) {
                op(line, &mut scratch);
            }
        };
        // chunk of lines handled per task; keeps scratch allocation amortised
        let lines_per_task = 64usize;
        for axis in (0..dim).rev() {
            let stride = n.pow((dim - 1 - axis) as u32);
            if stride == 1 {
                crate::par::for_each_chunk_mut(values, n * lines_per_task, run);
                continue;
            }
            let count = values.len() / n;
            let mut buf = vec![C64::new(0.0, 0.0); values.len()];
            for l in 0..count {
                let base = (l / stride) * n * stride + l % stride;
                for i in 0..n {
                    buf[l * n + i] = values[base + i * stride];
                }
            }
            crate::par::for_each_chunk_mut(&mut buf, n * lines_per_task, run);
            for l in 0..count {
                let base = (l / stride) * n * stride + l % stride;
                for i in 0..n {
                    values[base + i * stride] = buf[l * n + i];
                }
            }
        }
    }
}

// DFT output index k mod n -> centered index k + n/2, with the (-1)^k phase
// from the box starting at -L.
fn recenter(line: &mut [C64], scale: f64) {
    let n = line.len();
    let half = n / 2;
    let dft = line.to_vec();
    for (ic, out) in line.iter_mut().enumerate() {
        let k = ic as isize - half as isize;
        let src = k.rem_euclid(n as isize) as usize;
        let sign = if k.rem_euclid(2) == 0 { scale } else { -scale };
        *out = dft[src] * sign;
    }
}

fn decenter(line: &mut [C64], scale: f64) {
    let n = line.len();
    let half = n / 2;
    let centered = line.to_vec();
    for (ic, v) in centered.iter().enumerate() {
        let k = ic as isize - half as isize;
        let dst = k.rem_euclid(n as isize) as usize;
        let sign = if k.rem_euclid(2) == 0 { scale } else { -scale };
        line[dst] = v * sign;
    }
}

/// Scaled DFT approximating `\int f(x) e^{-2 pi i x.xi} dx` on the centered
/// frequency lattice.
pub fn forward_transform(f: &Field) -> Result<Field> {
    SpectralPlan::new(*f.grid()).forward(f)
}

/// Exact discrete inverse of [`forward_transform`].
pub fn inverse_transform(f: &Field) -> Result<Field> {
    SpectralPlan::new(*f.grid()).inverse(f)
}
