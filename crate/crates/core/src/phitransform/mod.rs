//! Littlewood-Paley blocks and the φ-transform on sampled one-dimensional
//! functions.
//!
//! Functions live on the circle `[-L, L)` sampled at `N` points, both powers
//! of two. Fourier transforms use `f̂(ξ) = ∫ f(x) e^{-ixξ} dx`; grid frequency
//! index `k` (signed) corresponds to `ξ_k = πk/L`.

mod atoms;
mod norms;
mod transform;
mod windows;

use std::cell::RefCell;

use rustfft::FftPlanner;
use serde::Serialize;

use crate::{Complex64, Error, Result};

pub use atoms::{eta_family, eta_hat, omega_family, omega_hat, random_band_limited};
pub use norms::{function_space_norm, function_space_norm_with, sampled_herz_norm, FunctionNorm, GridNormOptions};
pub use transform::{analyze, synthesize};
pub use windows::{smooth_step, ResolutionOfUnity, WindowFamily};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized forward DFT `X_k = Σ_j x_j e^{-2πijk/N}`.
pub(crate) fn fft_forward(data: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(data.len()));
    plan.process(data);
}

/// In-place inverse DFT including the `1/N` factor.
pub(crate) fn fft_inverse(data: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(data.len()));
    plan.process(data);
    let s = 1.0 / data.len() as f64;
    data.iter_mut().for_each(|z| *z *= s);
}

/// Uniform periodic grid on `[-L, L)` with `N` samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    half_width: f64,
    size: usize,
}

impl Grid {
    /// Both `L ≥ 2` and `N ≥ 2^10` must be powers of two with spacing `2L/N ≤ 1`.
    pub fn new(half_width: f64, size: usize) -> Result<Self> {
        let pow2 = |x: f64| x > 0.0 && x.log2().fract() == 0.0;
        if !(half_width >= 2.0 && pow2(half_width)) {
            return Err(Error::InvalidGrid(format!(
                "L must be a power of two ≥ 2, got {half_width}"
            )));
        }
        if !(size >= 1 << 10 && size.is_power_of_two()) {
            return Err(Error::InvalidGrid(format!(
                "N must be a power of two ≥ 1024, got {size}"
            )));
        }
        if 2.0 * half_width > size as f64 {
            return Err(Error::InvalidGrid(format!(
                "spacing 2L/N must be ≤ 1 (L = {half_width}, N = {size})"
            )));
        }
        Ok(Grid { half_width, size })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.size as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    /// Index of the sample at `x = 0`.
    pub fn origin_index(&self) -> usize {
        self.size / 2
    }

    /// Signed frequency index of DFT slot `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.size / 2 {
            k as i64
        } else {
            k as i64 - self.size as i64
        }
    }

    pub fn frequency(&self, k: usize) -> f64 {
        std::f64::consts::PI * self.signed_index(k) as f64 / self.half_width
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.size).map(|k| self.frequency(k)).collect()
    }

    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.dx()
    }

    /// Deepest level `v` whose lattice `2^{-v} ℤ` lies on the grid.
    pub fn max_level(&self) -> u32 {
        (1.0 / self.dx()).log2() as u32
    }

    /// `log2 L`, the outermost annulus fully inside the grid.
    pub fn outer_annulus(&self) -> i64 {
        self.half_width.log2() as i64
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.size() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.size(),
                samples.len()
            )));
        }
        Ok(SampledFunction { grid, samples })
    }

    pub fn zeros(grid: Grid) -> Self {
        SampledFunction {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.size()],
        }
    }

    /// Samples of the band-limited function with Fourier transform `hat`.
    pub fn from_spectrum(grid: Grid, hat: impl Fn(f64) -> Complex64) -> Self {
        let mut data: Vec<Complex64> = (0..grid.size())
            .map(|k| {
                let sign = if grid.signed_index(k) % 2 == 0 { 1.0 } else { -1.0 };
                hat(grid.frequency(k)) * sign
            })
            .collect();
        fft_inverse(&mut data);
        let scale = grid.size() as f64 / (2.0 * grid.half_width());
        data.iter_mut().for_each(|z| *z *= scale);
        SampledFunction { grid, samples: data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// The unnormalized DFT of the samples.
    pub fn dft(&self) -> Vec<Complex64> {
        let mut data = self.samples.clone();
        fft_forward(&mut data);
        data
    }

    /// Applies the Fourier multiplier `m(ξ)`.
    pub fn multiply(&self, m: impl Fn(f64) -> Complex64) -> SampledFunction {
        let mut data = self.dft();
        for (k, z) in data.iter_mut().enumerate() {
            *z *= m(self.grid.frequency(k));
        }
        fft_inverse(&mut data);
        SampledFunction {
            grid: self.grid,
            samples: data,
        }
    }

    /// `(Σ_j |f_j|^2 dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &SampledFunction, b: Complex64) -> Result<Self> {
        if other.grid != self.grid {
            return Err(Error::InvalidGrid("grids differ".into()));
        }
        Ok(SampledFunction {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn scaled(&self, a: Complex64) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            samples: self.samples.iter().map(|z| a * z).collect(),
        }
    }
}
