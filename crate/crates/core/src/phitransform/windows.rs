use serde::Serialize;

use super::Grid;
use crate::{Error, Result};

fn flat(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// `C^∞` step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, all derivatives vanishing at both ends.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = flat(t);
        a / (a + flat(1.0 - t))
    }
}

/// `φ₀`: 1 on `|ξ| ≤ 1`, 0 on `|ξ| ≥ 3/2`.
fn phi0(xi: f64) -> f64 {
    1.0 - smooth_step(2.0 * (xi.abs() - 1.0))
}

/// The dyadic resolution of unity `φ_0, φ_j = φ₀(2^{-j}·) - φ₀(2^{1-j}·)`.
#[derive(Clone, Debug)]
pub struct ResolutionOfUnity {
    grid: Grid,
    levels: u32,
    blocks: Vec<Vec<f64>>,
}

impl ResolutionOfUnity {
    /// Largest `J` with `2^{J-1}` inside the grid band.
    pub fn max_levels(grid: &Grid) -> u32 {
        (grid.nyquist().log2().floor() as i64 + 1).max(0) as u32
    }

    pub fn build(grid: &Grid, levels: u32) -> Result<Self> {
        let max = Self::max_levels(grid);
        if levels > max {
            return Err(Error::Bandwidth { level: levels, max });
        }
        let freqs = grid.frequencies();
        let blocks = (0..=levels)
            .map(|j| freqs.iter().map(|&xi| Self::multiplier(j, xi)).collect())
            .collect();
        Ok(ResolutionOfUnity {
            grid: *grid,
            levels,
            blocks,
        })
    }

    /// `φ_j(ξ)`.
    pub fn multiplier(j: u32, xi: f64) -> f64 {
        if j == 0 {
            phi0(xi)
        } else {
            let s = (-(j as i32) as f64).exp2();
            phi0(s * xi) - phi0(2.0 * s * xi)
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Block `j` sampled at the grid frequencies.
    pub fn block(&self, j: u32) -> &[f64] {
        &self.blocks[j as usize]
    }
}

/// Base bump: 1 on `[3/5, 5/3]`, supported in `[1/2, 2]`.
fn base_bump(r: f64) -> f64 {
    if r <= 0.5 || r >= 2.0 {
        0.0
    } else if r < 0.6 {
        smooth_step((r - 0.5) / 0.1)
    } else if r <= 5.0 / 3.0 {
        1.0
    } else {
        1.0 - smooth_step((r - 5.0 / 3.0) / (1.0 / 3.0))
    }
}

/// `Σ_{j∈ℤ} g(2^{-j} r)^2`, invariant under `r ↦ 2r`.
fn dilation_sum(r: f64) -> f64 {
    let j0 = r.log2().floor() as i32;
    (j0 - 2..=j0 + 2)
        .map(|j| base_bump(r * (-j as f64).exp2()).powi(2))
        .sum()
}

/// `Fφ = Fψ = g / (Σ_j g(2^{-j}·)^2)^{1/2}`.
fn phi_hat_fn(xi: f64) -> f64 {
    let r = xi.abs();
    let g = base_bump(r);
    if g == 0.0 {
        0.0
    } else {
        g / dilation_sum(r).sqrt()
    }
}

/// `FΦ = FΨ = (1 - Σ_{j≥1} Fφ(2^{-j}·)^2)^{1/2}`: 1 on `|ξ| ≤ 1`, equal to `Fφ` on `1 < |ξ| < 2`.
fn big_phi_hat_fn(xi: f64) -> f64 {
    if xi.abs() <= 1.0 {
        1.0
    } else {
        phi_hat_fn(xi)
    }
}

/// Windows `Φ = Ψ`, `φ = ψ` with real even spectra satisfying the Calderón identity
/// `|FΦ|^2 + Σ_{j≥1} |Fφ(2^{-j}ξ)|^2 = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct WindowFamily {
    grid: Grid,
    #[serde(skip)]
    big_phi: Vec<f64>,
    #[serde(skip)]
    phi: Vec<f64>,
    /// Radius of `supp FΦ`.
    pub low_radius: f64,
    /// `supp Fφ ⊆ {inner ≤ |ξ| ≤ outer}`.
    pub band: (f64, f64),
    /// Lower bound on `|FΦ|` over `|ξ| ≤ 5/3` and `|Fφ|` over `3/5 ≤ |ξ| ≤ 5/3`.
    pub lower_bound: f64,
    /// Sup over grid frequencies of the Calderón identity defect.
    pub calderon_error: f64,
}

impl WindowFamily {
    pub fn build(grid: &Grid) -> Result<Self> {
        let freqs = grid.frequencies();
        let big_phi: Vec<f64> = freqs.iter().map(|&x| big_phi_hat_fn(x)).collect();
        let phi: Vec<f64> = freqs.iter().map(|&x| phi_hat_fn(x)).collect();

        let mut lower = f64::INFINITY;
        for (i, &xi) in freqs.iter().enumerate() {
            let r = xi.abs();
            if r <= 5.0 / 3.0 {
                lower = lower.min(big_phi[i]);
            }
            if (0.6..=5.0 / 3.0).contains(&r) {
                lower = lower.min(phi[i]);
            }
        }
        // The continuum bound is attained on a fine sweep as well as on the grid.
        for i in 0..=4000 {
            let r = 0.6 + (5.0 / 3.0 - 0.6) * i as f64 / 4000.0;
            lower = lower.min(phi_hat_fn(r)).min(big_phi_hat_fn(r));
        }
        if !(lower > 0.0) {
            return Err(Error::Window(format!("lower bound {lower} is not positive")));
        }

        let calderon_error = freqs
            .iter()
            .map(|&xi| (Self::calderon_sum(xi) - 1.0).abs())
            .fold(0.0, f64::max);

        Ok(WindowFamily {
            grid: *grid,
            big_phi,
            phi,
            low_radius: 2.0,
            band: (0.5, 2.0),
            lower_bound: lower,
            calderon_error,
        })
    }

    /// `|FΦ(ξ)|^2 + Σ_{j≥1} |Fφ(2^{-j}ξ)|^2`, summed over every nonzero term.
    pub fn calderon_sum(xi: f64) -> f64 {
        let mut total = big_phi_hat_fn(xi).powi(2);
        let mut j = 1;
        while (-(j as f64)).exp2() * xi.abs() >= 0.5 {
            total += phi_hat_fn((-(j as f64)).exp2() * xi).powi(2);
            j += 1;
        }
        total
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `FΦ = FΨ` at the grid frequencies.
    pub fn big_phi_spectrum(&self) -> &[f64] {
        &self.big_phi
    }

    /// `Fφ = Fψ` at the grid frequencies.
    pub fn phi_spectrum(&self) -> &[f64] {
        &self.phi
    }

    pub fn big_phi_hat(xi: f64) -> f64 {
        big_phi_hat_fn(xi)
    }

    pub fn phi_hat(xi: f64) -> f64 {
        phi_hat_fn(xi)
    }

    /// Spectrum of the level-`v` analysing window, `FΦ` at `v = 0` and `Fφ(2^{-v}·)` above.
    pub fn level_multiplier(v: u32, xi: f64) -> f64 {
        if v == 0 {
            big_phi_hat_fn(xi)
        } else {
            phi_hat_fn((-(v as f64)).exp2() * xi)
        }
    }
}
