use super::{fft_forward, fft_inverse, Grid, SampledFunction, WindowFamily};
use crate::dyadic::{CoefficientField, DyadicCube};
use crate::{Complex64, Error, Result};

fn check_level(grid: &Grid, v: u32) -> Result<()> {
    if v > grid.max_level() {
        return Err(Error::Bandwidth {
            level: v,
            max: grid.max_level(),
        });
    }
    Ok(())
}

/// Lattice `m 2^{-v}`, `m ∈ [-L 2^v, L 2^v)`, as `(m, grid index)`.
fn lattice(grid: &Grid, v: u32) -> impl Iterator<Item = (i64, usize)> {
    let stride = 1usize << (grid.max_level() - v);
    let half = (grid.half_width() as i64) << v;
    (-half..half).map(move |m| (m, (m + half) as usize * stride))
}

/// The φ-transform: `(S f)_{0,m} = ⟨f, Φ_m⟩`, `(S f)_{v,m} = ⟨f, φ_{v,m}⟩` for
/// `1 ≤ v ≤ vmax`, with `φ_{v,m} = 2^{v/2} φ(2^v · - m)`.
///
/// Inner products are grid quadratures, evaluated as
/// `2^{-v/2} (f ∗ φ̃_v)(m 2^{-v})` through the DFT.
pub fn analyze(f: &SampledFunction, w: &WindowFamily, vmax: u32) -> Result<CoefficientField> {
    let grid = *f.grid();
    if grid != *w.grid() {
        return Err(Error::InvalidGrid(
            "function and window family use different grids".into(),
        ));
    }
    check_level(&grid, vmax)?;
    let spectrum = f.dft();
    let mut field = CoefficientField::new(1)?;
    for v in 0..=vmax {
        let mut g: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(k, z)| z * WindowFamily::level_multiplier(v, grid.frequency(k)))
            .collect();
        fft_inverse(&mut g);
        let scale = (-(v as f64) / 2.0).exp2();
        for (m, j) in lattice(&grid, v) {
            field.insert(DyadicCube::line(v, m)?, g[j] * scale)?;
        }
    }
    Ok(field)
}

/// The inverse transform `T_ψ λ = Σ_m λ_{0,m} Ψ_m + Σ_{v≥1} Σ_m λ_{v,m} ψ_{v,m}`
/// on the grid; lattice indices wrap around the circle.
pub fn synthesize(field: &CoefficientField, w: &WindowFamily, grid: &Grid) -> Result<SampledFunction> {
    if field.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: field.dim(),
        });
    }
    if grid != w.grid() {
        return Err(Error::InvalidGrid("window family built for another grid".into()));
    }
    let n = grid.size();
    let mut total = vec![Complex64::new(0.0, 0.0); n];
    let inv_dx = 1.0 / grid.dx();
    for v in field.levels() {
        check_level(grid, v)?;
        let stride = 1i64 << (grid.max_level() - v);
        let half = (grid.half_width() as i64) << v;
        let mut comb = vec![Complex64::new(0.0, 0.0); n];
        for (cube, z) in field.level_entries(v) {
            let m = cube.index()[0];
            let j = ((m + half) * stride).rem_euclid(n as i64) as usize;
            comb[j] += z * inv_dx;
        }
        fft_forward(&mut comb);
        let scale = (-(v as f64) / 2.0).exp2();
        for (k, z) in comb.iter().enumerate() {
            total[k] += z * (scale * WindowFamily::level_multiplier(v, grid.frequency(k)));
        }
    }
    fft_inverse(&mut total);
    SampledFunction::new(*grid, total)
}
