//! Shared fixtures for the criterion benches.

use herzlab::embedlab::{generate_member, EnsembleSpec};
use herzlab::CoefficientField;

/// A reproducible random field with entries on levels `0..=vmax`.
pub fn sample_field(vmax: u32, sparsity: usize, seed: u64) -> CoefficientField {
    let spec = EnsembleSpec {
        members: 1,
        vmax,
        kmax: vmax as i32 + 4,
        sparsity,
        seed,
        ..Default::default()
    };
    generate_member(&spec, 0).expect("valid bench spec")
}
