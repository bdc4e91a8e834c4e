//! Dyadic geometry: cubes `Q_{v,m}`, annuli `C_k`, exact overlaps on the line,
//! partition refinement and sparse coefficient fields.

mod cube;
mod field;
mod partition;
mod rational;

pub use cube::{
    annulus_cube_overlap, cube_extent, dimension_constant, interval_overlap, line_annulus_overlap, unit_ball_volume,
    Annulus, DyadicCube, Overlap, OverlapEstimator, DEFAULT_OVERLAP_SAMPLES, MAX_LEVEL,
};
pub use field::CoefficientField;
pub use partition::{
    refine_line, refine_to_partition, AnnulusPartition, CubeFunction, LevelStack, Partition1D,
    PiecewiseConstantFunction, Segment, StepFunction,
};
pub use rational::Dyadic;
