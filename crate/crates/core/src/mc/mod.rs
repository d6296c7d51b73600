//! Feynman-Kac Monte Carlo: Lévy path sampling and estimates of `T_t 1(x)`.

pub mod estimate;
pub mod sampler;

pub use estimate::{
    fk_estimate, fk_estimate_common, fk_refinement, path_rng, sample_endpoints, simulate_path,
    step_count, McEstimate, SampleStats,
};
pub use sampler::{
    positive_stable, small_jump_variance, symmetric_stable, IncrementSampler, McConfig, SmallJumps,
};
