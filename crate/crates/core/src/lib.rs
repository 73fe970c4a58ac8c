//! Computational tools for sets avoiding the equation `x + y + z = 3w`.
//!
//! The crate covers the objects that show up when such sets are studied
//! over `Z_N`: Bohr sets and their regularity and size bounds, density
//! convolutions and solution counting, randomized sampling of almost
//! periods, explicit solution-free constructions, exact extremal search on
//! small intervals, and a symbolic simulator for the density-increment
//! recursion that ties the pieces together.

pub mod bohr;
pub mod constructions;
pub mod conv;
pub mod error;
pub mod extremal;
mod fft;
pub mod fit;
pub mod periodicity;
pub mod sim;
pub mod zn;

pub use bohr::{
    certify_regular, check_size_bounds, default_delta_grid, find_regular_radius, BohrProfile,
    BohrSet, BohrSpec, CertificationMode, RegularityReport, SizeBoundReport,
};
pub use constructions::{
    behrend_construct, behrend_construct_with_base, behrend_density_curve, density_decay_fit,
    BehrendParams, BehrendResult, DensityPoint,
};
pub use conv::{
    convolve, convolve_counts, count_solutions, count_solutions_interval, linf_dist,
    relative_density, sumset, DensityFn, SolutionCount,
};
pub use error::{Error, Result};
pub use extremal::{extremal_table, max_solution_free, ExtremalRecord};
pub use fit::{linear_fit, LinearFit};
pub use periodicity::{
    check_almost_period, density_dichotomy, desk_instance, inclusion_probabilities,
    max_sampling_gamma, random_subset, sample_r, sample_r_stream, verify_r_concentration,
    BernsteinBound, ConcentrationInstance, DichotomyOutcome, IncrementSide, PeriodicityParams,
    SampleReport, TrialRecord,
};
pub use sim::{
    compare_schemes, default_alpha_grid, run, step_main, step_old, sweep, threshold, Branch,
    CompareReport, IterState, KPolicy, RunResult, Scheme, SimConfig, SweepReport, ThresholdRecord,
    Verdict,
};
pub use zn::{char_distance, embed_interval, Character, Modulus, ZnSet};
