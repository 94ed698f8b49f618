//! Novikov–Shubin numbers and alpha numbers of matrices over group rings of virtually cyclic
//! groups, computed exactly where possible.

pub mod arith;
pub mod baker;
pub mod builtins;
pub mod error;
pub mod groupring;
pub mod io;
pub mod matrix;
pub mod nets;
pub mod ns;
pub mod precision;
pub mod quotients;
pub mod roots;
pub mod smith;

pub use arith::{rat, GaussianRational, LaurentPoly, Rational};
pub use error::{Error, Result};
pub use groupring::{
    build_quotient_dense, group_inv, group_mul, restrict_to_z, validate_group, GroupElement, GroupRingMatrix,
    GroupSpecJson, VcGroupSpec,
};
pub use matrix::LaurentMatrix;
pub use ns::{growth_exponents, ns_number, ns_number_group, ns_number_matrix, unit_circle_roots, GrowthFit, NsValue, RootConfig, UnitCircleRoot};
pub use quotients::{
    dft_blocks, exact_rank_level, exact_zero_count, sdf_step, spectral_sample, SampleFlag, SpectralModel,
    SpectralSample, StepSdf, Tolerances,
};
pub use smith::{determinantal_divisors, last_invariant_factor, smith_normal_form, SnfResult};
pub use nets::{
    best_approx_records, counterexample_report, net_extrema, net_report, separated_index_search, ApproxRecord, CounterexampleConfig,
    CounterexampleReport, NetEstimate, RecordSearch, SeparatedSearch,
};
pub use baker::{baker_summary, circle_runner_check, BakerSummary, empirical_baker_exponent, liminf_floor, CircleRunnerEntry, CircleRunnerReport};
pub use builtins::{builtin, counterexample_polynomial, BuiltinInput, BUILTIN_NAMES};
pub use io::{group_matrix_from_value, group_matrix_to_value, laurent_from_value, laurent_to_value, matrix_from_value, matrix_to_value, parse_laurent, parse_matrix};
