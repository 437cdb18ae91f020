//! Cylinder-measure oracles and genericity statistics: empirical
//! frequencies, `(m, ε)`-goodness and convergence diagnostics.

mod gauss;
mod goodness;
mod oracle;
mod parry;
mod spec;

pub use gauss::{gauss_first_digit_partial_sum, gauss_interval_mass, gauss_random_digits, Gauss};
pub use goodness::{
    compare, convergence_diagnostic, empirical, first_blocks, is_good, robustness_delta, BlockTrajectory,
    BlockVerdict, CheckpointReport, DiagnosticReport, EmpiricalMeasure, GoodnessReport, Verdict,
};
pub use oracle::{sample_stream, Bernoulli, DiracZero, Mass, MeasureOracle, Mix, Oracle};
pub use parry::Parry;
pub use spec::parse_oracle;
