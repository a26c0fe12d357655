//! Parameter sweeps over `(n, α, θ)` for the holonomy crate, with CSV/JSON
//! export and the acceptance checks behind the `check` subcommand.

pub mod acceptance;
pub mod emit;
pub mod engine;
pub mod spec;

pub use emit::{emit, read_from, EmitError, Format};
pub use engine::{
    compare_methods, cross_section, run_eigen_sweep, run_point, run_sweep, CompareRecord, EigenRecord, Fixed, SweepRecord,
};
pub use spec::{GridRange, Method, SpecError, SweepSpec};
