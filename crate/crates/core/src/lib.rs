//! Dissipative dynamics of N q-deformed Frenkel excitons dispersively coupled
//! to a damped cavity mode.
//!
//! The closed-form block solution lives in [`analytic`]; [`oracle`] integrates
//! the same master equation numerically and serves as its reference.
//! [`observables`] turns either into entropies and squeezing indicators, and
//! [`runner`] drives reproducible runs, sweeps and validation reports.

pub mod algebra;
pub mod analytic;
pub mod block;
pub mod closed_form;
pub mod config;
pub mod error;
pub mod observables;
pub mod oracle;
pub mod presets;
pub mod runner;
pub mod superop;

pub use algebra::{
    derive_coefficients, DerivedCoefficients, FieldOperator, FockSpace, SystemParams,
};
pub use analytic::AnalyticModel;
pub use block::DensityBlock;
pub use config::{Engine, Observable, OutputFormat, Overrides, RunConfig};
pub use error::{Error, Result};
pub use observables::{ObservableRow, ObservableSeries, Source};
pub use oracle::{integrate, IntegratorConfig, IntegratorMethod};
pub use presets::Preset;
