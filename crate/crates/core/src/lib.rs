//! Generalized Hausdorff operators on the real line, truncated Fourier approximants
//! of their adjoints, and the modulus-of-continuity bounds that control the error.
//!
//! Fourier convention: f̂(y) = ∫ f(s) e^{−isy} ds, inverse with 1/(2π).

pub mod analysis;
pub mod bounds;
pub mod catalog;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod moduli;
pub mod operators;
pub mod quadrature;

pub use analysis::{
    inner_product, lp_norm, lp_norm_with_error, validate_scaling, DecayClass, GridRole, GridSpec, KernelSpec,
    LebesgueExponent, LpMembership, QuadratureConfig, ScalingReport, ScalingSpec, ScalingViolation, TestFunction,
};
pub use error::{HausError, Result};
pub use operators::{
    adjoint_apply, bellman_closed_form, cesaro_closed_form, classical_operator, duality_gap, hausdorff_apply,
    riemann_liouville_closed_form, HausdorffOperatorSpec, OperatorCatalogEntry,
};
