//! Error bounds for Trotter/Suzuki product formulas on specific input states,
//! hydrogen analytics, and the numerical machinery to check both.

// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod bessel;
pub mod bound;
pub mod dense;
pub mod field;
pub mod fit;
pub mod formula;
pub mod hydrogen;
pub mod quad;
pub mod special;
pub mod tails;
pub mod word;

pub use bessel::{BesselBasis, BesselError, ErrorCurve, InitialState, RadialState};
pub use bound::{derive_bound, evaluate_bound, loose_bound, BoundError, BoundExpression, LooseBound};
pub use dense::{bound_validation, trotter_error, DenseError, HermitianPair};
pub use field::Alg;
pub use fit::{kendall_tau, local_slopes, slope_fit, FitError, ScalingReport};
pub use formula::{integral_action, suzuki_times, verify_order, FormulaError, IntegralAction, OrderCheck, ProductFormula};
pub use hydrogen::{HydrogenError, HydrogenLevel, ReducedTime};
pub use tails::{delta1_bound, DeltaKind, TailError, TailProfile};
pub use word::{Letter, OperatorWord};
