//! Commutator norm estimates for functions of unitaries and positive contractions.
//!
//! * [`periodic`]: periodic functions, Fourier coefficients, extents.
//! * [`envelope`]: affine bound lines and their lower envelope.
//! * [`circle`]: upper and lower bounds for `‖[f[V], A]‖`.
//! * [`positive`]: bounds for `‖[f(H), A]‖`, including the square-root envelope γ₀.
//! * [`lab`]: dense-matrix oracle used to check the bounds on random instances.
//! * [`experiments`]: the commands behind the `commbound` binary.

pub mod circle;
pub mod envelope;
pub mod error;
pub mod experiments;
pub mod lab;
pub mod periodic;
pub mod positive;

pub use envelope::{BoundCurve, BoundLine, Provenance, Segment};
pub use error::{Error, Result};
pub use periodic::{PeriodicFunction, TrigPolynomial};
