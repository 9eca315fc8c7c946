//! Desk-scale computational toolkit for rearrangement-invariant function-space
//! analysis.
//!
//! The library is organised in layers:
//!
//! * [`step`] — exact calculus of finitely supported step functions on the
//!   line, the half-line, the 2π-torus and the integers: integration,
//!   distribution functions, decreasing rearrangements, and convolution
//!   (which produces exact piecewise-linear output on continuous domains).
//! * [`varying`] — slowly varying weights (iterated-log powers), dilation
//!   functions and numeric dilation indices.
//! * [`orlicz`] / [`spaces`] — Young-function calculus (Luxemburg and
//!   Amemiya gauges, conjugates, inverse-formula constructions) and norm
//!   evaluation for Lebesgue, Lorentz, Lorentz–Karamata, Orlicz, L log L,
//!   exponential and grand-Lebesgue spaces.
//! * [`interp`] — K- and J-functionals of compatible couples and the
//!   discretised K/J-method norms with truncation diagnostics.
//! * [`suites`] — verification suites that sweep seeded corpora through
//!   convolution and bilinear-multiplier inequalities and report certified
//!   ratio statistics.
//! * [`trig`] — trigonometric polynomials and bilinear Fourier multipliers
//!   on the torus.
//! * [`grammar`] — the textual configuration grammar used by the CLI.
//!
//! Everything is deterministic: corpora are generated from explicit seeds,
//! reductions are order-fixed, and reports serialize byte-identically for a
//! given configuration regardless of thread count.

pub mod conv;
pub mod corpus;
pub mod domain;
pub mod error;
pub mod extremal;
pub mod grammar;
pub mod interp;
pub mod maximal;
pub mod orlicz;
pub mod pwl;
pub mod report;
pub mod spaces;
pub mod step;
pub mod suites;
pub mod trig;
pub mod varying;

mod quad;
mod sum;

pub use domain::Domain;
pub use error::{Error, Result};
pub use step::StepFunction;
