//! Asymptotic electromagnetic scattering by thin, parallel, perfectly
//! conducting circular cylinders.
//!
//! The problem reduces to a scalar 2-D Helmholtz problem for the axial mode
//! `u` with Dirichlet conditions on the cylinder cross-sections. This crate
//! provides:
//!
//! * [`special`] — Bessel/Hankel functions and the 2-D Helmholtz kernel;
//! * [`single`] — scattering by one thin cylinder: the asymptotic charge and
//!   field plus two independent reference solutions (a log-kernel boundary
//!   solve and the exact cylindrical-harmonic series);
//! * [`many`] — the self-consistent effective-field linear system for an
//!   array of cylinders and field reconstruction;
//! * [`homogenize`] — the small-radius limit: density-driven center
//!   sampling, the limiting integral equation solved by collocation, the
//!   Schrodinger-form PDE residual, and the effective refraction
//!   coefficient;
//! * [`fields3d`] — full 3-D electromagnetic fields rebuilt from `u`, with
//!   numerical Maxwell-residual checks.
//!
//! All public operations are pure functions of their inputs and safe to call
//! concurrently; solver outputs are immutable values.

pub mod error;
pub mod field;
pub mod fields3d;
pub mod geometry;
pub mod homogenize;
pub mod linalg;
pub mod many;
pub mod quad;
pub mod single;
pub mod special;

pub use error::{CoreError, Result};
pub use field::ScalarField2d;
pub use geometry::{Disc, IncidentWave, Point2, Point3, Rect};
pub use num_complex::Complex64;
