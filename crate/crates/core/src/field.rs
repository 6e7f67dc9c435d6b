//! Scalar cross-sectional fields with analytic planar gradients.

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{IncidentWave, Point2};

/// A complex scalar field on the cross-sectional plane whose value and first
/// derivatives are available pointwise. Implementations differentiate their
/// closed forms; no finite differencing happens behind this trait.
pub trait ScalarField2d {
    fn eval(&self, p: Point2) -> Result<Complex64>;

    /// Planar gradient `[du/dx, du/dy]`.
    fn grad(&self, p: Point2) -> Result<[Complex64; 2]>;
}

impl ScalarField2d for IncidentWave {
    fn eval(&self, p: Point2) -> Result<Complex64> {
        Ok(IncidentWave::eval(self, p))
    }

    fn grad(&self, p: Point2) -> Result<[Complex64; 2]> {
        Ok(IncidentWave::grad(self, p))
    }
}

impl<T: ScalarField2d + ?Sized> ScalarField2d for &T {
    fn eval(&self, p: Point2) -> Result<Complex64> {
        (**self).eval(p)
    }

    fn grad(&self, p: Point2) -> Result<[Complex64; 2]> {
        (**self).grad(p)
    }
}
