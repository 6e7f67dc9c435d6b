//! Planar and spatial points, cylinder cross-sections and the incident wave.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Point (or vector) in the cross-sectional plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Point in three-dimensional space; `x` and `y` span the cross-sectional
/// plane, `z` runs along the cylinder axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    /// Projection onto the cross-sectional plane.
    pub fn plane(self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Axis-aligned rectangle in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || !(x0.is_finite() && y0.is_finite() && x1.is_finite() && y1.is_finite()) {
            return Err(CoreError::domain(
                "Rect::new",
                format!("degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"),
            ));
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    pub fn unit_square() -> Self {
        Rect { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }
}

/// Threshold above which the thin-cylinder asymptotics degrade enough to be
/// worth flagging. `kappa * a` past this emits a warning, never an error, so
/// convergence studies can probe the breakdown.
pub const THIN_WIRE_ADVISORY: f64 = 0.1;

/// Cross-section of a single cylinder: a disc of radius `a` around `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Point2,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CoreError::domain("Disc::new", format!("radius must be positive, got {radius}")));
        }
        Ok(Disc { center, radius })
    }

    /// Point on the boundary circle at polar angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> Point2 {
        Point2::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }
}

/// Monochromatic plane wave `u0(x) = exp(i kappa dir.x)` in the plane.
///
/// The default propagation direction is +y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    kappa: f64,
    direction: Point2,
}

impl IncidentWave {
    /// Plane wave travelling along +y.
    pub fn new(kappa: f64) -> Result<Self> {
        Self::with_direction(kappa, Point2::new(0.0, 1.0))
    }

    /// Plane wave along an arbitrary direction; the direction is normalized.
    pub fn with_direction(kappa: f64, direction: Point2) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(CoreError::domain("IncidentWave", format!("kappa must be positive, got {kappa}")));
        }
        let n = direction.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(CoreError::domain("IncidentWave", "direction must be a nonzero vector"));
        }
        Ok(IncidentWave { kappa, direction: Point2::new(direction.x / n, direction.y / n) })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn direction(&self) -> Point2 {
        self.direction
    }

    /// `u0(p) = exp(i kappa dir.p)`.
    pub fn eval(&self, p: Point2) -> Complex64 {
        Complex64::new(0.0, self.kappa * self.direction.dot(p)).exp()
    }

    /// Planar gradient of `u0`: `i kappa dir u0(p)`.
    pub fn grad(&self, p: Point2) -> [Complex64; 2] {
        let u = self.eval(p);
        let ik = Complex64::new(0.0, self.kappa);
        [ik * self.direction.x * u, ik * self.direction.y * u]
    }

    /// Warn once per call site when the thin-wire assumption is strained.
    pub(crate) fn advise_thinness(&self, radius: f64, op: &'static str) {
        if self.kappa * radius > THIN_WIRE_ADVISORY {
            log::warn!(
                "{op}: kappa*a = {:.3e} exceeds {THIN_WIRE_ADVISORY}; thin-cylinder asymptotics degrade",
                self.kappa * radius
            );
        }
    }
}
