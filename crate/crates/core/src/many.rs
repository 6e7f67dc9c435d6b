//! The self-consistent (effective) field for an array of thin cylinders.
//!
//! Each cylinder responds to the field of all the others through its
//! asymptotic charge, giving the dense linear system
//!
//! `u_e(x_j) + (2 pi / ln(1/a)) sum_{m != j} g(x_j, x_m) u_e(x_m) = u0(x_j)`.
//!
//! The cylinder count grows only logarithmically in `1/a`, so a direct LU
//! solve is the right default; a Jacobi fixed-point iteration exists in the
//! tests as an independent oracle.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::field::ScalarField2d;
use crate::geometry::{IncidentWave, Point2};
use crate::linalg::{estimate_condition_1norm, lu_factor, residual_inf_norm, CMatrix};
use crate::special::GreenKernel;

/// Condition-estimate threshold beyond which a solve is refused; flags the
/// near-resonant regime where the asymptotic system stops being meaningful.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Geometry of M parallel cylinder cross-sections of common radius.
///
/// Construction enforces pairwise separation `> 2a` (with a relative 1e-12
/// slack so touching-to-rounding configurations are not false positives) and
/// records the minimum center distance.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderArray {
    centers: Vec<Point2>,
    radius: f64,
    min_separation: f64,
}

impl CylinderArray {
    pub fn new(centers: Vec<Point2>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CoreError::domain("CylinderArray::new", format!("radius must be positive, got {radius}")));
        }
        let mut min_sep = f64::INFINITY;
        for i in 0..centers.len() {
            for j in (i + 1)..centers.len() {
                let d = centers[i].dist(centers[j]);
                if d < 2.0 * radius * (1.0 - 1e-12) {
                    return Err(CoreError::OverlappingCylinders { i, j, dist: d, min_dist: 2.0 * radius });
                }
                min_sep = min_sep.min(d);
            }
        }
        if min_sep <= 10.0 * radius {
            log::warn!(
                "CylinderArray: minimum separation d = {min_sep:.3e} is within 10a = {:.3e}; \
                 the well-separated assumption is strained",
                10.0 * radius
            );
        }
        Ok(CylinderArray { centers, radius, min_separation: min_sep })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Minimum pairwise center distance (infinite for M < 2).
    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    /// Separation-to-radius diagnostic `d / a`.
    pub fn separation_ratio(&self) -> f64 {
        self.min_separation / self.radius
    }

    fn check_exterior(&self, x: Point2, skip: Option<usize>) -> Result<()> {
        for (m, &c) in self.centers.iter().enumerate() {
            if Some(m) == skip {
                continue;
            }
            let r = x.dist(c);
            if r <= self.radius {
                return Err(CoreError::InsideCylinder { x: x.x, y: x.y, index: m, dist: r, radius: self.radius });
            }
        }
        Ok(())
    }
}

/// Solution of the effective-field system.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveField {
    /// u_e at each cylinder center.
    pub values: Vec<Complex64>,
    /// Charges Q_j = -2 pi u_e(x_j) / ln(1/a).
    pub charges: Vec<Complex64>,
    /// Infinity norm of `A u_e - rhs` after the solve.
    pub residual_norm: f64,
    /// 1-norm condition estimate of the system matrix.
    pub condition_estimate: f64,
}

fn coupling(radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(CoreError::domain(
            "assemble_system",
            format!("radius must satisfy 0 < a < 1, got {radius}"),
        ));
    }
    Ok(2.0 * PI / (1.0 / radius).ln())
}

/// Assemble the effective-field matrix `A` (identity diagonal, off-diagonal
/// `(2 pi / ln(1/a)) g(x_j, x_m)`) and the right-hand side `u0(x_j)`.
pub fn assemble_system(array: &CylinderArray, wave: &IncidentWave) -> Result<(CMatrix, Vec<Complex64>)> {
    let c = coupling(array.radius)?;
    wave.advise_thinness(array.radius, "assemble_system");
    let kernel = GreenKernel::new(wave.kappa())?;
    let m = array.len();
    let centers = array.centers();

    let rows: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut row = vec![Complex64::new(0.0, 0.0); m];
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    // separation > 2a > 0 makes the kernel evaluation safe
                    c * kernel.green(centers[j], centers[i]).expect("distinct centers")
                };
            }
            row
        })
        .collect();

    let mut data = Vec::with_capacity(m * m);
    for row in rows {
        data.extend(row);
    }
    let rhs = centers.iter().map(|&p| wave.eval(p)).collect();
    Ok((CMatrix::from_vec(m, data), rhs))
}

/// Solve the effective-field system by dense LU with partial pivoting.
///
/// Fails with the condition estimate attached when the system is within
/// rounding distance of singular (estimate above [`CONDITION_LIMIT`]).
pub fn solve_effective(array: &CylinderArray, wave: &IncidentWave) -> Result<EffectiveField> {
    if array.is_empty() {
        return Ok(EffectiveField {
            values: Vec::new(),
            charges: Vec::new(),
            residual_norm: 0.0,
            condition_estimate: 0.0,
        });
    }
    let (a, rhs) = assemble_system(array, wave)?;
    let lu = lu_factor(&a)?;
    let cond = estimate_condition_1norm(&a, &lu);
    if !(cond < CONDITION_LIMIT) {
        return Err(CoreError::NearSingularSystem { cond, limit: CONDITION_LIMIT });
    }
    let values = lu.solve(&rhs);
    let residual_norm = residual_inf_norm(&a, &values, &rhs);
    let q_factor = -2.0 * PI / (1.0 / array.radius).ln();
    let charges = values.iter().map(|&u| q_factor * u).collect();
    Ok(EffectiveField { values, charges, residual_norm, condition_estimate: cond })
}

/// Total field `u(x) = u0(x) - (2 pi / ln(1/a)) sum_m g(x, x_m) u_e(x_m)`.
pub fn total_field(
    solution: &EffectiveField,
    array: &CylinderArray,
    wave: &IncidentWave,
    x: Point2,
) -> Result<Complex64> {
    array.check_exterior(x, None)?;
    field_with_skip(solution, array, wave, x, None)
}

/// Effective field acting on cylinder `j`:
/// `u0(x) - (2 pi / ln(1/a)) sum_{m != j} g(x, x_m) u_e(x_m)`.
pub fn effective_field_at(
    solution: &EffectiveField,
    array: &CylinderArray,
    wave: &IncidentWave,
    x: Point2,
    j: usize,
) -> Result<Complex64> {
    if j >= array.len() {
        return Err(CoreError::IndexOutOfRange { index: j, len: array.len() });
    }
    array.check_exterior(x, Some(j))?;
    field_with_skip(solution, array, wave, x, Some(j))
}

fn field_with_skip(
    solution: &EffectiveField,
    array: &CylinderArray,
    wave: &IncidentWave,
    x: Point2,
    skip: Option<usize>,
) -> Result<Complex64> {
    if solution.values.len() != array.len() {
        return Err(CoreError::domain(
            "total_field",
            format!("solution holds {} values for {} cylinders", solution.values.len(), array.len()),
        ));
    }
    let mut acc = wave.eval(x);
    if array.is_empty() {
        return Ok(acc);
    }
    let c = coupling(array.radius)?;
    let kernel = GreenKernel::new(wave.kappa())?;
    for (m, &center) in array.centers().iter().enumerate() {
        if Some(m) == skip {
            continue;
        }
        acc -= c * kernel.green(x, center)? * solution.values[m];
    }
    Ok(acc)
}

/// Total field as a differentiable scalar field (owns its inputs).
#[derive(Debug, Clone)]
pub struct TotalField {
    array: CylinderArray,
    wave: IncidentWave,
    solution: EffectiveField,
    kernel: GreenKernel,
    coupling: f64,
}

impl TotalField {
    pub fn new(array: CylinderArray, wave: IncidentWave, solution: EffectiveField) -> Result<Self> {
        if solution.values.len() != array.len() {
            return Err(CoreError::domain(
                "TotalField::new",
                format!("solution holds {} values for {} cylinders", solution.values.len(), array.len()),
            ));
        }
        let kernel = GreenKernel::new(wave.kappa())?;
        let coupling = if array.is_empty() { 0.0 } else { coupling(array.radius)? };
        Ok(TotalField { array, wave, solution, kernel, coupling })
    }

    /// Solve and wrap in one step.
    pub fn solve(array: CylinderArray, wave: IncidentWave) -> Result<Self> {
        let solution = solve_effective(&array, &wave)?;
        Self::new(array, wave, solution)
    }

    pub fn solution(&self) -> &EffectiveField {
        &self.solution
    }

    pub fn array(&self) -> &CylinderArray {
        &self.array
    }
}

impl ScalarField2d for TotalField {
    fn eval(&self, x: Point2) -> Result<Complex64> {
        total_field(&self.solution, &self.array, &self.wave, x)
    }

    fn grad(&self, x: Point2) -> Result<[Complex64; 2]> {
        self.array.check_exterior(x, None)?;
        let mut g = self.wave.grad(x);
        for (m, &center) in self.array.centers().iter().enumerate() {
            let gk = self.kernel.grad_x(x, center)?;
            let w = self.coupling * self.solution.values[m];
            g[0] -= gk[0] * w;
            g[1] -= gk[1] * w;
        }
        Ok(g)
    }
}
