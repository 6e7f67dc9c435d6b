//! Scattering by one thin perfectly conducting cylinder.
//!
//! Three routes to the same physics, kept deliberately independent so they
//! can cross-check each other:
//!
//! * the thin-wire asymptotics: charge `Q = -2 pi u0(center) / ln(1/a)` and
//!   the point-source field built from it;
//! * a boundary solve of the split-kernel integral equation
//!   `-u0(s) = alpha(kappa) Q + (1/2pi) int ln(1/|s-t|) sigma(t) dt`,
//!   diagonalized exactly in the Fourier basis of the circle;
//! * the classical separation-of-variables series with coefficients
//!   `-J_n(kappa a) / H_n^(1)(kappa a)`, exact up to truncation.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::field::ScalarField2d;
use crate::geometry::{Disc, IncidentWave, Point2};
use crate::quad;
use crate::special::{alpha, bessel_j, hankel1, hankel1_deriv, GreenKernel};

/// Boundary density on the circle together with its total charge.
///
/// `charge` always equals the trapezoid quadrature of `values` over the
/// circle (the rule is exact for trigonometric polynomials below the node
/// count, which is how the solve represents sigma).
#[derive(Debug, Clone)]
pub struct BoundaryDensity {
    /// Node angles on the circle.
    pub nodes: Vec<f64>,
    /// sigma at the nodes.
    pub values: Vec<Complex64>,
    /// Q = int_{S} sigma dt.
    pub charge: Complex64,
    /// Amplification of the mode-0 inversion, `(|2 pi alpha + ln(1/a)|)^-1`
    /// scaled by the largest mode eigenvalue; large values mean the
    /// logarithmic kernel is close to its resonance.
    pub mode0_amplification: f64,
}

/// Thin-wire asymptotic charge `Q = -2 pi u0(center) / ln(1/a)`.
///
/// Requires `0 < a < 1` so that `ln(1/a) > 0`; larger radii have no
/// asymptotic meaning and are rejected.
pub fn charge_asymptotic(disc: &Disc, wave: &IncidentWave) -> Result<Complex64> {
    if disc.radius >= 1.0 {
        return Err(CoreError::domain(
            "charge_asymptotic",
            format!("radius must satisfy 0 < a < 1, got {}", disc.radius),
        ));
    }
    wave.advise_thinness(disc.radius, "charge_asymptotic");
    let log_inv_a = (1.0 / disc.radius).ln();
    Ok(wave.eval(disc.center) * (-2.0 * PI / log_inv_a))
}

/// Asymptotic total field of one thin cylinder,
/// `u(x) = u0(x) - (2 pi / ln(1/a)) g(x, center) u0(center)`.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticField {
    disc: Disc,
    wave: IncidentWave,
    kernel: GreenKernel,
    charge_factor: Complex64,
}

impl AsymptoticField {
    pub fn new(disc: Disc, wave: IncidentWave) -> Result<Self> {
        if disc.radius >= 1.0 {
            return Err(CoreError::domain(
                "AsymptoticField::new",
                format!("radius must satisfy 0 < a < 1, got {}", disc.radius),
            ));
        }
        wave.advise_thinness(disc.radius, "AsymptoticField");
        let kernel = GreenKernel::new(wave.kappa())?;
        let log_inv_a = (1.0 / disc.radius).ln();
        let charge_factor = wave.eval(disc.center) * (-2.0 * PI / log_inv_a);
        Ok(AsymptoticField { disc, wave, kernel, charge_factor })
    }

    fn check_point(&self, x: Point2) -> Result<()> {
        let r = x.dist(self.disc.center);
        if r <= self.disc.radius {
            return Err(CoreError::InsideCylinder {
                x: x.x,
                y: x.y,
                index: 0,
                dist: r,
                radius: self.disc.radius,
            });
        }
        Ok(())
    }
}

impl ScalarField2d for AsymptoticField {
    fn eval(&self, x: Point2) -> Result<Complex64> {
        self.check_point(x)?;
        Ok(self.wave.eval(x) + self.kernel.green(x, self.disc.center)? * self.charge_factor)
    }

    fn grad(&self, x: Point2) -> Result<[Complex64; 2]> {
        self.check_point(x)?;
        let gw = self.wave.grad(x);
        let gg = self.kernel.grad_x(x, self.disc.center)?;
        Ok([gw[0] + gg[0] * self.charge_factor, gw[1] + gg[1] * self.charge_factor])
    }
}

/// Asymptotic field value at one point; see [`AsymptoticField`].
pub fn field_asymptotic(disc: &Disc, wave: &IncidentWave, x: Point2) -> Result<Complex64> {
    AsymptoticField::new(*disc, *wave)?.eval(x)
}

/// Solve the split-kernel boundary equation on the circle for arbitrary
/// boundary data `u0(theta)`:
///
/// `-u0(s) = alpha(kappa) Q + (1/2pi) int_S ln(1/|s-t|) sigma(t) dt`.
///
/// On a circle of radius `a` the log kernel is diagonal in the Fourier
/// basis with eigenvalues `a ln(1/a)` (mode 0) and `a/(2|m|)` (mode m != 0),
/// so the solve is an exact mode-by-mode inversion of the trigonometric
/// interpolant of the data.
pub fn nystrom_solve<F>(disc: &Disc, kappa: f64, incident_on_boundary: F, n_modes: usize) -> Result<BoundaryDensity>
where
    F: Fn(f64) -> Complex64,
{
    if n_modes < 16 {
        return Err(CoreError::domain("nystrom_solve", format!("need at least 16 modes, got {n_modes}")));
    }
    let a = disc.radius;
    if a >= 1.0 {
        return Err(CoreError::domain(
            "nystrom_solve",
            format!("radius must satisfy 0 < a < 1 for the mode-0 eigenvalue, got {a}"),
        ));
    }
    let alpha_k = alpha(kappa)?;
    let log_inv_a = (1.0 / a).ln();
    let n = n_modes;
    let nodes: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let f: Vec<Complex64> = nodes.iter().map(|&t| -incident_on_boundary(t)).collect();

    // forward DFT: f_hat[m] = (1/n) sum_j f_j e^{-i m theta_j}
    let mut f_hat = vec![Complex64::new(0.0, 0.0); n];
    for (m, fm) in f_hat.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, fj) in f.iter().enumerate() {
            let phase = -2.0 * PI * (m * j % n) as f64 / n as f64;
            acc += fj * Complex64::new(0.0, phase).exp();
        }
        *fm = acc / n as f64;
    }

    let mode0_denom = 2.0 * PI * alpha_k + Complex64::new(log_inv_a, 0.0);
    let mode0_amplification = (1.0 + log_inv_a) / mode0_denom.norm();
    if mode0_denom.norm() < 1e-8 * (1.0 + log_inv_a) {
        log::warn!(
            "nystrom_solve: mode-0 eigenvalue combination nearly singular \
             (|2 pi alpha + ln(1/a)| = {:.3e}, amplification {:.3e})",
            mode0_denom.norm(),
            mode0_amplification
        );
    }

    // invert mode by mode
    let mut sigma_hat = vec![Complex64::new(0.0, 0.0); n];
    for (m, sm) in sigma_hat.iter_mut().enumerate() {
        let signed = if m <= n / 2 { m as i64 } else { m as i64 - n as i64 };
        if signed == 0 {
            *sm = f_hat[m] / (a * mode0_denom);
        } else {
            *sm = f_hat[m] * (2.0 * signed.unsigned_abs() as f64 / a);
        }
    }
    let charge = 2.0 * PI * f_hat[0] / mode0_denom;

    // inverse DFT to node values
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for (j, v) in values.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, sm) in sigma_hat.iter().enumerate() {
            let phase = 2.0 * PI * (m * j % n) as f64 / n as f64;
            acc += sm * Complex64::new(0.0, phase).exp();
        }
        *v = acc;
    }

    Ok(BoundaryDensity { nodes, values, charge, mode0_amplification })
}

/// Boundary solve with plane-wave data; see [`nystrom_solve`].
pub fn nystrom_charge(disc: &Disc, wave: &IncidentWave, n_modes: usize) -> Result<BoundaryDensity> {
    wave.advise_thinness(disc.radius, "nystrom_charge");
    let disc_copy = *disc;
    let wave_copy = *wave;
    nystrom_solve(
        disc,
        wave.kappa(),
        move |theta| wave_copy.eval(disc_copy.boundary_point(theta)),
        n_modes,
    )
}

/// Exact exterior solution for the sound-soft circle by separation of
/// variables: `u = u0 + sum_n c_n i^n H_n^(1)(kappa r) e^{i n (theta - beta)}`
/// with `c_n = -J_n(kappa a) / H_n^(1)(kappa a)` in the frame where the
/// incidence direction sits at polar angle `beta`.
#[derive(Debug, Clone)]
pub struct SeriesField {
    disc: Disc,
    wave: IncidentWave,
    /// c_n for n = 0..=n_terms.
    coeffs: Vec<Complex64>,
    /// polar angle of the incidence direction
    beta: f64,
    /// u0(center) phase factor e^{i kappa d.c}
    center_phase: Complex64,
}

impl SeriesField {
    pub fn new(disc: Disc, wave: IncidentWave, n_terms: u32) -> Result<Self> {
        let ka = wave.kappa() * disc.radius;
        let mut coeffs = Vec::with_capacity(n_terms as usize + 1);
        for n in 0..=n_terms {
            coeffs.push(-Complex64::new(bessel_j(n, ka)?, 0.0) / hankel1(n, ka)?);
        }
        let beta = wave.direction().y.atan2(wave.direction().x);
        let center_phase = wave.eval(disc.center);
        Ok(SeriesField { disc, wave, coeffs, beta, center_phase })
    }

    /// Smallest truncation order whose next coefficient ratio
    /// `|J_n(kappa a) / H_n(kappa a)|` falls below `tail`, plus a 2-term
    /// margin.
    pub fn suggested_terms(kappa: f64, a: f64, tail: f64) -> Result<u32> {
        let ka = kappa * a;
        for n in 0..=crate::special::MAX_ORDER {
            let ratio = match (bessel_j(n, ka), hankel1(n, ka)) {
                (Ok(j), Ok(h)) => (Complex64::new(j, 0.0) / h).norm(),
                _ => 0.0, // Y overflow means H is huge and the ratio is ~0
            };
            if ratio < tail {
                return Ok((n + 2).min(crate::special::MAX_ORDER));
            }
        }
        Err(CoreError::domain(
            "SeriesField::suggested_terms",
            format!("tail bound {tail} not reached by order {}", crate::special::MAX_ORDER),
        ))
    }

    pub fn n_terms(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    fn polar(&self, x: Point2) -> (f64, f64) {
        let d = x - self.disc.center;
        (d.norm(), d.y.atan2(d.x))
    }

    fn check_point(&self, x: Point2) -> Result<f64> {
        let r = x.dist(self.disc.center);
        // boundary evaluation is allowed; only strictly interior points are out
        if r < self.disc.radius * (1.0 - 1e-12) {
            return Err(CoreError::InsideCylinder {
                x: x.x,
                y: x.y,
                index: 0,
                dist: r,
                radius: self.disc.radius,
            });
        }
        Ok(r)
    }

    /// Scattered part `u - u0`.
    pub fn scattered(&self, x: Point2) -> Result<Complex64> {
        let r = self.check_point(x)?;
        let (_, theta) = self.polar(x);
        let kr = self.wave.kappa() * r;
        let mut sum = self.coeffs[0] * hankel1(0, kr)?;
        let mut i_pow = Complex64::new(0.0, 1.0);
        for n in 1..self.coeffs.len() {
            let angle = (n as f64) * (theta - self.beta);
            sum += 2.0 * i_pow * self.coeffs[n] * hankel1(n as u32, kr)? * angle.cos();
            i_pow *= Complex64::new(0.0, 1.0);
        }
        Ok(self.center_phase * sum)
    }

    /// Radial derivative of the scattered part.
    pub fn scattered_radial_deriv(&self, x: Point2) -> Result<Complex64> {
        let r = self.check_point(x)?;
        let (_, theta) = self.polar(x);
        let kappa = self.wave.kappa();
        let kr = kappa * r;
        let mut sum = self.coeffs[0] * hankel1_deriv(0, kr)?;
        let mut i_pow = Complex64::new(0.0, 1.0);
        for n in 1..self.coeffs.len() {
            let angle = (n as f64) * (theta - self.beta);
            sum += 2.0 * i_pow * self.coeffs[n] * hankel1_deriv(n as u32, kr)? * angle.cos();
            i_pow *= Complex64::new(0.0, 1.0);
        }
        Ok(self.center_phase * sum * kappa)
    }
}

impl ScalarField2d for SeriesField {
    fn eval(&self, x: Point2) -> Result<Complex64> {
        Ok(self.wave.eval(x) + self.scattered(x)?)
    }

    fn grad(&self, x: Point2) -> Result<[Complex64; 2]> {
        let r = self.check_point(x)?;
        let (_, theta) = self.polar(x);
        let kappa = self.wave.kappa();
        let kr = kappa * r;

        // d/dr and (1/r) d/dtheta of the scattered part
        let mut du_dr = self.coeffs[0] * hankel1_deriv(0, kr)? * kappa;
        let mut du_dt_over_r = Complex64::new(0.0, 0.0);
        let mut i_pow = Complex64::new(0.0, 1.0);
        for n in 1..self.coeffs.len() {
            let nf = n as f64;
            let angle = nf * (theta - self.beta);
            let radial = self.coeffs[n] * hankel1(n as u32, kr)?;
            let radial_deriv = self.coeffs[n] * hankel1_deriv(n as u32, kr)? * kappa;
            du_dr += 2.0 * i_pow * radial_deriv * angle.cos();
            du_dt_over_r += 2.0 * i_pow * radial * (-nf * angle.sin()) / r;
            i_pow *= Complex64::new(0.0, 1.0);
        }
        du_dr *= self.center_phase;
        du_dt_over_r *= self.center_phase;

        let (sin_t, cos_t) = theta.sin_cos();
        let gw = self.wave.grad(x);
        Ok([
            gw[0] + cos_t * du_dr - sin_t * du_dt_over_r,
            gw[1] + sin_t * du_dr + cos_t * du_dt_over_r,
        ])
    }
}

/// Series solution value at one point; see [`SeriesField`].
pub fn exact_series(disc: &Disc, wave: &IncidentWave, n_terms: u32, x: Point2) -> Result<Complex64> {
    SeriesField::new(*disc, *wave, n_terms)?.eval(x)
}

/// Closed form of the ring integral
/// `I = (1/2pi) int_{S} ln|s - t| dt = a ln a` on a circle of radius `a`.
///
/// The value does not depend on where the observation point `s` sits on the
/// circle; `psi` is accepted (and ignored) so the rotational invariance is
/// part of the signature contract.
pub fn ring_log_integral(a: f64, _psi: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(CoreError::domain("ring_log_integral", format!("radius must be positive, got {a}")));
    }
    Ok(a * a.ln())
}

/// Quadrature evaluation of the same ring integral,
/// `(a/2pi) int_0^{2pi} ln(2a |sin((psi - phi)/2)|) dphi`,
/// splitting at the singular angle. Reference implementation for
/// [`ring_log_integral`].
pub fn ring_log_integral_quadrature(a: f64, psi: f64, tol: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(CoreError::domain("ring_log_integral_quadrature", format!("radius must be positive, got {a}")));
    }
    let psi = psi.rem_euclid(2.0 * PI);
    let f = move |phi: f64| (2.0 * a * (0.5 * (psi - phi)).sin().abs()).ln();
    let v = quad::integrate_with_splits(f, 0.0, 2.0 * PI, &[psi], tol);
    Ok(a / (2.0 * PI) * v)
}

/// The constant `int_0^pi ln|sin t| dt = -pi ln 2`.
pub fn log_sine_constant() -> f64 {
    -PI * std::f64::consts::LN_2
}

/// Quadrature verification of [`log_sine_constant`]: integrates
/// `ln|sin t|` over `[0, pi]` with endpoint singularities split off.
pub fn log_sine_quadrature(tol: f64) -> f64 {
    quad::integrate_with_splits(|t: f64| t.sin().abs().ln(), 0.0, PI, &[0.5 * PI], tol)
}

/// Full-period form `int_0^{2pi} ln|sin((psi - phi)/2)| dphi`, equal to
/// `-2 pi ln 2` for every `psi`.
pub fn log_sine_full_period(psi: f64, tol: f64) -> f64 {
    let psi = psi.rem_euclid(2.0 * PI);
    quad::integrate_with_splits(
        move |phi: f64| (0.5 * (psi - phi)).sin().abs().ln(),
        0.0,
        2.0 * PI,
        &[psi],
        tol,
    )
}
