//! Full 3-D electromagnetic fields rebuilt from the scalar mode.
//!
//! For TH (E-)waves the ansatz `E_j = e^{i k3 z} Etilde_j(x, y)`,
//! `H_3 = 0` reduces Maxwell's curl equations to the planar Helmholtz
//! problem for `u = Etilde_3`; the remaining components are algebraic in
//! `u` and its planar gradient:
//!
//! `E_1 = (i k3 / kappa^2) U_x e^{i k3 z}`, `E_2 = (i k3 / kappa^2) U_y e^{i k3 z}`,
//! `E_3 = U e^{i k3 z}`, `H_1 = (k^2 / (i omega mu kappa^2)) U_y e^{i k3 z}`,
//! `H_2 = -(k^2 / (i omega mu kappa^2)) U_x e^{i k3 z}`, with `U = (kappa/k) u`.
//!
//! Everything here is verifiable: curl residuals on sampled grids contract
//! at second order, and the elimination chain that produces the formulas is
//! checked equation by equation in [`appendix_check`].

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::field::ScalarField2d;
use crate::geometry::{Point2, Point3, Rect};

/// Wavenumbers and material constants of one axial mode.
///
/// Invariants: `kappa^2 + k3^2 = k^2`, `k^2 = omega^2 epsilon mu`, and
/// `n0^2 = epsilon mu`, all to 1e-12 relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub k: f64,
    pub kappa: f64,
    pub k3: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub n0_sq: f64,
}

impl ModeParams {
    /// Build a consistent parameter set from the transverse/axial
    /// wavenumbers and the material constants; the remaining fields follow
    /// from the dispersion relation.
    pub fn new(kappa: f64, k3: f64, epsilon: f64, mu: f64) -> Result<Self> {
        if kappa == 0.0 {
            return Err(CoreError::DegenerateMode { kappa });
        }
        if !(kappa > 0.0 && kappa.is_finite()) || !k3.is_finite() {
            return Err(CoreError::domain("ModeParams::new", format!("invalid wavenumbers kappa={kappa}, k3={k3}")));
        }
        if !(epsilon > 0.0 && mu > 0.0) {
            return Err(CoreError::domain("ModeParams::new", format!("need positive material constants, got epsilon={epsilon}, mu={mu}")));
        }
        let k = kappa.hypot(k3);
        let n0_sq = epsilon * mu;
        let omega = k / n0_sq.sqrt();
        Ok(ModeParams { k, kappa, k3, omega, epsilon, mu, n0_sq })
    }

    /// Validate an externally supplied full parameter set.
    pub fn try_from_parts(k: f64, kappa: f64, k3: f64, omega: f64, epsilon: f64, mu: f64, n0_sq: f64) -> Result<Self> {
        if kappa == 0.0 {
            return Err(CoreError::DegenerateMode { kappa });
        }
        let p = ModeParams { k, kappa, k3, omega, epsilon, mu, n0_sq };
        let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        if rel(kappa * kappa + k3 * k3, k * k) > 1e-12 {
            return Err(CoreError::domain(
                "ModeParams",
                format!("kappa^2 + k3^2 = {} but k^2 = {}", kappa * kappa + k3 * k3, k * k),
            ));
        }
        if rel(omega * omega * epsilon * mu, k * k) > 1e-12 {
            return Err(CoreError::domain(
                "ModeParams",
                format!("omega^2 epsilon mu = {} but k^2 = {}", omega * omega * epsilon * mu, k * k),
            ));
        }
        if rel(epsilon * mu, n0_sq) > 1e-12 {
            return Err(CoreError::domain(
                "ModeParams",
                format!("epsilon mu = {} but n0^2 = {}", epsilon * mu, n0_sq),
            ));
        }
        Ok(p)
    }
}

/// Complex E and H vectors at a point. `h[2]` is identically zero for the
/// TH polarization and is stored only so samples are self-describing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub e: [Complex64; 3],
    pub h: [Complex64; 3],
}

/// Incident plane-wave fields
/// `E0 = k^-1 e^{i kappa y + i k3 z} (-k3 e2 + kappa e3)` and the matching
/// `H0 = (k / (omega mu)) e^{i kappa y + i k3 z} e1` obtained from the curl
/// relation.
pub fn incident_field(params: &ModeParams, x: Point3) -> FieldSample {
    let phase = Complex64::new(0.0, params.kappa * x.y + params.k3 * x.z).exp();
    let zero = Complex64::new(0.0, 0.0);
    FieldSample {
        e: [zero, -params.k3 / params.k * phase, params.kappa / params.k * phase],
        h: [params.k / (params.omega * params.mu) * phase, zero, zero],
    }
}

/// Rebuild all six components from the scalar mode value `u` and its planar
/// gradient at the footprint `(x, y)`, with the axial factor at height `z`.
pub fn fields_from_u(u: Complex64, grad_u: [Complex64; 2], params: &ModeParams, z: f64) -> Result<FieldSample> {
    if params.kappa == 0.0 {
        return Err(CoreError::DegenerateMode { kappa: params.kappa });
    }
    let kappa_sq = params.kappa * params.kappa;
    let scale = params.kappa / params.k; // U = scale * u
    let axial = Complex64::new(0.0, params.k3 * z).exp();
    let u_scaled = scale * u;
    let ux = scale * grad_u[0];
    let uy = scale * grad_u[1];
    let e_factor = Complex64::new(0.0, params.k3 / kappa_sq);
    let h_factor = params.k * params.k
        / (Complex64::new(0.0, params.omega * params.mu) * kappa_sq);
    let zero = Complex64::new(0.0, 0.0);
    Ok(FieldSample {
        e: [e_factor * ux * axial, e_factor * uy * axial, u_scaled * axial],
        h: [h_factor * uy * axial, -h_factor * ux * axial, zero],
    })
}

/// Evaluate a scalar field and rebuild the 3-D sample at `x`.
pub fn sample_fields<F: ScalarField2d>(field: &F, params: &ModeParams, x: Point3) -> Result<FieldSample> {
    let p = x.plane();
    fields_from_u(field.eval(p)?, field.grad(p)?, params, x.z)
}

/// Uniformly spaced 3-D grid of field samples, stored component-wise
/// (structure of arrays) with explicit spacing so stencils are unambiguous.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub origin: Point3,
    pub spacing: f64,
    pub dims: (usize, usize, usize),
    pub e: [Vec<Complex64>; 3],
    pub h: [Vec<Complex64>; 3],
}

impl FieldGrid {
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.dims.0 * (iy + self.dims.1 * iz)
    }

    pub fn point(&self, ix: usize, iy: usize, iz: usize) -> Point3 {
        Point3::new(
            self.origin.x + ix as f64 * self.spacing,
            self.origin.y + iy as f64 * self.spacing,
            self.origin.z + iz as f64 * self.spacing,
        )
    }

    /// Sample a scalar mode over the grid.
    pub fn sample<F: ScalarField2d>(
        field: &F,
        params: &ModeParams,
        origin: Point3,
        spacing: f64,
        dims: (usize, usize, usize),
    ) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(CoreError::domain("FieldGrid::sample", format!("spacing must be positive, got {spacing}")));
        }
        let len = dims.0 * dims.1 * dims.2;
        let zero = Complex64::new(0.0, 0.0);
        let mut grid = FieldGrid {
            origin,
            spacing,
            dims,
            e: [vec![zero; len], vec![zero; len], vec![zero; len]],
            h: [vec![zero; len], vec![zero; len], vec![zero; len]],
        };
        for iz in 0..dims.2 {
            for iy in 0..dims.1 {
                for ix in 0..dims.0 {
                    let p = grid.point(ix, iy, iz);
                    let s = sample_fields(field, params, p)?;
                    let idx = grid.index(ix, iy, iz);
                    for c in 0..3 {
                        grid.e[c][idx] = s.e[c];
                        grid.h[c][idx] = s.h[c];
                    }
                }
            }
        }
        Ok(grid)
    }

    fn check_dims(&self, op: &'static str, need: usize) -> Result<()> {
        let min_dim = self.dims.0.min(self.dims.1).min(self.dims.2);
        if min_dim < need {
            return Err(CoreError::GridTooSmall { op, need, got: min_dim });
        }
        Ok(())
    }
}

/// central difference along one axis of a component grid
fn central_diff(grid: &FieldGrid, data: &[Complex64], ix: usize, iy: usize, iz: usize, axis: usize) -> Complex64 {
    let (p, m) = match axis {
        0 => (grid.index(ix + 1, iy, iz), grid.index(ix - 1, iy, iz)),
        1 => (grid.index(ix, iy + 1, iz), grid.index(ix, iy - 1, iz)),
        _ => (grid.index(ix, iy, iz + 1), grid.index(ix, iy, iz - 1)),
    };
    (data[p] - data[m]) / (2.0 * grid.spacing)
}

/// Max-norm residuals of the two curl equations,
/// `(curl E - i omega mu H, curl H + i omega epsilon E)`, via second-order
/// central differences over interior nodes. Needs at least 5 points per axis.
pub fn maxwell_residual(grid: &FieldGrid, params: &ModeParams) -> Result<(f64, f64)> {
    grid.check_dims("maxwell_residual", 5)?;
    let i_omega_mu = Complex64::new(0.0, params.omega * params.mu);
    let i_omega_eps = Complex64::new(0.0, params.omega * params.epsilon);
    let mut worst_e = 0.0_f64;
    let mut worst_h = 0.0_f64;
    for iz in 1..grid.dims.2 - 1 {
        for iy in 1..grid.dims.1 - 1 {
            for ix in 1..grid.dims.0 - 1 {
                let idx = grid.index(ix, iy, iz);
                let d = |data: &[Complex64], axis: usize| central_diff(grid, data, ix, iy, iz, axis);
                let curl_e = [
                    d(&grid.e[2], 1) - d(&grid.e[1], 2),
                    d(&grid.e[0], 2) - d(&grid.e[2], 0),
                    d(&grid.e[1], 0) - d(&grid.e[0], 1),
                ];
                let curl_h = [
                    d(&grid.h[2], 1) - d(&grid.h[1], 2),
                    d(&grid.h[0], 2) - d(&grid.h[2], 0),
                    d(&grid.h[1], 0) - d(&grid.h[0], 1),
                ];
                for c in 0..3 {
                    worst_e = worst_e.max((curl_e[c] - i_omega_mu * grid.h[c][idx]).norm());
                    worst_h = worst_h.max((curl_h[c] + i_omega_eps * grid.e[c][idx]).norm());
                }
            }
        }
    }
    Ok((worst_e, worst_h))
}

/// Max-norm residual of `div E` over interior nodes; vanishes to O(h^2)
/// wherever the scalar mode satisfies the planar Helmholtz equation.
pub fn divergence_residual(grid: &FieldGrid) -> Result<f64> {
    grid.check_dims("divergence_residual", 3)?;
    let mut worst = 0.0_f64;
    for iz in 1..grid.dims.2 - 1 {
        for iy in 1..grid.dims.1 - 1 {
            for ix in 1..grid.dims.0 - 1 {
                let div = central_diff(grid, &grid.e[0], ix, iy, iz, 0)
                    + central_diff(grid, &grid.e[1], ix, iy, iz, 1)
                    + central_diff(grid, &grid.e[2], ix, iy, iz, 2);
                worst = worst.max(div.norm());
            }
        }
    }
    Ok(worst)
}

/// Residuals of the component elimination chain behind the field formulas.
///
/// `faraday` holds the three scalar equations of `curl E = i omega mu H`
/// and `ampere` those of `curl H = -i omega epsilon E`, each evaluated for
/// the planar amplitudes built from `u`. The first two entries of each
/// triple are algebraic identities (machine precision); the third needs the
/// planar Helmholtz equation and is formed with second-order differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixReport {
    pub faraday: [f64; 3],
    pub ampere: [f64; 3],
    pub spacing: f64,
}

/// Verify the elimination chain numerically for a given scalar field on a
/// `grid_n x grid_n` planar window.
pub fn appendix_check<F: ScalarField2d>(
    field: &F,
    params: &ModeParams,
    window: Rect,
    grid_n: usize,
) -> Result<AppendixReport> {
    if grid_n < 3 {
        return Err(CoreError::GridTooSmall { op: "appendix_check", need: 3, got: grid_n });
    }
    let hx = window.width() / (grid_n - 1) as f64;
    let hy = window.height() / (grid_n - 1) as f64;
    let kappa_sq = params.kappa * params.kappa;
    let e_factor = Complex64::new(0.0, params.k3 / kappa_sq);
    let h_factor = params.k * params.k / (Complex64::new(0.0, params.omega * params.mu) * kappa_sq);
    let i_omega_mu = Complex64::new(0.0, params.omega * params.mu);
    let i_omega_eps = Complex64::new(0.0, params.omega * params.epsilon);
    let ik3 = Complex64::new(0.0, params.k3);

    let node = |ix: usize, iy: usize| Point2::new(window.x0 + ix as f64 * hx, window.y0 + iy as f64 * hy);

    // planar amplitudes from u and its analytic gradient
    let mut u = vec![Complex64::new(0.0, 0.0); grid_n * grid_n];
    let mut e1 = u.clone();
    let mut e2 = u.clone();
    let mut h1 = u.clone();
    let mut h2 = u.clone();
    let mut ux = u.clone();
    let mut uy = u.clone();
    for iy in 0..grid_n {
        for ix in 0..grid_n {
            let p = node(ix, iy);
            let idx = iy * grid_n + ix;
            let val = field.eval(p)?;
            let grad = field.grad(p)?;
            u[idx] = val;
            ux[idx] = grad[0];
            uy[idx] = grad[1];
            e1[idx] = e_factor * grad[0];
            e2[idx] = e_factor * grad[1];
            h1[idx] = h_factor * grad[1];
            h2[idx] = -h_factor * grad[0];
        }
    }

    let mut faraday = [0.0_f64; 3];
    let mut ampere = [0.0_f64; 3];
    for iy in 1..grid_n - 1 {
        for ix in 1..grid_n - 1 {
            let idx = iy * grid_n + ix;
            let dx = |v: &[Complex64]| (v[iy * grid_n + ix + 1] - v[iy * grid_n + ix - 1]) / (2.0 * hx);
            let dy = |v: &[Complex64]| (v[(iy + 1) * grid_n + ix] - v[(iy - 1) * grid_n + ix]) / (2.0 * hy);

            // curl E = i omega mu H, component by component
            faraday[0] = faraday[0].max((uy[idx] - ik3 * e2[idx] - i_omega_mu * h1[idx]).norm());
            faraday[1] = faraday[1].max((-ux[idx] + ik3 * e1[idx] - i_omega_mu * h2[idx]).norm());
            faraday[2] = faraday[2].max((dx(&e2) - dy(&e1)).norm());

            // curl H = -i omega epsilon E
            ampere[0] = ampere[0].max((ik3 * h2[idx] - i_omega_eps * e1[idx]).norm());
            ampere[1] = ampere[1].max((ik3 * h1[idx] + i_omega_eps * e2[idx]).norm());
            ampere[2] = ampere[2].max((dx(&h2) - dy(&h1) + i_omega_eps * u[idx]).norm());
        }
    }
    Ok(AppendixReport { faraday, ampere, spacing: hx.max(hy) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Disc, IncidentWave};
    use crate::single::SeriesField;

    fn params() -> ModeParams {
        // kappa = 1, k3 = 0.75, epsilon = 2, mu = 0.5
        ModeParams::new(1.0, 0.75, 2.0, 0.5).unwrap()
    }

    #[test]
    fn mode_params_invariants_hold_by_construction() {
        let p = params();
        assert!((p.kappa * p.kappa + p.k3 * p.k3 - p.k * p.k).abs() < 1e-14);
        assert!((p.omega * p.omega * p.epsilon * p.mu - p.k * p.k).abs() < 1e-14);
        assert!((p.n0_sq - p.epsilon * p.mu).abs() < 1e-15);
        assert!(ModeParams::try_from_parts(p.k, p.kappa, p.k3, p.omega, p.epsilon, p.mu, p.n0_sq).is_ok());
    }

    #[test]
    fn inconsistent_parts_rejected() {
        let p = params();
        assert!(ModeParams::try_from_parts(p.k * 1.001, p.kappa, p.k3, p.omega, p.epsilon, p.mu, p.n0_sq).is_err());
        assert!(ModeParams::try_from_parts(p.k, p.kappa, p.k3, p.omega * 1.001, p.epsilon, p.mu, p.n0_sq).is_err());
        assert!(matches!(
            ModeParams::new(0.0, 1.0, 1.0, 1.0),
            Err(CoreError::DegenerateMode { .. })
        ));
    }

    #[test]
    fn normal_incidence_is_purely_axial() {
        let p = ModeParams::new(2.0, 0.0, 1.0, 1.0).unwrap();
        let s = incident_field(&p, Point3::new(0.3, 0.7, -1.2));
        assert_eq!(s.e[0], Complex64::new(0.0, 0.0));
        assert_eq!(s.e[1], Complex64::new(0.0, 0.0));
        let expected = Complex64::new(0.0, 2.0 * 0.7).exp();
        assert!((s.e[2] - expected).norm() < 1e-15);
    }

    #[test]
    fn incident_amplitude_is_unity() {
        let p = params();
        for i in 0..100 {
            let t = i as f64;
            let x = Point3::new(t.sin() * 2.0, (1.7 * t).cos() * 3.0, (0.4 * t).sin());
            let s = incident_field(&p, x);
            let amp: f64 = s.e.iter().map(|c| c.norm_sqr()).sum();
            assert!((amp - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn plane_wave_mode_reproduces_incident_field() {
        let p = params();
        let wave = IncidentWave::new(p.kappa).unwrap();
        for i in 0..100 {
            let t = i as f64 * 0.37;
            let x = Point3::new(t.sin(), t.cos() * 2.0, 0.3 * t - 1.0);
            let rebuilt = sample_fields(&wave, &p, x).unwrap();
            let direct = incident_field(&p, x);
            for c in 0..3 {
                assert!((rebuilt.e[c] - direct.e[c]).norm() < 1e-14, "E{c} at {x:?}");
                assert!((rebuilt.h[c] - direct.h[c]).norm() < 1e-14, "H{c} at {x:?}");
            }
        }
    }

    #[test]
    fn h3_is_exactly_zero() {
        let p = params();
        let wave = IncidentWave::new(p.kappa).unwrap();
        let s = sample_fields(&wave, &p, Point3::new(0.1, 0.2, 0.3)).unwrap();
        assert_eq!(s.h[2], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn incident_field_is_divergence_free() {
        let p = params();
        let wave = IncidentWave::new(p.kappa).unwrap();
        let origin = Point3::new(0.0, 0.0, 0.0);
        let resid = |h: f64| {
            let grid = FieldGrid::sample(&wave, &p, origin, h, (5, 5, 5)).unwrap();
            divergence_residual(&grid).unwrap()
        };
        let r1 = resid(0.1);
        let r2 = resid(0.05);
        assert!(r1 / r2 > 3.0, "divergence not contracting: {r1} vs {r2}");
    }

    #[test]
    fn maxwell_residuals_contract_for_plane_wave() {
        let p = params();
        let wave = IncidentWave::new(p.kappa).unwrap();
        let origin = Point3::new(0.0, 0.0, 0.0);
        let resid = |h: f64| {
            let grid = FieldGrid::sample(&wave, &p, origin, h, (7, 7, 7)).unwrap();
            maxwell_residual(&grid, &p).unwrap()
        };
        let (e1, h1) = resid(0.1);
        let (e2, h2) = resid(0.05);
        assert!((3.5..4.5).contains(&(e1 / e2)), "curl E ratio {}", e1 / e2);
        assert!((3.5..4.5).contains(&(h1 / h2)), "curl H ratio {}", h1 / h2);
    }

    #[test]
    fn grid_too_small_is_reported() {
        let p = params();
        let wave = IncidentWave::new(p.kappa).unwrap();
        let grid = FieldGrid::sample(&wave, &p, Point3::new(0.0, 0.0, 0.0), 0.1, (4, 5, 5)).unwrap();
        assert!(matches!(maxwell_residual(&grid, &p), Err(CoreError::GridTooSmall { .. })));
    }

    #[test]
    fn tangential_e_vanishes_on_cylinder_surface() {
        let p = params();
        let disc = Disc::new(Point2::new(0.0, 0.0), 0.1).unwrap();
        let wave = IncidentWave::new(p.kappa).unwrap();
        let series = SeriesField::new(disc, wave, 30).unwrap();
        for i in 0..32 {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / 32.0;
            let bp = disc.boundary_point(theta);
            let s = sample_fields(&series, &p, Point3::new(bp.x, bp.y, 0.4)).unwrap();
            // axial tangential component
            assert!(s.e[2].norm() <= 1e-10, "E3 = {} at theta = {theta}", s.e[2].norm());
            // azimuthal tangential component
            let tangential = -theta.sin() * s.e[0] + theta.cos() * s.e[1];
            assert!(tangential.norm() <= 1e-10, "E_t = {} at theta = {theta}", tangential.norm());
        }
    }

    #[test]
    fn appendix_chain_for_exact_scattering_mode() {
        let p = params();
        let disc = Disc::new(Point2::new(0.0, 0.0), 0.05).unwrap();
        let wave = IncidentWave::new(p.kappa).unwrap();
        let series = SeriesField::new(disc, wave, 30).unwrap();
        let window = Rect::new(0.5, 0.5, 1.5, 1.5).unwrap();

        let coarse = appendix_check(&series, &p, window, 17).unwrap();
        let fine = appendix_check(&series, &p, window, 33).unwrap();

        // first two equations of each set are algebraic identities
        for r in [coarse.faraday[0], coarse.faraday[1], coarse.ampere[0], coarse.ampere[1]] {
            assert!(r < 1e-13, "algebraic identity violated: {r}");
        }
        // the difference equations contract at second order
        assert!(coarse.faraday[2] / fine.faraday[2] > 3.0);
        assert!(coarse.ampere[2] / fine.ampere[2] > 3.0);
    }

    #[test]
    fn appendix_mixed_partial_identity_for_plane_wave() {
        // for u = e^{i kappa y} both sides of the third Faraday equation are
        // (i k3/kappa^2) u_xy = 0, so the residual is rounding-level
        let p = params();
        let wave = IncidentWave::new(p.kappa).unwrap();
        let r = appendix_check(&wave, &p, Rect::new(0.0, 0.0, 1.0, 1.0).unwrap(), 9).unwrap();
        assert!(r.faraday[2] < 1e-13);
    }
}
