//! Dense complex linear algebra: LU with partial pivoting and a Hager-style
//! 1-norm condition estimate.
//!
//! System sizes here stay in the hundreds-to-low-thousands (the cylinder
//! count grows only logarithmically in 1/a and collocation grids are modest),
//! so an unblocked O(n^3) factorization is the right tool: deterministic,
//! allocation-light, and it exposes the transpose/adjoint solves the
//! condition estimator needs.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    /// Build from pre-computed row-major data (used by parallel assembly).
    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n, "row-major data must hold n^2 entries");
        CMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut best = 0.0_f64;
        for j in 0..self.n {
            let mut s = 0.0;
            for i in 0..self.n {
                s += self.get(i, j).norm();
            }
            best = best.max(s);
        }
        best
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }
}

/// LU factors of a row-permuted matrix: P A = L U with unit-diagonal L.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
}

/// Factor with partial pivoting. Fails only on an exactly zero pivot;
/// near-singularity is the condition estimator's business.
pub fn lu_factor(a: &CMatrix) -> Result<LuFactors> {
    let n = a.n;
    let mut lu = a.data.clone();
    let mut pivots = vec![0usize; n];
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].norm();
        for i in (k + 1)..n {
            let v = lu[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(CoreError::SingularMatrix { step: k });
        }
        pivots[k] = p;
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
        }
        let pivot = lu[k * n + k];
        for i in (k + 1)..n {
            let m = lu[i * n + k] / pivot;
            lu[i * n + k] = m;
            if m != Complex64::new(0.0, 0.0) {
                for j in (k + 1)..n {
                    let upper = lu[k * n + j];
                    lu[i * n + j] -= m * upper;
                }
            }
        }
    }
    Ok(LuFactors { n, lu, pivots })
}

impl LuFactors {
    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        // forward: L y = Pb
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        // backward: U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }

    /// Solve `A^T x = b` (plain transpose, no conjugation).
    pub fn solve_transpose(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x = b.to_vec();
        // A^T = U^T L^T P, so first U^T w = b (forward, diagonal of U), then
        // L^T y = w (backward, unit diagonal), then undo the row swaps.
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[j * n + i] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[j * n + i] * x[j];
            }
            x[i] = acc;
        }
        for k in (0..n).rev() {
            x.swap(k, self.pivots[k]);
        }
        x
    }

    /// Solve `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let conj_b: Vec<Complex64> = b.iter().map(|v| v.conj()).collect();
        let mut x = self.solve_transpose(&conj_b);
        for v in &mut x {
            *v = v.conj();
        }
        x
    }
}

/// Hager/Higham iterative estimate of ||A^-1||_1 * ||A||_1.
pub fn estimate_condition_1norm(a: &CMatrix, lu: &LuFactors) -> f64 {
    let n = a.n;
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
    let mut est = 0.0_f64;
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let y = lu.solve(&x);
        let y_norm: f64 = y.iter().map(|v| v.norm()).sum();
        est = est.max(y_norm);
        let xi: Vec<Complex64> =
            y.iter().map(|v| if v.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { v / v.norm() }).collect();
        let z = lu.solve_adjoint(&xi);
        let (j, z_max) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let zx: Complex64 = z.iter().zip(&x).map(|(zi, xi)| zi.conj() * xi).sum();
        if z_max <= zx.norm() || j == last_j {
            break;
        }
        last_j = j;
        x = vec![Complex64::new(0.0, 0.0); n];
        x[j] = Complex64::new(1.0, 0.0);
    }
    est * a.one_norm()
}

/// Infinity norm of the residual `A x - b`.
pub fn residual_inf_norm(a: &CMatrix, x: &[Complex64], b: &[Complex64]) -> f64 {
    a.mul_vec(x)
        .iter()
        .zip(b)
        .map(|(ax, bi)| (ax - bi).norm())
        .fold(0.0, f64::max)
}
