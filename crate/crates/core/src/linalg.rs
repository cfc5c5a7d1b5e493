//! Dense numerical kernels: complex matrix exponential, a cyclic Jacobi
//! eigensolver, the rotation-plane decomposition of antisymmetric matrices,
//! and a golden-section maximizer.

use nalgebra::{DMatrix, DVector};

use crate::algebra::CMat;
use crate::error::{Error, Result};

/// Matrix exponential by scaling-and-squaring with a Taylor kernel.
///
/// Accurate to machine precision for the moderately sized anti-Hermitian
/// inputs this crate produces.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = a.norm();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a * nalgebra::Complex::new(2.0_f64.powi(-(s as i32)), 0.0);
    let mut result = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=24 {
        term = (&term * &b) * nalgebra::Complex::new(1.0 / k as f64, 0.0);
        result += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// All eigenvalues of a symmetric matrix by the cyclic Jacobi method,
/// ascending.
pub fn jacobi_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    let scale = m.norm().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let (app, aqq) = (m[(p, p)], m[(q, q)]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|k| m[(k, k)]).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}

/// Decomposition of a real antisymmetric matrix into invariant rotation
/// planes plus a fixed subspace, enabling exact evaluation of exp(tB).
#[derive(Debug, Clone)]
pub struct SkewRotation {
    dim: usize,
    /// Orthogonal column basis: plane pairs (v, w) first, then the kernel.
    q: DMatrix<f64>,
    rates: Vec<f64>,
    n_planes: usize,
}

const SKEW_TOL: f64 = 1e-9;

impl SkewRotation {
    /// Decompose an antisymmetric matrix. Plane pairing uses the symmetric
    /// eigenstructure of BᵀB; the result is validated internally.
    pub fn new(b: &DMatrix<f64>) -> Result<Self> {
        let dim = b.nrows();
        let scale = 1.0_f64.max(b.norm());
        if (b + b.transpose()).norm() > SKEW_TOL * scale {
            return Err(Error::Internal(
                "rotation decomposition requires an antisymmetric matrix".into(),
            ));
        }
        let k = b.transpose() * b;
        let eig = nalgebra::SymmetricEigen::new(k);
        // Group eigenvectors by eigenvalue cluster.
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
        let cluster_tol = 1e-8 * eig.eigenvalues.amax().max(1.0);

        let mut planes: Vec<(DVector<f64>, DVector<f64>, f64)> = Vec::new();
        let mut kernel: Vec<DVector<f64>> = Vec::new();
        let mut idx = 0;
        while idx < dim {
            let mut hi = idx + 1;
            while hi < dim
                && (eig.eigenvalues[order[hi]] - eig.eigenvalues[order[idx]]).abs() <= cluster_tol
            {
                hi += 1;
            }
            let mut cols: Vec<DVector<f64>> = order[idx..hi]
                .iter()
                .map(|&j| eig.eigenvectors.column(j).into_owned())
                .collect();
            while let Some(v) = cols.pop() {
                let w_raw = b * &v;
                let theta = w_raw.norm();
                if theta <= 1e-11 * scale {
                    kernel.push(v);
                    continue;
                }
                let w = w_raw / theta;
                let back = b * &w + theta * &v;
                if back.norm() > SKEW_TOL * scale.max(theta) {
                    return Err(Error::Internal(format!(
                        "rotation pairing failed: residual {:.3e} at rate {theta:.3e}",
                        back.norm()
                    )));
                }
                // Deflate the remaining cluster vectors against the plane.
                let mut next = Vec::with_capacity(cols.len().saturating_sub(1));
                for mut c in cols {
                    for basis in [&v, &w] {
                        let proj = c.dot(basis);
                        c -= basis * proj;
                    }
                    // One re-orthogonalization pass against already kept columns.
                    let norm = c.norm();
                    if norm > 1e-6 {
                        next.push(c / norm);
                    }
                }
                cols = next;
                planes.push((v, w, theta));
            }
            idx = hi;
        }

        let n_planes = planes.len();
        if 2 * n_planes + kernel.len() != dim {
            return Err(Error::Internal(format!(
                "rotation decomposition mismatch: {} planes + {} fixed ≠ {dim}",
                n_planes,
                kernel.len()
            )));
        }
        let mut q = DMatrix::zeros(dim, dim);
        let mut rates = Vec::with_capacity(n_planes);
        for (p, (v, w, theta)) in planes.into_iter().enumerate() {
            q.set_column(2 * p, &v);
            q.set_column(2 * p + 1, &w);
            rates.push(theta);
        }
        for (j, v) in kernel.into_iter().enumerate() {
            q.set_column(2 * n_planes + j, &v);
        }
        let ortho = (q.transpose() * &q - DMatrix::identity(dim, dim)).norm();
        if ortho > SKEW_TOL * (dim as f64).sqrt() {
            return Err(Error::Internal(format!(
                "rotation basis lost orthogonality: {ortho:.3e}"
            )));
        }
        Ok(SkewRotation {
            dim,
            q,
            rates,
            n_planes,
        })
    }

    /// Evaluate exp(tB)·v.
    pub fn apply(&self, t: f64, v: &DVector<f64>) -> DVector<f64> {
        let mut y = self.q.tr_mul(v);
        for (p, &theta) in self.rates.iter().enumerate() {
            let (c, s) = ((theta * t).cos(), (theta * t).sin());
            let (a, b) = (y[2 * p], y[2 * p + 1]);
            y[2 * p] = c * a - s * b;
            y[2 * p + 1] = s * a + c * b;
        }
        &self.q * y
    }

    /// Rotation rates of the invariant planes.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Dimension of the fixed subspace.
    pub fn kernel_dim(&self) -> usize {
        self.dim - 2 * self.n_planes
    }
}

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    #[test]
    fn expm_of_rotation_generator() {
        let mut a = CMat::zeros(2, 2);
        let th = 0.7;
        a[(0, 1)] = Complex::new(-th, 0.0);
        a[(1, 0)] = Complex::new(th, 0.0);
        let e = expm(&a);
        assert!((e[(0, 0)].re - th.cos()).abs() < 1e-14);
        assert!((e[(1, 0)].re - th.sin()).abs() < 1e-14);
    }

    #[test]
    fn expm_large_norm_uses_squaring() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = Complex::new(0.0, 3.4);
        a[(1, 1)] = Complex::new(0.0, -7.9);
        let e = expm(&a);
        assert!((e[(0, 0)] - Complex::new(0.0, 3.4).exp()).norm() < 1e-13);
        assert!((e[(1, 1)] - Complex::new(0.0, -7.9).exp()).norm() < 1e-13);
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        // diag(1, 4, 9) conjugated by a rotation-ish orthogonal basis.
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 9.0]));
        let angle: f64 = 0.3;
        let mut q = DMatrix::identity(3, 3);
        q[(0, 0)] = angle.cos();
        q[(0, 1)] = -angle.sin();
        q[(1, 0)] = angle.sin();
        q[(1, 1)] = angle.cos();
        let a = &q * d * q.transpose();
        let eig = jacobi_eigenvalues(&a);
        for (got, want) in eig.iter().zip([1.0, 4.0, 9.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn skew_rotation_reproduces_expm() {
        // Antisymmetric matrix with two distinct rates and a 1-dim kernel.
        let mut b = DMatrix::zeros(5, 5);
        for (i, j, v) in [(0, 1, 0.9), (2, 3, 0.4)] {
            b[(i, j)] = -v;
            b[(j, i)] = v;
        }
        // Mix by an orthogonal change of basis built from a Householder.
        let u = DVector::from_vec(vec![1.0, 2.0, -1.0, 0.5, 3.0]).normalize();
        let h = DMatrix::identity(5, 5) - &u * u.transpose() * 2.0;
        let b = &h * b * h.transpose();
        let rot = SkewRotation::new(&b).unwrap();
        assert_eq!(rot.kernel_dim(), 1);

        let t = 1.37;
        let v = DVector::from_vec(vec![0.2, -1.0, 0.7, 0.3, 1.1]);
        let fast = rot.apply(t, &v);
        // Reference through the complex exponential.
        let bc = CMat::from_fn(5, 5, |r, c| Complex::new(b[(r, c)] * t, 0.0));
        let e = expm(&bc);
        let mut slow = DVector::zeros(5);
        for r in 0..5 {
            for c in 0..5 {
                slow[r] += e[(r, c)].re * v[c];
            }
        }
        assert!((fast - slow).norm() < 1e-12);
    }

    #[test]
    fn skew_rotation_handles_repeated_rates() {
        // Two planes with the same rate exercise the cluster deflation.
        let mut b = DMatrix::zeros(4, 4);
        for (i, j) in [(0, 1), (2, 3)] {
            b[(i, j)] = -0.6;
            b[(j, i)] = 0.6;
        }
        let u = DVector::from_vec(vec![1.0, -1.0, 2.0, 0.3]).normalize();
        let h = DMatrix::identity(4, 4) - &u * u.transpose() * 2.0;
        let b = &h * b * h.transpose();
        let rot = SkewRotation::new(&b).unwrap();
        assert_eq!(rot.rates().len(), 2);
        for r in rot.rates() {
            assert!((r - 0.6).abs() < 1e-10);
        }
        // exp(tB) must be orthogonal.
        let t = 2.1;
        let e0 = rot.apply(t, &DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]));
        let e1 = rot.apply(t, &DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]));
        assert!((e0.norm() - 1.0).abs() < 1e-12);
        assert!(e0.dot(&e1).abs() < 1e-12);
    }

    #[test]
    fn golden_section_finds_quadratic_peak() {
        let (x, v) = golden_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, 0.0, 3.0, 1e-9);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-10);
    }
}
