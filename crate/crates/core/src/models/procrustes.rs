//! Orthogonal Procrustes alignment of latent configurations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcrustesFit {
    /// Row-major `K × K` orthogonal matrix.
    pub q: Vec<f64>,
    /// Row-major `I × K` configuration `U_b Q`.
    pub aligned: Vec<f64>,
    /// `tr[(U₀ − U_b Q)ᵀ (U₀ − U_b Q)]`.
    pub residual: f64,
    /// False when `U_bᵀ U₀` is rank deficient and the minimizer is not unique.
    pub unique: bool,
}

/// Orthogonal `Q` minimizing `‖U₀ − U_b Q‖_F`: with `U_bᵀ U₀ = W D Vᵀ`,
/// `Q = W Vᵀ`.
pub fn procrustes_align(u_b: &[f64], u_0: &[f64], n: usize, k: usize) -> Result<ProcrustesFit> {
    if u_b.len() != n * k || u_0.len() != n * k {
        return Err(Error::Dimension(format!(
            "Procrustes inputs of length {} and {} for a {n} × {k} configuration",
            u_b.len(),
            u_0.len()
        )));
    }
    let b = DMatrix::from_row_slice(n, k, u_b);
    let a = DMatrix::from_row_slice(n, k, u_0);
    let cross = b.transpose() * &a;
    let svd = cross.svd(true, true);
    let w = svd.u.as_ref().expect("left singular vectors");
    let v_t = svd.v_t.as_ref().expect("right singular vectors");
    let q = w * v_t;

    let s = &svd.singular_values;
    let s_max = s.iter().copied().fold(0.0, f64::max);
    let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let unique = s_max > 0.0 && s_min > 1e-10 * s_max;

    let aligned = &b * &q;
    let diff = &a - &aligned;
    let residual = diff.iter().map(|x| x * x).sum();
    Ok(ProcrustesFit {
        q: q.transpose().as_slice().to_vec(),
        aligned: aligned.transpose().as_slice().to_vec(),
        residual,
        unique,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(theta: f64) -> [f64; 4] {
        let (s, c) = theta.sin_cos();
        [c, -s, s, c]
    }

    fn matmul(u: &[f64], q: &[f64], n: usize, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; n * k];
        for i in 0..n {
            for j in 0..k {
                out[i * k + j] = (0..k).map(|l| u[i * k + l] * q[l * k + j]).sum();
            }
        }
        out
    }

    #[test]
    fn identity_for_equal_inputs() {
        let u = [1.0, 0.0, 0.0, 2.0, -1.0, 0.5];
        let fit = procrustes_align(&u, &u, 3, 2).unwrap();
        for (a, b) in fit.q.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(fit.residual < 1e-20);
        assert!(fit.unique);
    }

    #[test]
    fn undoes_a_known_rotation() {
        let u0 = [1.0, 0.3, -0.4, 2.0, -1.0, 0.5, 0.2, -0.7];
        let r = rotation(1.1);
        let ub = matmul(&u0, &r, 4, 2);
        let fit = procrustes_align(&ub, &u0, 4, 2).unwrap();
        for (a, b) in fit.aligned.iter().zip(&u0) {
            assert!((a - b).abs() < 1e-8);
        }
        let qtq = matmul(&transpose(&fit.q, 2), &fit.q, 2, 2);
        for (a, b) in qtq.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    fn transpose(q: &[f64], k: usize) -> Vec<f64> {
        let mut t = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                t[j * k + i] = q[i * k + j];
            }
        }
        t
    }

    #[test]
    fn rank_deficient_is_flagged() {
        let u0 = [1.0, 0.0, 2.0, 0.0, -1.0, 0.0];
        let fit = procrustes_align(&u0, &u0, 3, 2).unwrap();
        assert!(!fit.unique);
        assert!(fit.residual < 1e-20);
    }

    #[test]
    fn shape_mismatch_errors() {
        assert!(procrustes_align(&[1.0, 2.0], &[1.0], 1, 2).is_err());
    }
}
