//! Partial transposition, symplectic spectra and logarithmic negativity of
//! two-mode covariance matrices.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{symplectic_form, CovarianceMatrix};

/// Negative discriminants down to this (relative to `max|V|⁴`) count as zero.
const CLAMP: f64 = 1e-12;

/// Below `√(Δ² - 4 det V) < REFINE · max|V|²` the closed form loses digits to
/// cancellation and the spectrum is recomputed by Williamson reduction.
const REFINE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticSpectrum {
    pub nu_min: f64,
    pub nu_max: f64,
}

/// `Λ V Λ` with `Λ = diag(1, 1, 1, -1)`.
pub fn partial_transpose(v: &CovarianceMatrix) -> CovarianceMatrix {
    let mut m = *v.matrix();
    for i in 0..4 {
        if i != 3 {
            m[(i, 3)] = -m[(i, 3)];
            m[(3, i)] = -m[(3, i)];
        }
    }
    CovarianceMatrix::new(m).expect("sign flips preserve symmetry")
}

/// Two-mode invariant formula `ν² = (Δ ± √(Δ² - 4 det V)) / 2` with
/// `Δ = det A + det B + 2 det C`.
pub fn symplectic_spectrum(v: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let (a, b, c) = v.blocks();
    let delta = a.determinant() + b.determinant() + 2.0 * c.determinant();
    let det = v.matrix().lu().determinant();
    if !(det > 0.0) {
        return Err(Error::Domain(format!(
            "covariance determinant {det:e} is not positive"
        )));
    }
    let scale = v.matrix().amax().powi(2);
    let mut disc = delta * delta - 4.0 * det;
    if disc < 0.0 {
        if disc < -CLAMP * scale * scale {
            return Err(Error::Domain(format!(
                "symplectic eigenvalues are complex (discriminant {disc:e})"
            )));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    if root < REFINE * scale {
        return williamson(v);
    }
    let big = 0.5 * (delta + root);
    if !(big > 0.0) {
        return Err(Error::Domain(format!(
            "symplectic invariant Δ = {delta:e} is not positive"
        )));
    }
    Ok(SymplecticSpectrum {
        nu_min: (det / big).sqrt(),
        nu_max: big.sqrt(),
    })
}

/// Williamson reduction: `K = V^{1/2} U V^{1/2}` is antisymmetric with
/// singular values `ν₁, ν₁, ν₂, ν₂`.
fn williamson(v: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let eig = SymmetricEigen::new(*v.matrix());
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Domain(format!(
            "covariance is not positive definite (eigenvalues {:?})",
            eig.eigenvalues.as_slice()
        )));
    }
    let root = eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let k = root * symplectic_form() * root;
    let mut nu: Vec<f64> = k.singular_values().iter().copied().collect();
    nu.sort_by(f64::total_cmp);
    Ok(SymplecticSpectrum {
        nu_min: 0.5 * (nu[0] + nu[1]),
        nu_max: 0.5 * (nu[2] + nu[3]),
    })
}

/// Moduli of the eigenvalues of `iUV` from a general eigensolver.
pub fn symplectic_spectrum_oracle(v: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let uv = symplectic_form() * v.matrix();
    // iUV has real eigenvalues ±ν; UV has ±iν.
    let eig = uv.complex_eigenvalues();
    let mut nu: Vec<f64> = eig.iter().map(|z| z.im.abs()).collect();
    if nu.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen("eigensolver returned non-finite values".into()));
    }
    nu.sort_by(f64::total_cmp);
    Ok(SymplecticSpectrum {
        nu_min: 0.5 * (nu[0] + nu[1]),
        nu_max: 0.5 * (nu[2] + nu[3]),
    })
}

/// `E_N = max(0, -log₂(2 ν̃_min))` of the partially transposed matrix.
pub fn log_negativity(v: &CovarianceMatrix) -> Result<f64> {
    let nu = symplectic_spectrum(&partial_transpose(v))?.nu_min;
    Ok((-(2.0 * nu).log2()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{covariance_from_moments, initial_normal_moments, SqueezeParameter};
    use nalgebra::Matrix2;

    fn tmsv(r: f64) -> CovarianceMatrix {
        covariance_from_moments(&initial_normal_moments(SqueezeParameter::new(r).unwrap())).unwrap()
    }

    #[test]
    fn diagonal_matrix_is_fixed_by_transpose() {
        let v = CovarianceMatrix::new(Matrix4::from_diagonal(&[1.0, 2.0, 3.0, 4.0].into())).unwrap();
        assert_eq!(partial_transpose(&v), v);
    }

    #[test]
    fn transpose_is_involutive() {
        let v = tmsv(0.7);
        assert_eq!(partial_transpose(&partial_transpose(&v)), v);
    }

    #[test]
    fn transposed_tmsv_correlations() {
        let (_, _, c) = partial_transpose(&tmsv(1.0)).blocks();
        let sh = 2f64.sinh() / 2.0;
        assert!((c + Matrix2::identity() * sh).amax() < 1e-14);
    }

    #[test]
    fn vacuum_and_pure_states() {
        let s = symplectic_spectrum(&CovarianceMatrix::vacuum()).unwrap();
        assert!((s.nu_min - 0.5).abs() < 1e-15 && (s.nu_max - 0.5).abs() < 1e-15);
        for r in [1.0, 3.0] {
            // At r = 3 the smallest eigenvalue of V is e^{-6}/2, formed from
            // entries near 200; rounding of V alone moves ν by ~1e-11.
            let s = symplectic_spectrum(&tmsv(r)).unwrap();
            assert!((s.nu_min - 0.5).abs() < 1e-10, "{r}: {s:?}");
            assert!((s.nu_max - 0.5).abs() < 1e-10, "{r}: {s:?}");
            let o = symplectic_spectrum_oracle(&tmsv(r)).unwrap();
            assert!((o.nu_min - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn negativity_anchors() {
        assert_eq!(log_negativity(&CovarianceMatrix::vacuum()).unwrap(), 0.0);
        let e = log_negativity(&tmsv(3.0)).unwrap();
        assert!((e - 6.0 / std::f64::consts::LN_2).abs() < 1e-10, "{e}");
    }

    #[test]
    fn invalid_matrices_are_domain_errors() {
        let neg = CovarianceMatrix::new(Matrix4::from_diagonal(&[1.0, -1.0, 1.0, 1.0].into())).unwrap();
        assert!(matches!(symplectic_spectrum(&neg), Err(Error::Domain(_))));
    }
}
