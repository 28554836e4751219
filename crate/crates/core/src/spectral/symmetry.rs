use super::omega_pow;
use crate::{Error, Result, C64, M3};

const O: C64 = C64::new(0.0, 0.0);
const I1: C64 = C64::new(1.0, 0.0);

/// Cyclic permutation `𝒜`.
pub const A_CAL: M3 = M3::new(O, O, I1, I1, O, O, O, I1, O);

/// Transposition `ℬ`.
pub const B_CAL: M3 = M3::new(O, I1, O, I1, O, O, O, O, I1);

/// The permutation matrices and the `R`/`r̃` functions bundled together.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryMatrices {
    pub a: M3,
    pub b: M3,
}

impl Default for SymmetryMatrices {
    fn default() -> Self {
        Self { a: A_CAL, b: B_CAL }
    }
}

impl SymmetryMatrices {
    pub fn r(&self, k: C64) -> Result<M3> {
        r_matrix(k)
    }

    pub fn rtilde(&self, k: C64) -> Result<C64> {
        rtilde(k)
    }
}

/// `R(k)`, which intertwines `s` with the conjugated adjoint scattering matrix.
pub fn r_matrix(k: C64) -> Result<M3> {
    let w = omega_pow(1);
    let w2 = omega_pow(2);
    let k2 = k * k;
    let d1 = (k2 - 1.0) * (k2 - w2);
    let d2 = (k2 - 1.0) * (k2 - w);
    let d3 = (k2 - w) * (k2 - w2);
    if [d1, d2, d3].iter().any(|d| d.norm() < 1e-300) {
        return Err(Error::domain(k, "R(k) has a pole at ±1, ±ω, ±ω²"));
    }
    let s = k2 * -4.0;
    Ok(M3::new(O, s * w / d1, O, s * w2 / d2, O, O, O, O, s / d3))
}

/// `r̃(k) = (ω² − k²) / (1 − ω² k²)`.
pub fn rtilde(k: C64) -> Result<C64> {
    let w2 = omega_pow(2);
    let den = 1.0 - w2 * k * k;
    if den.norm() < 1e-12 {
        return Err(Error::domain(k, "r̃ has poles at ±ω²"));
    }
    Ok((w2 - k * k) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{l_all, omega};

    #[test]
    fn permutation_orders() {
        let a3 = A_CAL * A_CAL * A_CAL;
        assert_eq!(a3, M3::identity());
        assert_eq!(B_CAL * B_CAL, M3::identity());
    }

    #[test]
    fn diag_l_conjugation() {
        for &(r, phi) in &[(0.4, 0.3), (1.7, 2.0), (3.0, -1.1), (0.8, -2.7)] {
            let k = C64::from_polar(r, phi);
            let dk = M3::from_diagonal(&l_all(k).into());
            let dw = M3::from_diagonal(&l_all(omega() * k).into());
            let di = M3::from_diagonal(&l_all(k.inv()).into());
            let a_inv = A_CAL.transpose();
            assert!(crate::linalg::max_abs(&(dk - A_CAL * dw * a_inv)) < 1e-12);
            assert!(crate::linalg::max_abs(&(dk - B_CAL * di * B_CAL)) < 1e-12);
        }
    }

    #[test]
    fn rtilde_values() {
        assert!((rtilde(C64::new(0.0, 0.0)).unwrap() - omega_pow(2)).norm() < 1e-15);
        assert!((rtilde(C64::new(1.0, 0.0)).unwrap() + 1.0).norm() < 1e-15);
        assert!(rtilde(omega_pow(2)).is_err());
        assert!(rtilde(-omega_pow(2)).is_err());
    }

    #[test]
    fn rtilde_is_real_on_circle() {
        for n in 0..360 {
            let phi = (n as f64 + 0.5).to_radians();
            let k = C64::from_polar(1.0, phi);
            if let Ok(v) = rtilde(k) {
                assert!(v.im.abs() < 1e-10 * (1.0 + v.re.abs()), "phi = {phi}");
            }
        }
    }

    #[test]
    fn r_determinant_nonzero_away_from_poles() {
        let k = C64::new(0.7, 0.4);
        assert!(r_matrix(k).unwrap().determinant().norm() > 0.0);
        assert!(r_matrix(C64::new(1.0, 0.0)).is_err());
    }
}
