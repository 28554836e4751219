//! Special functions, constants, Lax matrices and region geometry.

mod geometry;
mod lax;
mod symmetry;

pub use geometry::{
    classify, dist_to_gamma, segment_of, Sector, Segment, SpectralPoint, Subregion,
};
pub(crate) use lax::reduced_row;
pub use lax::{build_lax, p_inverse, p_matrix, reduced_potential, LaxInputs, LaxMatrices};
pub use symmetry::{r_matrix, rtilde, SymmetryMatrices, A_CAL, B_CAL};

use crate::{Error, Result, C64};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Tolerance for "on contour" and "at a special point" detection.
pub const TOL_CONTOUR: f64 = 1e-9;

/// Operations needing `P(k)^{-1}` refuse points closer than this to `Q̂`.
pub const Q_EXCLUSION: f64 = 1e-6;

/// `ω^n` with exact components.
pub fn omega_pow(n: i64) -> C64 {
    match n.rem_euclid(3) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(-0.5, 0.5 * SQRT3),
        _ => C64::new(-0.5, -0.5 * SQRT3),
    }
}

/// `ω = e^{2πi/3}`.
pub fn omega() -> C64 {
    omega_pow(1)
}

/// Cube roots of unity, sixth roots `κ_j` and the exceptional set `Q̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnityRoots {
    pub omega: C64,
    pub kappa: [C64; 6],
    pub qhat: [C64; 7],
}

impl UnityRoots {
    pub fn new() -> Self {
        let kappa: [C64; 6] =
            std::array::from_fn(|j| C64::from_polar(1.0, std::f64::consts::PI * j as f64 / 3.0));
        // exact components for the sixth roots
        let kappa = kappa.map(|z| C64::new(round_half(z.re), round_sqrt3(z.im)));
        let mut qhat = [C64::new(0.0, 0.0); 7];
        qhat[..6].copy_from_slice(&kappa);
        Self {
            omega: omega(),
            kappa,
            qhat,
        }
    }

    /// Distance from `k` to the exceptional set `Q̂`.
    pub fn dist_to_qhat(&self, k: C64) -> f64 {
        self.qhat
            .iter()
            .map(|q| (k - q).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

impl Default for UnityRoots {
    fn default() -> Self {
        Self::new()
    }
}

fn round_half(x: f64) -> f64 {
    (x * 2.0).round() / 2.0
}

fn round_sqrt3(y: f64) -> f64 {
    (y / (0.5 * SQRT3)).round() * 0.5 * SQRT3
}

/// Distance from `k` to `Q̂ = {κ_j} ∪ {0}`.
pub fn dist_to_qhat(k: C64) -> f64 {
    let r = k.norm();
    if r == 0.0 {
        return 0.0;
    }
    let phase = k.arg();
    let sixth = std::f64::consts::PI / 3.0;
    let nearest = (phase / sixth).round() * sixth;
    let d_kappa = (k - C64::from_polar(1.0, nearest)).norm();
    d_kappa.min(r)
}

fn check_nonzero(k: C64) -> Result<()> {
    if k.norm() <= TOL_CONTOUR || !k.re.is_finite() || !k.im.is_finite() {
        Err(Error::domain(
            k,
            "k must be a finite nonzero complex number",
        ))
    } else {
        Ok(())
    }
}

fn check_index(j: usize) -> Result<()> {
    if (1..=3).contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("index {j} is not in 1..=3")))
    }
}

/// `l_j(k) = i (ω^j k + (ω^j k)^{-1}) / (2√3)`.
pub fn eval_l(j: usize, k: C64) -> Result<C64> {
    check_index(j)?;
    check_nonzero(k)?;
    Ok(l_unchecked(j, k))
}

/// `z_j(k) = i ((ω^j k)^2 + (ω^j k)^{-2}) / (4√3)`.
pub fn eval_z(j: usize, k: C64) -> Result<C64> {
    check_index(j)?;
    check_nonzero(k)?;
    Ok(z_unchecked(j, k))
}

/// `θ_ij(x, t, k) = (l_i − l_j) x + (z_i − z_j) t`.
pub fn eval_theta(i: usize, j: usize, x: f64, t: f64, k: C64) -> Result<C64> {
    check_index(i)?;
    check_index(j)?;
    if i == j {
        return Err(Error::InvalidInput("theta needs distinct indices".into()));
    }
    check_nonzero(k)?;
    Ok(theta_unchecked(i, j, x, t, k))
}

/// `λ(k) = (k^3 + k^{-3}) / 2`.
pub fn lambda(k: C64) -> C64 {
    (k.powi(3) + k.powi(3).inv()) * 0.5
}

pub(crate) fn l_unchecked(j: usize, k: C64) -> C64 {
    let w = omega_pow(j as i64) * k;
    C64::i() * (w + w.inv()) / (2.0 * SQRT3)
}

pub(crate) fn z_unchecked(j: usize, k: C64) -> C64 {
    let w = omega_pow(j as i64) * k;
    let w2 = w * w;
    C64::i() * (w2 + w2.inv()) / (4.0 * SQRT3)
}

pub(crate) fn theta_unchecked(i: usize, j: usize, x: f64, t: f64, k: C64) -> C64 {
    (l_unchecked(i, k) - l_unchecked(j, k)) * x + (z_unchecked(i, k) - z_unchecked(j, k)) * t
}

/// `[l_1, l_2, l_3](k)`.
pub fn l_all(k: C64) -> [C64; 3] {
    [l_unchecked(1, k), l_unchecked(2, k), l_unchecked(3, k)]
}

/// `[z_1, z_2, z_3](k)`.
pub fn z_all(k: C64) -> [C64; 3] {
    [z_unchecked(1, k), z_unchecked(2, k), z_unchecked(3, k)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| C64::from_polar(rng.gen_range(0.05..5.0), rng.gen_range(-3.1..3.1)))
            .filter(|k| dist_to_qhat(*k) > 0.05)
            .collect()
    }

    #[test]
    fn roots_of_unity() {
        let r = UnityRoots::new();
        assert!((r.omega.powi(3) - 1.0).norm() < 1e-15);
        for (j, kap) in r.kappa.iter().enumerate() {
            assert!((kap.norm() - 1.0).abs() < 1e-15);
            let exact = C64::from_polar(1.0, std::f64::consts::PI * j as f64 / 3.0);
            assert!((kap - exact).norm() < 1e-15);
        }
        assert_eq!(r.qhat[6], C64::new(0.0, 0.0));
    }

    #[test]
    fn l3_at_one() {
        let v = eval_l(3, C64::new(1.0, 0.0)).unwrap();
        assert!((v - C64::new(0.0, 1.0 / SQRT3)).norm() < 1e-15);
    }

    #[test]
    fn l_sum_vanishes_and_inversion() {
        for k in random_points(200, 1) {
            let l = l_all(k);
            assert!((l[0] + l[1] + l[2]).norm() < 1e-12 * (k.norm() + k.norm().recip()));
            assert!((l_unchecked(1, k.inv()) - l[1]).norm() < 1e-12 * (1.0 + l[1].norm()));
        }
    }

    #[test]
    fn zero_k_is_rejected() {
        assert!(eval_l(1, C64::new(0.0, 0.0)).is_err());
        assert!(eval_z(2, C64::new(0.0, 0.0)).is_err());
        assert!(eval_theta(2, 1, 0.0, 0.0, C64::new(0.0, 0.0)).is_err());
        assert!(eval_l(4, C64::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn theta_properties() {
        for k in random_points(100, 2) {
            assert_eq!(eval_theta(2, 1, 0.0, 0.0, k).unwrap(), C64::new(0.0, 0.0));
            let (x, t) = (0.7, 1.3);
            let lhs = eval_theta(3, 1, x, t, k).unwrap();
            let rhs = eval_theta(3, 2, x, t, k).unwrap() + eval_theta(2, 1, x, t, k).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
        for k0 in [1.5, 2.0, 7.0, -0.3, -0.9] {
            let th = eval_theta(2, 1, 1.7, 0.4, C64::new(k0, 0.0)).unwrap();
            assert!(th.im.abs() < 1e-14 * (1.0 + th.re.abs()));
        }
    }

    #[test]
    fn lambda_invariance() {
        for k in random_points(200, 3) {
            let lam = lambda(k);
            let scale = 1.0 + lam.norm();
            assert!((lambda(omega() * k) - lam).norm() < 1e-12 * scale);
            assert!((lambda(k.inv()) - lam).norm() < 1e-12 * scale);
        }
    }
}
