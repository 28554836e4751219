//! Jump matrices of the row Riemann–Hilbert problem and the scalar spectral
//! functions `f`, `ν₁…ν₄`, `ν̂₁`, `ν̂₂` on the unit circle.

mod circle;
mod synthetic;

pub use circle::{build_circle_jump, Circle, CircleSystem, Orientation};
pub use synthetic::{BoxPotential, ZeroReflection};

use crate::direct::ReflectionSource;
use crate::spectral::{omega_pow, r_matrix, theta_unchecked, Segment};
use crate::{Error, Result, C64, M3};
use std::f64::consts::PI;

/// Distance to `±ω²` below which `r2` is not evaluated.
pub const R2_POLE_RADIUS: f64 = 1e-3;

fn r1(src: &dyn ReflectionSource, k: C64) -> Result<C64> {
    src.r1(k)
}

fn r2(src: &dyn ReflectionSource, k: C64) -> Result<C64> {
    let w2 = omega_pow(2);
    if (k - w2).norm() < R2_POLE_RADIUS || (k + w2).norm() < R2_POLE_RADIUS {
        return Err(Error::NearR2Pole { k });
    }
    src.r2(k)
}

/// Jump matrix `v(x, t, k)` on the piece `seg` of `Γ`.
pub fn build_v(src: &dyn ReflectionSource, x: f64, t: f64, k: C64, seg: Segment) -> Result<M3> {
    if k == C64::new(0.0, 0.0) {
        return Err(Error::domain(k, "the jump is not defined at the origin"));
    }
    let (w, w2) = (omega_pow(1), omega_pow(2));
    let e21 = theta_unchecked(2, 1, x, t, k).exp();
    let e31 = theta_unchecked(3, 1, x, t, k).exp();
    let e32 = theta_unchecked(3, 2, x, t, k).exp();
    let (o, one) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let ki = k.inv();
    let m = match seg {
        Segment::G1 => {
            let (a, b) = (r1(src, k)?, r1(src, ki)?);
            M3::new(one, -a / e21, o, b * e21, one - a * b, o, o, o, one)
        }
        Segment::G2 => {
            let (a, b) = (r2(src, w * k)?, r2(src, (w * k).inv())?);
            M3::new(one, o, o, o, one - a * b, -b / e32, o, a * e32, one)
        }
        Segment::G3 => {
            let (a, b) = (r1(src, w2 * k)?, r1(src, (w2 * k).inv())?);
            M3::new(one - a * b, o, b / e31, o, one, o, -a * e31, o, one)
        }
        Segment::G4 => {
            let (a, b) = (r2(src, k)?, r2(src, ki)?);
            M3::new(one - a * b, -b / e21, o, a * e21, one, o, o, o, one)
        }
        Segment::G5 => {
            let (a, b) = (r1(src, w * k)?, r1(src, (w * k).inv())?);
            M3::new(one, o, o, o, one, -a / e32, o, b * e32, one - a * b)
        }
        Segment::G6 => {
            let (a, b) = (r2(src, w2 * k)?, r2(src, (w2 * k).inv())?);
            M3::new(one, o, a / e31, o, one, o, -b * e31, o, one - a * b)
        }
        Segment::G7 => {
            let (p1, p2) = (r1(src, k)?, r2(src, k)?);
            let (q1, q2) = (r1(src, w2 * k)?, r2(src, w2 * k)?);
            let (s1, s2) = (r1(src, (w * k).inv())?, r2(src, (w * k).inv())?);
            M3::new(
                one,
                -p1 / e21,
                q2 / e31,
                -p2 * e21,
                one + p1 * p2,
                (s2 - p2 * q2) / e32,
                q1 * e31,
                (s1 - p1 * q1) * e32,
                f_function(src, w2 * k)?,
            )
        }
        Segment::G8 => {
            let (p1, p2) = (r1(src, k)?, r2(src, k)?);
            let (q1, q2) = (r1(src, w * k)?, r2(src, w * k)?);
            let (s1, s2) = (r1(src, (w2 * k).inv())?, r2(src, (w2 * k).inv())?);
            M3::new(
                f_function(src, k)?,
                p1 / e21,
                (s1 - p1 * q1) / e31,
                p2 * e21,
                one,
                -q1 / e32,
                (s2 - q2 * p2) * e31,
                -q2 * e32,
                one + q1 * q2,
            )
        }
        Segment::G9 => {
            let (p1, p2) = (r1(src, w * k)?, r2(src, w * k)?);
            let (q1, q2) = (r1(src, w2 * k)?, r2(src, w2 * k)?);
            let (s1, s2) = (r1(src, ki)?, r2(src, ki)?);
            M3::new(
                one + q1 * q2,
                (s2 - p2 * q2) / e21,
                -q2 / e31,
                (s1 - p1 * q1) * e21,
                f_function(src, w * k)?,
                p1 / e32,
                -q1 * e31,
                p2 * e32,
                one,
            )
        }
    };
    Ok(m)
}

/// `max |(v(k̄)⁻¹)^† − R(k)⁻¹ v(k) R(k)|` for jumps `v = v(k)`, `v_conj = v(k̄)`;
/// zero when the jump has the R-symmetry at `k`.
pub fn r_symmetry_residual(v: &M3, v_conj: &M3, k: C64) -> Result<f64> {
    let singular = || Error::domain(k, "singular jump or symmetry matrix");
    let lhs = v_conj.try_inverse().ok_or_else(singular)?.adjoint();
    let r = r_matrix(k)?;
    let rhs = r.try_inverse().ok_or_else(singular)? * v * r;
    Ok(crate::linalg::max_abs(&(lhs - rhs)))
}

/// `f(k) = 1 + r1(k) r2(k) + r1(1/(ω²k)) r2(1/(ω²k))` for `|k| = 1`.
///
/// The value is returned unclamped; it is real for consistent data.
pub fn f_function(src: &dyn ReflectionSource, k: C64) -> Result<C64> {
    if (k.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::domain(k, "f is defined on the unit circle"));
    }
    let kk = (omega_pow(2) * k).inv();
    Ok(1.0 + r1(src, k)? * r2(src, k)? + r1(src, kk)? * r2(src, kk)?)
}

/// `ν₁…ν₄` and `ν̂₁ = ν₃ − ν₁`, `ν̂₂ = ν₂ + ν₃ − ν₄` at one point of the circle.
///
/// A value is `None` where its logarithm has a nonpositive argument; the
/// arguments are only guaranteed positive on parts of the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuValues {
    pub k: C64,
    pub nu: [Option<f64>; 4],
    pub hat: [Option<f64>; 2],
}

/// `−ln(z)/(2π)` for a positive `z`.
fn neg_log(z: C64) -> Option<f64> {
    (z.re > 0.0 && z.im.abs() <= 1e-8 * (1.0 + z.norm())).then(|| -z.re.ln() / (2.0 * PI))
}

fn log_arguments(src: &dyn ReflectionSource, k: C64) -> Result<[C64; 4]> {
    let (w, w2) = (omega_pow(1), omega_pow(2));
    let one_plus = |z: C64| -> Result<C64> { Ok(1.0 + r1(src, z)? * r2(src, z)?) };
    Ok([
        one_plus(w * k)?,
        one_plus(w2 * k)?,
        f_function(src, w * k)?,
        f_function(src, w2 * k)?,
    ])
}

/// Evaluates the `ν` functions at `k ∈ ∂𝔻`.
pub fn nu_functions(src: &dyn ReflectionSource, k: C64) -> Result<NuValues> {
    let nu = log_arguments(src, k)?.map(neg_log);
    let hat1 = nu[2].zip(nu[0]).map(|(a, b)| a - b);
    let hat2 = match (nu[1], nu[2], nu[3]) {
        (Some(a), Some(b), Some(c)) => Some(a + b - c),
        _ => None,
    };
    Ok(NuValues {
        k,
        nu,
        hat: [hat1, hat2],
    })
}

/// `ν̂₁(k)` (`which = 1`) or `ν̂₂(k)` (`which = 2`), failing where a logarithm
/// argument is not positive.
pub fn nu_hat(src: &dyn ReflectionSource, which: usize, k: C64) -> Result<f64> {
    let args = log_arguments(src, k)?;
    let needed: &[usize] = match which {
        1 => &[0, 2],
        2 => &[1, 2, 3],
        _ => return Err(Error::InvalidInput(format!("no nu-hat with index {which}"))),
    };
    let names = ["1 + r1 r2 at ωk", "1 + r1 r2 at ω²k", "f(ωk)", "f(ω²k)"];
    let mut v = [0.0; 4];
    for &j in needed {
        v[j] = neg_log(args[j]).ok_or_else(|| Error::InequalityViolated {
            k,
            what: format!("{} = {} is not positive", names[j], args[j]),
        })?;
    }
    Ok(if which == 1 {
        v[2] - v[0]
    } else {
        v[1] + v[2] - v[3]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::spectral::{dist_to_qhat, segment_of};

    fn samples() -> Vec<(C64, Segment)> {
        let mut out = Vec::new();
        for deg in (0..360).step_by(7) {
            for r in [0.37, 1.0, 2.9] {
                let k = C64::from_polar(r, (deg as f64 + 0.5).to_radians());
                if let (Some(s), true) = (segment_of(k, 1e-9), dist_to_qhat(k) > 0.02) {
                    out.push((k, s));
                }
            }
        }
        for deg in [30.0, 90.0, 150.0, 210.0, 270.0, 330.0_f64] {
            for r in [0.21, 0.64, 1.7, 4.2] {
                let k = C64::from_polar(r, deg.to_radians());
                out.push((k, segment_of(k, 1e-9).unwrap()));
            }
        }
        out
    }

    #[test]
    fn zero_data_gives_identity() {
        for (k, s) in samples() {
            let v = build_v(&ZeroReflection, 0.3, 0.2, k, s).unwrap();
            assert!(max_abs(&(v - M3::identity())) < 1e-15, "{s:?} at {k}");
        }
        let nu = nu_functions(&ZeroReflection, C64::from_polar(1.0, 0.3)).unwrap();
        assert!(nu.nu.iter().chain(&nu.hat).all(|v| *v == Some(0.0)));
    }

    #[test]
    fn unit_determinant_and_r_symmetry() {
        let src = BoxPotential::new(-1.0, 1.5, 0.4).unwrap();
        let (x, t) = (0.4, 0.3);
        for (k, s) in samples() {
            let v = build_v(&src, x, t, k, s).unwrap();
            assert!((v.determinant() - 1.0).norm() < 1e-10, "{s:?} at {k}");
            if s.is_arc() {
                let vb =
                    build_v(&src, x, t, k.conj(), segment_of(k.conj(), 1e-9).unwrap()).unwrap();
                let res = r_symmetry_residual(&v, &vb, k).unwrap();
                assert!(res < 1e-9 * (1.0 + max_abs(&v)), "{s:?} at {k}");
            }
        }
    }

    #[test]
    fn cyclic_consistency() {
        use crate::spectral::A_CAL;
        let src = BoxPotential::new(-1.0, 1.5, 0.4).unwrap();
        let (x, t) = (-0.7, 0.1);
        let ainv = A_CAL.try_inverse().unwrap();
        for (k, s) in samples() {
            let wk = omega_pow(1) * k;
            let v = build_v(&src, x, t, k, s).unwrap();
            let vw = build_v(&src, x, t, wk, segment_of(wk, 1e-9).unwrap()).unwrap();
            let d = max_abs(&(v - A_CAL * vw * ainv));
            assert!(d < 1e-10 * (1.0 + max_abs(&v)), "{s:?} at {k}: {d}");
        }
    }

    #[test]
    fn nu_inequalities_for_box_data() {
        let src = BoxPotential::new(-1.0, 1.5, 0.4).unwrap();
        let n = 2048;
        let (mut min_f, mut max_f_arcs) = (f64::INFINITY, f64::NEG_INFINITY);
        for m in 0..n {
            let a = 2.0 * PI * (m as f64 + 0.5) / n as f64;
            let k = C64::from_polar(1.0, a);
            if dist_to_qhat(k) < 1e-3 {
                continue;
            }
            let f = f_function(&src, k).unwrap();
            assert!(f.im.abs() < 1e-8, "Im f = {} at {k}", f.im);
            min_f = min_f.min(f.re);
            let deg = a.to_degrees();
            if (120.0..180.0).contains(&deg) || (300.0..360.0).contains(&deg) {
                max_f_arcs = max_f_arcs.max(f.re);
            }
            if (300.0..360.0).contains(&deg) {
                assert!(nu_hat(&src, 1, k).unwrap() >= -1e-8, "nu1 hat at {k}");
            }
            if (180.0..240.0).contains(&deg) {
                assert!(nu_hat(&src, 2, k).unwrap() >= -1e-8, "nu2 hat at {k}");
            }
        }
        assert!(min_f >= -1e-8, "min f = {min_f}");
        assert!(max_f_arcs <= 1.0 + 1e-8, "max f = {max_f_arcs}");
    }

    #[test]
    fn near_r2_pole_rejected() {
        let k = omega_pow(2) * C64::from_polar(1.0, 1e-4);
        assert!(matches!(
            f_function(&ZeroReflection, k),
            Err(Error::NearR2Pole { .. })
        ));
    }
}
