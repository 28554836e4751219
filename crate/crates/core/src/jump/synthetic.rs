use crate::direct::{InitialData, ReflectionSource};
use crate::linalg::expm3;
use crate::spectral::{build_lax, LaxInputs};
use crate::{Error, Result, C64, M3};

/// Reflection coefficients that vanish identically.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroReflection;

impl ReflectionSource for ZeroReflection {
    fn r1(&self, _k: C64) -> Result<C64> {
        Ok(C64::new(0.0, 0.0))
    }

    fn r2(&self, _k: C64) -> Result<C64> {
        Ok(C64::new(0.0, 0.0))
    }
}

/// Data `u0 = 0`, `v0 = height` on `[a, b]` and zero elsewhere.
///
/// The potential is constant on the support, so the scattering matrix is a
/// product of three matrix exponentials and every symmetry of the spectral
/// functions holds to rounding error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxPotential {
    pub a: f64,
    pub b: f64,
    pub height: f64,
}

/// Largest `(b − a) max |Re l_j|` accepted before cancellation spoils the product.
const MAX_EXPONENT: f64 = 30.0;

impl BoxPotential {
    pub fn new(a: f64, b: f64, height: f64) -> Result<Self> {
        if !(b > a && a.is_finite() && b.is_finite() && height.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "invalid box [{a}, {b}] of height {height}"
            )));
        }
        Ok(Self { a, b, height })
    }

    /// `s(k) = e^{−a𝓛} e^{(a−b)(𝓛+U)} e^{b𝓛}` and `s^A(k) = (s(k)⁻¹)ᵀ`.
    pub fn scattering(&self, k: C64) -> Result<(M3, M3)> {
        let lax = build_lax(
            k,
            LaxInputs {
                v: self.height,
                ..LaxInputs::default()
            },
        )?;
        let inner = (lax.cal_l + lax.u) * C64::from(self.a - self.b);
        let growth = lax
            .cal_l
            .diagonal()
            .iter()
            .map(|l| l.re.abs())
            .fold(0.0, f64::max);
        if growth * (self.b - self.a) > MAX_EXPONENT {
            return Err(Error::domain(
                k,
                "|k| too large for the closed-form box scattering matrix",
            ));
        }
        let diag = |x: f64| M3::from_diagonal(&lax.cal_l.diagonal().map(|l| (l * x).exp()));
        let s = diag(-self.a) * expm3(&inner) * diag(self.b);
        let sa = s
            .try_inverse()
            .ok_or(Error::NearSingular {
                cond: f64::INFINITY,
            })?
            .transpose();
        Ok((s, sa))
    }

    /// The box sampled on `[−lx, lx]`, with half height at the edge nodes.
    pub fn initial_data(&self, lx: f64, hx: f64) -> Result<InitialData> {
        let (a, b, h) = (self.a, self.b, self.height);
        let tol = 1e-9 * hx;
        InitialData::from_fn(
            lx,
            hx,
            |_| 0.0,
            |x| {
                if (x - a).abs() < tol || (x - b).abs() < tol {
                    0.5 * h
                } else if a < x && x < b {
                    h
                } else {
                    0.0
                }
            },
        )
    }
}

impl ReflectionSource for BoxPotential {
    fn r1(&self, k: C64) -> Result<C64> {
        let (s, _) = self.scattering(k)?;
        if s[(0, 0)].norm() < 1e-10 {
            return Err(Error::ZeroOnContour { k });
        }
        Ok(s[(0, 1)] / s[(0, 0)])
    }

    fn r2(&self, k: C64) -> Result<C64> {
        let (_, sa) = self.scattering(k)?;
        if sa[(0, 0)].norm() < 1e-10 {
            return Err(Error::ZeroOnContour { k });
        }
        Ok(sa[(0, 1)] / sa[(0, 0)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::{scattering_matrices, SolverConfig};
    use crate::linalg::max_abs;

    #[test]
    fn matches_volterra_solver() {
        let bx = BoxPotential::new(-1.0, 1.5, 0.4).unwrap();
        let data = bx.initial_data(4.0, 0.005).unwrap();
        for k in [
            C64::from_polar(1.0, 0.3),
            C64::from_polar(1.0, 2.0),
            C64::new(0.0, 0.6),
            C64::new(0.0, -3.0),
        ] {
            let (s, sa) = bx.scattering(k).unwrap();
            assert!((s.determinant() - 1.0).norm() < 1e-12);
            let m = scattering_matrices(&data, k, &SolverConfig::compact()).unwrap();
            let (ns, nsa) = (m.s_matrix().unwrap(), m.sa_matrix().unwrap());
            assert!(
                max_abs(&(ns - s)) < 1e-4,
                "s at {k}: {}",
                max_abs(&(ns - s))
            );
            assert!(
                max_abs(&(nsa - sa)) < 1e-4,
                "sA at {k}: {}",
                max_abs(&(nsa - sa))
            );
        }
    }
}
