//! Residuals of the algebraic identities satisfied by the reflection coefficients.

use crate::direct::ReflectionSource;
use crate::spectral::{omega_pow, rtilde};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

fn check_unit(k: C64) -> Result<()> {
    if (k.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::domain(
            k,
            "the circle relations hold on |k| = 1 only",
        ));
    }
    Ok(())
}

/// `r1(1/(ωk)) + r2(ωk) + r1(ω²k) r2(1/k)` for `|k| = 1`.
pub fn circle_relation_residual(src: &dyn ReflectionSource, k: C64) -> Result<C64> {
    check_unit(k)?;
    let (w, w2) = (omega_pow(1), omega_pow(2));
    Ok(src.r1((w * k).inv())? + src.r2(w * k)? + src.r1(w2 * k)? * src.r2(k.inv())?)
}

/// `r2(k)` reconstructed from `r1` alone on `|k| = 1`.
pub fn r2_from_r1(src: &dyn ReflectionSource, k: C64) -> Result<C64> {
    check_unit(k)?;
    let (w, w2) = (omega_pow(1), omega_pow(2));
    let den = 1.0 - src.r1(w * k)? * src.r1((w * k).inv())?;
    if den.norm() < 1e-12 {
        return Err(Error::domain(k, "vanishing denominator in r2 from r1"));
    }
    Ok((src.r1(w * k)? * src.r1(w2 * k)? - src.r1(k.inv())?) / den)
}

/// `r1(k)` reconstructed from `r2` alone on `|k| = 1`.
pub fn r1_from_r2(src: &dyn ReflectionSource, k: C64) -> Result<C64> {
    check_unit(k)?;
    let (w, w2) = (omega_pow(1), omega_pow(2));
    let den = 1.0 - src.r2(w * k)? * src.r2((w * k).inv())?;
    if den.norm() < 1e-12 {
        return Err(Error::domain(k, "vanishing denominator in r1 from r2"));
    }
    Ok((src.r2(w * k)? * src.r2(w2 * k)? - src.r2(k.inv())?) / den)
}

/// `r2(k) − r̃(k) conj(r1(1/k̄))`.
pub fn conjugation_residual(src: &dyn ReflectionSource, k: C64) -> Result<C64> {
    let r1 = src.r1(k.conj().inv())?;
    Ok(src.r2(k)? - rtilde(k)? * r1.conj())
}

/// Worst residuals of the identities over a set of points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub circle: f64,
    pub r2_from_r1: f64,
    pub r1_from_r2: f64,
    pub conjugation: f64,
    /// Largest `|r1|`, `|r2|` seen, for scale.
    pub scale: f64,
    pub points: usize,
    /// Points skipped because an argument fell in an excluded disc.
    pub skipped: usize,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.circle
            .max(self.r2_from_r1)
            .max(self.r1_from_r2)
            .max(self.conjugation)
    }
}

/// Evaluates all identities at the points `e^{iφ}`; points where an
/// argument is excluded from the sampled data are counted in `skipped`.
pub fn identity_report(src: &dyn ReflectionSource, phases: &[f64]) -> Result<IdentityReport> {
    let mut rep = IdentityReport::default();
    for &phi in phases {
        let k = C64::from_polar(1.0, phi);
        let eval = || -> Result<[f64; 5]> {
            let scale = src.r1(k)?.norm().max(src.r2(k)?.norm());
            Ok([
                circle_relation_residual(src, k)?.norm(),
                (r2_from_r1(src, k)? - src.r2(k)?).norm(),
                (r1_from_r2(src, k)? - src.r1(k)?).norm(),
                conjugation_residual(src, k)?.norm(),
                scale,
            ])
        };
        match eval() {
            Ok([c, a, b, j, s]) => {
                rep.circle = rep.circle.max(c);
                rep.r2_from_r1 = rep.r2_from_r1.max(a);
                rep.r1_from_r2 = rep.r1_from_r2.max(b);
                rep.conjugation = rep.conjugation.max(j);
                rep.scale = rep.scale.max(s);
                rep.points += 1;
            }
            Err(Error::NearR2Pole { .. } | Error::Domain { .. }) => rep.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::{
        reflection_coefficients, ContourResolution, DirectReflection, SolverConfig,
    };
    use crate::jump::BoxPotential;
    use crate::InitialData;

    fn phases(n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| 0.1 + 2.0 * std::f64::consts::PI * j as f64 / n as f64)
            .collect()
    }

    #[test]
    fn gaussian_identities_direct() {
        let data = InitialData::gaussian();
        let cfg = SolverConfig::default();
        let src = DirectReflection {
            data: &data,
            cfg: &cfg,
        };
        let rep = identity_report(&src, &phases(12)).unwrap();
        assert!(rep.points >= 10, "{rep:?}");
        assert!(rep.scale > 1e-3, "{rep:?}");
        assert!(rep.max() < 1e-6, "{rep:?}");
    }

    #[test]
    fn gaussian_identities_sampled() {
        let data = InitialData::gaussian();
        let sd = reflection_coefficients(
            &data,
            &ContourResolution::default(),
            &SolverConfig::default(),
        )
        .unwrap();
        let rep = identity_report(&sd, &phases(360)).unwrap();
        assert!(rep.points >= 340, "{rep:?}");
        assert!(rep.max() < 1e-6, "{rep:?}");
    }

    #[test]
    fn box_potential_satisfies_identities() {
        let b = BoxPotential::new(-0.5, 0.5, 0.3).unwrap();
        let rep = identity_report(&b, &phases(30)).unwrap();
        assert!(rep.max() < 1e-10 * (1.0 + rep.scale), "{rep:?}");
    }

    #[test]
    fn perturbed_r2_breaks_identities() {
        struct Perturbed<'a>(&'a BoxPotential);
        impl ReflectionSource for Perturbed<'_> {
            fn r1(&self, k: C64) -> Result<C64> {
                self.0.r1(k)
            }
            fn r2(&self, k: C64) -> Result<C64> {
                Ok(self.0.r2(k)? * 1.01)
            }
        }
        let b = BoxPotential::new(-0.5, 0.5, 0.3).unwrap();
        let rep = identity_report(&Perturbed(&b), &phases(30)).unwrap();
        assert!(rep.circle > 1e-4 && rep.conjugation > 1e-4, "{rep:?}");
    }

    #[test]
    fn off_circle_is_rejected() {
        let b = BoxPotential::new(-0.5, 0.5, 0.3).unwrap();
        assert!(circle_relation_residual(&b, C64::new(0.5, 0.0)).is_err());
    }
}
