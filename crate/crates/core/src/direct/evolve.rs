use super::contour::ContourPiece;
use super::scattering::{r1_time_factor, Pole, ScatteringData};
use crate::spectral::eval_theta;
use crate::{Error, Result};

/// Advances scattering data by `dt ≥ 0` in time.
///
/// `r1 ↦ r1 e^{−θ21(0,dt,k)}`, `r2 ↦ r2 e^{θ21(0,dt,k)}`; residue constants
/// pick up `e^{−θ21(0,dt,k0)}` (real poles) or `e^{−θ31(0,dt,k0)}` (complex
/// poles). The pole set is unchanged.
pub fn evolve_scattering(sd: &ScatteringData, dt: f64) -> Result<ScatteringData> {
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "time step {dt} must be finite and nonnegative"
        )));
    }
    let mut out = sd.clone();
    if dt == 0.0 {
        return Ok(out);
    }
    out.r1.scale(|k| r1_time_factor(dt, k))?;
    out.r2.scale(|k| Ok(eval_theta(2, 1, 0.0, dt, k)?.exp()))?;
    out.poles = sd
        .poles
        .iter()
        .map(|p| {
            let theta = if p.k0.im == 0.0 {
                eval_theta(2, 1, 0.0, dt, p.k0)?
            } else {
                eval_theta(3, 1, 0.0, dt, p.k0)?
            };
            Ok(Pole {
                k0: p.k0,
                c: p.c * (-theta).exp(),
            })
        })
        .collect::<Result<_>>()?;
    out.t = sd.t + dt;
    Ok(out)
}

/// Default threshold below which `r1` counts as zero.
pub const T_FLOOR: f64 = 1e-12;

/// Estimates the existence time `T` from the decay of `r1(1/k)` as
/// `Γ₁ ∋ k → ∞`.
///
/// Uses the samples of `r1` on `[0, i]`, i.e. `r1(1/k)` for `k` on the outer
/// part of `Γ₁`: `T̂ = min 4(−ln|r1(k)|) |k|²`, clipped to `[0, ∞]`. Samples below the noise
/// floor [`T_FLOOR`] are ignored; if all are, the estimate is `+∞`.
pub fn estimate_t(sd: &ScatteringData) -> f64 {
    estimate_t_with_floor(sd, T_FLOOR)
}

/// [`estimate_t`] with a caller-chosen noise floor, e.g. the accuracy of
/// numerically computed `r1`.
pub fn estimate_t_with_floor(sd: &ScatteringData, floor: f64) -> f64 {
    let mut best = f64::INFINITY;
    for (p, v) in sd.r1.pieces.iter().zip(&sd.r1.values) {
        let ContourPiece::Ray { inner: true, .. } = p.piece else {
            continue;
        };
        for (k, r) in p.points.iter().zip(v) {
            let (kn, rn) = (k.norm(), r.norm());
            if rn <= floor {
                continue;
            }
            best = best.min(4.0 * (-rn.ln()) * kn * kn);
        }
    }
    best.max(0.0)
}
