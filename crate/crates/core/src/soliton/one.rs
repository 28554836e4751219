use super::{FieldSource, Grid, Regularity, SolutionField};
use crate::spectral::{omega_pow, SQRT3};
use crate::{Error, Result, C64};
use std::collections::BTreeMap;

/// Tolerance on `|Im q| / max(1, |q|)` for the positivity combination `q`.
const REAL_TOL: f64 = 1e-10;

fn check_real_pole(k0: f64) -> Result<()> {
    if (k0 > 1.0 || (-1.0 < k0 && k0 < 0.0)) && k0.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            C64::from(k0),
            "real poles must lie in (-1,0) or (1,inf)",
        ))
    }
}

/// `q = i(ω²k0² − ω)c`.
fn positivity(k0: f64, c: C64) -> C64 {
    C64::i() * (omega_pow(2) * k0 * k0 - omega_pow(1)) * c
}

/// Classifies the one-soliton generated by a real pole `k0` with constant `c`.
pub fn classify_one_soliton(k0: f64, c: C64) -> Result<Regularity> {
    check_real_pole(k0)?;
    if c == C64::new(0.0, 0.0) {
        return Ok(Regularity::Zero);
    }
    let q = positivity(k0, c);
    if q.im.abs() > REAL_TOL * q.norm().max(1.0) {
        return Err(Error::NonReal { value: q });
    }
    Ok(if q.re >= 0.0 {
        Regularity::Regular
    } else {
        Regularity::Singular
    })
}

/// Residue constant with `f_{k0} = f`; depends on `f` only through `f²`.
pub fn residue_from_f(k0: f64, f: f64) -> Result<C64> {
    check_real_pole(k0)?;
    let q = SQRT3 * k0 * (k0 * k0 - 1.0) * f * f;
    Ok(C64::from(q) / (C64::i() * (omega_pow(2) * k0 * k0 - omega_pow(1))))
}

/// Residue constant of the one-soliton centred at `x0` at `t = 0`.
pub fn residue_for_shift(k0: f64, x0: f64) -> Result<C64> {
    check_real_pole(k0)?;
    let beta = (k0 - 1.0 / k0) / 4.0;
    residue_from_f(k0, (beta * x0).exp())
}

/// Closed-form parameters of a regular one-soliton `u = A sech²(β(x − x0 − ct))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSoliton {
    pub k0: f64,
    pub amplitude: f64,
    pub speed: f64,
    /// `β = (k0 − 1/k0)/4`; `|β| = √(A/6)`.
    pub beta: f64,
    pub x0: f64,
}

impl OneSoliton {
    /// Parameters for `(k0, c)`; `None` for `c = 0`.
    pub fn new(k0: f64, c: C64) -> Result<Option<Self>> {
        match classify_one_soliton(k0, c)? {
            Regularity::Zero => return Ok(None),
            Regularity::Singular => {
                return Err(Error::SingularSoliton {
                    value: positivity(k0, c).re,
                })
            }
            Regularity::Regular => {}
        }
        let f2 = positivity(k0, c).re / (SQRT3 * k0 * (k0 * k0 - 1.0));
        if f2 <= 0.0 {
            return Ok(None);
        }
        let beta = (k0 - 1.0 / k0) / 4.0;
        let d = k0 - 1.0 / k0;
        Ok(Some(Self {
            k0,
            amplitude: 0.375 * d * d,
            speed: 0.5 * (k0 + 1.0 / k0),
            beta,
            x0: 0.5 * f2.ln() / beta,
        }))
    }

    /// `u(x, t)`, evaluated as `4A e^{−2|z|}/(1 + e^{−2|z|})²`.
    pub fn u(&self, x: f64, t: f64) -> f64 {
        let z = self.beta * (x - self.x0 - self.speed * t);
        let e = (-2.0 * z.abs()).exp();
        4.0 * self.amplitude * e / ((1.0 + e) * (1.0 + e))
    }

    /// `v = −c u` for the travelling wave.
    pub fn v(&self, x: f64, t: f64) -> f64 {
        -self.speed * self.u(x, t)
    }
}

/// Samples the one-soliton with pole `k0` and residue constant `c`.
pub fn one_soliton(k0: f64, c: C64, grid: Grid) -> Result<SolutionField> {
    let Some(s) = OneSoliton::new(k0, c)? else {
        return Ok(SolutionField {
            source: FieldSource::OneSoliton,
            ..SolutionField::zero(grid)
        });
    };
    let mut u = Vec::with_capacity(grid.len());
    let mut v = Vec::with_capacity(grid.len());
    for j in 0..grid.nt {
        for i in 0..grid.nx {
            let (x, t) = (grid.x(i), grid.t(j));
            u.push(s.u(x, t));
            v.push(s.v(x, t));
        }
    }
    let metadata = BTreeMap::from([
        ("k0".to_string(), k0),
        ("amplitude".to_string(), s.amplitude),
        ("speed".to_string(), s.speed),
        ("x0".to_string(), s.x0),
    ]);
    Ok(SolutionField {
        grid,
        u,
        v: Some(v),
        n3: None,
        max_imag: 0.0,
        source: FieldSource::OneSoliton,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_and_speed_at_two() {
        let c = residue_for_shift(2.0, 0.0).unwrap();
        let s = OneSoliton::new(2.0, c).unwrap().unwrap();
        assert!((s.amplitude - 27.0 / 32.0).abs() < 1e-15);
        assert!((s.speed - 1.25).abs() < 1e-15);
        assert!(s.x0.abs() < 1e-12);
        assert!((s.u(0.0, 0.0) - 27.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn classification() {
        let q = |k0: f64, val: f64| C64::from(val) / positivity(k0, C64::new(1.0, 0.0));
        assert_eq!(
            classify_one_soliton(2.0, q(2.0, 1.0)).unwrap(),
            Regularity::Regular
        );
        assert_eq!(
            classify_one_soliton(2.0, q(2.0, -1.0)).unwrap(),
            Regularity::Singular
        );
        assert_eq!(
            classify_one_soliton(2.0, C64::new(0.0, 0.0)).unwrap(),
            Regularity::Zero
        );
        assert!(matches!(
            classify_one_soliton(2.0, q(2.0, 1.0) * C64::i()),
            Err(Error::NonReal { .. })
        ));
        assert!(classify_one_soliton(0.5, C64::new(1.0, 0.0)).is_err());
        assert!(matches!(
            one_soliton(2.0, q(2.0, -1.0), Grid::default()),
            Err(Error::SingularSoliton { .. })
        ));
    }

    #[test]
    fn speeds_by_branch() {
        for (k0, right) in [(3.0, true), (-0.5, false)] {
            let c = residue_for_shift(k0, 1.0).unwrap();
            let s = OneSoliton::new(k0, c).unwrap().unwrap();
            assert!((s.x0 - 1.0).abs() < 1e-12);
            assert_eq!(s.speed > 1.0, right);
            assert_eq!(s.speed < -1.0, !right);
        }
    }

    #[test]
    fn travelling_wave() {
        let c = residue_for_shift(2.0, -3.0).unwrap();
        let s = OneSoliton::new(2.0, c).unwrap().unwrap();
        let d = 0.5;
        for x in [-7.0, -1.0, 0.3, 4.0] {
            assert!((s.u(x, 1.0) - s.u(x - s.speed * d, 1.0 - d)).abs() < 1e-10);
        }
    }

    #[test]
    fn sign_of_f_is_irrelevant() {
        let g = Grid::new((-10.0, 10.0, 201), (0.0, 0.5, 2)).unwrap();
        let a = one_soliton(2.0, residue_from_f(2.0, 0.7).unwrap(), g).unwrap();
        let b = one_soliton(2.0, residue_from_f(2.0, -0.7).unwrap(), g).unwrap();
        assert_eq!(a.u, b.u);
    }

    #[test]
    fn zero_constant_gives_zero_field() {
        let f = one_soliton(2.0, C64::new(0.0, 0.0), Grid::default()).unwrap();
        assert!(f.u.iter().all(|&u| u == 0.0));
    }
}
