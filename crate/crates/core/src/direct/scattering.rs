use super::contour::{ContourResolution, SampledFunction};
use super::volterra::{column_impl, solve_volterra, Eigenfunction, EigenfunctionField};
use super::{defaults, InitialData, SolverConfig};
use crate::spectral::eval_theta;
use crate::{Error, Result, C64, M3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `s(k)` and `s^A(k)`; entries outside their domain of definition are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub k: C64,
    pub s: [[Option<C64>; 3]; 3],
    pub sa: [[Option<C64>; 3]; 3],
}

fn entry(m: &[[Option<C64>; 3]; 3], i: usize, j: usize, k: C64) -> Result<C64> {
    m[i - 1][j - 1].ok_or(Error::Undefined { i, j, k })
}

fn full(m: &[[Option<C64>; 3]; 3]) -> Option<M3> {
    let mut out = M3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = m[i][j]?;
        }
    }
    Some(out)
}

impl ScatteringMatrix {
    /// `s_ij` (1-based).
    pub fn s(&self, i: usize, j: usize) -> Result<C64> {
        entry(&self.s, i, j, self.k)
    }

    /// `s^A_ij` (1-based).
    pub fn sa(&self, i: usize, j: usize) -> Result<C64> {
        entry(&self.sa, i, j, self.k)
    }

    /// `s` as a matrix when every entry is defined.
    pub fn s_matrix(&self) -> Option<M3> {
        full(&self.s)
    }

    pub fn sa_matrix(&self) -> Option<M3> {
        full(&self.sa)
    }
}

fn scattering_columns(
    data: &InitialData,
    k: C64,
    which: Eigenfunction,
    columns: &[usize],
    cfg: &SolverConfig,
) -> Result<[[Option<C64>; 3]; 3]> {
    let mut m = [[None; 3]; 3];
    for &j in columns {
        match column_impl(data, k, which, j, cfg, false) {
            Ok(col) => {
                for (row, value) in m.iter_mut().zip(col.scattering) {
                    row[j - 1] = value;
                }
            }
            Err(Error::Undefined { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(m)
}

/// Computes every defined entry of `s(k)` and `s^A(k)`.
pub fn scattering_matrices(
    data: &InitialData,
    k: C64,
    cfg: &SolverConfig,
) -> Result<ScatteringMatrix> {
    Ok(ScatteringMatrix {
        k,
        s: scattering_columns(data, k, Eigenfunction::X, &[1, 2, 3], cfg)?,
        sa: scattering_columns(data, k, Eigenfunction::XA, &[1, 2, 3], cfg)?,
    })
}

/// `s_11(k)`, computed from the first column of `X` only.
pub fn s11(data: &InitialData, k: C64, cfg: &SolverConfig) -> Result<C64> {
    let m = scattering_columns(data, k, Eigenfunction::X, &[1], cfg)?;
    entry(&m, 1, 1, k)
}

fn s_entry(
    data: &InitialData,
    k: C64,
    i: usize,
    j: usize,
    adjoint: bool,
    cfg: &SolverConfig,
) -> Result<C64> {
    let which = if adjoint {
        Eigenfunction::XA
    } else {
        Eigenfunction::X
    };
    let m = scattering_columns(data, k, which, &[j], cfg)?;
    entry(&m, i, j, k)
}

/// `d/dk` of `s_ij` (or `s^A_ij`) by central differences with one Richardson step.
pub fn s_derivative(
    data: &InitialData,
    k: C64,
    (i, j): (usize, usize),
    adjoint: bool,
    cfg: &SolverConfig,
) -> Result<C64> {
    let f = |z: C64| s_entry(data, z, i, j, adjoint, cfg);
    analytic_derivative(f, k, defaults::DERIVATIVE_STEP)
}

pub(crate) fn analytic_derivative(f: impl Fn(C64) -> Result<C64>, k: C64, h: f64) -> Result<C64> {
    let d = |h: f64| -> Result<C64> { Ok((f(k + h)? - f(k - h)?) / (2.0 * h)) };
    let coarse = d(h)?;
    let fine = d(h / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// All four eigenfunctions at one `k` with the scattering matrices.
#[derive(Debug, Clone)]
pub struct EigenfunctionBundle {
    pub k: C64,
    /// Grid abscissae of the stored nodes.
    pub xs: Vec<f64>,
    pub x: EigenfunctionField,
    pub y: EigenfunctionField,
    pub xa: EigenfunctionField,
    pub ya: EigenfunctionField,
    pub scattering: ScatteringMatrix,
}

impl EigenfunctionBundle {
    /// `det X` at stored node `n`, if all columns are defined.
    pub fn det_x(&self, n: usize) -> Option<C64> {
        det_field(&self.x, n)
    }

    pub fn det_y(&self, n: usize) -> Option<C64> {
        det_field(&self.y, n)
    }
}

fn det_field(f: &EigenfunctionField, n: usize) -> Option<C64> {
    let mut m = M3::zeros();
    for j in 0..3 {
        m.set_column(j, &f.columns[j].as_ref()?[n]);
    }
    Some(m.determinant())
}

pub fn eigenfunction_bundle(
    data: &InitialData,
    k: C64,
    cfg: &SolverConfig,
) -> Result<EigenfunctionBundle> {
    let x = solve_volterra(data, k, Eigenfunction::X, cfg)?;
    let y = solve_volterra(data, k, Eigenfunction::Y, cfg)?;
    let xa = solve_volterra(data, k, Eigenfunction::XA, cfg)?;
    let ya = solve_volterra(data, k, Eigenfunction::YA, cfg)?;
    let scattering = scattering_matrices(data, k, cfg)?;
    let xs = (0..data.len())
        .step_by(x.stride)
        .map(|n| data.x(n))
        .collect();
    Ok(EigenfunctionBundle {
        k,
        xs,
        x,
        y,
        xa,
        ya,
        scattering,
    })
}

/// Anything that can evaluate `r1` on `Γ̂₁` and `r2` on `Γ̂₄`.
pub trait ReflectionSource: Sync {
    fn r1(&self, k: C64) -> Result<C64>;
    fn r2(&self, k: C64) -> Result<C64>;
}

/// A zero of `s_11` with its residue constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub k0: C64,
    pub c: C64,
}

impl Pole {
    /// `d = (k̄0² − 1)/(ω²(ω² − k̄0²)) c̄`, the partner constant of a complex pole.
    pub fn d(&self) -> Option<C64> {
        if self.k0.im == 0.0 {
            return None;
        }
        Some(d_constant(self.k0, self.c))
    }
}

pub(crate) fn d_constant(k0: C64, c: C64) -> C64 {
    let w2 = crate::spectral::omega_pow(2);
    let kb = k0.conj();
    (kb * kb - 1.0) / (w2 * (w2 - kb * kb)) * c.conj()
}

/// Reflection coefficients, poles and residue constants at time `t`.
#[derive(Debug, Clone)]
pub struct ScatteringData {
    pub r1: SampledFunction,
    pub r2: SampledFunction,
    pub poles: Vec<Pole>,
    pub t: f64,
}

impl ScatteringData {
    /// `d_{k0}` for every complex pole.
    pub fn d_constants(&self) -> Vec<(C64, C64)> {
        self.poles
            .iter()
            .filter_map(|p| p.d().map(|d| (p.k0, d)))
            .collect()
    }

    /// Largest `|r1|` over the samples on the rays of `Γ₁`.
    pub fn ray_floor_r1(&self) -> f64 {
        self.r1.max_abs_on_rays()
    }
}

impl ReflectionSource for ScatteringData {
    fn r1(&self, k: C64) -> Result<C64> {
        self.r1.eval(k)
    }

    fn r2(&self, k: C64) -> Result<C64> {
        self.r2.eval(k)
    }
}

/// Reflection coefficients evaluated by solving the Volterra equations at
/// every requested point, without interpolation.
#[derive(Debug, Clone, Copy)]
pub struct DirectReflection<'a> {
    pub data: &'a InitialData,
    pub cfg: &'a SolverConfig,
}

impl ReflectionSource for DirectReflection<'_> {
    fn r1(&self, k: C64) -> Result<C64> {
        r1_at(self.data, k, self.cfg)
    }

    fn r2(&self, k: C64) -> Result<C64> {
        r2_at(self.data, k, self.cfg)
    }
}

/// `r1(k) = s12/s11` computed directly at one point.
pub fn r1_at(data: &InitialData, k: C64, cfg: &SolverConfig) -> Result<C64> {
    let m = scattering_columns(data, k, Eigenfunction::X, &[1, 2], cfg)?;
    let s11 = entry(&m, 1, 1, k)?;
    if s11.norm() < 1e-10 {
        return Err(Error::ZeroOnContour { k });
    }
    Ok(entry(&m, 1, 2, k)? / s11)
}

/// `r2(k) = s^A12/s^A11` computed directly at one point.
pub fn r2_at(data: &InitialData, k: C64, cfg: &SolverConfig) -> Result<C64> {
    let m = scattering_columns(data, k, Eigenfunction::XA, &[1, 2], cfg)?;
    let s11 = entry(&m, 1, 1, k)?;
    if s11.norm() < 1e-10 {
        return Err(Error::ZeroOnContour { k });
    }
    Ok(entry(&m, 1, 2, k)? / s11)
}

/// Limit of `r1` (or `r2`) at a point `κ` of the unit circle, from the
/// symmetric average at `κ e^{±iδ}` with one Richardson step in `δ`.
pub fn reflection_limit(
    data: &InitialData,
    kappa: C64,
    second: bool,
    cfg: &SolverConfig,
) -> Result<C64> {
    let f = |k: C64| {
        if second {
            r2_at(data, k, cfg)
        } else {
            r1_at(data, k, cfg)
        }
    };
    let avg = |d: f64| -> Result<C64> {
        let a = C64::from_polar(1.0, d);
        Ok((f(kappa * a)? + f(kappa * a.conj())?) * 0.5)
    };
    let delta = 0.05;
    Ok((avg(delta / 2.0)? * 4.0 - avg(delta)?) / 3.0)
}

/// Samples `r1` on `Γ̂₁` and `r2` on `Γ̂₄` (poles are left empty).
pub fn reflection_coefficients(
    data: &InitialData,
    res: &ContourResolution,
    cfg: &SolverConfig,
) -> Result<ScatteringData> {
    let mut r1 = super::contour::gamma1_samples(res);
    let mut r2 = super::contour::gamma4_samples(res);
    r1.fill(|k| r1_at(data, k, cfg))?;
    r2.fill(|k| r2_at(data, k, cfg))?;
    Ok(ScatteringData {
        r1,
        r2,
        poles: Vec::new(),
        t: 0.0,
    })
}

/// `e^{-θ21(0, t, k)}`.
pub(crate) fn r1_time_factor(t: f64, k: C64) -> Result<C64> {
    Ok((-eval_theta(2, 1, 0.0, t, k)?).exp())
}

pub(crate) fn par_map<T: Send>(
    points: &[C64],
    f: impl Fn(C64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    points.par_iter().map(|&k| f(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::EntryPolicy;

    fn gauss_small() -> InitialData {
        InitialData::from_fn(12.0, 0.02, |x| (-x * x).exp(), |x| 0.3 * x * (-x * x).exp()).unwrap()
    }

    #[test]
    fn zero_data_identity() {
        let d = InitialData::zero();
        let m = scattering_matrices(&d, C64::new(0.3, 0.8), &SolverConfig::compact()).unwrap();
        let s = m.s_matrix().unwrap();
        assert!(crate::linalg::max_abs(&(s - M3::identity())) < 1e-15);
    }

    #[test]
    fn det_s_is_one_on_circle() {
        let d = gauss_small();
        for phi in [0.4_f64, 1.3, 2.5, -0.7] {
            let k = C64::from_polar(1.0, phi);
            let m = scattering_matrices(&d, k, &SolverConfig::default()).unwrap();
            let det = m.s_matrix().unwrap().determinant();
            assert!((det - 1.0).norm() < 1e-6, "phi = {phi}, det = {det}");
            let det_a = m.sa_matrix().unwrap().determinant();
            assert!((det_a - 1.0).norm() < 1e-6);
        }
    }

    #[test]
    fn domain_only_marks_growing_entries() {
        let d = gauss_small();
        let k = C64::new(2.0, 0.0);
        let m = scattering_matrices(&d, k, &SolverConfig::default()).unwrap();
        assert!(m.s(1, 1).is_ok());
        assert!(matches!(m.s(1, 2), Err(Error::Undefined { .. })));
        let cfg = SolverConfig {
            policy: EntryPolicy::CompactSupport,
            ..SolverConfig::default()
        };
        let m = scattering_matrices(&d, k, &cfg).unwrap();
        assert!(m.s(1, 2).is_ok());
    }

    #[test]
    fn derivative_of_analytic_function() {
        let f = |z: C64| Ok(z.exp() * z);
        let k = C64::new(0.3, 0.2);
        let d = analytic_derivative(f, k, 1e-3).unwrap();
        assert!((d - k.exp() * (k + 1.0)).norm() < 1e-9);
    }
}
