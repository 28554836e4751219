//! Residue constants `c_{k0}` from the proportionality of eigenfunction columns.

use super::scattering::{s_derivative, scattering_matrices};
use super::volterra::{solve_column, Eigenfunction};
use super::{defaults, EntryPolicy, InitialData, SolverConfig};
use crate::spectral::eval_l;
use crate::{Error, Result, C64, V3};

/// Relative distance from the real axis below which a zero counts as real.
const REAL_SNAP: f64 = 1e-8;

/// Result of the weighted least-squares fit `a(x) ≈ c b(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueFit {
    pub k0: C64,
    pub c: C64,
    /// Weighted relative residual of the fit.
    pub residual: f64,
    pub points: usize,
    /// `ṡ11(k0)` for complex poles, `ṡ^A22(k0)` for real ones.
    pub derivative: C64,
}

fn fit(
    k0: C64,
    xs: &[f64],
    a: &[V3],
    b: &[V3],
    weight: &[f64],
    derivative: C64,
) -> Result<ResidueFit> {
    let (mut num, mut den) = (C64::new(0.0, 0.0), 0.0);
    for n in 0..xs.len() {
        num += b[n].conjugate().dot(&a[n]) * weight[n];
        den += b[n].norm_squared() * weight[n];
    }
    if den == 0.0 || xs.is_empty() {
        return Err(Error::LinearDependence {
            k0,
            residual: f64::INFINITY,
            tol: defaults::FIT_TOL,
        });
    }
    let c = num / den;
    let (mut err, mut size) = (0.0, 0.0);
    for n in 0..xs.len() {
        err += (a[n] - b[n] * c).norm_squared() * weight[n];
        size += a[n].norm_squared() * weight[n];
    }
    let residual = (err / size).sqrt();
    if !(residual <= defaults::FIT_TOL) {
        return Err(Error::LinearDependence {
            k0,
            residual,
            tol: defaults::FIT_TOL,
        });
    }
    Ok(ResidueFit {
        k0,
        c,
        residual,
        points: xs.len(),
        derivative,
    })
}

/// Fits `c_{k0}` at a simple zero `k0` of `s_11`.
///
/// Only grid nodes in the central half of the grid with `|X11| > 0.1`
/// enter the fit, weighted by `|X11|²`.
///
/// Zeros within `1e-8` of the real axis are snapped onto it.
#[allow(clippy::needless_range_loop)]
pub fn residue_constant(data: &InitialData, k0: C64, cfg: &SolverConfig) -> Result<ResidueFit> {
    let real = k0.im.abs() < REAL_SNAP * (1.0 + k0.norm());
    let k0 = if real { C64::from(k0.re) } else { k0 };
    let x1 = solve_column(data, k0, Eigenfunction::X, 1, cfg)?;
    let stride = x1.stride;
    let l1 = eval_l(1, k0)?;
    let (partner, other, derivative) = if real {
        let y2 = solve_column(data, k0, Eigenfunction::Y, 2, cfg)?;
        let ds = s_derivative(data, k0, (2, 2), true, cfg)?;
        (y2.values, eval_l(2, k0)?, ds)
    } else {
        let sa = scattering_matrices(data, k0, cfg)?;
        let sa22 = sa.sa(2, 2)?;
        if sa22.norm() <= 1e-8 {
            return Err(Error::DegenerateAdjoint { k0, value: sa22 });
        }
        let ya1 = solve_column(data, k0, Eigenfunction::YA, 1, cfg)?;
        let xa2 = solve_column(data, k0, Eigenfunction::XA, 2, cfg)?;
        let w: Vec<V3> = ya1
            .values
            .iter()
            .zip(&xa2.values)
            .map(|(y, x)| y.cross(x))
            .collect();
        let ds = s_derivative(data, k0, (1, 1), false, cfg)?;
        (w, eval_l(3, k0)?, ds)
    };
    let n_out = x1.values.len();
    let (lo, hi) = (n_out / 4, 3 * n_out / 4);
    let (mut xs, mut a, mut b, mut wt) = (vec![], vec![], vec![], vec![]);
    for m in lo..=hi.min(n_out - 1) {
        let x11 = x1.values[m][0].norm();
        if x11 <= 0.1 {
            continue;
        }
        let x = data.x(m * stride);
        xs.push(x);
        a.push(partner[m] / derivative);
        b.push(x1.values[m] * ((l1 - other) * x).exp());
        wt.push(x11 * x11);
    }
    fit(k0, &xs, &a, &b, &wt, derivative)
}

/// `c = −s12/ṡ11` (real `k0`) or `−s13/ṡ11` (complex `k0`), valid for data
/// treated as compactly supported on the grid.
pub fn residue_constant_compact(data: &InitialData, k0: C64) -> Result<C64> {
    let cfg = SolverConfig {
        policy: EntryPolicy::CompactSupport,
        ..SolverConfig::default()
    };
    let m = scattering_matrices(data, k0, &cfg)?;
    let j = if k0.im.abs() < REAL_SNAP * (1.0 + k0.norm()) {
        2
    } else {
        3
    };
    let ds = s_derivative(data, k0, (1, 1), false, &cfg)?;
    Ok(-m.s(1, j)? / ds)
}
