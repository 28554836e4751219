//! Zeros of `s_11` by the argument principle.

use super::scattering::{analytic_derivative, s11};
use super::{defaults, InitialData, SolverConfig};
use crate::{Error, Result, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Axis-aligned search rectangle `[re.0, re.1] × [im.0, im.1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Rectangle {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Result<Self> {
        if !(re.0 < re.1 && im.0 < im.1) {
            return Err(Error::InvalidInput(format!(
                "empty rectangle {re:?} × {im:?}"
            )));
        }
        Ok(Self { re, im })
    }

    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.re.0, self.im.0),
            C64::new(self.re.1, self.im.0),
            C64::new(self.re.1, self.im.1),
            C64::new(self.re.0, self.im.1),
        ]
    }

    fn contains(&self, k: C64) -> bool {
        (self.re.0..=self.re.1).contains(&k.re) && (self.im.0..=self.im.1).contains(&k.im)
    }

    fn size(&self) -> f64 {
        (self.re.1 - self.re.0).max(self.im.1 - self.im.0)
    }

    fn halves(&self) -> [Rectangle; 2] {
        if self.re.1 - self.re.0 >= self.im.1 - self.im.0 {
            let m = 0.5 * (self.re.0 + self.re.1);
            [
                Rectangle {
                    re: (self.re.0, m),
                    im: self.im,
                },
                Rectangle {
                    re: (m, self.re.1),
                    im: self.im,
                },
            ]
        } else {
            let m = 0.5 * (self.im.0 + self.im.1);
            [
                Rectangle {
                    re: self.re,
                    im: (self.im.0, m),
                },
                Rectangle {
                    re: self.re,
                    im: (m, self.im.1),
                },
            ]
        }
    }

    /// Distance from the boundary to the nearest point of `Γ ∪ Q̂`.
    pub fn clearance(&self) -> f64 {
        let c = self.corners();
        let mut d = f64::INFINITY;
        for side in 0..4 {
            let (a, b) = (c[side], c[(side + 1) % 4]);
            for m in 0..=200 {
                let k = a + (b - a) * (m as f64 / 200.0);
                d = d
                    .min(crate::spectral::dist_to_gamma(k))
                    .min(crate::spectral::dist_to_qhat(k));
            }
        }
        d
    }
}

/// Options of the zero search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSearch {
    /// Gauss–Legendre nodes per rectangle side.
    pub quad_nodes: usize,
    pub max_poles: usize,
    pub newton_max_iter: usize,
    pub newton_tol: f64,
    pub min_clearance: f64,
}

impl Default for PoleSearch {
    fn default() -> Self {
        Self {
            quad_nodes: 24,
            max_poles: defaults::MAX_POLES,
            newton_max_iter: defaults::NEWTON_MAX_ITER,
            newton_tol: defaults::NEWTON_TOL,
            min_clearance: 0.05,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * z * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

struct Moments {
    count: C64,
    first: C64,
}

fn moments(
    f: &(dyn Fn(C64) -> Result<(C64, C64)> + Sync),
    rect: &Rectangle,
    nodes: usize,
) -> Result<Moments> {
    let (gx, gw) = gauss_legendre(nodes);
    let c = rect.corners();
    let mut pts = Vec::with_capacity(4 * nodes);
    for side in 0..4 {
        let (a, b) = (c[side], c[(side + 1) % 4]);
        let half = (b - a) * 0.5;
        for (x, w) in gx.iter().zip(&gw) {
            pts.push((a + half * (1.0 + x), half * *w));
        }
    }
    let vals: Vec<(C64, C64)> = pts
        .par_iter()
        .map(|&(k, dk)| {
            let (s, ds) = f(k)?;
            if s.norm() < 1e-14 {
                return Err(Error::ZeroOnContour { k });
            }
            let q = ds / s * dk;
            Ok((q, q * k))
        })
        .collect::<Result<_>>()?;
    let scale = C64::new(0.0, 2.0 * PI);
    let (n, m) = vals
        .iter()
        .fold((C64::new(0.0, 0.0), C64::new(0.0, 0.0)), |acc, v| {
            (acc.0 + v.0, acc.1 + v.1)
        });
    Ok(Moments {
        count: n / scale,
        first: m / scale,
    })
}

/// Counts zeros of an analytic function inside `rect` and refines each one.
///
/// `f` returns the function value and its derivative.
pub(crate) fn zeros_in(
    f: &(dyn Fn(C64) -> Result<(C64, C64)> + Sync),
    rect: &Rectangle,
    opts: &PoleSearch,
) -> Result<Vec<(C64, usize)>> {
    let mut nodes = opts.quad_nodes;
    let mut mom = moments(f, rect, nodes)?;
    // refine the quadrature until the winding number is convincingly integral
    for _ in 0..3 {
        let n = mom.count.re;
        if (n - n.round()).abs() < 0.05 && mom.count.im.abs() < 0.05 {
            break;
        }
        nodes *= 2;
        mom = moments(f, rect, nodes)?;
    }
    let n = mom.count.re;
    if (n - n.round()).abs() > 0.2 || mom.count.im.abs() > 0.2 {
        return Err(Error::InsufficientQuadrature { value: n });
    }
    let count = n.round().max(0.0) as usize;
    if count > opts.max_poles {
        return Err(Error::TooManyPoles {
            count,
            max: opts.max_poles,
        });
    }
    match count {
        0 => Ok(Vec::new()),
        1 => {
            let mut k = mom.first;
            for _ in 0..opts.newton_max_iter {
                let (s, ds) = f(k)?;
                let step = s / ds;
                k -= step;
                if !k.re.is_finite() || !k.im.is_finite() {
                    return Err(Error::NewtonFailed { k: mom.first });
                }
                if step.norm() < opts.newton_tol {
                    if !rect.contains(k) {
                        return Err(Error::NewtonFailed { k });
                    }
                    return Ok(vec![(k, 1)]);
                }
            }
            Err(Error::NewtonFailed { k })
        }
        _ if rect.size() < 1e-6 => Ok(vec![(mom.first / count as f64, count)]),
        _ => {
            let mut out = Vec::new();
            for half in rect.halves() {
                out.extend(zeros_in(f, &half, opts)?);
            }
            if out.len() > opts.max_poles {
                return Err(Error::TooManyPoles {
                    count: out.len(),
                    max: opts.max_poles,
                });
            }
            Ok(out)
        }
    }
}

/// Zeros of `s_11` inside `rect` with their multiplicities.
pub fn find_poles(
    data: &InitialData,
    rect: &Rectangle,
    opts: &PoleSearch,
    cfg: &SolverConfig,
) -> Result<Vec<(C64, usize)>> {
    let clearance = rect.clearance();
    if clearance < opts.min_clearance {
        return Err(Error::InvalidInput(format!(
            "search rectangle passes within {clearance:.3e} of the contour or an exceptional point"
        )));
    }
    let f = |k: C64| -> Result<(C64, C64)> {
        let s = s11(data, k, cfg)?;
        let ds = analytic_derivative(|z| s11(data, z, cfg), k, defaults::DERIVATIVE_STEP)?;
        Ok((s, ds))
    };
    zeros_in(&f, rect, opts)
}
