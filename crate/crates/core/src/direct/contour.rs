//! Discretisation of `Γ̂₁`, `Γ̂₄` and interpolation of sampled spectral functions.

use super::scattering::par_map;
use crate::spectral::omega_pow;
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Sampling density of the contours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourResolution {
    pub per_decade: usize,
    /// `log10 |k|` range of the ray samples.
    pub decades: (f64, f64),
    /// Nodes per sixth of the unit circle.
    pub arc_nodes: usize,
    /// Radius of the discs around `±ω²` excluded from `r2`.
    pub r2_exclusion: f64,
}

impl Default for ContourResolution {
    fn default() -> Self {
        Self {
            per_decade: 64,
            decades: (-2.0, 2.0),
            arc_nodes: 256,
            r2_exclusion: 1e-2,
        }
    }
}

/// One smooth piece of a sampled contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ContourPiece {
    /// `{ r d : r ∈ (0,1) }` if `inner`, else `{ r d : r > 1 }`; parameter `ln r`.
    Ray { direction: C64, inner: bool },
    /// The unit circle; parameter `arg k ∈ [π/6, π/6 + 2π)`.
    Circle,
}

impl ContourPiece {
    fn point(&self, s: f64) -> C64 {
        match self {
            Self::Ray { direction, .. } => direction * s.exp(),
            Self::Circle => C64::from_polar(1.0, s),
        }
    }

    fn param(&self, k: C64) -> f64 {
        match self {
            Self::Ray { .. } => k.norm().ln(),
            Self::Circle => (k.arg() - PI / 6.0).rem_euclid(2.0 * PI) + PI / 6.0,
        }
    }

    fn contains(&self, k: C64, tol: f64) -> bool {
        match self {
            Self::Circle => (k.norm() - 1.0).abs() < tol,
            Self::Ray { direction, inner } => {
                let rel = k * direction.conj();
                rel.re > 0.0 && rel.im.abs() < tol * (1.0 + rel.re) && (rel.re < 1.0) == *inner
            }
        }
    }
}

/// Parameter nodes and points of a contour discretisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSamples {
    pub piece: ContourPiece,
    pub params: Vec<f64>,
    pub points: Vec<C64>,
}

/// A complex function sampled on a union of contour pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub pieces: Vec<ContourSamples>,
    pub values: Vec<Vec<C64>>,
    /// Discs where the function is not sampled (poles).
    pub exclusions: Vec<(C64, f64)>,
    /// Interpolate `(1 − ω²k²) f` on the circle, removing the simple poles at `±ω²`.
    #[serde(default)]
    pub pole_factor: bool,
}

const STENCIL: usize = 6;
const PIECE_TOL: f64 = 1e-9;

impl SampledFunction {
    fn new(pieces: Vec<ContourSamples>, exclusions: Vec<(C64, f64)>, pole_factor: bool) -> Self {
        let values = pieces
            .iter()
            .map(|p| vec![C64::new(0.0, 0.0); p.points.len()])
            .collect();
        Self {
            pieces,
            values,
            exclusions,
            pole_factor,
        }
    }

    /// Evaluates `f` at every node (in parallel).
    pub fn fill(&mut self, f: impl Fn(C64) -> Result<C64> + Sync) -> Result<()> {
        for (p, v) in self.pieces.iter().zip(self.values.iter_mut()) {
            *v = par_map(&p.points, &f)?;
        }
        Ok(())
    }

    /// Multiplies every sample by `g(k)`.
    pub fn scale(&mut self, g: impl Fn(C64) -> Result<C64>) -> Result<()> {
        for (p, v) in self.pieces.iter().zip(self.values.iter_mut()) {
            for (val, k) in v.iter_mut().zip(&p.points) {
                *val *= g(*k)?;
            }
        }
        Ok(())
    }

    /// All `(k, value)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.pieces
            .iter()
            .zip(&self.values)
            .flat_map(|(p, v)| p.points.iter().copied().zip(v.iter().copied()))
    }

    pub fn len(&self) -> usize {
        self.pieces.iter().map(|p| p.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest modulus over the ray samples.
    pub fn max_abs_on_rays(&self) -> f64 {
        self.pieces
            .iter()
            .zip(&self.values)
            .filter(|(p, _)| matches!(p.piece, ContourPiece::Ray { .. }))
            .flat_map(|(_, v)| v.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    /// Local Lagrange interpolation in the piece parameter.
    ///
    /// Ray points beyond the sampled radii evaluate to zero.
    pub fn eval(&self, k: C64) -> Result<C64> {
        for &(c, r) in &self.exclusions {
            if (k - c).norm() < r {
                return Err(Error::NearR2Pole { k });
            }
        }
        let (idx, piece) = self
            .pieces
            .iter()
            .enumerate()
            .find(|(_, p)| p.piece.contains(k, PIECE_TOL))
            .ok_or(Error::domain(k, "not on a sampled contour piece"))?;
        let s = piece.piece.param(k);
        let vals = &self.values[idx];
        let params = &piece.params;
        match piece.piece {
            ContourPiece::Ray { .. } => {
                let (lo, hi) = (params[0], params[params.len() - 1]);
                let h = (hi - lo) / (params.len() - 1) as f64;
                if s < lo - h || s > hi + h {
                    return Ok(C64::new(0.0, 0.0));
                }
                Ok(lagrange(params, |m| vals[m], s, false))
            }
            ContourPiece::Circle if self.pole_factor => {
                let w2 = omega_pow(2);
                let factor = |z: C64| 1.0 - w2 * z * z;
                let g = lagrange(params, |m| vals[m] * factor(piece.points[m]), s, true);
                Ok(g / factor(k))
            }
            ContourPiece::Circle => Ok(lagrange(params, |m| vals[m], s, true)),
        }
    }
}

/// Lagrange interpolation on the `STENCIL` nodes nearest to `s`.
fn lagrange(params: &[f64], vals: impl Fn(usize) -> C64, s: f64, periodic: bool) -> C64 {
    let n = params.len();
    let pos = params.partition_point(|&p| p < s);
    let wrap = |i: isize| -> (f64, usize) {
        if periodic {
            let m = i.rem_euclid(n as isize) as usize;
            let shift = (i.div_euclid(n as isize)) as f64 * 2.0 * PI;
            (params[m] + shift, m)
        } else {
            (params[i as usize], i as usize)
        }
    };
    let half = (STENCIL / 2) as isize;
    let mut start = pos as isize - half;
    if !periodic {
        start = start.clamp(0, n as isize - STENCIL as isize);
    }
    let nodes: Vec<(f64, usize)> = (0..STENCIL as isize).map(|o| wrap(start + o)).collect();
    let scale = (nodes[STENCIL - 1].0 - nodes[0].0)
        .abs()
        .max(f64::MIN_POSITIVE);
    if let Some(&(_, m)) = nodes.iter().find(|(p, _)| (p - s).abs() < 1e-13 * scale) {
        return vals(m);
    }
    let mut acc = C64::new(0.0, 0.0);
    for (a, &(pa, ma)) in nodes.iter().enumerate() {
        let mut w = 1.0;
        for (b, &(pb, _)) in nodes.iter().enumerate() {
            if a != b {
                w *= (s - pb) / (pa - pb);
            }
        }
        acc += vals(ma) * w;
    }
    acc
}

fn ray(direction: C64, inner: bool, res: &ContourResolution) -> ContourSamples {
    let ln10 = std::f64::consts::LN_10;
    let (lo, hi) = if inner {
        (res.decades.0, 0.0)
    } else {
        (0.0, res.decades.1)
    };
    let count = ((hi - lo) * res.per_decade as f64).round() as usize;
    let step = (hi - lo) / count as f64;
    let params: Vec<f64> = (0..count)
        .map(|m| (lo + (m as f64 + 0.5) * step) * ln10)
        .collect();
    let piece = ContourPiece::Ray { direction, inner };
    let points = params.iter().map(|&s| piece.point(s)).collect();
    ContourSamples {
        piece,
        params,
        points,
    }
}

fn circle(res: &ContourResolution, exclusions: &[(C64, f64)]) -> ContourSamples {
    let total = 6 * res.arc_nodes;
    let step = 2.0 * PI / total as f64;
    let piece = ContourPiece::Circle;
    let params: Vec<f64> = (0..total)
        .map(|m| PI / 6.0 + (m as f64 + 0.5) * step)
        .filter(|&s| {
            exclusions
                .iter()
                .all(|&(c, r)| (piece.point(s) - c).norm() >= r)
        })
        .collect();
    let points = params.iter().map(|&s| piece.point(s)).collect();
    ContourSamples {
        piece,
        params,
        points,
    }
}

/// Nodes of `Γ̂₁ = [0, i] ∪ [−i, −i∞) ∪ ∂𝔻`.
pub fn gamma1_samples(res: &ContourResolution) -> SampledFunction {
    let i = C64::i();
    SampledFunction::new(
        vec![ray(i, true, res), ray(-i, false, res), circle(res, &[])],
        vec![],
        false,
    )
}

/// Nodes of `Γ̂₄ = [0, −i] ∪ [i, i∞) ∪ ∂𝔻`, without discs around `±ω²`.
pub fn gamma4_samples(res: &ContourResolution) -> SampledFunction {
    let i = C64::i();
    let w2 = omega_pow(2);
    let excl = vec![(w2, res.r2_exclusion), (-w2, res.r2_exclusion)];
    SampledFunction::new(
        vec![ray(-i, true, res), ray(i, false, res), circle(res, &excl)],
        excl,
        true,
    )
}
