//! Exact pure-soliton solutions: one-solitons, breathers and N-pole solutions.

mod breather;
mod nsoliton;
mod one;

pub use breather::{breather, h_indicator, BreatherSystem};
pub use nsoliton::{n_soliton, PoleSystem};
pub use one::{classify_one_soliton, one_soliton, residue_for_shift, residue_from_f, OneSoliton};

use crate::spectral::{classify, Sector};
use crate::{Error, Result, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Uniform rectangular `(x, t)` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub hx: f64,
    pub nx: usize,
    pub t_min: f64,
    pub ht: f64,
    pub nt: usize,
}

impl Default for Grid {
    /// `x ∈ [−30, 30]` with step `0.01` at the single time `t = 0`.
    fn default() -> Self {
        Self {
            x_min: -30.0,
            hx: 0.01,
            nx: 6001,
            t_min: 0.0,
            ht: 0.0,
            nt: 1,
        }
    }
}

impl Grid {
    /// Grid on `[x0, x1] × [t0, t1]` with `nx × nt` nodes.
    pub fn new(x: (f64, f64, usize), t: (f64, f64, usize)) -> Result<Self> {
        let (x0, x1, nx) = x;
        let (t0, t1, nt) = t;
        if nx < 2 || !(x1 > x0) || nt == 0 || (nt > 1 && !(t1 > t0)) || t0 < 0.0 {
            return Err(Error::InvalidInput(format!(
                "invalid grid x = {x:?}, t = {t:?} (need nx ≥ 2, x1 > x0, t ≥ 0)"
            )));
        }
        let ht = if nt > 1 {
            (t1 - t0) / (nt - 1) as f64
        } else {
            0.0
        };
        Ok(Self {
            x_min: x0,
            hx: (x1 - x0) / (nx - 1) as f64,
            nx,
            t_min: t0,
            ht,
            nt,
        })
    }

    /// Same `x` nodes at the listed times (must be uniformly spaced).
    pub fn with_times(self, t0: f64, ht: f64, nt: usize) -> Self {
        Self {
            t_min: t0,
            ht,
            nt,
            ..self
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.hx
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t_min + j as f64 * self.ht
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which constructor produced a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSource {
    OneSoliton,
    Breather,
    NSoliton,
    Zero,
}

/// Real solution samples `u[j nx + i] = u(x_i, t_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub v: Option<Vec<f64>>,
    /// `n₃^(1)` where the constructor provides it.
    pub n3: Option<Vec<C64>>,
    /// Largest `|Im u|` discarded when taking real parts.
    pub max_imag: f64,
    pub source: FieldSource,
    pub metadata: BTreeMap<String, f64>,
}

impl SolutionField {
    pub fn zero(grid: Grid) -> Self {
        Self {
            grid,
            u: vec![0.0; grid.len()],
            v: Some(vec![0.0; grid.len()]),
            n3: None,
            max_imag: 0.0,
            source: FieldSource::Zero,
            metadata: BTreeMap::new(),
        }
    }

    pub fn u_at(&self, it: usize, ix: usize) -> f64 {
        self.u[it * self.grid.nx + ix]
    }

    pub fn v_at(&self, it: usize, ix: usize) -> Option<f64> {
        self.v.as_ref().map(|v| v[it * self.grid.nx + ix])
    }

    /// The `u` profile at time level `it`.
    pub fn u_row(&self, it: usize) -> &[f64] {
        &self.u[it * self.grid.nx..(it + 1) * self.grid.nx]
    }

    pub fn v_row(&self, it: usize) -> Option<&[f64]> {
        self.v
            .as_ref()
            .map(|v| &v[it * self.grid.nx..(it + 1) * self.grid.nx])
    }
}

/// `(n₃^(1), ∂x n₃^(1), ∂t n₃^(1))` at one point.
pub(crate) type N3 = (C64, C64, C64);

/// Samples `u = −i√3 ∂x n₃^(1)`, `v = −i√3 ∂t n₃^(1)` in parallel.
pub(crate) fn sample_field(
    grid: Grid,
    source: FieldSource,
    eval: impl Fn(f64, f64) -> Result<N3> + Sync,
) -> Result<SolutionField> {
    let s3 = C64::new(0.0, -crate::spectral::SQRT3);
    let pts: Vec<N3> = (0..grid.len())
        .into_par_iter()
        .map(|n| eval(grid.x(n % grid.nx), grid.t(n / grid.nx)))
        .collect::<Result<_>>()?;
    let mut u = Vec::with_capacity(pts.len());
    let mut v = Vec::with_capacity(pts.len());
    let mut n3 = Vec::with_capacity(pts.len());
    let mut max_imag: f64 = 0.0;
    for (m, mx, mt) in pts {
        let (uc, vc) = (s3 * mx, s3 * mt);
        if !(uc.re.is_finite() && vc.re.is_finite()) {
            return Err(Error::NearSingular {
                cond: f64::INFINITY,
            });
        }
        max_imag = max_imag.max(uc.im.abs());
        u.push(uc.re);
        v.push(vc.re);
        n3.push(m);
    }
    Ok(SolutionField {
        grid,
        u,
        v: Some(v),
        n3: Some(n3),
        max_imag,
        source,
        metadata: BTreeMap::new(),
    })
}

/// Travelling direction and type of a pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolitonKind {
    RightSoliton,
    LeftSoliton,
    RightBreather,
    LeftBreather,
}

/// Whether the solution generated by a pole is smooth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Regular,
    Singular,
    Zero,
}

/// A pole `k0` with residue constant `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleSpec {
    pub k0: C64,
    pub c: C64,
}

/// Classification of one pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleClass {
    pub kind: SolitonKind,
    pub regularity: Regularity,
}

/// Spectral data of a pure-soliton solution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolitonSpec {
    pub poles: Vec<PoleSpec>,
}

impl SolitonSpec {
    pub fn new(poles: Vec<PoleSpec>) -> Self {
        Self { poles }
    }

    pub fn single(k0: C64, c: C64) -> Self {
        Self::new(vec![PoleSpec { k0, c }])
    }

    /// Classifies every pole; errors for poles outside `D₂` or with an
    /// inadmissible residue constant.
    pub fn classify(&self) -> Result<Vec<PoleClass>> {
        self.poles
            .iter()
            .map(|p| classify_pole(p.k0, p.c))
            .collect()
    }

    /// Whether every pole yields a regular contribution.
    pub fn is_regular(&self) -> Result<bool> {
        Ok(self
            .classify()?
            .iter()
            .all(|c| c.regularity != Regularity::Singular))
    }
}

/// Classifies a real or complex pole.
pub fn classify_pole(k0: C64, c: C64) -> Result<PoleClass> {
    if k0.im == 0.0 {
        let regularity = classify_one_soliton(k0.re, c)?;
        let kind = if k0.re > 1.0 {
            SolitonKind::RightSoliton
        } else {
            SolitonKind::LeftSoliton
        };
        return Ok(PoleClass { kind, regularity });
    }
    let p = classify(k0);
    let sub = match (p.sector, p.subregion) {
        (Some(Sector::D2), Some(s)) if !s.is_real() => s,
        _ => {
            return Err(Error::domain(
                k0,
                "complex poles must lie in D2 off the real axis",
            ))
        }
    };
    let kind = if k0.norm() > 1.0 {
        SolitonKind::RightBreather
    } else {
        SolitonKind::LeftBreather
    };
    let regularity = if c == C64::new(0.0, 0.0) {
        Regularity::Zero
    } else if sub.is_regular() {
        Regularity::Regular
    } else {
        Regularity::Singular
    };
    Ok(PoleClass { kind, regularity })
}
