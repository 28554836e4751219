//! Independent checks of synthesised fields and the direct transform.

mod fd;
mod identities;
mod roundtrip;

pub use identities::{
    circle_relation_residual, conjugation_residual, identity_report, r1_from_r2, r2_from_r1,
    IdentityReport,
};

pub use roundtrip::{
    rescatter, round_trip, soliton_initial_data, PoleRecovery, Rescattered, RoundTripOptions,
    RoundTripReport,
};

use crate::soliton::SolutionField;
use crate::spectral::build_lax;
use crate::spectral::LaxInputs;
use crate::{Error, Result, C64, M3};
use fd::{d1, d2, d3, d4, X_MARGIN};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest residual over the interior of a grid, with the signed terms at the
/// worst point (`residual = Σ terms`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub x: f64,
    pub t: f64,
    pub hx: f64,
    pub ht: f64,
    pub x_order: u32,
    pub t_order: u32,
    pub terms: Vec<(String, f64)>,
}

impl ResidualReport {
    fn empty(field: &SolutionField) -> Self {
        Self {
            max_abs_residual: 0.0,
            x: field.grid.x_min,
            t: field.grid.t_min,
            hx: field.grid.hx,
            ht: field.grid.ht,
            x_order: 4,
            t_order: 2,
            terms: Vec::new(),
        }
    }

    fn absorb(&mut self, x: f64, t: f64, terms: &[(&str, f64)]) {
        let r: f64 = terms.iter().map(|(_, v)| v).sum();
        if r.abs() > self.max_abs_residual || !r.is_finite() {
            self.max_abs_residual = if r.is_finite() {
                r.abs()
            } else {
                f64::INFINITY
            };
            self.x = x;
            self.t = t;
            self.terms = terms.iter().map(|(n, v)| (n.to_string(), *v)).collect();
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if other.max_abs_residual > self.max_abs_residual {
            self = other;
        }
        self
    }
}

fn check_grid(field: &SolutionField, min_t: usize) -> Result<()> {
    let g = field.grid;
    if g.nx < 2 * X_MARGIN + 3 {
        return Err(Error::GridTooCoarse(format!(
            "{} x-points, need at least {}",
            g.nx,
            2 * X_MARGIN + 3
        )));
    }
    if g.nt < min_t || !(g.ht > 0.0) {
        return Err(Error::GridTooCoarse(format!(
            "{} t-levels, need at least {min_t}",
            g.nt
        )));
    }
    Ok(())
}

fn v_of(field: &SolutionField) -> Result<&[f64]> {
    field
        .v
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("the field carries no v component".into()))
}

/// Residual of `u_tt = u_xx + (u²)_xx + u_xxxx`: fourth order in `x`,
/// second order in `t`, on interior points. Needs five time levels.
pub fn pde_residual(field: &SolutionField) -> Result<ResidualReport> {
    check_grid(field, 5)?;
    let g = field.grid;
    let (hx, ht) = (g.hx, g.ht);
    let rows: Vec<ResidualReport> = (1..g.nt - 1)
        .into_par_iter()
        .map(|j| {
            let (um, u0, up) = (field.u_row(j - 1), field.u_row(j), field.u_row(j + 1));
            let sq: Vec<f64> = u0.iter().map(|u| u * u).collect();
            let mut rep = ResidualReport::empty(field);
            for i in X_MARGIN..g.nx - X_MARGIN {
                let utt = (up[i] - 2.0 * u0[i] + um[i]) / (ht * ht);
                rep.absorb(
                    g.x(i),
                    g.t(j),
                    &[
                        ("u_tt", utt),
                        ("-u_xx", -d2(u0, i, hx)),
                        ("-(u^2)_xx", -d2(&sq, i, hx)),
                        ("-u_xxxx", -d4(u0, i, hx)),
                    ],
                );
            }
            rep
        })
        .collect();
    Ok(rows
        .into_iter()
        .fold(ResidualReport::empty(field), ResidualReport::merge))
}

/// Residuals of `u_t = v_x` and `v_t = u_x + (u²)_x + u_xxx`. Needs three
/// time levels.
pub fn system_residual(field: &SolutionField) -> Result<(ResidualReport, ResidualReport)> {
    check_grid(field, 3)?;
    let v = v_of(field)?;
    let g = field.grid;
    let (hx, ht) = (g.hx, g.ht);
    let row = |j: usize| &v[j * g.nx..(j + 1) * g.nx];
    let rows: Vec<(ResidualReport, ResidualReport)> = (1..g.nt - 1)
        .into_par_iter()
        .map(|j| {
            let (um, u0, up) = (field.u_row(j - 1), field.u_row(j), field.u_row(j + 1));
            let (vm, v0, vp) = (row(j - 1), row(j), row(j + 1));
            let sq: Vec<f64> = u0.iter().map(|u| u * u).collect();
            let (mut a, mut b) = (ResidualReport::empty(field), ResidualReport::empty(field));
            for i in X_MARGIN..g.nx - X_MARGIN {
                let (x, t) = (g.x(i), g.t(j));
                a.absorb(
                    x,
                    t,
                    &[
                        ("u_t", (up[i] - um[i]) / (2.0 * ht)),
                        ("-v_x", -d1(v0, i, hx)),
                    ],
                );
                b.absorb(
                    x,
                    t,
                    &[
                        ("v_t", (vp[i] - vm[i]) / (2.0 * ht)),
                        ("-u_x", -d1(u0, i, hx)),
                        ("-(u^2)_x", -d1(&sq, i, hx)),
                        ("-u_xxx", -d3(u0, i, hx)),
                    ],
                );
            }
            (a, b)
        })
        .collect();
    let init = (ResidualReport::empty(field), ResidualReport::empty(field));
    Ok(rows
        .into_iter()
        .fold(init, |(a, b), (c, d)| (a.merge(c), b.merge(d))))
}

fn lax_inputs(u: &[f64], v: &[f64], i: usize, h: f64) -> LaxInputs {
    LaxInputs {
        u: u[i],
        ux: d1(u, i, h),
        uxx: d2(u, i, h),
        v: v[i],
        vx: d1(v, i, h),
    }
}

/// Maximum entry of `L_t − Z_x + [L, Z]` over interior grid points and the
/// given spectral parameters.
pub fn lax_compatibility(field: &SolutionField, ks: &[C64]) -> Result<f64> {
    check_grid(field, 3)?;
    let v = v_of(field)?;
    let g = field.grid;
    let (hx, ht) = (g.hx, g.ht);
    let vrow = |j: usize| &v[j * g.nx..(j + 1) * g.nx];
    // Inputs at i ± 2 need u at i ± 4.
    let margin = 2 * X_MARGIN - 1;
    if g.nx < 2 * margin + 1 {
        return Err(Error::GridTooCoarse(format!(
            "{} x-points are too few",
            g.nx
        )));
    }
    let jobs: Vec<(usize, C64)> = (1..g.nt - 1)
        .flat_map(|j| ks.iter().map(move |&k| (j, k)))
        .collect();
    let worst: Vec<f64> = jobs
        .par_iter()
        .map(|&(j, k)| -> Result<f64> {
            let (um, u0, up) = (field.u_row(j - 1), field.u_row(j), field.u_row(j + 1));
            let (vm, v0, vp) = (vrow(j - 1), vrow(j), vrow(j + 1));
            let z_at = |i: usize| -> Result<M3> { Ok(build_lax(k, lax_inputs(u0, v0, i, hx))?.z) };
            let mut worst: f64 = 0.0;
            for i in margin..g.nx - margin {
                let l = build_lax(k, lax_inputs(u0, v0, i, hx))?;
                let lp = build_lax(k, lax_inputs(up, vp, i, hx))?.l;
                let lm = build_lax(k, lax_inputs(um, vm, i, hx))?.l;
                let lt = (lp - lm) / C64::from(2.0 * ht);
                let zs = [z_at(i - 2)?, z_at(i - 1)?, z_at(i + 1)?, z_at(i + 2)?];
                let zx = (zs[0] - zs[1] * C64::from(8.0) + zs[2] * C64::from(8.0) - zs[3])
                    / C64::from(12.0 * hx);
                let res = lt - zx + l.l * l.z - l.z * l.l;
                worst = worst.max(crate::linalg::max_abs(&res));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// Trapezoid integrals `∫ u dx` per time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    pub integrals: Vec<f64>,
    pub max_deviation: f64,
    /// False when `|u|` at a grid end exceeds `1e-8`.
    pub decaying: bool,
}

pub fn mass_conservation(field: &SolutionField) -> Result<MassReport> {
    let g = field.grid;
    if g.nx < 2 {
        return Err(Error::GridTooCoarse("need at least two x-points".into()));
    }
    let mut integrals = Vec::with_capacity(g.nt);
    let mut decaying = true;
    for j in 0..g.nt {
        let row = field.u_row(j);
        let n = row.len();
        let inner: f64 = row[1..n - 1].iter().sum();
        integrals.push(g.hx * (inner + 0.5 * (row[0] + row[n - 1])));
        decaying &= row[0].abs() < 1e-8 && row[n - 1].abs() < 1e-8;
    }
    let first = integrals[0];
    let max_deviation = integrals
        .iter()
        .map(|m| (m - first).abs())
        .fold(0.0, f64::max);
    Ok(MassReport {
        integrals,
        max_deviation,
        decaying,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::{one_soliton, residue_for_shift, Grid};

    fn soliton_field(nt: usize) -> SolutionField {
        let g = Grid::new((-30.0, 30.0, 6001), (0.0, 0.001 * (nt - 1) as f64, nt)).unwrap();
        one_soliton(2.0, residue_for_shift(2.0, 0.0).unwrap(), g).unwrap()
    }

    #[test]
    fn zero_field_has_zero_residuals() {
        let g = Grid::new((-5.0, 5.0, 101), (0.0, 0.4, 5)).unwrap();
        let f = SolutionField::zero(g);
        assert_eq!(pde_residual(&f).unwrap().max_abs_residual, 0.0);
        let (a, b) = system_residual(&f).unwrap();
        assert_eq!(a.max_abs_residual + b.max_abs_residual, 0.0);
        assert!(lax_compatibility(&f, &[C64::new(2.0, 0.5)]).unwrap() < 1e-12);
        assert_eq!(mass_conservation(&f).unwrap().integrals, vec![0.0; 5]);
    }

    #[test]
    fn soliton_satisfies_the_equations() {
        let f = soliton_field(5);
        let r = pde_residual(&f).unwrap();
        assert!(r.max_abs_residual < 1e-4, "{r:?}");
        let sum: f64 = r.terms.iter().map(|(_, v)| v).sum();
        assert!((sum.abs() - r.max_abs_residual).abs() < 1e-12);
        let (a, b) = system_residual(&f).unwrap();
        assert!(a.max_abs_residual < 1e-4, "{a:?}");
        assert!(b.max_abs_residual < 1e-3, "{b:?}");
    }

    #[test]
    fn coarse_grids_rejected() {
        let g = Grid::new((-1.0, 1.0, 7), (0.0, 1.0, 5)).unwrap();
        assert!(matches!(
            pde_residual(&SolutionField::zero(g)),
            Err(Error::GridTooCoarse(_))
        ));
        let g = Grid::new((-1.0, 1.0, 50), (0.0, 1.0, 3)).unwrap();
        assert!(matches!(
            pde_residual(&SolutionField::zero(g)),
            Err(Error::GridTooCoarse(_))
        ));
    }

    #[test]
    fn lax_pair_is_compatible_along_the_soliton() {
        let f = soliton_field(3);
        let ks = [
            C64::new(2.0, 0.5),
            C64::from_polar(0.7, 2.0),
            C64::new(-3.0, 1.0),
        ];
        let r = lax_compatibility(&f, &ks).unwrap();
        assert!(r < 1e-3, "residual {r}");
        let mut bad = f.clone();
        for v in bad.v.as_mut().unwrap() {
            *v = -*v;
        }
        let r = lax_compatibility(&bad, &ks).unwrap();
        assert!(r > 0.1, "negative control {r}");
    }

    #[test]
    fn soliton_mass_is_conserved() {
        let m = mass_conservation(&soliton_field(5)).unwrap();
        assert!(m.max_deviation < 1e-10, "{m:?}");
        assert!(m.decaying);
    }
}
