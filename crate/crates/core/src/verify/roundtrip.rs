use crate::direct::{
    defaults, find_poles, gamma1_samples, r1_at, residue_constant, ContourPiece, ContourResolution,
    InitialData, PoleSearch, Rectangle, ResidueFit, SolverConfig,
};
use crate::soliton::{n_soliton, Grid, SolitonSpec};
use crate::spectral::dist_to_gamma;
use crate::{Error, Result, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Settings of the synthesise → scatter → recover loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripOptions {
    /// Initial half-width of the sampled interval; see [`soliton_initial_data`].
    pub lx: f64,
    pub hx: f64,
    pub k_tol: f64,
    pub c_tol: f64,
    pub floor_tol: f64,
    /// Half-width of the search square around each prescribed pole.
    pub search_half_width: f64,
    /// Search rectangles used when the spectrum is empty.
    pub empty_regions: Vec<Rectangle>,
    /// Ray samples per decade for the reflection floor.
    pub ray_per_decade: usize,
    pub cfg: SolverConfig,
    pub search: PoleSearch,
}

impl Default for RoundTripOptions {
    fn default() -> Self {
        Self {
            lx: 40.0,
            hx: 0.01,
            k_tol: 1e-3,
            c_tol: 1e-2,
            floor_tol: 1e-3,
            search_half_width: 0.25,
            empty_regions: vec![Rectangle {
                re: (1.2, 3.0),
                im: (-0.3, 0.3),
            }],
            ray_per_decade: 16,
            cfg: SolverConfig::default(),
            search: PoleSearch::default(),
        }
    }
}

/// Outcome for one prescribed pole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleRecovery {
    pub k0: C64,
    pub c: C64,
    pub found: Option<C64>,
    pub k_error: f64,
    pub c_found: Option<C64>,
    pub c_rel_error: f64,
    pub fit_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub t: f64,
    pub poles: Vec<PoleRecovery>,
    /// Zeros found that match no prescribed pole.
    pub unexpected: Vec<C64>,
    /// `max |r1|` over the ray samples of `Γ₁`.
    pub reflection_floor: f64,
    pub k_tol: f64,
    pub c_tol: f64,
    pub floor_tol: f64,
    pub pass: bool,
}

/// Largest half-width tried when widening the window for slowly decaying tails.
pub const MAX_LX: f64 = 400.0;

/// Samples the pure-soliton field and its `v` at time `t` as initial data.
///
/// The window `[−L, L]` starts at `L = lx` and grows by a quarter until
/// `|u|, |v|` on the outermost unit at each end fall below the decay
/// tolerance, up to [`MAX_LX`].
pub fn soliton_initial_data(spec: &SolitonSpec, t: f64, lx: f64, hx: f64) -> Result<InitialData> {
    let mut l = lx;
    loop {
        let n = (2.0 * l / hx).round() as usize + 1;
        let grid = Grid {
            x_min: -l,
            hx,
            nx: n,
            t_min: t,
            ht: 0.0,
            nt: 1,
        };
        let field = n_soliton(spec, grid)?;
        let v = field
            .v
            .ok_or_else(|| Error::InvalidInput("soliton field has no v".into()))?;
        let tail = ((1.0 / hx).ceil() as usize).min(n / 2);
        let edge = (0..tail)
            .chain(n - tail..n)
            .map(|i| field.u[i].abs().max(v[i].abs()))
            .fold(0.0, f64::max);
        if edge <= defaults::DECAY_TOL || l >= MAX_LX {
            return InitialData::new(-l, hx, field.u, v);
        }
        l = (1.25 * l).min(MAX_LX);
    }
}

fn search_square(k0: C64, half: f64) -> Rectangle {
    let h = half.min(0.5 * dist_to_gamma(k0));
    Rectangle {
        re: (k0.re - h, k0.re + h),
        im: (k0.im - h, k0.im + h),
    }
}

/// Direct-transform output for an exact pure-soliton field.
#[derive(Debug, Clone)]
pub struct Rescattered {
    /// Per prescribed pole, the zeros found near it with their residue fits.
    pub near: Vec<Vec<ResidueFit>>,
    /// Zeros found in the empty-spectrum regions.
    pub elsewhere: Vec<C64>,
    /// `(k, r1(k))` on the rays of `Γ₁`.
    pub ray_r1: Vec<(C64, C64)>,
}

/// Scatters the exact field of `spec` at time `t`.
pub fn rescatter(spec: &SolitonSpec, t: f64, opts: &RoundTripOptions) -> Result<Rescattered> {
    let data = soliton_initial_data(spec, t, opts.lx, opts.hx)?;
    let mut near = Vec::with_capacity(spec.poles.len());
    for p in &spec.poles {
        let rect = search_square(p.k0, opts.search_half_width);
        let zeros = find_poles(&data, &rect, &opts.search, &opts.cfg)?;
        let fits = zeros
            .iter()
            .map(|&(k, _)| residue_constant(&data, k, &opts.cfg))
            .collect::<Result<Vec<_>>>()?;
        near.push(fits);
    }
    let mut elsewhere = Vec::new();
    if spec.poles.is_empty() {
        for rect in &opts.empty_regions {
            elsewhere.extend(
                find_poles(&data, rect, &opts.search, &opts.cfg)?
                    .into_iter()
                    .map(|z| z.0),
            );
        }
    }
    let res = ContourResolution {
        per_decade: opts.ray_per_decade,
        ..ContourResolution::default()
    };
    let rays: Vec<C64> = gamma1_samples(&res)
        .pieces
        .iter()
        .filter(|p| matches!(p.piece, ContourPiece::Ray { .. }))
        .flat_map(|p| p.points.clone())
        .collect();
    let r1: Vec<(C64, C64)> = rays
        .par_iter()
        .map(|&k| Ok((k, r1_at(&data, k, &opts.cfg)?)))
        .collect::<Result<_>>()?;
    Ok(Rescattered {
        near,
        elsewhere,
        ray_r1: r1,
    })
}

/// Synthesises `spec` at `t = 0`, runs the direct transform and compares.
pub fn round_trip(spec: &SolitonSpec, opts: &RoundTripOptions) -> Result<RoundTripReport> {
    let Rescattered {
        near,
        elsewhere,
        ray_r1: r1,
    } = rescatter(spec, 0.0, opts)?;
    let mut poles = Vec::new();
    let mut unexpected = elsewhere;
    for (p, fits) in spec.poles.iter().zip(near) {
        let best = fits
            .iter()
            .min_by(|a, b| (a.k0 - p.k0).norm().total_cmp(&(b.k0 - p.k0).norm()));
        unexpected.extend(
            fits.iter()
                .filter(|f| Some(f.k0) != best.map(|b| b.k0))
                .map(|f| f.k0),
        );
        poles.push(match best {
            Some(f) => PoleRecovery {
                k0: p.k0,
                c: p.c,
                found: Some(f.k0),
                k_error: (f.k0 - p.k0).norm(),
                c_found: Some(f.c),
                c_rel_error: (f.c - p.c).norm() / p.c.norm(),
                fit_residual: f.residual,
            },
            None => PoleRecovery {
                k0: p.k0,
                c: p.c,
                found: None,
                k_error: f64::INFINITY,
                c_found: None,
                c_rel_error: f64::INFINITY,
                fit_residual: f64::INFINITY,
            },
        });
    }
    let reflection_floor = r1.iter().map(|(_, r)| r.norm()).fold(0.0, f64::max);
    let pass = unexpected.is_empty()
        && reflection_floor < opts.floor_tol
        && poles
            .iter()
            .all(|p| p.k_error < opts.k_tol && p.c_rel_error < opts.c_tol);
    Ok(RoundTripReport {
        t: 0.0,
        poles,
        unexpected,
        reflection_floor,
        k_tol: opts.k_tol,
        c_tol: opts.c_tol,
        floor_tol: opts.floor_tol,
        pass,
    })
}
