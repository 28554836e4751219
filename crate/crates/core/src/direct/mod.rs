//! Direct scattering: initial data → eigenfunctions → scattering data.

mod contour;
mod data;
mod evolve;
mod poles;
mod residue;
mod scattering;
mod volterra;

pub use contour::{
    gamma1_samples, gamma4_samples, ContourPiece, ContourResolution, ContourSamples,
    SampledFunction,
};
pub use data::{DataTolerances, InitialData};
pub use evolve::{estimate_t, estimate_t_with_floor, evolve_scattering, T_FLOOR};
pub use poles::{find_poles, PoleSearch, Rectangle};
pub use residue::{residue_constant, residue_constant_compact, ResidueFit};
pub use scattering::{
    eigenfunction_bundle, r1_at, r2_at, reflection_coefficients, reflection_limit, s11,
    s_derivative, scattering_matrices, DirectReflection, EigenfunctionBundle, Pole,
    ReflectionSource, ScatteringData, ScatteringMatrix,
};
pub use volterra::{solve_column, solve_volterra, EigenColumn, Eigenfunction, EigenfunctionField};

/// How to treat eigenfunction entries whose exponential kernel grows along the march.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntryPolicy {
    /// Only columns with bounded kernels are computed; others are undefined.
    #[default]
    DomainOnly,
    /// Data are treated as supported on the grid and every entry is computed,
    /// provided the growth over the grid stays representable.
    CompactSupport,
}

/// Numerical options shared by the direct-scattering routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub policy: EntryPolicy,
    /// Combine the march on the grid and on every second node to cancel the
    /// leading `h²` error term.
    pub richardson: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            policy: EntryPolicy::DomainOnly,
            richardson: true,
        }
    }
}

impl SolverConfig {
    pub fn compact() -> Self {
        Self {
            policy: EntryPolicy::CompactSupport,
            ..Self::default()
        }
    }
}

/// Search rectangles used when none are given: `[1.1, 4] × [−0.5, 0.5]`
/// around the right half-line and `[−0.85, −0.35] × [−0.12, 0.12]` around
/// the left segment of the soliton sector.
pub fn default_search_regions() -> Vec<Rectangle> {
    vec![
        Rectangle {
            re: (1.1, 4.0),
            im: (-0.5, 0.5),
        },
        Rectangle {
            re: (-0.85, -0.35),
            im: (-0.12, 0.12),
        },
    ]
}

/// Full direct transform: reflection coefficients on the contours and the
/// simple zeros of `s_11` inside `regions` with their residue constants.
pub fn scatter(
    data: &InitialData,
    res: &ContourResolution,
    regions: &[Rectangle],
    search: &PoleSearch,
    cfg: &SolverConfig,
) -> crate::Result<ScatteringData> {
    let mut sd = reflection_coefficients(data, res, cfg)?;
    for rect in regions {
        for (k, mult) in find_poles(data, rect, search, cfg)? {
            if mult != 1 {
                return Err(crate::Error::Domain {
                    k,
                    reason: "zero of s11 is not simple",
                });
            }
            let fit = residue_constant(data, k, cfg)?;
            sd.poles.push(Pole {
                k0: fit.k0,
                c: fit.c,
            });
        }
    }
    Ok(sd)
}

/// Default numerical tolerances of the direct problem.
pub mod defaults {
    pub const LX: f64 = 30.0;
    pub const HX: f64 = 0.01;
    pub const QUAD_TOL: f64 = 1e-6;
    pub const DECAY_TOL: f64 = 1e-10;
    pub const MASS_TOL: f64 = 1e-8;
    pub const FIT_TOL: f64 = 1e-4;
    pub const DERIVATIVE_STEP: f64 = 1e-5;
    pub const NEWTON_MAX_ITER: usize = 20;
    pub const NEWTON_TOL: f64 = 1e-10;
    pub const MAX_POLES: usize = 16;
    pub const CONTOUR_MIN_DIST: f64 = 1e-3;
}
