use super::TOL_CONTOUR;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The six open sectors `D_1, …, D_6` cut out by `Γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
}

impl Sector {
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(n: usize) -> Self {
        [Self::D1, Self::D2, Self::D3, Self::D4, Self::D5, Self::D6][(n + 5) % 6]
    }
}

/// Refinement of `D_2` into regular/singular breather parts and real soliton lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subregion {
    RegR,
    RegL,
    SingR,
    SingL,
    RealRight,
    RealLeft,
}

impl Subregion {
    pub fn is_regular(self) -> bool {
        matches!(self, Self::RegR | Self::RegL)
    }

    pub fn is_singular(self) -> bool {
        matches!(self, Self::SingR | Self::SingL)
    }

    pub fn is_real(self) -> bool {
        matches!(self, Self::RealRight | Self::RealLeft)
    }
}

/// A spectral parameter together with its region labels.
///
/// `sector == None` marks a point on `Γ` (within [`TOL_CONTOUR`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub k: C64,
    pub sector: Option<Sector>,
    pub subregion: Option<Subregion>,
}

impl SpectralPoint {
    pub fn on_contour(&self) -> bool {
        self.sector.is_none()
    }
}

/// The nine labelled pieces of `Γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Segment {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    G8,
    G9,
}

impl Segment {
    pub const ALL: [Segment; 9] = [
        Self::G1,
        Self::G2,
        Self::G3,
        Self::G4,
        Self::G5,
        Self::G6,
        Self::G7,
        Self::G8,
        Self::G9,
    ];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn is_arc(self) -> bool {
        matches!(self, Self::G7 | Self::G8 | Self::G9)
    }
}

const OUTSIDE: [Sector; 6] = [
    Sector::D2,
    Sector::D3,
    Sector::D4,
    Sector::D5,
    Sector::D6,
    Sector::D1,
];
const INSIDE: [Sector; 6] = [
    Sector::D5,
    Sector::D6,
    Sector::D1,
    Sector::D2,
    Sector::D3,
    Sector::D4,
];

/// Index of the π/3-wide band centred at `nπ/3` containing `arg k`.
fn band(k: C64) -> usize {
    let a = k.arg().rem_euclid(2.0 * PI);
    (((a + PI / 6.0) / (PI / 3.0)).floor() as usize) % 6
}

/// Distance from `k` to `Γ` (three lines through 0 plus the unit circle).
pub fn dist_to_gamma(k: C64) -> f64 {
    let circle = (k.norm() - 1.0).abs();
    [PI / 6.0, PI / 2.0, 5.0 * PI / 6.0]
        .iter()
        .map(|phi| (k * C64::from_polar(1.0, -phi)).im.abs())
        .fold(circle, f64::min)
}

/// Region classification of a spectral parameter.
pub fn classify(k: C64) -> SpectralPoint {
    if dist_to_gamma(k) < TOL_CONTOUR {
        return SpectralPoint {
            k,
            sector: None,
            subregion: None,
        };
    }
    let b = band(k);
    let outside = k.norm() > 1.0;
    let sector = if outside { OUTSIDE[b] } else { INSIDE[b] };
    let subregion = if sector != Sector::D2 {
        None
    } else if k.im.abs() < TOL_CONTOUR {
        Some(if outside {
            Subregion::RealRight
        } else {
            Subregion::RealLeft
        })
    } else {
        let upper = k.im > 0.0;
        Some(match (outside, upper) {
            (true, true) => Subregion::RegR,
            (true, false) => Subregion::SingR,
            (false, false) => Subregion::RegL,
            (false, true) => Subregion::SingL,
        })
    };
    SpectralPoint {
        k,
        sector: Some(sector),
        subregion,
    }
}

/// Which piece of `Γ` contains `k` (within `tol`), if any.
///
/// Points of `Γ_⋆` (the crossings) and `0` belong to no piece.
pub fn segment_of(k: C64, tol: f64) -> Option<Segment> {
    if k.norm() < tol {
        return None;
    }
    let deg = k.arg().to_degrees().rem_euclid(360.0);
    let on_circle = (k.norm() - 1.0).abs() < tol;
    let ray = [30.0f64, 90.0, 150.0, 210.0, 270.0, 330.0]
        .iter()
        .position(|&d| {
            (k * C64::from_polar(1.0, -d.to_radians())).im.abs() < tol
                && (deg - d).abs().min(360.0 - (deg - d).abs()) < 90.0
        });
    match (on_circle, ray) {
        (true, Some(_)) => None,
        (true, None) => {
            use Segment::*;
            Some([G8, G9, G7, G8, G9, G7][band(k)])
        }
        (false, Some(r)) => {
            use Segment::*;
            let inner = [G6, G1, G2, G3, G4, G5];
            let outer = [G3, G4, G5, G6, G1, G2];
            Some(if k.norm() < 1.0 { inner[r] } else { outer[r] })
        }
        (false, None) => None,
    }
}
