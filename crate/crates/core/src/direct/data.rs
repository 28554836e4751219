use super::defaults;
use crate::{Error, Result};

/// Tolerances used when validating initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataTolerances {
    pub decay_tol: f64,
    pub mass_tol: f64,
}

impl Default for DataTolerances {
    fn default() -> Self {
        Self {
            decay_tol: defaults::DECAY_TOL,
            mass_tol: defaults::MASS_TOL,
        }
    }
}

/// Initial data `(u0, v0)` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    x_min: f64,
    hx: f64,
    u0: Vec<f64>,
    v0: Vec<f64>,
    u0x: Vec<f64>,
}

impl InitialData {
    /// Validates and stores samples `u0[n] = u0(x_min + n hx)`.
    pub fn new(x_min: f64, hx: f64, u0: Vec<f64>, v0: Vec<f64>) -> Result<Self> {
        Self::with_tolerances(x_min, hx, u0, v0, DataTolerances::default())
    }

    pub fn with_tolerances(
        x_min: f64,
        hx: f64,
        u0: Vec<f64>,
        v0: Vec<f64>,
        tol: DataTolerances,
    ) -> Result<Self> {
        if !(hx > 0.0 && hx.is_finite() && x_min.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "invalid grid x_min = {x_min}, hx = {hx}"
            )));
        }
        if u0.len() != v0.len() {
            return Err(Error::InvalidInput("u0 and v0 lengths differ".into()));
        }
        if u0.len() < 9 {
            return Err(Error::GridTooCoarse(format!(
                "{} samples, need at least 9",
                u0.len()
            )));
        }
        if let Some(n) = u0.iter().chain(&v0).position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite sample at index {n}"
            )));
        }
        let n = u0.len();
        let edge = [u0[0], u0[n - 1], v0[0], v0[n - 1]]
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        if edge > tol.decay_tol {
            return Err(Error::InvalidInput(format!(
                "data do not decay at the grid ends: max edge value {edge:e} > {:e}",
                tol.decay_tol
            )));
        }
        let u0x = derivative(&u0, hx);
        Ok(Self {
            x_min,
            hx,
            u0,
            v0,
            u0x,
        })
    }

    /// Builds `v0(x) = ∫_{-∞}^x u1` after checking that `u1` has zero mean.
    pub fn from_u1(
        x_min: f64,
        hx: f64,
        u0: Vec<f64>,
        u1: Vec<f64>,
        tol: DataTolerances,
    ) -> Result<Self> {
        if u1.len() != u0.len() {
            return Err(Error::InvalidInput("u0 and u1 lengths differ".into()));
        }
        let mut v0 = Vec::with_capacity(u1.len());
        let mut acc = 0.0;
        v0.push(0.0);
        for w in u1.windows(2) {
            acc += 0.5 * hx * (w[0] + w[1]);
            v0.push(acc);
        }
        if !(acc.abs() <= tol.mass_tol) {
            return Err(Error::InvalidInput(format!(
                "u1 has nonzero total integral {acc:e} (tolerance {:e})",
                tol.mass_tol
            )));
        }
        Self::with_tolerances(x_min, hx, u0, v0, tol)
    }

    /// Samples closures on `[-lx, lx]` with step `hx`.
    pub fn from_fn(
        lx: f64,
        hx: f64,
        u0: impl Fn(f64) -> f64,
        v0: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let n = (2.0 * lx / hx).round() as usize + 1;
        let xs: Vec<f64> = (0..n).map(|i| -lx + i as f64 * hx).collect();
        Self::new(
            -lx,
            hx,
            xs.iter().map(|&x| u0(x)).collect(),
            xs.iter().map(|&x| v0(x)).collect(),
        )
    }

    /// Identically zero data on the default grid.
    pub fn zero() -> Self {
        Self::from_fn(defaults::LX, defaults::HX, |_| 0.0, |_| 0.0).expect("zero data are valid")
    }

    /// `u0 = e^{-x²}`, `v0 = 0` on the default grid.
    pub fn gaussian() -> Self {
        Self::from_fn(defaults::LX, defaults::HX, |x| (-x * x).exp(), |_| 0.0)
            .expect("Gaussian data are valid")
    }

    pub fn len(&self) -> usize {
        self.u0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u0.is_empty()
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.len() - 1)
    }

    pub fn x(&self, n: usize) -> f64 {
        self.x_min + n as f64 * self.hx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|n| self.x(n)).collect()
    }

    pub fn u0(&self) -> &[f64] {
        &self.u0
    }

    pub fn v0(&self) -> &[f64] {
        &self.v0
    }

    pub fn u0x(&self) -> &[f64] {
        &self.u0x
    }

    /// Whether every sample vanishes.
    pub fn is_zero(&self) -> bool {
        self.u0.iter().chain(&self.v0).all(|v| *v == 0.0)
    }
}

/// Fourth-order central differences, second order at the two outermost nodes.
pub(crate) fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    for i in [1, n - 2] {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}
