//! Small dense linear algebra helpers on top of `nalgebra`.

use crate::{Error, Result, C64, M3};
use nalgebra::{DMatrix, DVector};

/// Largest entry modulus.
pub fn max_abs(m: &M3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm3(a: &M3) -> M3 {
    let norm: f64 = (0..3)
        .map(|i| (0..3).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(squarings as i32));
    let mut term = M3::identity();
    let mut sum = M3::identity();
    for n in 1..=20 {
        term = term * scaled / C64::from(n as f64);
        sum += term;
        if max_abs(&term) < 1e-18 * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Result of a dense solve with a condition estimate.
#[derive(Debug, Clone)]
pub struct DenseSolve {
    pub lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
    pub row_scale: Vec<f64>,
    pub cond: f64,
}

impl DenseSolve {
    /// Row-equilibrates `a`, factors it and estimates the 1-norm condition number
    /// of the equilibrated matrix.
    pub fn new(mut a: DMatrix<C64>) -> Result<Self> {
        let n = a.nrows();
        let mut row_scale = vec![1.0; n];
        for i in 0..n {
            let m = (0..n).map(|j| a[(i, j)].norm()).fold(0.0, f64::max);
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::NearSingular {
                    cond: f64::INFINITY,
                });
            }
            row_scale[i] = 1.0 / m;
            for j in 0..n {
                a[(i, j)] *= row_scale[i];
            }
        }
        let norm_a = one_norm(&a);
        let lu = a.lu();
        let inv = lu.try_inverse().ok_or(Error::NearSingular {
            cond: f64::INFINITY,
        })?;
        let cond = norm_a * one_norm(&inv);
        if !cond.is_finite() {
            return Err(Error::NearSingular { cond });
        }
        Ok(Self {
            lu,
            row_scale,
            cond,
        })
    }

    pub fn solve(&self, rhs: &DVector<C64>) -> DVector<C64> {
        let mut b = rhs.clone();
        for (i, s) in self.row_scale.iter().enumerate() {
            b[i] *= *s;
        }
        self.lu
            .solve(&b)
            .expect("factorization checked at construction")
    }
}

fn one_norm(a: &DMatrix<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
