use super::{classify_pole, sample_field, FieldSource, Grid, Regularity, SolutionField, N3};
use crate::direct::Pole;
use crate::spectral::{classify, l_unchecked, omega_pow, z_unchecked, Sector, SQRT3};
use crate::{Error, Result, C64};
use nalgebra::{Matrix2, Vector2};

/// `h(k0) = f(r) g(α)` for `k0 = r e^{iα}` in `D₂ \ ℝ`.
pub fn h_indicator(k0: C64) -> Result<f64> {
    let p = classify(k0);
    if p.sector != Some(Sector::D2) || k0.im == 0.0 {
        return Err(Error::domain(k0, "h is defined on D2 off the real axis"));
    }
    let (r, alpha) = (k0.norm(), k0.arg());
    let r2 = r * r;
    let (s, c) = alpha.sin_cos();
    let den_f = (r2 - 1.0) * (r2 - 1.0);
    let den_g = 2.0 * s * (SQRT3 * c - s);
    if den_f < 1e-14 || den_g.abs() < 1e-14 {
        return Err(Error::domain(k0, "pole of h"));
    }
    let f = (r2 * r2 + r2 + 1.0) / den_f;
    let g = (s + SQRT3 * c).powi(2) / den_g;
    Ok(f * g)
}

/// The two-unknown system of a single complex pole `k0` and its conjugate.
#[derive(Debug, Clone, Copy)]
pub struct BreatherSystem {
    pub k0: C64,
    /// `(c̃, d̃)` with `d̃ = conj(c̃)`.
    pub scaled: (C64, C64),
    kmat: Matrix2<C64>,
    sx: Vector2<C64>,
    st: Vector2<C64>,
}

impl BreatherSystem {
    pub fn new(k0: C64, c: C64) -> Result<Self> {
        classify_pole(k0, c)?;
        if k0.im == 0.0 {
            return Err(Error::domain(k0, "breathers need a nonreal pole"));
        }
        let (w2, kb) = (omega_pow(2), k0.conj());
        let d = Pole { k0, c }.d().expect("complex pole");
        let ct = C64::i() * (k0 * k0 - 1.0) / (2.0 * SQRT3 * k0 * k0) * c;
        let dt = C64::i() * (kb * kb - w2) / (2.0 * SQRT3 * kb * kb) * w2 * d;
        debug_assert!((dt - ct.conj()).norm() <= 1e-10 * (1.0 + ct.norm()));
        let l = |j, k| l_unchecked(j, k);
        let z = |j, k| z_unchecked(j, k);
        let kmat = Matrix2::new(
            (l(1, k0) - l(3, k0)).inv(),
            (l(1, k0) - l(2, kb)).inv(),
            (l(3, kb) - l(3, k0)).inv(),
            (l(3, kb) - l(2, kb)).inv(),
        );
        Ok(Self {
            k0,
            scaled: (ct, dt),
            kmat,
            sx: Vector2::new(l(1, k0) - l(3, k0), l(3, kb) - l(2, kb)),
            st: Vector2::new(z(1, k0) - z(3, k0), z(3, kb) - z(2, kb)),
        })
    }

    fn log_rho(&self, x: f64, t: f64) -> Vector2<C64> {
        Vector2::new(self.scaled.0.ln(), self.scaled.1.ln())
            + self.sx * C64::from(x)
            + self.st * C64::from(t)
    }

    /// `A = K diag(ρ)`.
    pub fn a_matrix(&self, x: f64, t: f64) -> Matrix2<C64> {
        let rho = self.log_rho(x, t).map(|z| z.exp());
        self.kmat * Matrix2::from_diagonal(&rho)
    }

    /// `det(I − A)`, which is real.
    pub fn det(&self, x: f64, t: f64) -> C64 {
        (Matrix2::identity() - self.a_matrix(x, t)).determinant()
    }

    /// `det(I − A)` through `1 − 2 Re A11 + h |A11|²`.
    pub fn det_closed(&self, x: f64, t: f64) -> Result<f64> {
        let a11 = self.a_matrix(x, t)[(0, 0)];
        Ok(1.0 - 2.0 * a11.re + h_indicator(self.k0)? * a11.norm_sqr())
    }

    /// `det(I − B)` with `B = E A E⁻¹`, `E = diag(e^{x l1(k0) + t z1(k0)}, e^{x l3(k̄0) + t z3(k̄0)})`.
    pub fn det_b(&self, x: f64, t: f64) -> C64 {
        let kb = self.k0.conj();
        let e1 = (l_unchecked(1, self.k0) * x + z_unchecked(1, self.k0) * t).exp();
        let e2 = (l_unchecked(3, kb) * x + z_unchecked(3, kb) * t).exp();
        let e = Matrix2::from_diagonal(&Vector2::new(e1, e2));
        let einv = Matrix2::from_diagonal(&Vector2::new(e1.inv(), e2.inv()));
        let b = e * self.a_matrix(x, t) * einv;
        (Matrix2::identity() - b).determinant()
    }

    /// `n₃^(1) = −2i√3 Σμ` with `(diag(1/ρ) − K) μ = 1`, and its derivatives.
    pub fn eval(&self, x: f64, t: f64) -> Result<N3> {
        let inv_rho = self.log_rho(x, t).map(|z| (-z).exp());
        let lam = Matrix2::from_diagonal(&inv_rho);
        let lu = (lam - self.kmat).lu();
        let one = Vector2::repeat(C64::new(1.0, 0.0));
        let singular = || Error::SingularBreather {
            x,
            t,
            det: self.det(x, t).re,
        };
        let mu = lu.solve(&one).ok_or_else(singular)?;
        let mx = lu
            .solve(&self.sx.component_mul(&(lam * mu)))
            .ok_or_else(singular)?;
        let mt = lu
            .solve(&self.st.component_mul(&(lam * mu)))
            .ok_or_else(singular)?;
        let s = C64::new(0.0, -2.0 * SQRT3);
        Ok((s * mu.sum(), s * mx.sum(), s * mt.sum()))
    }
}

/// Samples the breather generated by a complex pole `k0` in `D₂`.
///
/// Fails with [`Error::SingularBreather`] at the first grid point where
/// `det(I − B) ≤ 0`.
pub fn breather(k0: C64, c: C64, grid: Grid) -> Result<SolutionField> {
    let class = classify_pole(k0, c)?;
    if class.regularity == Regularity::Zero {
        return Ok(SolutionField {
            source: FieldSource::Breather,
            ..SolutionField::zero(grid)
        });
    }
    let sys = BreatherSystem::new(k0, c)?;
    for j in 0..grid.nt {
        for i in 0..grid.nx {
            let (x, t) = (grid.x(i), grid.t(j));
            let det = sys.det(x, t).re;
            if !(det > 0.0) {
                return Err(Error::SingularBreather { x, t, det });
            }
        }
    }
    let mut field = sample_field(grid, FieldSource::Breather, |x, t| sys.eval(x, t))?;
    field.metadata.insert("k0_re".into(), k0.re);
    field.metadata.insert("k0_im".into(), k0.im);
    field.metadata.insert("h".into(), h_indicator(k0)?);
    Ok(field)
}
