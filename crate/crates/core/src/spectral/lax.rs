use super::{dist_to_qhat, l_all, lambda, z_all, Q_EXCLUSION, SQRT3};
use crate::{Error, Result, C64, M3, V3};

/// Pointwise field values entering the Lax pair.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LaxInputs {
    pub u: f64,
    pub ux: f64,
    pub uxx: f64,
    pub v: f64,
    pub vx: f64,
}

/// `L`, `Z` in the diagonalising frame and their splits `L = 𝓛 + U`, `Z = 𝓩 + V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxMatrices {
    pub l: M3,
    pub z: M3,
    pub cal_l: M3,
    pub cal_z: M3,
    pub u: M3,
    pub v: M3,
    pub lambda: C64,
}

fn check_qhat(k: C64) -> Result<()> {
    if !(dist_to_qhat(k) >= Q_EXCLUSION) {
        return Err(Error::domain(k, "P(k) is singular near the points of Q̂"));
    }
    Ok(())
}

/// Vandermonde matrix `P(k)` with rows `1`, `l_j`, `l_j²`.
pub fn p_matrix(k: C64) -> Result<M3> {
    check_qhat(k)?;
    Ok(p_unchecked(k))
}

fn p_unchecked(k: C64) -> M3 {
    let l = l_all(k);
    let one = C64::new(1.0, 0.0);
    M3::new(
        one,
        one,
        one,
        l[0],
        l[1],
        l[2],
        l[0] * l[0],
        l[1] * l[1],
        l[2] * l[2],
    )
}

/// Closed-form inverse of the Vandermonde matrix `P(k)`.
pub fn p_inverse(k: C64) -> Result<M3> {
    check_qhat(k)?;
    Ok(p_inverse_unchecked(k))
}

fn p_inverse_unchecked(k: C64) -> M3 {
    let l = l_all(k);
    let mut inv = M3::zeros();
    for j in 0..3 {
        let a = l[(j + 1) % 3];
        let b = l[(j + 2) % 3];
        let den = (l[j] - a) * (l[j] - b);
        // row j of P^{-1}: coefficients of the Lagrange basis polynomial
        inv[(j, 0)] = a * b / den;
        inv[(j, 1)] = -(a + b) / den;
        inv[(j, 2)] = C64::new(1.0, 0.0) / den;
    }
    inv
}

fn l_tilde(k: C64, f: &LaxInputs) -> M3 {
    let i = C64::i();
    let lam = lambda(k);
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let a31 = lam / (i * 12.0 * SQRT3) - f.ux / 4.0 - i * f.v / (4.0 * SQRT3);
    let a32 = C64::from(-(1.0 + 2.0 * f.u) / 4.0);
    M3::new(o, one, o, o, o, one, a31, a32, o)
}

fn z_tilde(k: C64, f: &LaxInputs) -> M3 {
    let i = C64::i();
    let lam = lambda(k);
    let o = C64::new(0.0, 0.0);
    let s = 1.0 + 2.0 * f.u;
    M3::new(
        -i * s / (2.0 * SQRT3),
        o,
        -i * SQRT3,
        -lam / 12.0 - i * f.ux / (4.0 * SQRT3) - f.v / 4.0,
        i * s / (4.0 * SQRT3),
        o,
        -i * f.uxx / (4.0 * SQRT3) - f.vx / 4.0,
        -lam / 12.0 + i * f.ux / (4.0 * SQRT3) - f.v / 4.0,
        i * s / (4.0 * SQRT3),
    )
}

/// Builds the Lax matrices at spectral parameter `k` for the given field values.
pub fn build_lax(k: C64, f: LaxInputs) -> Result<LaxMatrices> {
    check_qhat(k)?;
    let p = p_unchecked(k);
    let pinv = p_inverse_unchecked(k);
    let l = pinv * l_tilde(k, &f) * p;
    let z = pinv * z_tilde(k, &f) * p;
    let cal_l = M3::from_diagonal(&V3::from(l_all(k)));
    let cal_z = M3::from_diagonal(&V3::from(z_all(k)));
    Ok(LaxMatrices {
        l,
        z,
        cal_l,
        cal_z,
        u: l - cal_l,
        v: z - cal_z,
        lambda: lambda(k),
    })
}

/// Rank-one factorisation `U(x, k) = q wᵀ` of the direct-problem potential.
///
/// With `α = −u0x/4 − i v0/(4√3)` and `β = −u0/2`, one has
/// `U = P^{-1} e_3 (α (1,1,1) + β (l_1,l_2,l_3))`. The returned `q` is
/// `P^{-1} e_3` and the row `w` is evaluated by [`reduced_row`].
pub fn reduced_potential(k: C64) -> Result<(V3, [C64; 3])> {
    check_qhat(k)?;
    let pinv = p_inverse_unchecked(k);
    Ok((pinv.column(2).into_owned(), l_all(k)))
}

/// Row vector `w = α (1,1,1) + β l` of the rank-one potential.
#[inline]
pub(crate) fn reduced_row(l: &[C64; 3], u0: f64, u0x: f64, v0: f64) -> V3 {
    let alpha = C64::new(-u0x / 4.0, -v0 / (4.0 * SQRT3));
    let beta = -u0 / 2.0;
    V3::new(
        alpha + l[0] * beta,
        alpha + l[1] * beta,
        alpha + l[2] * beta,
    )
}
