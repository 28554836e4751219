//! Product-integration march for the Volterra equations of `X`, `X^A`, `Y`, `Y^A`.
//!
//! Column `j` of each eigenfunction satisfies
//! `F(x) = e_j + σ ∫ e^{κ_i |x − x'|} (V F)_i(x') dx'` over the half line
//! beyond `x`, where `V` is the potential `U` or its transpose. The
//! exponential is integrated exactly against the linear interpolant of
//! `V F`; each step is an implicit rank-one update solved in closed form.

use super::{EntryPolicy, InitialData, SolverConfig};
use crate::spectral::{reduced_potential, reduced_row, TOL_CONTOUR};
use crate::{Error, Result, C64, V3};

/// Which normalised eigenfunction to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Eigenfunction {
    X,
    XA,
    Y,
    YA,
}

impl Eigenfunction {
    fn backward(self) -> bool {
        matches!(self, Self::X | Self::XA)
    }

    fn sign(self) -> f64 {
        match self {
            Self::X | Self::YA => -1.0,
            Self::XA | Self::Y => 1.0,
        }
    }

    fn transposed(self) -> bool {
        matches!(self, Self::XA | Self::YA)
    }

    /// Kernel exponents `κ_i` for column `j` (0-based).
    fn exponents(self, l: &[C64; 3], j: usize) -> [C64; 3] {
        let s = match self {
            Self::X | Self::YA => -1.0,
            Self::XA | Self::Y => 1.0,
        };
        std::array::from_fn(|i| (l[i] - l[j]) * s)
    }
}

/// One solved column on the output nodes.
#[derive(Debug, Clone)]
pub struct EigenColumn {
    /// Values at grid nodes `0, stride, 2 stride, …`.
    pub values: Vec<V3>,
    pub stride: usize,
    /// `e_j + σ e^{κ x_far} J(x_far)`: the scattering column (X, X^A only).
    pub scattering: [Option<C64>; 3],
}

/// All admissible columns of one eigenfunction.
#[derive(Debug, Clone)]
pub struct EigenfunctionField {
    pub which: Eigenfunction,
    pub stride: usize,
    pub columns: [Option<Vec<V3>>; 3],
}

impl EigenfunctionField {
    pub fn column(&self, j: usize) -> Option<&[V3]> {
        self.columns[j - 1].as_deref()
    }

    /// Entry `(i, j)` (1-based) at output node `n`.
    pub fn entry(&self, i: usize, j: usize, n: usize) -> Option<C64> {
        self.column(j).map(|c| c[n][i - 1])
    }
}

const GROWTH_TOL: f64 = 1e-10;
const EXP_LIMIT: f64 = 690.0;

/// `φ₂(w) = (e^w − 1 − w) / w²`.
fn phi2(w: C64) -> C64 {
    if w.norm() < 0.5 {
        let mut term = C64::new(0.5, 0.0);
        let mut sum = term;
        for n in 3..24 {
            term = term * w / n as f64;
            sum += term;
        }
        sum
    } else {
        (w.exp() - 1.0 - w) / (w * w)
    }
}

struct MarchResult {
    values: Vec<V3>,
    far: V3,
}

/// Raw march on nodes `0, stride, …` (requires `(len − 1) % stride == 0`).
fn march(
    data: &InitialData,
    k: C64,
    which: Eigenfunction,
    j: usize,
    stride: usize,
    keep: bool,
) -> Result<MarchResult> {
    let (q, l) = reduced_potential(k)?;
    let kappa = which.exponents(&l, j);
    let h = data.hx() * stride as f64;
    let sigma = which.sign();
    let mut p = [C64::new(0.0, 0.0); 3];
    let mut a = [C64::new(0.0, 0.0); 3];
    let mut b = [C64::new(0.0, 0.0); 3];
    for i in 0..3 {
        let w = kappa[i] * h;
        p[i] = w.exp();
        a[i] = phi2(w) * h;
        b[i] = p[i] * phi2(-w) * h;
    }
    let n_nodes = (data.len() - 1) / stride + 1;
    let node = |m: usize| -> usize {
        if which.backward() {
            (n_nodes - 1 - m) * stride
        } else {
            m * stride
        }
    };
    let (u0, v0, u0x) = (data.u0(), data.v0(), data.u0x());
    let row = |idx: usize| reduced_row(&l, u0[idx], u0x[idx], v0[idx]);
    let mut ej = V3::zeros();
    ej[j] = C64::new(1.0, 0.0);
    let apply = |r: &V3, f: &V3| -> V3 {
        if which.transposed() {
            r * q.dot(f)
        } else {
            q * r.dot(f)
        }
    };

    let mut values = if keep {
        vec![V3::zeros(); n_nodes]
    } else {
        Vec::new()
    };
    let mut f = ej;
    let mut jacc = V3::zeros();
    let mut g = apply(&row(node(0)), &f);
    if keep {
        values[if which.backward() { n_nodes - 1 } else { 0 }] = f;
    }
    for m in 1..n_nodes {
        let idx = node(m);
        let r = row(idx);
        let mut rhs = V3::zeros();
        for i in 0..3 {
            rhs[i] = ej[i] + sigma * (p[i] * jacc[i] + b[i] * g[i]);
        }
        let (vec_c, proj) = if which.transposed() { (r, q) } else { (q, r) };
        let c = V3::new(a[0] * vec_c[0], a[1] * vec_c[1], a[2] * vec_c[2]);
        let denom = C64::new(1.0, 0.0) - sigma * proj.dot(&c);
        let s = proj.dot(&rhs) / denom;
        f = rhs + c * (s * sigma);
        g = apply(&r, &f);
        jacc = (f - ej) * C64::from(sigma);
        if keep {
            values[idx / stride] = f;
        }
    }
    if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        let i = (0..3)
            .max_by(|&x, &y| kappa[x].re.total_cmp(&kappa[y].re))
            .unwrap();
        return Err(Error::UnboundedExponential {
            i: i + 1,
            j: j + 1,
            k,
        });
    }
    Ok(MarchResult { values, far: jacc })
}

/// Checks kernel growth for column `j` and returns the admissible exponents.
fn check_growth(
    data: &InitialData,
    k: C64,
    which: Eigenfunction,
    j: usize,
    policy: EntryPolicy,
) -> Result<[C64; 3]> {
    let (_, l) = reduced_potential(k)?;
    let kappa = which.exponents(&l, j);
    let span = data.x_max() - data.x_min();
    for (i, kap) in kappa.iter().enumerate() {
        let growth = kap.re;
        let bad = match policy {
            EntryPolicy::DomainOnly => growth > GROWTH_TOL * (1.0 + kap.norm()),
            EntryPolicy::CompactSupport => growth * span > EXP_LIMIT,
        };
        if bad {
            return Err(match policy {
                EntryPolicy::DomainOnly => Error::Undefined {
                    i: i + 1,
                    j: j + 1,
                    k,
                },
                EntryPolicy::CompactSupport => Error::UnboundedExponential {
                    i: i + 1,
                    j: j + 1,
                    k,
                },
            });
        }
    }
    Ok(kappa)
}

fn richardson(fine: &V3, coarse: &V3) -> V3 {
    fine.map(|z| z * 4.0 / 3.0) - coarse.map(|z| z / 3.0)
}

fn richardson_ok(data: &InitialData, cfg: &SolverConfig) -> bool {
    cfg.richardson && (data.len() - 1).is_multiple_of(2) && data.len() >= 17
}

/// Solves column `j` (1-based) of the requested eigenfunction.
pub fn solve_column(
    data: &InitialData,
    k: C64,
    which: Eigenfunction,
    j: usize,
    cfg: &SolverConfig,
) -> Result<EigenColumn> {
    column_impl(data, k, which, j, cfg, true)
}

pub(crate) fn column_impl(
    data: &InitialData,
    k: C64,
    which: Eigenfunction,
    j: usize,
    cfg: &SolverConfig,
    keep: bool,
) -> Result<EigenColumn> {
    if !(1..=3).contains(&j) {
        return Err(Error::InvalidInput(format!("column {j} is not in 1..=3")));
    }
    let j0 = j - 1;
    let kappa = check_growth(data, k, which, j0, cfg.policy)?;
    let (values, far, stride) = if richardson_ok(data, cfg) {
        let fine = march(data, k, which, j0, 1, keep)?;
        let coarse = march(data, k, which, j0, 2, keep)?;
        let values = if keep {
            coarse
                .values
                .iter()
                .enumerate()
                .map(|(m, c)| richardson(&fine.values[2 * m], c))
                .collect()
        } else {
            Vec::new()
        };
        (values, richardson(&fine.far, &coarse.far), 2)
    } else {
        let r = march(data, k, which, j0, 1, keep)?;
        (r.values, r.far, 1)
    };
    let mut scattering = [None; 3];
    if which.backward() {
        let x_far = data.x_min();
        for i in 0..3 {
            let expo = kappa[i] * x_far;
            let offdiag_ok = i == j0
                || cfg.policy == EntryPolicy::CompactSupport
                || kappa[i].re.abs() <= GROWTH_TOL * (1.0 + kappa[i].norm())
                || data.is_zero();
            if offdiag_ok && expo.re < EXP_LIMIT {
                let delta = if i == j0 { 1.0 } else { 0.0 };
                scattering[i] = Some(delta + which.sign() * expo.exp() * far[i]);
            }
        }
    }
    Ok(EigenColumn {
        values,
        stride,
        scattering,
    })
}

/// Solves every admissible column; inadmissible columns are `None`.
pub fn solve_volterra(
    data: &InitialData,
    k: C64,
    which: Eigenfunction,
    cfg: &SolverConfig,
) -> Result<EigenfunctionField> {
    if crate::spectral::dist_to_qhat(k) < crate::spectral::Q_EXCLUSION.max(TOL_CONTOUR) {
        return Err(Error::domain(k, "too close to Q̂"));
    }
    let mut columns: [Option<Vec<V3>>; 3] = [None, None, None];
    let mut stride = if richardson_ok(data, cfg) { 2 } else { 1 };
    for j in 1..=3 {
        match solve_column(data, k, which, j, cfg) {
            Ok(c) => {
                stride = c.stride;
                columns[j - 1] = Some(c.values);
            }
            Err(Error::Undefined { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(EigenfunctionField {
        which,
        stride,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi2_branches_agree() {
        for w in [
            C64::new(0.49, 0.1),
            C64::new(0.3, -0.38),
            C64::new(-0.4, 0.2),
        ] {
            let direct = (w.exp() - 1.0 - w) / (w * w);
            assert!((phi2(w) - direct).norm() < 1e-13);
        }
        assert!((phi2(C64::new(0.0, 0.0)) - 0.5).norm() < 1e-16);
    }

    #[test]
    fn zero_data_gives_identity() {
        let d = InitialData::zero();
        let k = C64::new(1.7, 0.2);
        for which in [
            Eigenfunction::X,
            Eigenfunction::XA,
            Eigenfunction::Y,
            Eigenfunction::YA,
        ] {
            let f = solve_volterra(&d, k, which, &SolverConfig::compact()).unwrap();
            for j in 1..=3 {
                let col = f.column(j).unwrap();
                for v in col {
                    for i in 0..3 {
                        let e = if i + 1 == j { 1.0 } else { 0.0 };
                        assert!((v[i] - e).norm() < 1e-15);
                    }
                }
            }
        }
    }
}
