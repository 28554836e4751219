use super::{sample_field, FieldSource, Grid, Regularity, SolitonSpec, SolutionField, N3};
use crate::direct::Pole;
use crate::linalg::DenseSolve;
use crate::spectral::{l_unchecked, omega_pow, z_unchecked};
use crate::{Error, Result, C64};
use nalgebra::{DMatrix, DVector};

/// Largest condition number accepted for the residue system.
pub const MAX_COND: f64 = 1e12;

/// Terms with `Re ln ρ` below this contribute nothing representable.
const LOG_DROP: f64 = -650.0;

/// One simple pole of the row solution: `Res_p n_col = ρ(x,t) n_pc(p)`.
#[derive(Debug, Clone, Copy)]
struct Term {
    p: C64,
    col: usize,
    pc: usize,
    log_coef: C64,
    sx: C64,
    st: C64,
}

/// Locations, columns and symmetry factors of the six images of a pole `p`.
///
/// `cols[m]` and `pcs[m]` belong to the image `m` in the order
/// `p, ωp, ω²p, 1/p, ω²/p, ω/p`.
fn orbit(p: C64, cols: [usize; 6], pcs: [usize; 6]) -> [(C64, usize, usize, C64); 6] {
    let (w, w2) = (omega_pow(1), omega_pow(2));
    let pi = p.inv();
    let pi2 = pi * pi;
    let loc = [p, w * p, w2 * p, pi, w2 * pi, w * pi];
    let kappa = [C64::new(1.0, 0.0), w, w2, -pi2, -w2 * pi2, -w * pi2];
    std::array::from_fn(|m| (loc[m], cols[m], pcs[m], kappa[m]))
}

/// The residue system of a pure-soliton row problem.
#[derive(Debug, Clone)]
pub struct PoleSystem {
    terms: Vec<Term>,
}

impl PoleSystem {
    /// Assembles six terms per real pole and twelve per complex pole.
    pub fn new(spec: &SolitonSpec) -> Result<Self> {
        spec.classify()?;
        let mut terms = Vec::new();
        let mut push = |p: C64, coef: C64, sx: C64, st: C64, cols, pcs| {
            for (loc, col, pc, kappa) in orbit(p, cols, pcs) {
                terms.push(Term {
                    p: loc,
                    col,
                    pc,
                    log_coef: (kappa * coef).ln(),
                    sx,
                    st,
                });
            }
        };
        for pole in &spec.poles {
            let (k0, c) = (pole.k0, pole.c);
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            if k0.im == 0.0 {
                let sx = l_unchecked(1, k0) - l_unchecked(2, k0);
                let st = z_unchecked(1, k0) - z_unchecked(2, k0);
                push(k0, c, sx, st, [2, 1, 3, 1, 2, 3], [1, 3, 2, 2, 3, 1]);
            } else {
                let sx = l_unchecked(1, k0) - l_unchecked(3, k0);
                let st = z_unchecked(1, k0) - z_unchecked(3, k0);
                push(k0, c, sx, st, [3, 2, 1, 3, 1, 2], [1, 3, 2, 2, 3, 1]);
                let kb = k0.conj();
                let d = Pole { k0, c }.d().expect("complex pole");
                let sx = l_unchecked(3, kb) - l_unchecked(2, kb);
                let st = z_unchecked(3, kb) - z_unchecked(2, kb);
                push(kb, d, sx, st, [2, 1, 3, 1, 2, 3], [3, 2, 1, 3, 1, 2]);
            }
        }
        for (a, ta) in terms.iter().enumerate() {
            for tb in &terms[a + 1..] {
                if (ta.p - tb.p).norm() < 1e-8 {
                    return Err(Error::InvalidInput(format!(
                        "pole images {} and {} coincide",
                        ta.p, tb.p
                    )));
                }
            }
        }
        Ok(Self { terms })
    }

    /// Number of scalar unknowns.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `n₃^(1)` and its exact `x` and `t` derivatives at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<N3> {
        let zero = C64::new(0.0, 0.0);
        let active: Vec<(&Term, C64)> = self
            .terms
            .iter()
            .map(|tm| (tm, tm.log_coef + tm.sx * x + tm.st * t))
            .filter(|(_, lr)| lr.re >= LOG_DROP)
            .collect();
        let n = active.len();
        if n == 0 {
            return Ok((zero, zero, zero));
        }
        // (Λ − G0) m = 1 with Λ = diag(1/ρ) and G0_ab = [col_b = pc_a]/(p_a − p_b).
        let inv_rho: Vec<C64> = active.iter().map(|(_, lr)| (-lr).exp()).collect();
        let mut a = DMatrix::from_element(n, n, zero);
        for (i, (ti, _)) in active.iter().enumerate() {
            a[(i, i)] = inv_rho[i];
            for (j, (tj, _)) in active.iter().enumerate() {
                if i != j && tj.col == ti.pc {
                    a[(i, j)] = -(ti.p - tj.p).inv();
                }
            }
        }
        let lu = DenseSolve::new(a)?;
        if lu.cond > MAX_COND {
            return Err(Error::NearSingular { cond: lu.cond });
        }
        let m = lu.solve(&DVector::from_element(n, C64::new(1.0, 0.0)));
        let rhs = |dir: fn(&Term) -> C64| {
            DVector::from_iterator(n, (0..n).map(|i| dir(active[i].0) * inv_rho[i] * m[i]))
        };
        let mx = lu.solve(&rhs(|tm| tm.sx));
        let mt = lu.solve(&rhs(|tm| tm.st));
        let third = |v: &DVector<C64>| -> C64 {
            (0..n).filter(|&i| active[i].0.col == 3).map(|i| v[i]).sum()
        };
        Ok((third(&m), third(&mx), third(&mt)))
    }
}

/// Samples the pure-soliton solution with the given poles and residue constants.
pub fn n_soliton(spec: &SolitonSpec, grid: Grid) -> Result<SolutionField> {
    let sys = PoleSystem::new(spec)?;
    let mut field = sample_field(grid, FieldSource::NSoliton, |x, t| sys.eval(x, t))?;
    let classes = spec.classify()?;
    let regular = classes.iter().all(|c| c.regularity != Regularity::Singular);
    field
        .metadata
        .insert("poles".into(), spec.poles.len() as f64);
    field
        .metadata
        .insert("regular".into(), if regular { 1.0 } else { 0.0 });
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::{one_soliton, residue_for_shift, PoleSpec};

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn empty_spec_is_zero() {
        let g = Grid::new((-5.0, 5.0, 11), (0.0, 0.0, 1)).unwrap();
        let f = n_soliton(&SolitonSpec::default(), g).unwrap();
        assert!(f.u.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn real_pole_matches_closed_form() {
        let g = Grid::new((-20.0, 20.0, 801), (0.0, 1.0, 3)).unwrap();
        for (k0, x0) in [(2.0, 1.5), (3.0, -2.0), (-0.5, 0.7)] {
            let c = residue_for_shift(k0, x0).unwrap();
            let exact = one_soliton(k0, c, g).unwrap();
            let spec = SolitonSpec::single(C64::from(k0), c);
            let f = n_soliton(&spec, g).unwrap();
            assert!(f.max_imag < 1e-9, "k0 = {k0}: imag {}", f.max_imag);
            let err = max_diff(&f.u, &exact.u);
            assert!(err < 1e-8, "k0 = {k0}: u error {err}");
            let err = max_diff(f.v.as_ref().unwrap(), exact.v.as_ref().unwrap());
            assert!(err < 1e-8, "k0 = {k0}: v error {err}");
        }
    }

    #[test]
    fn term_order_is_irrelevant() {
        let c = residue_for_shift(2.0, 0.0).unwrap();
        let a = PoleSystem::new(&SolitonSpec::single(C64::from(2.0), c)).unwrap();
        let mut b = a.clone();
        b.terms.reverse();
        let (p, q) = (a.eval(0.7, 0.2).unwrap(), b.eval(0.7, 0.2).unwrap());
        assert!((p.1 - q.1).norm() < 1e-12);
    }

    #[test]
    fn coincident_poles_rejected() {
        let c = residue_for_shift(2.0, 0.0).unwrap();
        let spec = SolitonSpec::new(vec![
            PoleSpec {
                k0: C64::from(2.0),
                c
            };
            2
        ]);
        assert!(matches!(
            PoleSystem::new(&spec),
            Err(Error::InvalidInput(_))
        ));
    }
}
