use crate::direct::Pole;
use crate::spectral::{dist_to_gamma, omega_pow, theta_unchecked, A_CAL, B_CAL};
use crate::{Error, Result, C64, M3};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

/// Which closed-form jump a circle is reduced to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum BaseJump {
    /// Around a complex `k0`.
    Q1,
    /// Around `k̄0` for a complex `k0`.
    Q7,
    /// Around a real `k0`.
    P1,
}

/// One small circle of `∂𝒟`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
    pub orientation: Orientation,
    /// Index of the generating pole.
    pub pole: usize,
    base: BaseJump,
    /// `v(k) = 𝒜ⁿ v(ωⁿk) 𝒜⁻ⁿ` with `ωⁿk` on the unrotated circle.
    rotation: u8,
    /// Image of a rotated circle under `k ↦ 1/k`.
    inverted: bool,
}

impl Circle {
    /// Point at angle `phi` (measured counterclockwise from the centre).
    pub fn point(&self, phi: f64) -> C64 {
        self.center + C64::from_polar(self.radius, phi)
    }
}

/// The union `∂𝒟` of circles around all pole images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSystem {
    pub epsilon: f64,
    pub circles: Vec<Circle>,
}

/// Exact image of the circle `|k − c| = r` under `k ↦ 1/k`.
fn invert_circle(c: C64, r: f64) -> (C64, f64) {
    let d = c.norm_sqr() - r * r;
    (c.conj() / d, r / d.abs())
}

fn build(poles: &[Pole], eps: f64) -> Vec<Circle> {
    let mut out = Vec::new();
    for (idx, p) in poles.iter().enumerate() {
        let bases: Vec<(C64, BaseJump)> = if p.k0.im == 0.0 {
            vec![(p.k0, BaseJump::P1)]
        } else {
            vec![(p.k0, BaseJump::Q1), (p.k0.conj(), BaseJump::Q7)]
        };
        for (b, base) in bases {
            for j in 0..3u8 {
                let center = omega_pow(j as i64) * b;
                let rotation = (3 - j) % 3;
                out.push(Circle {
                    center,
                    radius: eps,
                    orientation: Orientation::Counterclockwise,
                    pole: idx,
                    base,
                    rotation,
                    inverted: false,
                });
                let (ci, ri) = invert_circle(center, eps);
                out.push(Circle {
                    center: ci,
                    radius: ri,
                    orientation: Orientation::Clockwise,
                    pole: idx,
                    base,
                    rotation,
                    inverted: true,
                });
            }
        }
    }
    out
}

fn admissible(circles: &[Circle]) -> bool {
    circles.iter().enumerate().all(|(a, ca)| {
        dist_to_gamma(ca.center) > ca.radius
            && ca.center.norm() > ca.radius
            && circles[a + 1..]
                .iter()
                .all(|cb| (ca.center - cb.center).norm() > ca.radius + cb.radius)
    })
}

impl CircleSystem {
    /// Circles of radius `ε = min(0.1, d/3)`, with `d` the smallest distance
    /// between pole images and from them to `Γ`; `ε` is halved until the
    /// inverted images are disjoint as well.
    pub fn new(poles: &[Pole]) -> Result<Self> {
        let centers: Vec<C64> = build(poles, 0.0).iter().map(|c| c.center).collect();
        let mut d = f64::INFINITY;
        for (a, ca) in centers.iter().enumerate() {
            d = d.min(dist_to_gamma(*ca));
            for cb in &centers[a + 1..] {
                d = d.min((ca - cb).norm());
            }
        }
        if !(d > 1e-8) {
            return Err(Error::InvalidInput(
                "pole images coincide or lie on the contour".into(),
            ));
        }
        let mut eps = (d / 3.0).min(0.1);
        for _ in 0..60 {
            let circles = build(poles, eps);
            if admissible(&circles) {
                return Ok(Self {
                    epsilon: eps,
                    circles,
                });
            }
            eps *= 0.5;
        }
        Err(Error::InvalidInput("no admissible circle radius".into()))
    }

    /// The circle passing through `k`, if any.
    pub fn circle_through(&self, k: C64, tol: f64) -> Option<&Circle> {
        self.circles
            .iter()
            .find(|c| ((k - c.center).norm() - c.radius).abs() <= tol * (1.0 + c.radius))
    }
}

/// The jump on the unrotated, uninverted circle.
fn base_jump(p: &Pole, base: BaseJump, x: f64, t: f64, k: C64) -> M3 {
    let (w, w2) = (omega_pow(1), omega_pow(2));
    let (k0, c) = (p.k0, p.c);
    let mut m = M3::identity();
    match base {
        BaseJump::Q1 => {
            let cc = c * (-theta_unchecked(3, 1, x, t, k0)).exp();
            m[(0, 2)] = -cc / (k - k0) * (k * k - w) / (k0 * k0 - w);
        }
        BaseJump::P1 => {
            let e = c * (-theta_unchecked(2, 1, x, t, k0)).exp();
            m[(0, 1)] = -e / (k - k0) * (k * k - w) / (k0 * k0 - w);
        }
        BaseJump::Q7 => {
            let kb = k0.conj();
            let dd = c.conj() * theta_unchecked(3, 2, x, t, kb).exp();
            m[(2, 1)] = -dd / (k - kb) * (k * k - 1.0) / (w2 * (w2 - kb * kb));
        }
    }
    m
}

/// Jump matrix on the circle `circle` at a point `k` of it.
pub fn build_circle_jump(poles: &[Pole], circle: &Circle, x: f64, t: f64, k: C64) -> Result<M3> {
    if ((k - circle.center).norm() - circle.radius).abs() > 1e-8 * (1.0 + circle.radius) {
        return Err(Error::domain(k, "not on the named circle"));
    }
    let p = poles
        .get(circle.pole)
        .ok_or_else(|| Error::InvalidInput(format!("no pole with index {}", circle.pole)))?;
    let kr = if circle.inverted { k.inv() } else { k };
    let n = circle.rotation as i64;
    let mut a_n = M3::identity();
    for _ in 0..n {
        a_n *= A_CAL;
    }
    let a_inv = a_n.transpose();
    let v = a_n * base_jump(p, circle.base, x, t, omega_pow(n) * kr) * a_inv;
    if circle.inverted {
        let vi = v.try_inverse().expect("unipotent");
        Ok(B_CAL * vi * B_CAL)
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::soliton::residue_for_shift;
    use crate::spectral::r_matrix;
    use std::f64::consts::PI;

    fn poles() -> Vec<Pole> {
        vec![
            Pole {
                k0: C64::new(2.0, 0.0),
                c: residue_for_shift(2.0, 0.5).unwrap(),
            },
            Pole {
                k0: C64::from_polar(2.0, PI / 12.0),
                c: C64::new(0.4, -0.2),
            },
        ]
    }

    #[test]
    fn circle_counts_and_disjointness() {
        let sys = CircleSystem::new(&poles()).unwrap();
        assert_eq!(sys.circles.len(), 6 + 12);
        assert!(sys.epsilon > 0.0 && sys.epsilon <= 0.1);
        assert!(admissible(&sys.circles));
    }

    #[test]
    fn zero_constant_gives_identity() {
        let ps = vec![Pole {
            k0: C64::new(3.0, 0.0),
            c: C64::new(0.0, 0.0),
        }];
        let sys = CircleSystem::new(&ps).unwrap();
        for c in &sys.circles {
            let v = build_circle_jump(&ps, c, 0.1, 0.2, c.point(0.7)).unwrap();
            assert_eq!(v, M3::identity());
        }
    }

    #[test]
    fn unipotent_with_unit_determinant() {
        let ps = poles();
        let sys = CircleSystem::new(&ps).unwrap();
        for c in &sys.circles {
            for phi in [0.0, 1.3, 4.0] {
                let v = build_circle_jump(&ps, c, 0.3, 0.4, c.point(phi)).unwrap();
                let n = v - M3::identity();
                assert!(max_abs(&(n * n)) < 1e-12 * (1.0 + max_abs(&n)));
                assert!((v.determinant() - 1.0).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn r_symmetry_on_real_pole_circle() {
        let ps = poles();
        let sys = CircleSystem::new(&ps).unwrap();
        let base = sys.circles[0];
        assert_eq!(base.center, C64::new(2.0, 0.0));
        for phi in [0.4, 1.9, 3.0] {
            let k = base.point(phi);
            let v = build_circle_jump(&ps, &base, 0.2, 0.1, k).unwrap();
            let vb = build_circle_jump(&ps, &base, 0.2, 0.1, k.conj()).unwrap();
            let lhs = vb.try_inverse().unwrap().conjugate().transpose();
            let r = r_matrix(k).unwrap();
            let rhs = r.try_inverse().unwrap() * v * r;
            assert!(max_abs(&(lhs - rhs)) < 1e-10, "phi = {phi}");
        }
    }

    #[test]
    fn residue_recovered_by_contour_integral() {
        let ps = poles();
        let sys = CircleSystem::new(&ps).unwrap();
        let base = sys
            .circles
            .iter()
            .find(|c| c.base == BaseJump::Q1 && c.rotation == 0 && !c.inverted)
            .unwrap();
        let (x, t) = (0.5, 0.25);
        let n = 256;
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..n {
            let phi = 2.0 * PI * m as f64 / n as f64;
            let k = base.point(phi);
            let dk = C64::i() * (k - base.center) * (2.0 * PI / n as f64);
            acc += build_circle_jump(&ps, base, x, t, k).unwrap()[(0, 2)] * dk;
        }
        let got = -acc / (2.0 * PI * C64::i());
        let p = ps[1];
        let expect = p.c * (-theta_unchecked(3, 1, x, t, p.k0)).exp();
        assert!((got - expect).norm() < 1e-8 * expect.norm());
    }
}
