//! The volume function `V` of `P_d` and the two-angle function
//! `vol(θ, α) = Cl₂(θ) + Cl₂(α) − Cl₂(θ + α)` on the triangle
//! `T = {θ, α ≥ 0, θ + α ≤ 2π}`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{MahlerError, Result};
use crate::polynomials::{ComplexPoint, PdSpec};
use crate::specfun::{bloch_wigner, cl2};

/// Allowed deviation of `|x|`, `|y|` from 1 for torus-only entry points.
pub const TORUS_TOL: f64 = 1e-12;

/// Slack on `θ + α ≤ 2π` so that points built as `(θ, 2π − θ)` are accepted.
const EDGE_SLACK: f64 = 4.0 * f64::EPSILON * TAU;

/// A point of the closed triangle `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrianglePoint {
    theta: f64,
    alpha: f64,
}

impl TrianglePoint {
    pub fn new(theta: f64, alpha: f64) -> Result<Self> {
        let inside = theta.is_finite()
            && alpha.is_finite()
            && theta >= 0.0
            && alpha >= 0.0
            && theta + alpha <= TAU + EDGE_SLACK;
        if inside {
            Ok(TrianglePoint { theta, alpha })
        } else {
            Err(MahlerError::Domain(format!(
                "({theta}, {alpha}) lies outside the triangle θ, α ≥ 0, θ + α ≤ 2π"
            )))
        }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn swapped(self) -> Self {
        TrianglePoint {
            theta: self.alpha,
            alpha: self.theta,
        }
    }

    /// True when θ, α and θ + α all lie in the open interval `(0, 2π)`.
    pub fn is_interior(self) -> bool {
        self.theta > 0.0 && self.alpha > 0.0 && self.theta + self.alpha < TAU
    }

    fn require_interior(self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(MahlerError::Domain(format!(
                "({}, {}) is on the boundary of T",
                self.theta, self.alpha
            )))
        }
    }
}

/// Symmetric 2×2 matrix of second derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hessian2 {
    pub h11: f64,
    pub h12: f64,
    pub h21: f64,
    pub h22: f64,
}

impl Hessian2 {
    pub fn determinant(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h21
    }

    pub fn trace(&self) -> f64 {
        self.h11 + self.h22
    }
}

fn check_torus(p: &ComplexPoint, need_y: bool) -> Result<()> {
    let off = |z: Complex64| (z.norm() - 1.0).abs() > TORUS_TOL || !z.is_finite();
    if off(p.x) || (need_y && off(p.y)) {
        return Err(MahlerError::Domain(format!(
            "({}, {}) is not on the unit torus",
            p.x, p.y
        )));
    }
    Ok(())
}

/// `V` at torus angles `x = e^{iφ}`, `y = e^{iψ}`.
pub fn volume_v_angles(spec: PdSpec, phi: f64, psi: f64) -> f64 {
    let d = spec.d() as f64;
    let first = cl2((d + 1.0) * psi) - cl2((d + 1.0) * phi) - cl2((d + 1.0) * (psi - phi));
    let second = cl2(phi) - cl2(psi) - cl2(phi - psi);
    first / ((d + 1.0) * (d + 2.0)) + second / (d + 2.0)
}

/// Volume function of `P_d` on the unit torus, `d ≥ 2`.
pub fn volume_v(spec: PdSpec, p: ComplexPoint) -> Result<f64> {
    if spec.d() < 2 {
        return Err(MahlerError::Domain(
            "the two-bracket volume function is stated for d ≥ 2; use volume_v1".into(),
        ));
    }
    check_torus(&p, true)?;
    Ok(volume_v_angles(spec, p.x.arg(), p.y.arg()))
}

/// Volume function of `P_1 = 1 + x + y`: `−D(−x)`.
pub fn volume_v1(p: ComplexPoint) -> Result<f64> {
    check_torus(&p, false)?;
    Ok(-cl2(p.x.arg() + PI))
}

/// The volume function at arbitrary `(x, y) ∈ (ℂ*)²`, any `d ≥ 1`:
///
/// ```text
/// V = [D(y^{d+1}) − D(x^{d+1}) − D((y/x)^{d+1})] / ((d+1)(d+2))
///   + [D(x) − D(y) − D(x/y)] / (d+2)
/// ```
pub fn volume_function(spec: PdSpec, p: ComplexPoint) -> f64 {
    let e = spec.d() as i32 + 1;
    let d = spec.d() as f64;
    let ratio = p.y / p.x;
    let first = bloch_wigner(p.y.powi(e)) - bloch_wigner(p.x.powi(e)) - bloch_wigner(ratio.powi(e));
    let second = bloch_wigner(p.x) - bloch_wigner(p.y) - bloch_wigner(p.x / p.y);
    first / ((d + 1.0) * (d + 2.0)) + second / (d + 2.0)
}

/// `vol(θ, α) = Cl₂(θ) + Cl₂(α) − Cl₂(θ + α)`.
pub fn vol(p: TrianglePoint) -> f64 {
    vol_unchecked(p.theta, p.alpha)
}

pub(crate) fn vol_unchecked(theta: f64, alpha: f64) -> f64 {
    cl2(theta) + cl2(alpha) - cl2(theta + alpha)
}

/// `log|1 − e^{iφ}| = log(2 sin(φ/2))` for `φ ∈ (0, 2π)`.
fn log_chord(phi: f64) -> f64 {
    (2.0 * (0.5 * phi).sin()).ln()
}

fn half_cot(phi: f64) -> f64 {
    0.5 / (0.5 * phi).tan()
}

pub fn vol_gradient(p: TrianglePoint) -> Result<(f64, f64)> {
    p.require_interior()?;
    let s = log_chord(p.theta + p.alpha);
    Ok((s - log_chord(p.theta), s - log_chord(p.alpha)))
}

/// Closed-form Hessian; its determinant is identically `1/4` on the interior.
pub fn vol_hessian(p: TrianglePoint) -> Result<Hessian2> {
    p.require_interior()?;
    let cs = half_cot(p.theta + p.alpha);
    Ok(Hessian2 {
        h11: cs - half_cot(p.theta),
        h12: cs,
        h21: cs,
        h22: cs - half_cot(p.alpha),
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::toric::enumerate_toric;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    const CL2_2PI_3: f64 = 0.676_627_737_606_435_750_01;

    fn spec(d: u32) -> PdSpec {
        PdSpec::new(d).unwrap()
    }

    fn tp(theta: f64, alpha: f64) -> TrianglePoint {
        TrianglePoint::new(theta, alpha).unwrap()
    }

    /// Uniform interior point at distance ≥ `margin` from ∂T.
    fn interior_sample(rng: &mut StdRng, margin: f64) -> TrianglePoint {
        loop {
            let t = rng.gen_range(margin..TAU - 2.0 * margin);
            let a = rng.gen_range(margin..TAU - 2.0 * margin);
            if t + a <= TAU - margin {
                return tp(t, a);
            }
        }
    }

    #[test]
    fn triangle_membership() {
        assert!(TrianglePoint::new(0.0, 0.0).is_ok());
        assert!(TrianglePoint::new(1.0, TAU - 1.0).is_ok());
        assert!(TrianglePoint::new(-1e-3, 1.0).is_err());
        assert!(TrianglePoint::new(4.0, 4.0).is_err());
        assert!(TrianglePoint::new(f64::NAN, 1.0).is_err());
        assert!(!tp(0.0, 1.0).is_interior());
        assert!(tp(1.0, 1.0).is_interior());
    }

    #[test]
    fn vol_examples() {
        assert!(vol(tp(0.0, 1.3)).abs() <= 1e-15);
        let v = vol(tp(TAU / 3.0, TAU / 3.0));
        assert!((v - 3.0 * CL2_2PI_3).abs() <= 1e-13);
        assert!((v - 2.03).abs() < 0.005);
        for k in 0..50 {
            let t = TAU * k as f64 / 50.0;
            assert!(vol(tp(t, TAU - t)).abs() <= 1e-12);
        }
    }

    #[test]
    fn boundary_vanishing() {
        // 1000 points spread over the three edges
        let mut worst = 0.0_f64;
        for i in 0..1000 {
            let s = TAU * (i as f64 + 0.5) / 1000.0;
            let p = match i % 3 {
                0 => tp(0.0, s),
                1 => tp(s, 0.0),
                _ => tp(s, TAU - s),
            };
            worst = worst.max(vol(p).abs());
        }
        assert!(worst <= 1e-11, "worst = {worst:e}");
    }

    #[test]
    fn interior_positivity_grid() {
        let n = 300;
        let h = TAU / (n as f64 + 1.0);
        let mut min = f64::INFINITY;
        for i in 1..=n {
            for j in 1..=n {
                let (t, a) = (i as f64 * h, j as f64 * h);
                if t + a < TAU {
                    min = min.min(vol(tp(t, a)));
                }
            }
        }
        assert!(min >= -1e-12, "min = {min:e}");
    }

    #[test]
    fn gradient_examples() {
        let (gt, ga) = vol_gradient(tp(TAU / 3.0, TAU / 3.0)).unwrap();
        assert!(gt.abs() <= 1e-14 && ga.abs() <= 1e-14);
        let (gt, _) = vol_gradient(tp(PI, PI / 2.0)).unwrap();
        assert!((gt - (2.0_f64.sqrt().ln() - 2.0_f64.ln())).abs() <= 1e-14);
        let (a, b) = vol_gradient(tp(0.7, 2.1)).unwrap();
        let (c, e) = vol_gradient(tp(2.1, 0.7)).unwrap();
        assert_eq!((a, b), (e, c));
        assert!(vol_gradient(tp(0.0, 1.0)).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(5);
        let h = 1e-6;
        for _ in 0..200 {
            let p = interior_sample(&mut rng, 0.1);
            let (t, a) = (p.theta(), p.alpha());
            let (gt, ga) = vol_gradient(p).unwrap();
            let ft = (vol_unchecked(t + h, a) - vol_unchecked(t - h, a)) / (2.0 * h);
            let fa = (vol_unchecked(t, a + h) - vol_unchecked(t, a - h)) / (2.0 * h);
            assert!((gt - ft).abs() <= 1e-5 && (ga - fa).abs() <= 1e-5);
        }
    }

    #[test]
    fn hessian_example_and_sign() {
        let hess = vol_hessian(tp(TAU / 3.0, TAU / 3.0)).unwrap();
        assert!((hess.h12 + 1.0 / (2.0 * 3.0_f64.sqrt())).abs() <= 1e-14);
        assert_eq!(hess.h12, hess.h21);
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..500 {
            let h = vol_hessian(interior_sample(&mut rng, 1e-3)).unwrap();
            assert!(h.h11 < 0.0 && h.h22 < 0.0);
        }
        assert!(vol_hessian(tp(1.0, TAU - 1.0)).is_err());
    }

    #[test]
    fn hessian_determinant_is_one_quarter() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..100 {
            let p = interior_sample(&mut rng, 0.05);
            let det = vol_hessian(p).unwrap().determinant();
            assert!((det - 0.25).abs() <= 1e-12, "det = {det} at {p:?}");
        }
    }

    #[test]
    fn hessian_matches_second_differences() {
        let mut rng = StdRng::seed_from_u64(6);
        let h = 1e-4;
        for _ in 0..200 {
            let p = interior_sample(&mut rng, 0.1);
            let (t, a) = (p.theta(), p.alpha());
            let f = vol_unchecked;
            let c = f(t, a);
            let ftt = (f(t + h, a) - 2.0 * c + f(t - h, a)) / (h * h);
            let faa = (f(t, a + h) - 2.0 * c + f(t, a - h)) / (h * h);
            let fta = (f(t + h, a + h) - f(t + h, a - h) - f(t - h, a + h) + f(t - h, a - h))
                / (4.0 * h * h);
            let hs = vol_hessian(p).unwrap();
            assert!((hs.h11 - ftt).abs() <= 1e-4);
            assert!((hs.h22 - faa).abs() <= 1e-4);
            assert!((hs.h12 - fta).abs() <= 1e-4);
        }
    }

    #[test]
    fn midpoint_concavity() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            // T is convex, so a segment between two points of T stays inside
            let a = interior_sample(&mut rng, 1e-3);
            let b = interior_sample(&mut rng, 1e-3);
            let m = tp(0.5 * (a.theta() + b.theta()), 0.5 * (a.alpha() + b.alpha()));
            assert!(vol(m) >= 0.5 * (vol(a) + vol(b)) - 1e-10);
        }
    }

    #[test]
    fn degree_two_on_lower_set() {
        let s = spec(2);
        for pt in enumerate_toric(s).into_iter().filter(|p| p.modulus == 3) {
            let p = pt.point();
            let expect = 0.25 * (cl2(pt.x_angle()) - cl2(pt.y_angle()) - cl2(pt.x_angle() - pt.y_angle()));
            assert!((volume_v(s, p).unwrap() - expect).abs() <= 1e-13);
        }
        for pt in enumerate_toric(s).into_iter().filter(|p| p.modulus == 4) {
            let p = pt.point();
            let expect = (cl2(pt.x_angle()) - cl2(pt.y_angle()) - cl2(pt.x_angle() - pt.y_angle())) / 3.0;
            assert!((volume_v(s, p).unwrap() - expect).abs() <= 1e-13);
        }
    }

    #[test]
    fn vanishes_on_diagonal() {
        for d in 2..=12 {
            for k in 0..20 {
                let phi = 0.31 * k as f64;
                let p = ComplexPoint::on_torus(phi, phi);
                assert!(volume_v(spec(d), p).unwrap().abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn domain_checks() {
        let off = ComplexPoint::new(Complex64::new(0.9, 0.0), Complex64::new(1.0, 0.0));
        assert!(volume_v(spec(3), off).is_err());
        assert!(volume_v1(off).is_err());
        assert!(volume_v(spec(1), ComplexPoint::on_torus(1.0, 2.0)).is_err());
    }

    #[test]
    fn degree_one_examples() {
        let v = volume_v1(ComplexPoint::on_torus(TAU / 3.0, 0.0)).unwrap();
        assert!((v - cl2(PI / 3.0)).abs() <= 1e-14);
        assert!(volume_v1(ComplexPoint::on_torus(0.0, 0.0)).unwrap().abs() <= 1e-15);
        assert!(volume_v1(ComplexPoint::on_torus(PI, 0.0)).unwrap().abs() <= 1e-15);
    }

    #[test]
    fn degree_one_forms_agree_on_toric_points() {
        let s = spec(1);
        for pt in enumerate_toric(s) {
            let general = volume_function(s, pt.point());
            let special = volume_v1(pt.point()).unwrap();
            assert!((general - special).abs() <= 1e-12);
        }
    }

    #[test]
    fn toric_bridge_to_vol() {
        for d in 2..=20 {
            let s = spec(d);
            let df = d as f64;
            for pt in enumerate_toric(s).into_iter().filter(|p| p.above_diagonal()) {
                let n = pt.modulus as f64;
                let factor = if pt.in_lower_set() { 1.0 / (df + 2.0) } else { 1.0 / (df + 1.0) };
                let step = TAU / n;
                let w = factor
                    * vol(tp(pt.k as f64 * step, (pt.k_prime - pt.k) as f64 * step));
                let v = volume_v(s, pt.point()).unwrap();
                assert!((v - w).abs() <= 1e-10, "{pt:?}");
                let vs = volume_v(s, pt.swapped().point()).unwrap();
                assert!((vs + w).abs() <= 1e-10, "{pt:?}");
            }
        }
    }

    #[test]
    fn complex_form_matches_torus_form() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let d = rng.gen_range(2..=10);
            let p = ComplexPoint::on_torus(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let a = volume_v(spec(d), p).unwrap();
            let b = volume_function(spec(d), p);
            assert!((a - b).abs() <= 1e-11);
        }
    }
}
