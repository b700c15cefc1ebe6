//! Simultaneous root finding by Aberth–Ehrlich iteration.

use num_complex::Complex64;

use super::UnivariateSlice;
use crate::error::{MahlerError, Result};

/// Iteration settings for [`roots`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFinder {
    pub max_iter: usize,
    /// Convergence threshold on the largest Aberth correction, relative to
    /// `max(1, |root|)`.
    pub step_tol: f64,
    /// Accepted backward residual, see [`RootFinder::residual_bound`].
    pub residual_tol: f64,
}

impl Default for RootFinder {
    fn default() -> Self {
        RootFinder {
            max_iter: 200,
            step_tol: 1e-13,
            residual_tol: 1e-10,
        }
    }
}

impl RootFinder {
    /// Largest `|p(z)|` accepted at a root `z`:
    /// `residual_tol · (1 + max|c|) · max(1, |z|)^deg`.
    pub fn residual_bound(&self, slice: &UnivariateSlice, z: Complex64) -> f64 {
        let growth = z.norm().max(1.0).powi(slice.degree() as i32);
        self.residual_tol * (1.0 + slice.max_coefficient_norm()) * growth
    }

    pub fn solve(&self, slice: &UnivariateSlice) -> Result<Vec<Complex64>> {
        let guesses = initial_guesses(slice);
        self.solve_from(slice, guesses)
    }

    /// Runs the iteration from caller-supplied starting points, one per root.
    pub fn solve_from(
        &self,
        slice: &UnivariateSlice,
        mut z: Vec<Complex64>,
    ) -> Result<Vec<Complex64>> {
        let n = slice.degree();
        if n == 0 {
            return Err(MahlerError::Domain("slice of degree 0 has no roots".into()));
        }
        if z.len() != n {
            return Err(MahlerError::Domain(format!(
                "expected {n} starting points, got {}",
                z.len()
            )));
        }
        let c = slice.coefficients();
        if n == 1 {
            return Ok(vec![-c[0] / c[1]]);
        }
        let deriv: Vec<Complex64> = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| ck * k as f64)
            .collect();

        let mut iterations = 0;
        while iterations < self.max_iter {
            iterations += 1;
            let mut worst = 0.0_f64;
            for i in 0..n {
                let zi = z[i];
                let p = horner(c, zi);
                if p.norm() == 0.0 {
                    continue;
                }
                let dp = horner(&deriv, zi);
                let mut repulsion = Complex64::new(0.0, 0.0);
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        let gap = zi - zj;
                        if gap.norm() > 0.0 {
                            repulsion += gap.inv();
                        }
                    }
                }
                let newton = if dp.norm() > 0.0 {
                    p / dp
                } else {
                    // stationary point of p: nudge off it
                    Complex64::new(1e-8 * zi.norm().max(1.0), 0.0)
                };
                let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
                if !step.is_finite() {
                    continue;
                }
                z[i] = zi - step;
                worst = worst.max(step.norm() / zi.norm().max(1.0));
            }
            if worst < self.step_tol {
                break;
            }
        }

        let worst_residual = z
            .iter()
            .map(|&zi| {
                let growth = zi.norm().max(1.0).powi(n as i32);
                horner(c, zi).norm() / ((1.0 + slice.max_coefficient_norm()) * growth)
            })
            .fold(0.0, f64::max);
        if worst_residual.is_finite() && worst_residual <= self.residual_tol {
            Ok(z)
        } else {
            Err(MahlerError::RootNonConvergence {
                iterations,
                worst_residual,
            })
        }
    }
}

/// All roots of the slice with multiplicity, default settings.
pub fn roots(slice: &UnivariateSlice) -> Result<Vec<Complex64>> {
    RootFinder::default().solve(slice)
}

/// All roots, starting the iteration from `guesses` (warm start).
pub fn roots_from_guesses(
    slice: &UnivariateSlice,
    guesses: Vec<Complex64>,
) -> Result<Vec<Complex64>> {
    RootFinder::default().solve_from(slice, guesses)
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, ck| acc * z + ck)
}

/// Points on a circle whose radius is the Fujiwara bound
/// `2 max_k |c_{n−k}/c_n|^{1/k}`, rotated off the real axis.
fn initial_guesses(slice: &UnivariateSlice) -> Vec<Complex64> {
    let c = slice.coefficients();
    let n = slice.degree();
    let lead = c[n].norm();
    let mut bound = 0.0_f64;
    for k in 1..=n {
        let ratio = c[n - k].norm() / lead;
        let root = if k == n { ratio / 2.0 } else { ratio };
        bound = bound.max(root.powf(1.0 / k as f64));
    }
    let radius = if bound > 0.0 { 2.0 * bound } else { 1.0 };
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.7;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{y_slice, PdSpec};
    use rand::{rngs::StdRng, Rng, SeedableRng};
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn slice(coeffs: &[Complex64]) -> UnivariateSlice {
        UnivariateSlice::from_coefficients(coeffs.to_vec()).unwrap()
    }

    fn contains(roots: &[Complex64], target: Complex64, tol: f64) -> bool {
        roots.iter().any(|r| (r - target).norm() <= tol)
    }

    #[test]
    fn cyclotomic_three() {
        let r = roots(&slice(&[c(1.0, 0.0); 3])).unwrap();
        assert_eq!(r.len(), 2);
        assert!(contains(&r, Complex64::from_polar(1.0, 2.0 * PI / 3.0), 1e-12));
        assert!(contains(&r, Complex64::from_polar(1.0, 4.0 * PI / 3.0), 1e-12));
    }

    #[test]
    fn linear_slice_at_zero() {
        let r = roots(&slice(&[c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert_eq!(r, vec![c(0.0, 0.0)]);
    }

    #[test]
    fn toric_point_lies_on_slice() {
        let spec = PdSpec::new(5).unwrap();
        let x0 = Complex64::from_polar(1.0, TAU * 2.0 / 6.0);
        let r = roots(&y_slice(spec, x0)).unwrap();
        assert!(contains(&r, Complex64::from_polar(1.0, TAU * 4.0 / 6.0), 1e-8));
    }

    #[test]
    fn residuals_within_bound() {
        let spec = PdSpec::new(6).unwrap();
        for k in 0..40 {
            let x0 = Complex64::from_polar(1.0, k as f64 * 0.157);
            let s = y_slice(spec, x0);
            for z in roots(&s).unwrap() {
                assert!(s.eval(z).norm() <= 1e-10 * (1.0 + s.max_coefficient_norm()));
            }
        }
    }

    #[test]
    fn deterministic_for_identical_input() {
        let s = y_slice(PdSpec::new(9).unwrap(), c(0.3, -0.8));
        assert_eq!(roots(&s).unwrap(), roots(&s).unwrap());
    }

    #[test]
    fn double_root_within_residual() {
        // (y − 0.5)² (y + 2)
        let s = slice(&[c(0.5, 0.0), c(-1.75, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let r = roots(&s).unwrap();
        assert!(contains(&r, c(-2.0, 0.0), 1e-10));
        assert_eq!(r.iter().filter(|z| (**z - 0.5).norm() < 1e-6).count(), 2);
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let finder = RootFinder {
            max_iter: 1,
            ..RootFinder::default()
        };
        let s = y_slice(PdSpec::new(12).unwrap(), c(0.2, 0.9));
        match finder.solve(&s) {
            Err(MahlerError::RootNonConvergence { iterations, worst_residual }) => {
                assert_eq!(iterations, 1);
                assert!(worst_residual > 1e-10);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn re_expansion_matches_coefficients() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..60 {
            let deg = rng.gen_range(1..=15);
            let mut coeffs: Vec<Complex64> = (0..deg)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            coeffs.push(c(1.0, 0.0));
            let s = slice(&coeffs);
            let r = roots(&s).unwrap();
            assert_eq!(r.len(), deg);
            // expand Π (y − r_j) in ascending order
            let mut prod = vec![c(1.0, 0.0)];
            for root in &r {
                let mut next = vec![c(0.0, 0.0); prod.len() + 1];
                for (k, a) in prod.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * root;
                }
                prod = next;
            }
            let scale = s.max_coefficient_norm();
            for (a, b) in prod.iter().zip(coeffs.iter()) {
                assert!((a - b).norm() <= 1e-8 * scale, "deg={deg}");
            }
        }
    }
}
