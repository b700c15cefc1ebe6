//! The family `P_d(x, y) = Σ_{0 ≤ i+j ≤ d} x^i y^j`, its derivatives, the
//! logarithmic Gauss map and univariate slices in `y`.

mod aberth;

pub use aberth::{roots, roots_from_guesses, RootFinder};

use num_complex::Complex64;

use crate::error::{MahlerError, Result};

/// The family parameter `d ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PdSpec {
    d: u32,
}

impl PdSpec {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(MahlerError::Domain("d must be at least 1".into()));
        }
        Ok(PdSpec { d })
    }

    pub fn d(self) -> u32 {
        self.d
    }

    pub fn monomial_count(self) -> usize {
        let d = self.d as usize;
        (d + 1) * (d + 2) / 2
    }
}

/// A point of `(ℂ*)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub x: Complex64,
    pub y: Complex64,
}

impl ComplexPoint {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        ComplexPoint { x, y }
    }

    /// `(e^{iθ}, e^{iφ})` on the unit torus.
    pub fn on_torus(theta: f64, phi: f64) -> Self {
        ComplexPoint {
            x: Complex64::from_polar(1.0, theta),
            y: Complex64::from_polar(1.0, phi),
        }
    }

    pub fn swapped(self) -> Self {
        ComplexPoint { x: self.y, y: self.x }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// `y ↦ P_d(x₀, y)`, coefficients in ascending powers of `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateSlice {
    coefficients: Vec<Complex64>,
}

impl UnivariateSlice {
    /// Builds a slice from ascending coefficients; the last one must be
    /// nonzero.
    pub fn from_coefficients(coefficients: Vec<Complex64>) -> Result<Self> {
        match coefficients.last() {
            Some(c) if c.norm() > 0.0 => Ok(UnivariateSlice { coefficients }),
            _ => Err(MahlerError::Domain(
                "slice needs a nonzero leading coefficient".into(),
            )),
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c)
    }

    pub fn max_coefficient_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Value of the logarithmic Gauss map `x ∂ₓP / (y ∂ᵧP)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMapValue {
    pub value: Complex64,
}

/// Prefix sums `g_m = Σ_{i ≤ m} x^i` for `m = 0..=d`.
fn geometric_prefix(d: usize, x: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(d + 1);
    let mut power = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for _ in 0..=d {
        acc += power;
        out.push(acc);
        power *= x;
    }
    out
}

/// Prefix sums `h_m = Σ_{1 ≤ i ≤ m} i x^{i−1}` for `m = 0..=d`.
fn derivative_prefix(d: usize, x: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(Complex64::new(0.0, 0.0));
    let mut power = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 1..=d {
        acc += power * i as f64;
        out.push(acc);
        power *= x;
    }
    out
}

/// `P_d(x, y)` as `Σ_j y^j g_{d−j}(x)`, Horner in `y`.
pub fn eval_pd(spec: PdSpec, p: ComplexPoint) -> Complex64 {
    let d = spec.d as usize;
    let g = geometric_prefix(d, p.x);
    (0..=d)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, j| acc * p.y + g[d - j])
}

/// `(∂ₓP_d, ∂ᵧP_d)` by direct monomial differentiation.
pub fn eval_partials(spec: PdSpec, p: ComplexPoint) -> (Complex64, Complex64) {
    let d = spec.d as usize;
    let g = geometric_prefix(d, p.x);
    let h = derivative_prefix(d, p.x);
    let zero = Complex64::new(0.0, 0.0);
    let dx = (0..=d).rev().fold(zero, |acc, j| acc * p.y + h[d - j]);
    let dy = (1..=d)
        .rev()
        .fold(zero, |acc, j| acc * p.y + g[d - j] * j as f64);
    (dx, dy)
}

/// `((x^{d+2} − 1)(y − 1) − (y^{d+2} − 1)(x − 1)) / ((x − 1)(y − 1)(x − y))`,
/// which equals `P_d` off the lines `x = 1`, `y = 1`, `x = y`.
pub fn eval_pd_rational(spec: PdSpec, p: ComplexPoint) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let e = spec.d as i32 + 2;
    let num = (p.x.powi(e) - one) * (p.y - one) - (p.y.powi(e) - one) * (p.x - one);
    num / ((p.x - one) * (p.y - one) * (p.x - p.y))
}

pub fn gauss_map(spec: PdSpec, p: ComplexPoint) -> Result<GaussMapValue> {
    let (dx, dy) = eval_partials(spec, p);
    let denom = p.y * dy;
    if denom.norm() == 0.0 {
        return Err(MahlerError::Singular(format!(
            "y ∂ᵧP_{} vanishes at ({}, {})",
            spec.d, p.x, p.y
        )));
    }
    Ok(GaussMapValue {
        value: p.x * dx / denom,
    })
}

/// Coefficients of `y ↦ P_d(x₀, y)`: the `y^j` coefficient is `Σ_{i ≤ d−j} x₀^i`.
pub fn y_slice(spec: PdSpec, x0: Complex64) -> UnivariateSlice {
    let d = spec.d as usize;
    let g = geometric_prefix(d, x0);
    let coefficients = (0..=d).map(|j| g[d - j]).collect();
    UnivariateSlice { coefficients }
}
