//! Toric points of `P_d`: pairs of distinct nontrivial `n`-th roots of unity
//! with `n ∈ {d+1, d+2}`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{MahlerError, Result};
use crate::polynomials::{eval_pd, gauss_map, ComplexPoint, PdSpec};

/// Smallest `|Im γ|` accepted by [`check_regularity`].
pub const REGULARITY_THRESHOLD: f64 = 1e-8;

/// Largest `|P_d|` accepted at an enumerated point.
pub const TORIC_RESIDUAL_TOL: f64 = 1e-10;

/// `(x, y) = (e^{2πik/n}, e^{2πik'/n})` on the curve of `P_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToricPoint {
    pub modulus: u32,
    pub k: u32,
    pub k_prime: u32,
    pub d: u32,
}

impl ToricPoint {
    pub fn new(spec: PdSpec, k: u32, k_prime: u32, modulus: u32) -> Result<Self> {
        let d = spec.d();
        if modulus != d + 1 && modulus != d + 2 {
            return Err(MahlerError::Domain(format!(
                "modulus {modulus} is neither d+1 nor d+2 for d={d}"
            )));
        }
        if k == 0 || k_prime == 0 || k >= modulus || k_prime >= modulus || k == k_prime {
            return Err(MahlerError::Domain(format!(
                "({k}, {k_prime}) is not a pair of distinct nontrivial {modulus}-th roots"
            )));
        }
        Ok(ToricPoint {
            modulus,
            k,
            k_prime,
            d,
        })
    }

    pub fn spec(self) -> PdSpec {
        PdSpec::new(self.d).expect("toric point carries d ≥ 1")
    }

    pub fn x_angle(self) -> f64 {
        TAU * self.k as f64 / self.modulus as f64
    }

    pub fn y_angle(self) -> f64 {
        TAU * self.k_prime as f64 / self.modulus as f64
    }

    pub fn point(self) -> ComplexPoint {
        ComplexPoint::on_torus(self.x_angle(), self.y_angle())
    }

    pub fn swapped(self) -> Self {
        ToricPoint {
            k: self.k_prime,
            k_prime: self.k,
            ..self
        }
    }

    pub fn above_diagonal(self) -> bool {
        self.k < self.k_prime
    }

    /// True on `U_{d+1}`.
    pub fn in_lower_set(self) -> bool {
        self.modulus == self.d + 1
    }

    pub fn residual(self) -> f64 {
        eval_pd(self.spec(), self.point()).norm()
    }
}

/// The sign `ε` attached to a toric point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignEpsilon {
    Plus,
    Minus,
}

impl SignEpsilon {
    pub fn value(self) -> i32 {
        match self {
            SignEpsilon::Plus => 1,
            SignEpsilon::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn negated(self) -> Self {
        match self {
            SignEpsilon::Plus => SignEpsilon::Minus,
            SignEpsilon::Minus => SignEpsilon::Plus,
        }
    }
}

/// All toric points, ordered by modulus, then `k`, then `k'`.
pub fn enumerate_toric(spec: PdSpec) -> Vec<ToricPoint> {
    let d = spec.d();
    let mut out = Vec::with_capacity(toric_count(spec));
    for modulus in [d + 1, d + 2] {
        for k in 1..modulus {
            for k_prime in 1..modulus {
                if k != k_prime {
                    out.push(ToricPoint {
                        modulus,
                        k,
                        k_prime,
                        d,
                    });
                }
            }
        }
    }
    out
}

/// `d(d−1) + (d+1)d`.
pub fn toric_count(spec: PdSpec) -> usize {
    let d = spec.d() as usize;
    d * (d - 1) + (d + 1) * d
}

/// Grid coordinates `(k, k')`; above the diagonal iff `k < k'`.
pub fn omega(pt: ToricPoint) -> (u32, u32) {
    (pt.k, pt.k_prime)
}

pub fn epsilon(pt: ToricPoint) -> SignEpsilon {
    match (pt.in_lower_set(), pt.above_diagonal()) {
        (true, true) | (false, false) => SignEpsilon::Minus,
        (true, false) | (false, true) => SignEpsilon::Plus,
    }
}

/// One toric point with its sign and the imaginary part of `γ` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToricRecord {
    pub point: ToricPoint,
    pub epsilon: SignEpsilon,
    pub im_gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub d: u32,
    pub records: Vec<ToricRecord>,
    pub min_abs_im_gamma: f64,
    pub max_residual: f64,
}

/// Checks `|P_d| ≤ 1e-10`, `|Im γ| > 1e-8` and `ε = −sign(Im γ)` at every
/// toric point.
pub fn check_regularity(spec: PdSpec) -> Result<RegularityReport> {
    let pts = enumerate_toric(spec);
    let mut records = Vec::with_capacity(pts.len());
    let mut min_abs_im_gamma = f64::INFINITY;
    let mut max_residual = 0.0_f64;
    for pt in pts {
        let fail = |reason: String| MahlerError::Regularity {
            modulus: pt.modulus,
            k: pt.k,
            k_prime: pt.k_prime,
            reason,
        };
        let residual = pt.residual();
        if residual.is_nan() || residual > TORIC_RESIDUAL_TOL {
            return Err(fail(format!("|P_d| = {residual:e} exceeds {TORIC_RESIDUAL_TOL:e}")));
        }
        max_residual = max_residual.max(residual);
        let gamma = gauss_map(spec, pt.point()).map_err(|e| fail(e.to_string()))?;
        let im = gamma.value.im;
        if im.is_nan() || im.abs() <= REGULARITY_THRESHOLD {
            return Err(fail(format!("|Im γ| = {:e} is below threshold", im.abs())));
        }
        let eps = epsilon(pt);
        if eps.as_f64() != -im.signum() {
            return Err(fail(format!("ε = {} but Im γ = {im}", eps.value())));
        }
        min_abs_im_gamma = min_abs_im_gamma.min(im.abs());
        records.push(ToricRecord {
            point: pt,
            epsilon: eps,
            im_gamma: im,
        });
    }
    Ok(RegularityReport {
        d: spec.d(),
        records,
        min_abs_im_gamma,
        max_residual,
    })
}

/// `−x(1−y) / (y(1−x))`, the Gauss map on `U_{d+1}`.
pub fn gauss_map_lower(x: Complex64, y: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    -x * (one - y) / (y * (one - x))
}

/// `−(1−y) / (1−x)`, the Gauss map on `U_{d+2}`.
pub fn gauss_map_upper(x: Complex64, y: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    -(one - y) / (one - x)
}
