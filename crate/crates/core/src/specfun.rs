//! Clausen function, Bloch–Wigner dilogarithm and ζ(3).
//!
//! `Cl₂(θ) = Σ sin(nθ)/n²` is evaluated after reduction to `[0, π]` by the
//! expansion
//!
//! ```text
//! Cl₂(θ) = θ − θ ln θ + θ Σ_{k≥1} ζ(2k) / (k (2k+1)) · (θ / 2π)^{2k}
//! ```
//!
//! which converges geometrically with ratio `(θ/2π)² ≤ 1/4` on that range.
//! The off-circle dilogarithm `D(z)` is only needed along curve paths; it is
//! evaluated by mapping `z` into `{|z| ≤ 1, Re z ≤ 1/2}` with `D(1/z) = −D(z)`
//! and `D(1 − z) = −D(z)`, where the Bernoulli series of `Li₂` in
//! `u = −ln(1 − z)` has `|u| < 1.3`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{MahlerError, Result};

/// Absolute error budget of one `Cl₂` evaluation.
pub const CLAUSEN_ABS_ERROR: f64 = 1e-14;

/// Bound on `|Cl₂|`, attained at `θ = π/3`.
pub const CLAUSEN_MAX: f64 = 1.014_941_606_409_653_6;

/// Number of (scaled) even zeta values kept for the series.
const SERIES_TERMS: usize = 30;

/// A finite angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Result<Self> {
        if radians.is_finite() {
            Ok(Angle(radians))
        } else {
            Err(MahlerError::Domain(format!("angle must be finite, got {radians}")))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Representative in `[0, 2π)`.
    pub fn reduced(self) -> f64 {
        reduce_angle(self.0)
    }
}

/// A Clausen value together with its absolute error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cl2Value {
    pub value: f64,
    pub abs_error_bound: f64,
}

pub(crate) fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `ζ(2k) / (2π)^{2k}` for `k = 1..=SERIES_TERMS`.
fn scaled_even_zeta() -> &'static [f64; SERIES_TERMS] {
    static TABLE: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; SERIES_TERMS];
        let two_pi_sq = TAU * TAU;
        let mut scale = 1.0;
        for (idx, slot) in table.iter_mut().enumerate() {
            let k = idx + 1;
            scale /= two_pi_sq;
            *slot = even_zeta(k) * scale;
        }
        table
    })
}

/// `ζ(2k)`: closed forms for small `k`, Euler–Maclaurin beyond.
fn even_zeta(k: usize) -> f64 {
    let pi2 = PI * PI;
    match k {
        1 => pi2 / 6.0,
        2 => pi2 * pi2 / 90.0,
        3 => pi2 * pi2 * pi2 / 945.0,
        4 => pi2 * pi2 * pi2 * pi2 / 9450.0,
        _ => {
            let s = (2 * k) as f64;
            let n = 30.0_f64;
            let mut sum = 0.0;
            for m in (1..30).rev() {
                sum += (m as f64).powf(-s);
            }
            sum + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        }
    }
}

/// `Cl₂` on `[0, π]`.
fn clausen_core(theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let table = scaled_even_zeta();
    let t2 = theta * theta;
    let mut acc = 0.0;
    for (idx, z) in table.iter().enumerate().rev() {
        let k = (idx + 1) as f64;
        acc = acc * t2 + z / (k * (2.0 * k + 1.0));
    }
    acc *= t2;
    theta * (1.0 - theta.ln() + acc)
}

/// `Cl₂(θ)` for any finite `θ`; NaN for non-finite input.
///
/// Fast path used by the summation engines. See [`clausen`] for the checked
/// entry point.
pub fn cl2(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    let r = reduce_angle(theta);
    if r <= PI {
        clausen_core(r)
    } else {
        -clausen_core(TAU - r)
    }
}

pub fn clausen(theta: Angle) -> Cl2Value {
    Cl2Value {
        value: cl2(theta.0),
        abs_error_bound: CLAUSEN_ABS_ERROR,
    }
}

/// `D(e^{iθ})`, which coincides with `Cl₂(θ)`.
pub fn bloch_wigner_on_circle(theta: Angle) -> Cl2Value {
    clausen(theta)
}

/// Bloch–Wigner dilogarithm `D(z) = Im Li₂(z) + arg(1 − z) ln|z|` for any
/// complex `z`. Continuous everywhere, zero at `0` and `1`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return f64::NAN;
    }
    let one = Complex64::new(1.0, 0.0);
    if z.norm_sqr() == 0.0 || z == one {
        return 0.0;
    }
    let mut sign = 1.0;
    let mut w = z;
    if w.norm_sqr() > 1.0 {
        w = one / w;
        sign = -sign;
    }
    if w.re > 0.5 {
        w = one - w;
        sign = -sign;
    }
    if w.norm_sqr() == 0.0 {
        return 0.0;
    }
    sign * bloch_wigner_core(w)
}

/// `D(z)` for `|z| ≤ 1`, `Re z ≤ 1/2`.
fn bloch_wigner_core(z: Complex64) -> f64 {
    let one_minus = Complex64::new(1.0, 0.0) - z;
    let u = -one_minus.ln();
    let u2 = u * u;
    let table = scaled_even_zeta();
    // Li₂(z) = u − u²/4 + Σ B_{2k} u^{2k+1} / (2k+1)!
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, z2k) in table.iter().enumerate().take(20).rev() {
        let k = idx + 1;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let coeff = sign * 2.0 * z2k / (2.0 * k as f64 + 1.0);
        acc = acc * u2 + coeff;
    }
    let li2 = u - u2 * 0.25 + u * u2 * acc;
    li2.im + one_minus.arg() * z.norm().ln()
}

/// Apéry's constant `ζ(3)`, computed once from the central binomial series
/// `ζ(3) = (5/2) Σ (−1)^{n+1} / (n³ C(2n, n))`.
pub fn zeta3() -> f64 {
    static ZETA3: OnceLock<f64> = OnceLock::new();
    *ZETA3.get_or_init(|| {
        let mut terms = Vec::with_capacity(40);
        let mut binom = 1.0_f64;
        for n in 1..=40u32 {
            let nf = n as f64;
            binom *= 2.0 * (2.0 * nf - 1.0) / nf;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            terms.push(sign / (nf * nf * nf * binom));
        }
        2.5 * terms.iter().rev().sum::<f64>()
    })
}

/// `9 ζ(3) / (2π²)`, the limit of `m(P_d)`.
pub fn limit_value() -> f64 {
    9.0 * zeta3() / (2.0 * PI * PI)
}

/// `6π ζ(3)`, the integral of `vol` over the triangle.
pub fn vol_integral_exact() -> f64 {
    6.0 * PI * zeta3()
}
