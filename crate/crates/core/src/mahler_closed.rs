//! Closed-form Mahler measure of `P_d` from its toric points.
//!
//! Three evaluation routes share one identity:
//!
//! ```text
//! 2π m(P_d) = −2/(d+2) · S(d+1) + 2/(d+1) · S(d+2),
//! S(n) = Σ_{0<k<k'<n} vol(2πk/n, 2π(k'−k)/n).
//! ```
//!
//! The aggregated route counts how often `Cl₂(2πj/n)` enters `S(n)`. As `θ`
//! it appears for the `n−1−j` pairs with `k = j`; as `α` for the `n−1−j`
//! pairs with `k' − k = j`; as `θ + α` (with a minus sign) for the `j − 1`
//! pairs with `k' = j`. Hence
//!
//! ```text
//! S(n) = Σ_{j=1}^{n−1} (2n − 1 − 3j) · Cl₂(2πj/n).
//! ```

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::polynomials::PdSpec;
use crate::specfun::{cl2, CLAUSEN_ABS_ERROR, CLAUSEN_MAX};
use crate::toric::{enumerate_toric, epsilon};
use crate::volume::{vol_unchecked, volume_v_angles};

/// How a [`MahlerEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedPointwise,
    ClosedVolsum,
    ClosedAggregated,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedPointwise => "closed_pointwise",
            Method::ClosedVolsum => "closed_volsum",
            Method::ClosedAggregated => "closed_aggregated",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MahlerEstimate {
    pub d: u32,
    pub value: f64,
    pub method: Method,
    /// Linear propagation of the per-call `Cl₂` budget plus summation
    /// rounding.
    pub error_bound: f64,
}

/// Sum in a fixed binary-tree order, independent of thread count.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn rounding(terms: usize, magnitude: f64) -> f64 {
    4.0 * f64::EPSILON * (terms as f64).log2().max(1.0) * magnitude
}

/// `S(n)` summed pair by pair, `O(n²)`.
pub fn pair_sum_naive(n: u32) -> f64 {
    let step = TAU / n as f64;
    let mut terms = Vec::new();
    for k in 1..n {
        for kp in k + 1..n {
            terms.push(vol_unchecked(k as f64 * step, (kp - k) as f64 * step));
        }
    }
    pairwise_sum(&terms)
}

/// Integer multiplicity of `Cl₂(2πj/n)` in `S(n)`.
pub fn pair_multiplicity(n: u32, j: u32) -> i64 {
    2 * n as i64 - 1 - 3 * j as i64
}

/// `S(n)` by the multiplicity formula, `O(n)`.
pub fn pair_sum_aggregated(n: u32) -> f64 {
    let step = TAU / n as f64;
    let terms: Vec<f64> = (1..n)
        .map(|j| pair_multiplicity(n, j) as f64 * cl2(j as f64 * step))
        .collect();
    pairwise_sum(&terms)
}

/// `Σ_j |multiplicity|`, the number of `Cl₂` error budgets entering `S(n)`.
fn aggregated_weight(n: u32) -> f64 {
    (1..n).map(|j| pair_multiplicity(n, j).unsigned_abs() as f64).sum()
}

fn combine(spec: PdSpec, lower: f64, upper: f64) -> f64 {
    let d = spec.d() as f64;
    (-2.0 / (d + 2.0) * lower + 2.0 / (d + 1.0) * upper) / TAU
}

/// `(1/2π) Σ ε(p) V(p)` over all toric points.
pub fn m_closed_pointwise(spec: PdSpec) -> MahlerEstimate {
    let d = spec.d();
    let df = d as f64;
    let pts = enumerate_toric(spec);
    let terms: Vec<f64> = pts
        .iter()
        .map(|&pt| {
            let v = if d == 1 {
                -cl2(pt.x_angle() + PI)
            } else {
                volume_v_angles(spec, pt.x_angle(), pt.y_angle())
            };
            epsilon(pt).as_f64() * v
        })
        .collect();
    let sum = pairwise_sum(&terms);
    let per_point = if d == 1 {
        CLAUSEN_ABS_ERROR
    } else {
        3.0 * CLAUSEN_ABS_ERROR * (1.0 / ((df + 1.0) * (df + 2.0)) + 1.0 / (df + 2.0))
    };
    let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
    MahlerEstimate {
        d,
        value: sum / TAU,
        method: Method::ClosedPointwise,
        error_bound: (pts.len() as f64 * per_point + rounding(terms.len(), magnitude)) / TAU,
    }
}

/// The two double sums of `vol`, term by term.
pub fn m_closed_volsum(spec: PdSpec) -> MahlerEstimate {
    let d = spec.d();
    let df = d as f64;
    let (lo, hi) = (pair_sum_naive(d + 1), pair_sum_naive(d + 2));
    let pairs = |n: f64| (n - 1.0) * (n - 2.0) / 2.0;
    let budget = 3.0
        * CLAUSEN_ABS_ERROR
        * (2.0 / (df + 2.0) * pairs(df + 1.0) + 2.0 / (df + 1.0) * pairs(df + 2.0));
    let terms = (pairs(df + 1.0) + pairs(df + 2.0)) as usize;
    MahlerEstimate {
        d,
        value: combine(spec, lo, hi),
        method: Method::ClosedVolsum,
        error_bound: (budget + rounding(terms, lo.abs() + hi.abs())) / TAU,
    }
}

/// The same sums regrouped into `O(d)` Clausen evaluations.
pub fn m_closed_aggregated(spec: PdSpec) -> MahlerEstimate {
    let d = spec.d();
    let df = d as f64;
    let (lo, hi) = (pair_sum_aggregated(d + 1), pair_sum_aggregated(d + 2));
    let budget = CLAUSEN_ABS_ERROR
        * (2.0 / (df + 2.0) * aggregated_weight(d + 1) + 2.0 / (df + 1.0) * aggregated_weight(d + 2));
    let magnitude = CLAUSEN_MAX * (aggregated_weight(d + 1) + aggregated_weight(d + 2));
    MahlerEstimate {
        d,
        value: combine(spec, lo, hi),
        method: Method::ClosedAggregated,
        error_bound: (budget + rounding(2 * d as usize + 1, magnitude)) / TAU,
    }
}
