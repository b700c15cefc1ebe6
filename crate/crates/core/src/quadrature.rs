//! Gauss–Legendre rules, geometrically graded panels and nested integration
//! over the triangle `T`.

use std::f64::consts::{PI, TAU};

use crate::error::{MahlerError, Result};

/// An `n`-point Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from Chebyshev-like starting points.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(MahlerError::Quadrature("rule needs at least one node".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Sum of the rule over consecutive panels `[breaks[i], breaks[i+1]]`.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks
            .windows(2)
            .map(|w| self.integrate(w[0], w[1], &mut f))
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel breaks on `[a, b]` refined geometrically toward both endpoints:
/// `levels` panels of widths shrinking by `ratio` at each end of a central
/// panel. `levels = 0` gives the single panel `[a, b]`.
pub fn graded_breaks(a: f64, b: f64, ratio: f64, levels: usize) -> Vec<f64> {
    if levels == 0 || b <= a {
        return vec![a, b];
    }
    let half = 0.5 * (b - a);
    let mut offsets: Vec<f64> = (0..levels).map(|k| half * ratio.powi((levels - k) as i32)).collect();
    offsets.insert(0, 0.0);
    let mut out: Vec<f64> = offsets.iter().map(|o| a + o).collect();
    out.extend(offsets.iter().rev().map(|o| b - o));
    out
}

/// Nested rule over `T = {θ, α ≥ 0, θ + α ≤ 2π}`: `θ` outer on `[0, 2π]`,
/// `α` inner on `[0, 2π − θ]`, both graded toward their endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub rule: GaussLegendre,
    pub ratio: f64,
    pub levels: usize,
}

impl TriangleRule {
    pub fn new(nodes: usize, ratio: f64, levels: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(MahlerError::Quadrature(format!(
                "grading ratio must lie in (0, 1), got {ratio}"
            )));
        }
        Ok(TriangleRule {
            rule: GaussLegendre::new(nodes)?,
            ratio,
            levels,
        })
    }

    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let outer = graded_breaks(0.0, TAU, self.ratio, self.levels);
        self.rule.integrate_panels(&outer, |theta| {
            let inner = graded_breaks(0.0, TAU - theta, self.ratio, self.levels);
            self.rule.integrate_panels(&inner, |alpha| f(theta, alpha))
        })
    }
}
