//! Numerical Mahler measure of `P_d` straight from the definition.
//!
//! For fixed `x = e^{iθ}` the slice `y ↦ P_d(x, y)` is monic, so by Jensen's
//! formula the inner circle average of `log|P_d|` is `Σ log⁺|y_j|` over its
//! roots. The outer integral over `θ` is a panel Gauss–Legendre sum with
//! breaks where roots cross the unit circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{MahlerError, Result};
use crate::mahler_closed::{pairwise_sum, MahlerEstimate, Method};
use crate::polynomials::{roots, roots_from_guesses, y_slice, ComplexPoint, PdSpec};
use crate::quadrature::{GaussLegendre, TriangleRule};
use crate::specfun::Angle;
use crate::volume::{vol_unchecked, volume_function};

pub const DEFAULT_NODES_PER_PANEL: usize = 64;

/// Panel layout for the outer `θ` integral.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub nodes_per_panel: usize,
    pub panel_breaks: Vec<f64>,
}

impl QuadratureConfig {
    /// Default node count with breaks at every `(d+1)`-th and `(d+2)`-th root
    /// of unity angle.
    pub fn for_spec(spec: PdSpec) -> Self {
        Self::with_nodes(spec, DEFAULT_NODES_PER_PANEL)
    }

    pub fn with_nodes(spec: PdSpec, nodes_per_panel: usize) -> Self {
        QuadratureConfig {
            nodes_per_panel,
            panel_breaks: required_breaks(spec),
        }
    }

    pub fn panels(&self) -> usize {
        self.panel_breaks.len().saturating_sub(1)
    }

    pub fn validate(&self, spec: PdSpec) -> Result<()> {
        if self.nodes_per_panel < 2 {
            return Err(MahlerError::Quadrature(format!(
                "need at least 2 nodes per panel, got {}",
                self.nodes_per_panel
            )));
        }
        let b = &self.panel_breaks;
        if b.len() < 2 || b[0] != 0.0 || *b.last().unwrap() != TAU {
            return Err(MahlerError::Quadrature("panels must cover [0, 2π]".into()));
        }
        if !b.windows(2).all(|w| w[0] < w[1]) {
            return Err(MahlerError::Quadrature("panel breaks must increase".into()));
        }
        for r in required_breaks(spec) {
            if !b.iter().any(|x| (x - r).abs() <= 1e-14) {
                return Err(MahlerError::Quadrature(format!(
                    "missing panel break at {r}"
                )));
            }
        }
        Ok(())
    }
}

/// `{2πk/(d+1)} ∪ {2πk/(d+2)}`, sorted, endpoints included once.
pub fn required_breaks(spec: PdSpec) -> Vec<f64> {
    let d = spec.d();
    let mut out: Vec<f64> = [d + 1, d + 2]
        .iter()
        .flat_map(|&n| (0..=n).map(move |k| TAU * k as f64 / n as f64))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);
    *out.first_mut().unwrap() = 0.0;
    *out.last_mut().unwrap() = TAU;
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub d: u32,
    pub value: f64,
    pub panels: usize,
    /// `Σ |full rule − half rule|` over panels plus a rounding floor.
    pub max_panel_contribution_change: f64,
}

impl OracleResult {
    pub fn error_estimate(&self) -> f64 {
        self.max_panel_contribution_change
    }

    pub fn to_estimate(self) -> MahlerEstimate {
        MahlerEstimate {
            d: self.d,
            value: self.value,
            method: Method::Oracle,
            error_bound: self.max_panel_contribution_change,
        }
    }
}

/// `Σ_j log max(1, |y_j|)` over the roots of `P_d(e^{iθ}, y)`.
pub fn jensen_slice_measure(spec: PdSpec, theta: Angle) -> Result<f64> {
    let x = Complex64::from_polar(1.0, theta.radians());
    let rs = roots(&y_slice(spec, x))?;
    Ok(rs.iter().map(|y| y.norm().ln().max(0.0)).sum())
}

fn slice_at(spec: PdSpec, theta: f64) -> Result<f64> {
    let angle = Angle::new(theta)?;
    jensen_slice_measure(spec, angle).map_err(|e| MahlerError::Oracle {
        theta,
        source: Box::new(e),
    })
}

/// `(1/2π) ∫_0^{2π} Σ log⁺|y_j(θ)| dθ`.
pub fn m_oracle(spec: PdSpec, cfg: &QuadratureConfig) -> Result<OracleResult> {
    cfg.validate(spec)?;
    let full = GaussLegendre::new(cfg.nodes_per_panel)?;
    let half = GaussLegendre::new(cfg.nodes_per_panel / 2)?;
    let panels: Vec<(f64, f64)> = cfg
        .panel_breaks
        .windows(2)
        .map(|w| (w[0], w[1]))
        .collect();
    let per_panel: Vec<(f64, f64)> = panels
        .par_iter()
        .map(|&(a, b)| {
            let mut f = 0.0;
            for (x, w) in full.mapped(a, b) {
                f += w * slice_at(spec, x)?;
            }
            let mut h = 0.0;
            for (x, w) in half.mapped(a, b) {
                h += w * slice_at(spec, x)?;
            }
            Ok((f, h))
        })
        .collect::<Result<_>>()?;
    let fulls: Vec<f64> = per_panel.iter().map(|p| p.0).collect();
    let changes: Vec<f64> = per_panel.iter().map(|p| (p.0 - p.1).abs()).collect();
    let magnitude: f64 = fulls.iter().map(|v| v.abs()).sum();
    let floor = 64.0 * f64::EPSILON * magnitude;
    Ok(OracleResult {
        d: spec.d(),
        value: pairwise_sum(&fulls) / TAU,
        panels: panels.len(),
        max_panel_contribution_change: (pairwise_sum(&changes) + floor) / TAU,
    })
}

/// A path `x(t) = r e^{it}`, `t` from `t0` to `t1`, on a chosen branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveArc {
    pub radius: f64,
    pub t0: f64,
    pub t1: f64,
    /// Approximate starting `y`; the nearest root of the slice at `t0` is used.
    pub start_root: Complex64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveCheck {
    pub eta_integral: f64,
    pub delta_v: f64,
    /// `|∫η − ΔV|`.
    pub residual: f64,
    pub end_root: Complex64,
    /// Number of full turns of `x` (closed loops only, otherwise 0).
    pub revolutions: usize,
}

/// Smallest allowed distance between two roots along a tracked path.
pub const MIN_ROOT_SEPARATION: f64 = 1e-3;

const MAX_HALVINGS: u32 = 20;

/// Roots of `P_d(x, ·)` at `x = r e^{it}`.
pub fn slice_roots(spec: PdSpec, radius: f64, t: f64) -> Result<Vec<Complex64>> {
    roots(&y_slice(spec, Complex64::from_polar(radius, t)))
}

fn nearest(rs: &[Complex64], target: Complex64) -> (usize, f64, f64) {
    let mut best = (0, f64::INFINITY, f64::INFINITY);
    for (i, r) in rs.iter().enumerate() {
        let dist = (r - target).norm();
        if dist < best.1 {
            best = (i, dist, best.1);
        } else if dist < best.2 {
            best.2 = dist;
        }
    }
    best
}

fn min_separation(rs: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            m = m.min((rs[i] - rs[j]).norm());
        }
    }
    m
}

/// Follows one root of the slice along `x = r e^{it}`.
struct Tracker {
    spec: PdSpec,
    radius: f64,
    t: f64,
    roots: Vec<Complex64>,
    index: usize,
}

impl Tracker {
    fn start(spec: PdSpec, radius: f64, t: f64, guess: Complex64) -> Result<Self> {
        let rs = slice_roots(spec, radius, t)?;
        let sep = min_separation(&rs);
        if sep < MIN_ROOT_SEPARATION {
            return Err(MahlerError::Continuation {
                t,
                reason: format!("roots only {sep:e} apart at the start"),
            });
        }
        let (index, _, _) = nearest(&rs, guess);
        Ok(Tracker {
            spec,
            radius,
            t,
            roots: rs,
            index,
        })
    }

    fn current(&self) -> Complex64 {
        self.roots[self.index]
    }

    /// Moves to `t_new`, halving the step when the matching is ambiguous.
    fn advance(&mut self, t_new: f64) -> Result<()> {
        self.advance_depth(t_new, 0)
    }

    fn advance_depth(&mut self, t_new: f64, depth: u32) -> Result<()> {
        let slice = y_slice(self.spec, Complex64::from_polar(self.radius, t_new));
        let rs = roots_from_guesses(&slice, self.roots.clone())
            .or_else(|_| roots(&slice))
            .map_err(|e| MahlerError::Continuation {
                t: t_new,
                reason: e.to_string(),
            })?;
        let sep = min_separation(&rs);
        if sep < MIN_ROOT_SEPARATION {
            return Err(MahlerError::Continuation {
                t: t_new,
                reason: format!("roots only {sep:e} apart"),
            });
        }
        let (idx, best, second) = nearest(&rs, self.current());
        let tol = 1e-10 * (1.0 + slice.max_coefficient_norm());
        // the tracked root must move much less than the gap to its neighbours
        let ambiguous = second - best < 10.0 * tol || best > 0.25 * sep;
        if ambiguous {
            if depth >= MAX_HALVINGS {
                return Err(MahlerError::Continuation {
                    t: t_new,
                    reason: "root matching stayed ambiguous after step halving".into(),
                });
            }
            let mid = 0.5 * (self.t + t_new);
            self.advance_depth(mid, depth + 1)?;
            return self.advance_depth(t_new, depth + 1);
        }
        self.t = t_new;
        self.roots = rs;
        self.index = idx;
        Ok(())
    }
}

/// Midpoint sums of `∫ log|y| dt` and the unwrapped `Δ arg y` along one pass.
fn integrate_pass(tracker: &mut Tracker, t0: f64, t1: f64, steps: usize) -> Result<(f64, f64)> {
    let h = (t1 - t0) / steps as f64;
    let mut log_sum = 0.0;
    let mut darg = 0.0;
    let mut prev = tracker.current();
    for i in 0..steps {
        for half in 1..=2 {
            let t = t0 + h * (i as f64 + 0.5 * half as f64);
            tracker.advance(t)?;
            let y = tracker.current();
            darg += (y / prev).arg();
            prev = y;
            if half == 1 {
                log_sum += y.norm().ln();
            }
        }
    }
    Ok((h * log_sum, darg))
}

fn v_at(spec: PdSpec, radius: f64, t: f64, y: Complex64) -> f64 {
    volume_function(spec, ComplexPoint::new(Complex64::from_polar(radius, t), y))
}

/// Compares `∫ η` along the arc, `η = log|y| d arg x − log|x| d arg y`, with
/// the change of the volume function between its endpoints.
pub fn primitive_check(spec: PdSpec, arc: &CurveArc) -> Result<PrimitiveCheck> {
    check_arc(arc)?;
    let mut tracker = Tracker::start(spec, arc.radius, arc.t0, arc.start_root)?;
    let y0 = tracker.current();
    let (log_part, darg) = integrate_pass(&mut tracker, arc.t0, arc.t1, arc.steps)?;
    let eta = log_part - arc.radius.ln() * darg;
    let y1 = tracker.current();
    let delta_v = v_at(spec, arc.radius, arc.t1, y1) - v_at(spec, arc.radius, arc.t0, y0);
    Ok(PrimitiveCheck {
        eta_integral: eta,
        delta_v,
        residual: (eta - delta_v).abs(),
        end_root: y1,
        revolutions: 0,
    })
}

/// Integrates `η` around full turns of `x = r e^{it}` starting at `t0` until
/// the tracked root returns to its starting value, which closes the loop on
/// the curve. `ΔV = 0` for a closed loop.
pub fn primitive_check_loop(
    spec: PdSpec,
    radius: f64,
    t0: f64,
    start_root: Complex64,
    steps_per_turn: usize,
) -> Result<PrimitiveCheck> {
    check_arc(&CurveArc {
        radius,
        t0,
        t1: t0 + TAU,
        start_root,
        steps: steps_per_turn,
    })?;
    let mut tracker = Tracker::start(spec, radius, t0, start_root)?;
    let y0 = tracker.current();
    let mut eta = 0.0;
    for turn in 1..=spec.d() as usize {
        let base = t0 + TAU * (turn - 1) as f64;
        let (log_part, darg) = integrate_pass(&mut tracker, base, base + TAU, steps_per_turn)?;
        eta += log_part - radius.ln() * darg;
        let y = tracker.current();
        if (y - y0).norm() <= 1e-8 * (1.0 + y0.norm()) {
            return Ok(PrimitiveCheck {
                eta_integral: eta,
                delta_v: 0.0,
                residual: eta.abs(),
                end_root: y,
                revolutions: turn,
            });
        }
    }
    Err(MahlerError::Continuation {
        t: t0,
        reason: "tracked root did not return to its start".into(),
    })
}

fn check_arc(arc: &CurveArc) -> Result<()> {
    let ok = arc.radius.is_finite()
        && arc.radius > 0.0
        && arc.t0.is_finite()
        && arc.t1.is_finite()
        && arc.start_root.is_finite()
        && arc.steps > 0;
    if ok {
        Ok(())
    } else {
        Err(MahlerError::Domain(format!("invalid arc {arc:?}")))
    }
}

/// Triangle rule used by [`vol_integral_quadrature`].
pub fn default_triangle_rule() -> TriangleRule {
    TriangleRule::new(16, 0.2, 10).expect("valid default rule")
}

/// `∬_T vol dA` with the default graded rule.
pub fn vol_integral_quadrature() -> f64 {
    vol_integral_with(&default_triangle_rule())
}

pub fn vol_integral_with(rule: &TriangleRule) -> f64 {
    rule.integrate(vol_unchecked)
}
