//! Riemann sums of `vol` on the `n`-grid of `T`, the error `E(n)`, and the
//! convergence of `m(P_d)` to `9ζ(3)/(2π²)`.
//!
//! With `h = 2π/n` the grid points `(ah, bh)`, `a, b ≥ 1`, `a + b ≤ n − 1`,
//! carry squares of side `h` centred on them. The part of `T` they leave
//! uncovered is the blue region, of area `2π²(3n − 2)/n²`.

use std::f64::consts::{PI, TAU};

use crate::error::{MahlerError, Result};
use crate::mahler_closed::{m_closed_aggregated, pair_sum_aggregated, pairwise_sum};
use crate::polynomials::PdSpec;
use crate::quadrature::GaussLegendre;
use crate::specfun::{limit_value, vol_integral_exact};
use crate::volume::vol_unchecked;

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        Err(MahlerError::Domain(format!("grid size must be at least 2, got {n}")))
    } else {
        Ok(())
    }
}

/// `(4π²/n²) Σ_{0<k<k'<n} vol(2πk/n, 2π(k'−k)/n)`.
pub fn riemann_sum(n: u32) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(4.0 * PI * PI / (nf * nf) * pair_sum_aggregated(n))
}

/// `6πζ(3) − riemann_sum(n)`, nonnegative by concavity of `vol`.
pub fn signed_error(n: u32) -> Result<f64> {
    Ok(vol_integral_exact() - riemann_sum(n)?)
}

/// `E(n) = |6πζ(3) − riemann_sum(n)|`.
pub fn error_e(n: u32) -> Result<f64> {
    signed_error(n).map(f64::abs)
}

/// `2π²(3n − 2)/n²`.
pub fn blue_area(n: u32) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok(2.0 * PI * PI * (3.0 * nf - 2.0) / (nf * nf))
}

/// Whether `(θ, α) ∈ T` lies outside every grid square.
pub fn in_blue_region(n: u32, theta: f64, alpha: f64) -> bool {
    if theta < 0.0 || alpha < 0.0 || theta + alpha > TAU {
        return false;
    }
    let h = TAU / n as f64;
    let (u, v) = (theta / h, alpha / h);
    let (a, b) = (u.round(), v.round());
    let covered = a >= 1.0
        && b >= 1.0
        && a + b <= n as f64 - 1.0
        && (u - a).abs() <= 0.5
        && (v - b).abs() <= 0.5;
    !covered
}

/// A cell of the half-step lattice lying in the blue region: a full square
/// of side `h/2`, or its lower-left half when cut by `θ + α = 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct BlueCell {
    x0: f64,
    y0: f64,
    side: f64,
    half: bool,
}

impl BlueCell {
    fn centroid(&self) -> (f64, f64) {
        if self.half {
            (self.x0 + self.side / 3.0, self.y0 + self.side / 3.0)
        } else {
            (self.x0 + 0.5 * self.side, self.y0 + 0.5 * self.side)
        }
    }

    fn integrate(&self, rule: &GaussLegendre) -> f64 {
        let (x0, y0, s) = (self.x0, self.y0, self.side);
        if self.half {
            rule.integrate(x0, x0 + s, |t| {
                rule.integrate(y0, y0 + s - (t - x0), |a| vol_unchecked(t, a))
            })
        } else {
            rule.integrate(x0, x0 + s, |t| rule.integrate(y0, y0 + s, |a| vol_unchecked(t, a)))
        }
    }
}

/// The blue region as a disjoint union of half-lattice cells. Square `(a, b)`
/// covers cells `i ∈ {2a−1, 2a}`, `j ∈ {2b−1, 2b}`.
fn blue_cells(n: u32) -> Vec<BlueCell> {
    let s = TAU / (2.0 * n as f64);
    let m = 2 * n as i64;
    let square_of = |i: i64| (i + 1) / 2;
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m - i {
            let half = i + j == m - 1;
            let (a, b) = (square_of(i), square_of(j));
            let covered = !half && a >= 1 && b >= 1 && a + b < n as i64;
            if !covered {
                out.push(BlueCell {
                    x0: i as f64 * s,
                    y0: j as f64 * s,
                    side: s,
                    half,
                });
            }
        }
    }
    out
}

/// Area of the blue cells, an exact recount of [`blue_area`].
pub fn blue_area_by_cells(n: u32) -> Result<f64> {
    check_n(n)?;
    Ok(blue_cells(n)
        .iter()
        .map(|c| if c.half { 0.5 } else { 1.0 } * c.side * c.side)
        .sum())
}

/// Estimate of `max vol` on the blue region from its cell centroids.
pub fn max_vol_on_blue(n: u32) -> Result<f64> {
    check_n(n)?;
    Ok(blue_cells(n)
        .iter()
        .map(|c| {
            let (t, a) = c.centroid();
            vol_unchecked(t, a)
        })
        .fold(0.0, f64::max))
}

/// `∬_blue vol dA` by Gauss–Legendre on every blue cell.
pub fn blue_integral(n: u32, nodes: usize) -> Result<f64> {
    check_n(n)?;
    let rule = GaussLegendre::new(nodes)?;
    let parts: Vec<f64> = blue_cells(n).iter().map(|c| c.integrate(&rule)).collect();
    Ok(pairwise_sum(&parts))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionReport {
    pub n: u32,
    pub riemann_sum: f64,
    pub integral_ref: f64,
    pub error_e: f64,
    pub blue_area: f64,
    pub max_vol_on_blue: f64,
}

pub fn partition_report(n: u32) -> Result<PartitionReport> {
    let r = riemann_sum(n)?;
    let i = vol_integral_exact();
    Ok(PartitionReport {
        n,
        riemann_sum: r,
        integral_ref: i,
        error_e: (i - r).abs(),
        blue_area: blue_area(n)?,
        max_vol_on_blue: max_vol_on_blue(n)?,
    })
}

/// One row of [`limit_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub d: u32,
    pub m: f64,
    pub limit: f64,
    pub gap: f64,
    pub reconstruction_residual: f64,
}

/// `2π m(P_d)` rebuilt from `I = 6πζ(3)` and the errors `E(d+1)`, `E(d+2)`:
///
/// ```text
/// (d+2)²/(2π²(d+1)) (I − E(d+2)) − (d+1)²/(2π²(d+2)) (I − E(d+1))
/// ```
pub fn reconstruct_two_pi_m(spec: PdSpec) -> Result<f64> {
    let d = spec.d() as f64;
    let i = vol_integral_exact();
    let lo = signed_error(spec.d() + 1)?;
    let hi = signed_error(spec.d() + 2)?;
    let c_hi = (d + 2.0) * (d + 2.0) / (2.0 * PI * PI * (d + 1.0));
    let c_lo = (d + 1.0) * (d + 1.0) / (2.0 * PI * PI * (d + 2.0));
    Ok(c_hi * i - c_lo * i + c_lo * lo - c_hi * hi)
}

pub fn limit_report(d_list: &[u32]) -> Result<Vec<LimitRow>> {
    if d_list.is_empty() {
        return Err(MahlerError::Domain("no degrees requested".into()));
    }
    let limit = limit_value();
    d_list
        .iter()
        .map(|&d| {
            let spec = PdSpec::new(d)?;
            let m = m_closed_aggregated(spec).value;
            let rebuilt = reconstruct_two_pi_m(spec)?;
            Ok(LimitRow {
                d,
                m,
                limit,
                gap: (m - limit).abs(),
                reconstruction_residual: (TAU * m - rebuilt).abs(),
            })
        })
        .collect()
}

/// One row of the Riemann-sum table: `n, S(n), E(n), n·E(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannRow {
    pub n: u32,
    pub riemann_sum: f64,
    pub error_e: f64,
    pub n_error_e: f64,
}

pub fn riemann_row(n: u32) -> Result<RiemannRow> {
    let s = riemann_sum(n)?;
    let e = (vol_integral_exact() - s).abs();
    Ok(RiemannRow {
        n,
        riemann_sum: s,
        error_e: e,
        n_error_e: n as f64 * e,
    })
}

/// Triangulation of `T` by `n²` right triangles of leg `h = 2π/n`, as vertex
/// triples. Upward triangles `(i, j), (i+1, j), (i, j+1)` for `i, j ≥ 0`,
/// `i + j ≤ n − 1`; downward `(i, j), (i−1, j), (i, j−1)` for `i, j ≥ 1`,
/// `i + j ≤ n`.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn triangular_partition(n: u32) -> Vec<[(u32, u32); 3]> {
    let mut out = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n - i {
            out.push([(i, j), (i + 1, j), (i, j + 1)]);
        }
    }
    for i in 1..=n {
        for j in 1..=n - i {
            out.push([(i, j), (i - 1, j), (i, j - 1)]);
        }
    }
    out
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::mahler_closed::pair_sum_naive;
    use crate::volume::{vol, TrianglePoint};

    const CL2_2PI_3: f64 = 0.676_627_737_606_435_750_01;

    #[test]
    fn small_grids() {
        assert_eq!(riemann_sum(2).unwrap(), 0.0);
        let s3 = riemann_sum(3).unwrap();
        assert!((s3 - 4.0 * PI * PI / 9.0 * 3.0 * CL2_2PI_3).abs() <= 1e-13);
        let e3 = error_e(3).unwrap();
        assert!((e3 - (vol_integral_exact() - s3)).abs() <= 1e-13);
        assert!(riemann_sum(1).is_err());
        assert!(error_e(0).is_err());
    }

    #[test]
    fn matches_naive_pair_sum() {
        for n in 2..=60 {
            let nf = n as f64;
            let naive = 4.0 * PI * PI / (nf * nf) * pair_sum_naive(n);
            assert!((riemann_sum(n).unwrap() - naive).abs() <= 1e-11);
        }
    }

    #[test]
    fn error_is_one_sided_and_shrinks() {
        for n in (2..=200).chain([400, 800, 1600]) {
            assert!(signed_error(n).unwrap() >= -1e-9, "n={n}");
        }
        assert!(error_e(101).unwrap() < error_e(11).unwrap());
        let big = riemann_sum(20_000).unwrap();
        assert!((big - vol_integral_exact()).abs() < 1e-3);
    }

    #[test]
    fn n_times_error_decreases() {
        let ne: Vec<f64> = [50, 100, 200, 400, 800, 1600]
            .iter()
            .map(|&n| n as f64 * error_e(n).unwrap())
            .collect();
        assert!(ne.windows(2).all(|w| w[1] < w[0]), "{ne:?}");
    }

    #[test]
    fn blue_area_closed_form() {
        for d in 1..=30u32 {
            let n = d + 1;
            let df = d as f64;
            let expect = 2.0 * PI * PI * (3.0 * df + 1.0) / ((df + 1.0) * (df + 1.0));
            assert!((blue_area(n).unwrap() - expect).abs() <= 1e-12);
            assert!((blue_area_by_cells(n).unwrap() - expect).abs() <= 1e-11, "n={n}");
        }
    }

    #[test]
    fn blue_area_by_indicator() {
        for d in [7, 15] {
            let n = d + 1;
            let grid = 2000;
            let step = TAU / grid as f64;
            let mut hits = 0usize;
            for i in 0..grid {
                for j in 0..grid {
                    let (t, a) = ((i as f64 + 0.5) * step, (j as f64 + 0.5) * step);
                    if in_blue_region(n, t, a) {
                        hits += 1;
                    }
                }
            }
            let area = hits as f64 * step * step;
            let expect = blue_area(n).unwrap();
            assert!((area - expect).abs() <= 0.02 * expect, "d={d}: {area} vs {expect}");
        }
    }

    #[test]
    fn cells_agree_with_indicator() {
        for n in [3, 5, 8] {
            for c in blue_cells(n) {
                let (t, a) = c.centroid();
                assert!(in_blue_region(n, t, a), "n={n} {c:?}");
            }
        }
        assert!(!in_blue_region(8, TAU / 8.0, TAU / 8.0));
        assert!(in_blue_region(8, 0.01, 3.0));
        assert!(!in_blue_region(8, 4.0, 4.0));
    }

    #[test]
    fn partition_report_bounds() {
        for n in [3, 5, 10, 20, 50] {
            let r = partition_report(n).unwrap();
            assert!(r.error_e >= 0.0);
            assert!(r.error_e <= r.max_vol_on_blue * r.blue_area + 1e-9, "{r:?}");
        }
    }

    #[test]
    fn sandwich_bounds() {
        let i = vol_integral_exact();
        for n in [5, 10, 20] {
            let s = riemann_sum(n).unwrap();
            let eps = blue_integral(n, 24).unwrap();
            assert!(s <= i, "n={n}");
            assert!(i <= s + eps + 1e-9, "n={n}: {i} > {s} + {eps}");
        }
    }

    #[test]
    fn squares_lie_below_centre_values() {
        let rule = GaussLegendre::new(24).unwrap();
        for n in [5, 10] {
            let h = TAU / n as f64;
            for a in 1..n {
                for b in 1..n - a {
                    let (tc, ac) = (a as f64 * h, b as f64 * h);
                    let q = rule.integrate(tc - h / 2.0, tc + h / 2.0, |t| {
                        rule.integrate(ac - h / 2.0, ac + h / 2.0, |x| vol_unchecked(t, x))
                    });
                    assert!(q <= h * h * vol_unchecked(tc, ac) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn triangular_partition_structure() {
        for n in [5, 10, 20] {
            let tris = triangular_partition(n);
            assert_eq!(tris.len(), (n * n) as usize);
            assert!(tris
                .iter()
                .all(|t| t.iter().all(|&(i, j)| i + j <= n)));
        }
        let h_area = |n: u32| 0.5 * (TAU / n as f64).powi(2);
        assert!((triangular_partition(7).len() as f64 * h_area(7) - 2.0 * PI * PI).abs() <= 1e-12);
    }

    #[test]
    fn triangular_lower_bound() {
        // vol lies above its linear interpolant on each triangle, and the
        // interpolant integrates to exactly the Riemann sum
        let rule = GaussLegendre::new(16).unwrap();
        for n in [5, 10, 20] {
            let h = TAU / n as f64;
            let at = |(i, j): (u32, u32)| vol(TrianglePoint::new(i as f64 * h, j as f64 * h).unwrap());
            let mut linear = 0.0;
            let mut exact = 0.0;
            for tri in triangular_partition(n) {
                let mean = (at(tri[0]) + at(tri[1]) + at(tri[2])) / 3.0;
                let lin = 0.5 * h * h * mean;
                let [(i0, j0), (i1, _), (_, j2)] = tri;
                let (x0, y0) = (i0 as f64 * h, j0 as f64 * h);
                let sx = (i1 as f64 - i0 as f64) * h;
                let sy = (j2 as f64 - j0 as f64) * h;
                // map the reference triangle {u, v ≥ 0, u + v ≤ 1}
                let q = rule.integrate(0.0, 1.0, |u| {
                    rule.integrate(0.0, 1.0 - u, |v| vol_unchecked(x0 + sx * u, y0 + sy * v))
                }) * (sx * sy).abs();
                assert!(q >= lin - 1e-9, "n={n} {tri:?}");
                linear += lin;
                exact += q;
            }
            assert!((linear - riemann_sum(n).unwrap()).abs() <= 1e-11);
            assert!((exact - vol_integral_exact()).abs() <= 1e-3);
        }
    }

    #[test]
    fn limit_rows() {
        let rows = limit_report(&[10, 100, 1000]).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].gap > rows[1].gap && rows[1].gap > rows[2].gap);
        assert!(rows[2].gap < 0.01);
        for r in &rows {
            assert!(r.reconstruction_residual <= 1e-8, "{r:?}");
            assert!((r.limit - 0.548).abs() < 1e-3);
        }
        assert!(limit_report(&[]).is_err());
        assert!(limit_report(&[0]).is_err());
    }

    #[test]
    fn riemann_rows() {
        let r = riemann_row(100).unwrap();
        assert!((r.n_error_e - 100.0 * r.error_e).abs() <= 1e-12);
        assert!((r.n_error_e - 3.5626).abs() < 1e-3);
    }
}
