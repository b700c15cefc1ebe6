use std::f64::consts::TAU;
use std::path::Path;

use mahler_core::limits::{limit_report, riemann_row};
use mahler_core::mahler_closed::{m_closed_aggregated, m_closed_pointwise, m_closed_volsum};
use mahler_core::mahler_oracle::{m_oracle, vol_integral_quadrature, QuadratureConfig};
use mahler_core::specfun::vol_integral_exact;
use mahler_core::toric::check_regularity;
use mahler_core::volume::{vol, TrianglePoint};
use mahler_core::{MahlerError, MahlerEstimate, PdSpec};
use rayon::prelude::*;

use crate::output::{fmt_num, OutputError, Table};
use crate::{MeasureMethod, ReportKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] OutputError),
    #[error(transparent)]
    Numeric(MahlerError),
}

impl From<MahlerError> for CliError {
    fn from(e: MahlerError) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e)
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

fn spec(d: u32) -> Result<PdSpec, CliError> {
    Ok(PdSpec::new(d)?)
}

fn estimate(d: u32, method: MeasureMethod, nodes: usize) -> Result<MahlerEstimate, CliError> {
    let s = spec(d)?;
    Ok(match method {
        MeasureMethod::Pointwise => m_closed_pointwise(s),
        MeasureMethod::Volsum => m_closed_volsum(s),
        MeasureMethod::Aggregated => m_closed_aggregated(s),
        MeasureMethod::Oracle => m_oracle(s, &QuadratureConfig::with_nodes(s, nodes))?.to_estimate(),
    })
}

pub fn measure(d: u32, method: MeasureMethod, nodes: usize) -> Result<(), CliError> {
    let est = estimate(d, method, nodes)?;
    println!("{:.12}", est.value);
    println!("method: {}", est.method);
    println!("error_bound: {:e}", est.error_bound);
    Ok(())
}

pub fn sweep(
    from: u32,
    to: u32,
    oracle_up_to: u32,
    nodes: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if from > to {
        return Err(CliError::Usage(format!("empty range: --from {from} > --to {to}")));
    }
    let rows: Vec<Vec<String>> = (from..=to)
        .into_par_iter()
        .map(|d| {
            let closed = m_closed_aggregated(spec(d)?).value;
            let mut row = vec![d.to_string(), fmt_num(closed)];
            if d <= oracle_up_to {
                let o = estimate(d, MeasureMethod::Oracle, nodes)?.value;
                row.push(fmt_num(o));
                row.push(fmt_num((closed - o).abs()));
            } else {
                row.push(String::new());
                row.push(String::new());
            }
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;
    let mut table = Table::new("d,m_closed,m_oracle,abs_diff");
    for r in rows {
        table.push(r);
    }
    table.emit(out)?;
    Ok(())
}

pub fn report(
    kind: ReportKind,
    d: &[u32],
    n: &[u32],
    grid: u32,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let table = match kind {
        ReportKind::Toric => toric_table(d)?,
        ReportKind::VolGrid => vol_grid_table(grid)?,
        ReportKind::Limit => limit_table(d)?,
        ReportKind::VolIntegral => vol_integral_table(),
        ReportKind::Riemann => riemann_table(n)?,
    };
    table.emit(out)?;
    Ok(())
}

fn toric_table(d: &[u32]) -> Result<Table, CliError> {
    let [d] = d else {
        return Err(CliError::Usage("report toric needs exactly one --d".into()));
    };
    let report = check_regularity(spec(*d)?)?;
    let mut t = Table::new("n,k,k_prime,eps,im_gamma");
    for r in &report.records {
        let p = r.point;
        t.push([
            p.modulus.to_string(),
            p.k.to_string(),
            p.k_prime.to_string(),
            r.epsilon.value().to_string(),
            fmt_num(r.im_gamma),
        ]);
    }
    Ok(t)
}

fn vol_grid_table(grid: u32) -> Result<Table, CliError> {
    let step = TAU / grid as f64;
    let mut t = Table::new("theta,alpha,vol");
    for i in 0..=grid {
        for j in 0..=grid - i {
            let (theta, alpha) = (i as f64 * step, j as f64 * step);
            let v = vol(TrianglePoint::new(theta, alpha)?);
            t.push([fmt_num(theta), fmt_num(alpha), fmt_num(v)]);
        }
    }
    Ok(t)
}

fn limit_table(d: &[u32]) -> Result<Table, CliError> {
    let ds: &[u32] = if d.is_empty() { &[10, 100, 1000] } else { d };
    let mut t = Table::new("d,m,limit,gap,reconstruction_residual");
    for r in limit_report(ds)? {
        t.push([
            r.d.to_string(),
            fmt_num(r.m),
            fmt_num(r.limit),
            fmt_num(r.gap),
            fmt_num(r.reconstruction_residual),
        ]);
    }
    Ok(t)
}

fn vol_integral_table() -> Table {
    let series = vol_integral_exact();
    let quad = vol_integral_quadrature();
    let mut t = Table::new("series,quadrature,difference");
    t.push([fmt_num(series), fmt_num(quad), fmt_num((series - quad).abs())]);
    t
}

fn riemann_table(n: &[u32]) -> Result<Table, CliError> {
    let ns: &[u32] = if n.is_empty() {
        &[50, 100, 200, 400, 800, 1600]
    } else {
        n
    };
    let mut t = Table::new("n,riemann_sum,E,nE");
    for &k in ns {
        let r = riemann_row(k)?;
        t.push([
            r.n.to_string(),
            fmt_num(r.riemann_sum),
            fmt_num(r.error_e),
            fmt_num(r.n_error_e),
        ]);
    }
    Ok(t)
}
