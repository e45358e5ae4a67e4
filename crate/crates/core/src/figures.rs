//! Figure datasets assembled from the analysis modules. Every builder takes
//! explicit grids; the `default_*` helpers give the ranges used when none
//! are supplied, and the chosen grids are echoed in the metadata.

use crate::conditioning::{conditional_distribution, DetectorKind, LossSide};
use crate::dataset::{logspace, AxisScale, FigureDataset};
use crate::error::{ensure, Error, Result};
use crate::limits::{loss_bound, sql_sample, squeezed_vacuum_crb, PowerConstraint};
use crate::noon::{noon_optimal_n, noon_precision_curve};
use crate::squeezed::{noon_vs_squeezed_grid, optimal_squeezing};
use crate::states::PdcTwinBeam;

pub const DEFAULT_LIMIT_ETAS: [f64; 3] = [0.5, 0.9, 0.99];
pub const DEFAULT_SQUEEZED_N_SIG: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];
pub const DEFAULT_CONDITIONAL_ETAS: [f64; 4] = [1.0, 0.7, 0.4, 0.1];
pub const DEFAULT_CONDITIONAL_EPSILON: f64 = 0.5;

/// `n_sig` from 1 to 1e4, 200 log-spaced points.
pub fn default_limits_grid() -> Vec<f64> {
    logspace(1.0, 1e4, 200)
}

/// `η = 1 - x` with `x` log-spaced from 0.5 down to 1e-3 (200 points).
pub fn default_noon_eta_grid() -> Vec<f64> {
    logspace(0.5, 1e-3, 200)
        .into_iter()
        .map(|x| 1.0 - x)
        .collect()
}

/// `η = 1 - x` with `x` log-spaced from 0.999 down to 1e-3 (200 points).
pub fn default_squeezed_eta_grid() -> Vec<f64> {
    logspace(0.999, 1e-3, 200)
        .into_iter()
        .map(|x| 1.0 - x)
        .collect()
}

fn non_empty(op: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        Err(Error::EmptyGrid(op))
    } else {
        Ok(())
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn describe_grid(ds: &mut FigureDataset, key: &str, grid: &[f64]) {
    ds.set_meta(
        format!("{key}_min"),
        grid.iter().cloned().fold(f64::INFINITY, f64::min),
    );
    ds.set_meta(
        format!("{key}_max"),
        grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    ds.set_meta(format!("{key}_points"), grid.len());
}

fn eta_label(eta: f64) -> String {
    format!("eta_{eta}")
}

/// Precision limits against sample photon number: sample-power SQL,
/// Heisenberg limit at `n0 = 2 n_sig`, squeezed-vacuum Cramér-Rao bound, and
/// the loss-forbidden boundary for each `η`.
pub fn fig_limits(n_sig_grid: &[f64], eta_list: &[f64]) -> Result<FigureDataset> {
    const OP: &str = "fig_limits";
    non_empty(OP, n_sig_grid)?;
    for &n in n_sig_grid {
        ensure(
            n >= 0.5 && n.is_finite(),
            OP,
            "n_sig",
            n,
            "n_sig >= 0.5 (Heisenberg needs n0 >= 1)",
        )?;
    }
    let mut ds =
        FigureDataset::new("fig-limits").with_axis("n_sig", AxisScale::Log, n_sig_grid.to_vec());
    let series = |f: &dyn Fn(f64) -> Result<f64>| {
        n_sig_grid.iter().map(|&n| f(n)).collect::<Result<Vec<_>>>()
    };
    ds.push_column("sql_sample", series(&|n| Ok(sql_sample(n)?.delta_phi))?);
    ds.push_column(
        "heisenberg",
        series(&|n| Ok(crate::limits::heisenberg(2.0 * n)?.delta_phi))?,
    );
    ds.push_column(
        "squeezed_crb",
        series(&|n| Ok(squeezed_vacuum_crb(n)?.delta_phi))?,
    );
    for &eta in eta_list {
        ds.push_column(
            format!("loss_sample_{}", eta_label(eta)),
            series(&|n| Ok(loss_bound(n, eta, PowerConstraint::Sample)?.delta_phi))?,
        );
    }
    describe_grid(&mut ds, "n_sig", n_sig_grid);
    ds.set_meta("etas", join(eta_list));
    ds.set_meta("power_constraint", "sample");
    Ok(ds)
}

/// Optimal NOON size and its enhancement against efficiency, with the
/// unit-enhancement reference and the efficiency where it is crossed.
pub fn fig_noon_loss(eta_grid: &[f64]) -> Result<FigureDataset> {
    const OP: &str = "fig_noon_loss";
    non_empty(OP, eta_grid)?;
    let optima = eta_grid
        .iter()
        .map(|&eta| noon_optimal_n(eta))
        .collect::<Result<Vec<_>>>()?;
    let enhancement: Vec<f64> = optima.iter().map(|o| o.enhancement).collect();
    let mut ds =
        FigureDataset::new("fig-noon-loss").with_axis("eta", AxisScale::Linear, eta_grid.to_vec());
    ds.push_column("n_opt", optima.iter().map(|o| o.n_opt as f64).collect());
    ds.push_column("root", optima.iter().map(|o| o.root).collect());
    ds.push_column("enhancement", enhancement.clone());
    ds.push_column("reference_one", vec![1.0; eta_grid.len()]);
    if let Some(eta) = unit_crossing(eta_grid, &enhancement) {
        ds.set_meta("unit_enhancement_eta", eta);
    }
    describe_grid(&mut ds, "eta", eta_grid);
    Ok(ds)
}

/// First `η` where `y - 1` changes sign, linearly interpolated.
fn unit_crossing(x: &[f64], y: &[f64]) -> Option<f64> {
    (1..x.len()).find_map(|i| {
        let (a, b) = (y[i - 1] - 1.0, y[i] - 1.0);
        (a == 0.0 || a.signum() != b.signum()).then(|| x[i - 1] + (x[i] - x[i - 1]) * a / (a - b))
    })
}

/// Optimal squeezing against efficiency for a few photon budgets: squeezed
/// photon number, optimal variance and enhancement over the sample SQL.
pub fn fig_squeezed_loss(eta_grid: &[f64], n_sig_list: &[f64]) -> Result<FigureDataset> {
    const OP: &str = "fig_squeezed_loss";
    non_empty(OP, eta_grid)?;
    non_empty(OP, n_sig_list)?;
    let mut ds = FigureDataset::new("fig-squeezed-loss").with_axis(
        "eta",
        AxisScale::Linear,
        eta_grid.to_vec(),
    );
    for &n in n_sig_list {
        let reports = eta_grid
            .iter()
            .map(|&eta| optimal_squeezing(n, eta))
            .collect::<Result<Vec<_>>>()?;
        ds.push_column(
            format!("n_opt_n_sig_{n}"),
            reports.iter().map(|r| r.n_opt_nonclassical).collect(),
        );
        ds.push_column(
            format!("v_opt_n_sig_{n}"),
            reports.iter().map(|r| r.v_opt).collect(),
        );
        ds.push_column(
            format!("enhancement_n_sig_{n}"),
            reports.iter().map(|r| r.enhancement).collect(),
        );
    }
    describe_grid(&mut ds, "eta", eta_grid);
    ds.set_meta("n_sig_list", join(n_sig_list));
    Ok(ds)
}

/// NOON over squeezed precision ratio on an efficiency × photon grid.
pub fn fig_compare(eta_grid: &[f64], n_sig_grid: &[f64]) -> Result<FigureDataset> {
    let mut ds = noon_vs_squeezed_grid(eta_grid, n_sig_grid)?.dataset;
    describe_grid(&mut ds, "eta", eta_grid);
    describe_grid(&mut ds, "n_sig", n_sig_grid);
    Ok(ds)
}

/// NOON precision against photon number at one efficiency.
pub fn fig_noon_curve(eta: f64, n_sig_grid: &[f64]) -> Result<FigureDataset> {
    let mut ds = noon_precision_curve(eta, n_sig_grid)?;
    ds.figure_id = "fig-noon-curve".into();
    describe_grid(&mut ds, "n_sig", n_sig_grid);
    Ok(ds)
}

fn side_name(side: LossSide) -> &'static str {
    match side {
        LossSide::Probe => "probe",
        LossSide::Detector => "detector",
    }
}

fn kind_name(kind: DetectorKind) -> &'static str {
    match kind {
        DetectorKind::NumberResolving => "number-resolving",
        DetectorKind::Bucket => "bucket",
    }
}

/// Conditional photon-number distributions at the sample, one column per
/// efficiency, over a shared photon-number axis (zero padded).
pub fn fig_conditional(
    side: LossSide,
    kind: DetectorKind,
    eta_list: &[f64],
    epsilon: f64,
    n_det: usize,
) -> Result<FigureDataset> {
    const OP: &str = "fig_conditional";
    non_empty(OP, eta_list)?;
    let state = PdcTwinBeam::new(epsilon)?;
    let panels = eta_list
        .iter()
        .map(|&eta| conditional_distribution(&state, side, kind, eta, n_det))
        .collect::<Result<Vec<_>>>()?;
    let len = panels
        .iter()
        .map(|d| d.pmf().len())
        .max()
        .unwrap_or(1)
        .max(2);
    let axis: Vec<f64> = (0..len).map(|n| n as f64).collect();
    let mut ds = FigureDataset::new(format!(
        "fig-conditional-{}-{}",
        side_name(side),
        kind_name(kind)
    ))
    .with_axis("n", AxisScale::Linear, axis);
    for (&eta, d) in eta_list.iter().zip(&panels) {
        ds.push_column(
            format!("p_{}", eta_label(eta)),
            (0..len).map(|n| d.prob(n)).collect(),
        );
        ds.set_meta(format!("tail_mass_{}", eta_label(eta)), d.tail_mass());
    }
    ds.set_meta("side", side_name(side));
    ds.set_meta("detector", kind_name(kind));
    ds.set_meta("epsilon", epsilon);
    ds.set_meta("etas", join(eta_list));
    if kind == DetectorKind::NumberResolving {
        ds.set_meta("n_det", n_det);
    }
    Ok(ds)
}
