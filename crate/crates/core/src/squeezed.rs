//! Bright squeezed light with homodyne readout: precision under loss, the
//! optimal squeezing for a photon budget in the sample, and the comparison
//! with optimal NOON strategies.
//!
//! The squeezed state is taken to be minimum-uncertainty, so the
//! antisqueezed variance is `1/V_sqz`.

use rayon::prelude::*;

use crate::dataset::{logspace, AxisScale, FigureDataset};
use crate::error::{ensure, Error, Result};
use crate::limits::sql_sample;
use crate::noon::{noon_optimal_n, strategy_with_optimum};

fn check_eta(op: &'static str, eta: f64) -> Result<()> {
    ensure(
        eta > 0.0 && eta <= 1.0,
        op,
        "eta",
        eta,
        "efficiency in (0, 1]",
    )
}

/// Homodyne phase precision of a bright squeezed probe,
/// `(1/(2α)) √(V_sqz + (1-η)/η)`.
pub fn squeezed_precision(alpha: f64, v_sqz: f64, eta: f64) -> Result<f64> {
    const OP: &str = "squeezed_precision";
    ensure(
        alpha > 0.0 && alpha.is_finite(),
        OP,
        "alpha",
        alpha,
        "coherent amplitude > 0",
    )?;
    ensure(
        v_sqz > 0.0 && v_sqz.is_finite(),
        OP,
        "v_sqz",
        v_sqz,
        "squeezed variance > 0",
    )?;
    check_eta(OP, eta)?;
    Ok((v_sqz + (1.0 - eta) / eta).sqrt() / (2.0 * alpha))
}

/// Photons tied up in the squeezing, `(V + 1/V - 2)/4`.
pub fn squeezing_photons(v_sqz: f64) -> f64 {
    (v_sqz + 1.0 / v_sqz - 2.0) / 4.0
}

/// Precision when `n_sig` sample photons are split between the coherent
/// amplitude and the squeezing:
/// `√[(V + (1-η)/η) / (4 n_sig - V - 1/V + 2)]`.
pub fn squeezed_precision_budget(n_sig: f64, v_sqz: f64, eta: f64) -> Result<f64> {
    const OP: &str = "squeezed_precision_budget";
    ensure(
        n_sig > 0.0 && n_sig.is_finite(),
        OP,
        "n_sig",
        n_sig,
        "photon number > 0",
    )?;
    ensure(
        v_sqz > 0.0 && v_sqz <= 1.0,
        OP,
        "v_sqz",
        v_sqz,
        "squeezed variance in (0, 1]",
    )?;
    check_eta(OP, eta)?;
    let denominator = 4.0 * n_sig - v_sqz - 1.0 / v_sqz + 2.0;
    ensure(
        denominator > 0.0,
        OP,
        "v_sqz",
        v_sqz,
        "squeezing that leaves a positive coherent amplitude (4 n_sig > V + 1/V - 2)",
    )?;
    Ok(((v_sqz + (1.0 - eta) / eta) / denominator).sqrt())
}

/// Closed-form optimal squeezed variance
/// `(η + √(4η(1-η) n_sig + 1)) / (4η n_sig + η + 1)`.
pub fn optimal_variance(n_sig: f64, eta: f64) -> f64 {
    (eta + (4.0 * eta * (1.0 - eta) * n_sig + 1.0).sqrt()) / (4.0 * eta * n_sig + eta + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedBudgetReport {
    pub n_sig: f64,
    pub eta: f64,
    pub v_opt: f64,
    /// Optimal photon number in the squeezed fluctuations.
    pub n_opt_nonclassical: f64,
    pub delta_phi: f64,
    /// Sample-power SQL divided by `delta_phi`.
    pub enhancement: f64,
}

pub fn optimal_squeezing(n_sig: f64, eta: f64) -> Result<SqueezedBudgetReport> {
    const OP: &str = "optimal_squeezing";
    ensure(
        n_sig > 0.0 && n_sig.is_finite(),
        OP,
        "n_sig",
        n_sig,
        "photon number > 0",
    )?;
    check_eta(OP, eta)?;
    let v_opt = optimal_variance(n_sig, eta).min(1.0);
    let delta_phi = squeezed_precision_budget(n_sig, v_opt, eta)?;
    Ok(SqueezedBudgetReport {
        n_sig,
        eta,
        v_opt,
        n_opt_nonclassical: squeezing_photons(v_opt),
        delta_phi,
        enhancement: sql_sample(n_sig)?.delta_phi / delta_phi,
    })
}

/// Upper end of the photon range for the comparison grid.
pub const COMPARE_MAX_N_SIG: f64 = 100.0;

/// Default comparison grid: `1-η` log-spaced from 0.5 to 1e-3 (so `η`
/// ascends from 0.5 to 0.999) and `n_sig` log-spaced on `[1, 100]`,
/// 200 points each.
pub fn default_compare_grid() -> (Vec<f64>, Vec<f64>) {
    let etas = logspace(0.5, 1e-3, 200)
        .into_iter()
        .map(|l| 1.0 - l)
        .collect();
    (etas, logspace(1.0, COMPARE_MAX_N_SIG, 200))
}

/// Leftmost photon-number column where NOON states win, with the span of
/// efficiencies there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourTip {
    pub n_sig_index: usize,
    pub n_sig: f64,
    pub eta_low: f64,
    pub eta_high: f64,
    pub eta_low_index: usize,
    pub eta_high_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSummary {
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `(η, n_sig)` of the extremes.
    pub argmin: (f64, f64),
    pub argmax: (f64, f64),
    pub noon_superior_tip: Option<ContourTip>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoonSqueezedComparison {
    /// Ratio `Δφ_NOON / Δφ_SQZ` over `eta × n_sig`.
    pub dataset: FigureDataset,
    pub summary: ComparisonSummary,
}

/// Ratio of optimal NOON precision to optimal squeezed precision on an
/// efficiency × photon-number grid. Values below one favour NOON states.
pub fn noon_vs_squeezed_grid(
    eta_grid: &[f64],
    n_sig_grid: &[f64],
) -> Result<NoonSqueezedComparison> {
    const OP: &str = "noon_vs_squeezed_grid";
    if eta_grid.is_empty() || n_sig_grid.is_empty() {
        return Err(Error::EmptyGrid(OP));
    }
    for &eta in eta_grid {
        ensure(
            eta > 0.0 && eta < 1.0,
            OP,
            "eta",
            eta,
            "efficiency strictly inside (0, 1)",
        )?;
    }
    for &n in n_sig_grid {
        ensure(
            n > 0.0 && n <= COMPARE_MAX_N_SIG,
            OP,
            "n_sig",
            n,
            "photon number in (0, 100]",
        )?;
    }

    let rows: Vec<Vec<f64>> = eta_grid
        .par_iter()
        .map(|&eta| -> Result<Vec<f64>> {
            let n_opt = noon_optimal_n(eta)?.n_opt as f64;
            n_sig_grid
                .iter()
                .map(|&n| {
                    let noon = strategy_with_optimum(eta, n, Some(n_opt)).delta_phi;
                    let sqz = optimal_squeezing(n, eta)?.delta_phi;
                    Ok(noon / sqz)
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let summary = summarize(eta_grid, n_sig_grid, &rows);
    let mut dataset = FigureDataset::new("fig-compare")
        .with_axis("eta", AxisScale::Linear, eta_grid.to_vec())
        .with_axis("n_sig", AxisScale::Log, n_sig_grid.to_vec());
    dataset.push_column("ratio_noon_over_sqz", rows.into_iter().flatten().collect());
    dataset.set_meta("min", summary.min_ratio);
    dataset.set_meta("max", summary.max_ratio);
    dataset.set_meta("argmin_eta", summary.argmin.0);
    dataset.set_meta("argmin_n_sig", summary.argmin.1);
    dataset.set_meta("argmax_eta", summary.argmax.0);
    dataset.set_meta("argmax_n_sig", summary.argmax.1);
    if let Some(tip) = summary.noon_superior_tip {
        dataset.set_meta("noon_superior_min_n_sig", tip.n_sig);
        dataset.set_meta("noon_superior_eta_low", tip.eta_low);
        dataset.set_meta("noon_superior_eta_high", tip.eta_high);
    }
    Ok(NoonSqueezedComparison { dataset, summary })
}

fn summarize(eta_grid: &[f64], n_sig_grid: &[f64], rows: &[Vec<f64>]) -> ComparisonSummary {
    let mut min = (f64::INFINITY, (0.0, 0.0));
    let mut max = (f64::NEG_INFINITY, (0.0, 0.0));
    for (i, row) in rows.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r < min.0 {
                min = (r, (eta_grid[i], n_sig_grid[j]));
            }
            if r > max.0 {
                max = (r, (eta_grid[i], n_sig_grid[j]));
            }
        }
    }
    // columns visited in grid order; "leftmost" means first in that order
    let noon_superior_tip = (0..n_sig_grid.len()).find_map(|j| {
        let winners: Vec<usize> = (0..eta_grid.len()).filter(|&i| rows[i][j] < 1.0).collect();
        let (&first, &last) = (winners.first()?, winners.last()?);
        let (lo, hi) = if eta_grid[first] <= eta_grid[last] {
            (first, last)
        } else {
            (last, first)
        };
        Some(ContourTip {
            n_sig_index: j,
            n_sig: n_sig_grid[j],
            eta_low: eta_grid[lo],
            eta_high: eta_grid[hi],
            eta_low_index: lo,
            eta_high_index: hi,
        })
    });
    ComparisonSummary {
        min_ratio: min.0,
        max_ratio: max.0,
        argmin: min.1,
        argmax: max.1,
        noon_superior_tip,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{loss_bound, qnl, PowerConstraint};
    use crate::numeric::golden_section_min;
    use proptest::prelude::*;

    /// Lower end of the feasible squeezing range for a budget.
    fn v_min(n_sig: f64) -> f64 {
        let b = 4.0 * n_sig + 2.0;
        (b - (b * b - 4.0).sqrt()) / 2.0
    }

    fn golden_v(n_sig: f64, eta: f64) -> f64 {
        let lo = v_min(n_sig) * (1.0 + 1e-9);
        golden_section_min(
            |v| squeezed_precision_budget(n_sig, v, eta).unwrap().powi(2),
            lo,
            1.0,
            1e-13,
            1000,
        )
        .x
    }

    #[test]
    fn precision_examples() {
        let a = 7.0;
        let d = squeezed_precision(a, 1.0, 1.0).unwrap();
        assert!((d - sql_sample(a * a).unwrap().delta_phi).abs() < 1e-15);
        assert!((squeezed_precision(10.0, 0.1, 1.0).unwrap() - 0.0158).abs() < 1e-4);
        for eta in [0.2, 0.5, 0.9] {
            for v in [0.99, 0.5, 0.01] {
                let alpha = 5.0;
                let q = qnl(alpha * alpha, eta).unwrap().delta_phi / 2.0;
                assert!(squeezed_precision(alpha, v, eta).unwrap() < q);
            }
        }
        assert!(squeezed_precision(0.0, 0.5, 1.0).is_err());
        assert!(squeezed_precision(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn budget_examples() {
        for n in [0.3, 1.0, 42.0] {
            for eta in [0.4, 1.0] {
                let d = squeezed_precision_budget(n, 1.0, eta).unwrap();
                let reference = (1.0 / eta).sqrt() / (2.0 * n.sqrt());
                assert!((d - reference).abs() < 1e-15 * reference);
            }
        }
        assert_eq!(
            squeezed_precision_budget(5.0, 1.0, 1.0).unwrap(),
            sql_sample(5.0).unwrap().delta_phi
        );
        let d = squeezed_precision_budget(10.0, 0.1775, 0.5).unwrap();
        assert!((d - 0.18038).abs() < 1e-5);
        // every photon spent on squeezing
        assert!(squeezed_precision_budget(1.0, 0.1, 1.0).is_err());
        assert!(squeezed_precision_budget(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn bright_limit_approaches_loss_bound() {
        let n = 1e8;
        let eta = 0.5;
        let r = optimal_squeezing(n, eta).unwrap();
        let b = loss_bound(n, eta, PowerConstraint::Sample)
            .unwrap()
            .delta_phi;
        assert!(r.delta_phi >= b);
        assert!(r.delta_phi / b - 1.0 < 1e-3);
    }

    #[test]
    fn optimal_examples() {
        assert!((optimal_squeezing(1e-12, 1.0).unwrap().v_opt - 1.0).abs() < 1e-9);
        let r = optimal_squeezing(10.0, 0.5).unwrap();
        assert!((r.v_opt - 0.17752).abs() < 1e-5);
        assert!((r.v_opt - golden_v(10.0, 0.5)).abs() < 1e-6);
        assert!((r.n_opt_nonclassical - squeezing_photons(r.v_opt)).abs() < 1e-15);
        // loss keeps the budget optimum above the lossless SQL here
        assert!((r.enhancement - sql_sample(10.0).unwrap().delta_phi / r.delta_phi).abs() < 1e-15);
        assert!(r.enhancement < 1.0);
        assert!(optimal_squeezing(10.0, 1.0).unwrap().enhancement > 1.0);
    }

    #[test]
    fn derivative_vanishes_at_optimum() {
        for (n, eta) in [(10.0, 0.5), (1.0, 0.9), (300.0, 0.99), (5.0, 1.0)] {
            let v = optimal_variance(n, eta);
            let f = |x: f64| squeezed_precision_budget(n, x, eta).unwrap().powi(2);
            let h = 1e-4 * v;
            let d1 = (f(v + h) - f(v - h)) / (2.0 * h);
            let d2 = (f(v + h) - 2.0 * f(v) + f(v - h)) / (h * h);
            assert!(d1.abs() <= 1e-6 * d2 * v, "n={n} eta={eta} d1={d1} d2={d2}");
        }
    }

    #[test]
    fn monotone_in_eta_and_photons() {
        let etas = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1.0];
        let ns = [0.5, 1.0, 3.0, 10.0, 100.0, 1e4];
        for &n in &ns {
            for w in etas.windows(2) {
                assert!(
                    optimal_squeezing(n, w[1]).unwrap().delta_phi
                        < optimal_squeezing(n, w[0]).unwrap().delta_phi
                );
            }
        }
        for &eta in &etas {
            for w in ns.windows(2) {
                assert!(
                    optimal_squeezing(w[1], eta).unwrap().delta_phi
                        < optimal_squeezing(w[0], eta).unwrap().delta_phi
                );
            }
        }
    }

    #[test]
    fn scaling_exponent_between_heisenberg_and_sql() {
        let grid = logspace(1e-2, 1e6, 300);
        for eta in [0.1, 0.5, 0.9, 0.999, 1.0] {
            let d: Vec<f64> = grid
                .iter()
                .map(|&n| optimal_squeezing(n, eta).unwrap().delta_phi)
                .collect();
            for k in 0..grid.len() - 1 {
                let slope = (d[k + 1] / d[k]).ln() / (grid[k + 1] / grid[k]).ln();
                assert!((-1.0..=-0.5).contains(&slope), "eta={eta} slope={slope}");
            }
        }
    }

    #[test]
    fn convergence_to_loss_floor() {
        // the gap to the floor closes like 0.5/√(n_sig (1-η)/η)
        for eta in [0.5, 0.9, 0.99] {
            let n = 1e4 * eta / (1.0 - eta);
            let r = optimal_squeezing(n, eta).unwrap();
            let b = loss_bound(n, eta, PowerConstraint::Sample)
                .unwrap()
                .delta_phi;
            assert!(r.delta_phi / b < 1.01);
        }
    }

    #[test]
    fn squeezing_wins_at_half_efficiency() {
        let etas = [0.5];
        let ns = logspace(1.0, 100.0, 25);
        let cmp = noon_vs_squeezed_grid(&etas, &ns).unwrap();
        assert!(cmp
            .dataset
            .column("ratio_noon_over_sqz")
            .unwrap()
            .iter()
            .all(|&r| r > 1.0));
        assert!(cmp.summary.noon_superior_tip.is_none());
        assert!(noon_vs_squeezed_grid(&[], &ns).is_err());
        assert!(noon_vs_squeezed_grid(&[0.5], &[200.0]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn optimum_beats_probe_values(eta in 0.01f64..1.0, log_n in -1.0f64..4.0) {
            let n = 10f64.powf(log_n);
            let r = optimal_squeezing(n, eta).unwrap();
            let floor = if eta < 1.0 { loss_bound(n, eta, PowerConstraint::Sample).unwrap().delta_phi } else { 0.0 };
            prop_assert!(r.delta_phi >= floor);
            for k in 1..=50 {
                let v = k as f64 / 50.0;
                if let Ok(d) = squeezed_precision_budget(n, v, eta) {
                    prop_assert!(r.delta_phi <= d * (1.0 + 1e-12));
                }
            }
        }
    }
}
