//! NOON-state phase estimation with loss in the sample arm.
//!
//! Losses in the reference arm, detection and state preparation are taken
//! as perfect. `η^{-N}` is handled in log space so large states and low
//! efficiencies do not overflow.

use crate::dataset::{AxisScale, FigureDataset};
use crate::error::{ensure, Error, Result};
use crate::limits::{loss_bound, sql_sample, PowerConstraint};
use crate::numeric::bisect;
use crate::special::softplus;

fn check_eta(op: &'static str, eta: f64) -> Result<()> {
    ensure(
        eta > 0.0 && eta <= 1.0,
        op,
        "eta",
        eta,
        "efficiency in (0, 1]",
    )
}

/// `ln(η^{-N} + 1)` for real `N`.
fn ln_loss_penalty(n: f64, eta: f64) -> f64 {
    softplus(-n * eta.ln())
}

/// Enhancement over the sample-power standard quantum limit for repeated
/// `N`-photon NOON states, `√(N/(η^{-N} + 1))`. `N` may be fractional.
pub fn enhancement_factor(n: f64, eta: f64) -> f64 {
    (0.5 * (n.ln() - ln_loss_penalty(n, eta))).exp()
}

/// Single-shot precision `√((η^{-N} + 1)/2)/N` for real `N > 0`.
pub fn single_shot_precision(n: f64, eta: f64) -> f64 {
    (0.5 * (ln_loss_penalty(n, eta) - std::f64::consts::LN_2) - n.ln()).exp()
}

/// Best precision from one `N`-photon NOON state through a sample of
/// transmission `η`.
pub fn noon_single_shot(n: u32, eta: f64) -> Result<f64> {
    ensure(n >= 1, "noon_single_shot", "n", n as f64, "n >= 1")?;
    check_eta("noon_single_shot", eta)?;
    Ok(single_shot_precision(n as f64, eta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonLossReport {
    pub n: u32,
    pub eta: f64,
    pub n_sig: f64,
    pub delta_phi_single: f64,
    /// Precision after `M = 2 n_sig / N` repetitions.
    pub delta_phi_m: f64,
    pub enhancement: f64,
    pub m_repetitions: f64,
    /// `false` when `M` is not a whole number (real-valued idealisation).
    pub integer_repetitions: bool,
}

/// Repeats `N`-photon NOON states until `n_sig` photons have passed the
/// sample (each state puts `N/2` photons there on average).
pub fn noon_repeated(n: u32, eta: f64, n_sig: f64) -> Result<NoonLossReport> {
    const OP: &str = "noon_repeated";
    ensure(n >= 1, OP, "n", n as f64, "n >= 1")?;
    check_eta(OP, eta)?;
    ensure(
        n_sig.is_finite() && n_sig >= n as f64 / 2.0,
        OP,
        "n_sig",
        n_sig,
        "n_sig >= N/2 (enough photons for one NOON state)",
    )?;
    let nf = n as f64;
    let m_repetitions = 2.0 * n_sig / nf;
    let enhancement = enhancement_factor(nf, eta);
    let delta_phi_m = sql_sample(n_sig)?.delta_phi / enhancement;
    Ok(NoonLossReport {
        n,
        eta,
        n_sig,
        delta_phi_single: single_shot_precision(nf, eta),
        delta_phi_m,
        enhancement,
        m_repetitions,
        integer_repetitions: m_repetitions.fract() == 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonThreshold {
    /// Efficiency above which `N`-photon NOON states beat the SQL,
    /// `(N-1)^{-1/N}`.
    pub efficiency: f64,
    /// `false` when the threshold is unit efficiency (N = 2): the SQL can
    /// only be matched, never beaten.
    pub reachable: bool,
}

pub fn noon_threshold_efficiency(n: u32) -> Result<NoonThreshold> {
    ensure(n >= 2, "noon_threshold_efficiency", "n", n as f64, "n >= 2")?;
    let nf = n as f64;
    let efficiency = (nf - 1.0).powf(-1.0 / nf);
    Ok(NoonThreshold {
        efficiency,
        reachable: efficiency < 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonOptimum {
    pub n_opt: u32,
    pub enhancement: f64,
    /// Real root of `N ln η + η^N + 1 = 0`.
    pub root: f64,
    pub root_residual: f64,
}

/// `N ln η + η^N + 1`; its zero is the stationary point of the enhancement.
pub fn optimality_residual(n: f64, eta: f64) -> f64 {
    let ln_eta = eta.ln();
    n * ln_eta + (n * ln_eta).exp() + 1.0
}

/// Optimal NOON state size at sample transmission `η`.
///
/// The stationarity condition is strictly decreasing in `N`, so its root is
/// bracketed on `[0, 2^k]` and found by bisection; the best whole number lies
/// next to it.
pub fn noon_optimal_n(eta: f64) -> Result<NoonOptimum> {
    ensure(
        eta > 0.0 && eta < 1.0,
        "noon_optimal_n",
        "eta",
        eta,
        "efficiency strictly inside (0, 1)",
    )?;
    let f = |n: f64| optimality_residual(n, eta);
    let mut hi = 1.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Domain {
                op: "noon_optimal_n",
                name: "eta",
                value: eta,
                requirement: "efficiency with a finite optimal state size",
            });
        }
    }
    let root = bisect(f, 0.0, hi, 400)?;
    let lo = (root.x.floor() - 1.0).max(1.0) as u32;
    let up = (root.x.ceil() + 1.0).max(1.0) as u32;
    let mut best = (lo, enhancement_factor(lo as f64, eta));
    for n in lo + 1..=up {
        let e = enhancement_factor(n as f64, eta);
        if e > best.1 {
            best = (n, e);
        }
    }
    Ok(NoonOptimum {
        n_opt: best.0,
        enhancement: best.1,
        root: root.x,
        root_residual: root.residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonFlux {
    /// Trials per window so that lossless `1/(N√M)` equals the sample-power
    /// SQL of `target_n_sig` photons: `4 n_sig / N²`.
    pub sample_matched: f64,
    /// Total-power comparison form `n / N²`.
    pub total_power: f64,
}

/// Trial rate a lossless NOON source needs to match a classical measurement
/// passing `target_n_sig` photons through the sample in the same window.
pub fn noon_flux_requirement(n: u32, target_n_sig: f64) -> Result<NoonFlux> {
    ensure(n >= 1, "noon_flux_requirement", "n", n as f64, "n >= 1")?;
    ensure(
        target_n_sig > 0.0 && target_n_sig.is_finite(),
        "noon_flux_requirement",
        "target_n_sig",
        target_n_sig,
        "photon number > 0",
    )?;
    let n2 = (n as f64).powi(2);
    Ok(NoonFlux {
        sample_matched: 4.0 * target_n_sig / n2,
        total_power: target_n_sig / n2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonStrategy {
    pub delta_phi: f64,
    /// NOON size used; fractional below the kink.
    pub n_used: f64,
    pub m_repetitions: f64,
    pub single_state: bool,
}

/// Best NOON strategy for a photon budget `n_sig` at transmission `η`: one
/// state of size `2 n_sig` below the kink `n_sig = N_opt/2`, repeated
/// `N_opt`-photon states above it.
pub fn optimal_noon_precision(eta: f64, n_sig: f64) -> Result<NoonStrategy> {
    check_eta("optimal_noon_precision", eta)?;
    ensure(
        n_sig > 0.0 && n_sig.is_finite(),
        "optimal_noon_precision",
        "n_sig",
        n_sig,
        "photon number > 0",
    )?;
    let n_opt = if eta < 1.0 {
        Some(noon_optimal_n(eta)?.n_opt as f64)
    } else {
        None
    };
    Ok(strategy_with_optimum(eta, n_sig, n_opt))
}

/// As [`optimal_noon_precision`] with `N_opt` supplied (`None` when lossless).
pub(crate) fn strategy_with_optimum(eta: f64, n_sig: f64, n_opt: Option<f64>) -> NoonStrategy {
    match n_opt {
        Some(n_opt) if n_sig > n_opt / 2.0 => NoonStrategy {
            delta_phi: 1.0 / (2.0 * n_sig.sqrt() * enhancement_factor(n_opt, eta)),
            n_used: n_opt,
            m_repetitions: 2.0 * n_sig / n_opt,
            single_state: false,
        },
        _ => {
            let n = 2.0 * n_sig;
            NoonStrategy {
                delta_phi: single_shot_precision(n, eta),
                n_used: n,
                m_repetitions: 1.0,
                single_state: true,
            }
        }
    }
}

/// Optimal NOON precision against sample photon number at one efficiency.
pub fn noon_precision_curve(eta: f64, n_sig_grid: &[f64]) -> Result<FigureDataset> {
    const OP: &str = "noon_precision_curve";
    if n_sig_grid.is_empty() {
        return Err(Error::EmptyGrid(OP));
    }
    check_eta(OP, eta)?;
    for w in n_sig_grid.windows(2) {
        ensure(
            w[1] > w[0],
            OP,
            "n_sig",
            w[1],
            "strictly ascending photon grid",
        )?;
    }
    ensure(
        n_sig_grid[0] > 0.0,
        OP,
        "n_sig",
        n_sig_grid[0],
        "photon number > 0",
    )?;

    let n_opt = if eta < 1.0 {
        Some(noon_optimal_n(eta)?.n_opt as f64)
    } else {
        None
    };
    let strategies: Vec<NoonStrategy> = n_sig_grid
        .iter()
        .map(|&n| strategy_with_optimum(eta, n, n_opt))
        .collect();

    let mut ds = FigureDataset::new("noon-precision-curve").with_axis(
        "n_sig",
        AxisScale::Log,
        n_sig_grid.to_vec(),
    );
    ds.push_column(
        "delta_phi_noon",
        strategies.iter().map(|s| s.delta_phi).collect(),
    );
    ds.push_column("n_used", strategies.iter().map(|s| s.n_used).collect());
    ds.push_column(
        "m_repetitions",
        strategies.iter().map(|s| s.m_repetitions).collect(),
    );
    ds.push_column(
        "sql_sample",
        n_sig_grid
            .iter()
            .map(|&n| sql_sample(n).map(|r| r.delta_phi))
            .collect::<Result<_>>()?,
    );
    ds.push_column(
        "heisenberg",
        n_sig_grid.iter().map(|&n| 1.0 / (2.0 * n)).collect(),
    );
    if eta < 1.0 {
        ds.push_column(
            "loss_bound_sample",
            n_sig_grid
                .iter()
                .map(|&n| loss_bound(n, eta, PowerConstraint::Sample).map(|r| r.delta_phi))
                .collect::<Result<_>>()?,
        );
    }
    ds.set_meta("eta", eta);
    if let Some(n_opt) = n_opt {
        ds.set_meta("n_opt", n_opt);
        ds.set_meta("kink_n_sig", n_opt / 2.0);
    }
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive integer scan; ties resolved to the smaller N.
    fn scan_optimum(eta: f64, n_max: u32) -> (u32, f64) {
        let mut best = (1, enhancement_factor(1.0, eta));
        for n in 2..=n_max {
            let e = enhancement_factor(n as f64, eta);
            if e > best.1 {
                best = (n, e);
            }
        }
        best
    }

    fn naive_enhancement(n: u32, eta: f64) -> f64 {
        (n as f64 / (eta.powi(-(n as i32)) + 1.0)).sqrt()
    }

    #[test]
    fn log_space_matches_naive_form() {
        for n in [1u32, 2, 5, 12, 40] {
            for eta in [0.3, 0.8, 0.99, 1.0] {
                let a = enhancement_factor(n as f64, eta);
                assert!((a - naive_enhancement(n, eta)).abs() < 1e-13 * a);
            }
        }
        // η^{-N} overflows f64 here; the log-space form stays finite
        assert!(enhancement_factor(200.0, 0.001) > 0.0);
        assert!(single_shot_precision(200.0, 0.001).is_finite());
    }

    #[test]
    fn single_shot_examples() {
        for n in 1..10 {
            let d = noon_single_shot(n, 1.0).unwrap();
            assert!((d - 1.0 / n as f64).abs() < 1e-15);
        }
        assert_eq!(noon_single_shot(1, 1.0).unwrap(), 1.0);
        let d = noon_single_shot(4, 0.8).unwrap();
        let direct = ((0.8f64.powi(-4) + 1.0) / 2.0).sqrt() / 4.0;
        assert!((d - direct).abs() < 1e-15);
        assert!((d - 0.327939).abs() < 1e-6);
        assert!(noon_single_shot(3, 0.0).is_err());
        assert!(noon_single_shot(0, 0.5).is_err());
    }

    #[test]
    fn repeated_examples() {
        let r = noon_repeated(2, 1.0, 10.0).unwrap();
        assert!((r.enhancement - 1.0).abs() < 1e-15);
        let r = noon_repeated(2, 1.0, 1.0).unwrap();
        assert!((r.delta_phi_m - 0.5).abs() < 1e-15);
        assert_eq!(r.delta_phi_m, sql_sample(1.0).unwrap().delta_phi);
        let r = noon_repeated(12, 0.9, 600.0).unwrap();
        assert!((r.enhancement - 1.626).abs() < 1e-3);
        assert_eq!(r.m_repetitions, 100.0);
        assert!(r.integer_repetitions);
        // closed form for Δφ^(M)
        let direct = 1.0 / (2.0 * 600f64.sqrt()) * ((0.9f64.powi(-12) + 1.0) / 12.0).sqrt();
        assert!((r.delta_phi_m - direct).abs() < 1e-15);
        assert!(!noon_repeated(3, 0.9, 2.0).unwrap().integer_repetitions);
        assert!(noon_repeated(4, 0.9, 1.9).is_err());
    }

    #[test]
    fn threshold_examples() {
        let t = noon_threshold_efficiency(3).unwrap();
        assert!((t.efficiency - 2f64.powf(-1.0 / 3.0)).abs() < 1e-15);
        assert!((t.efficiency - 0.794).abs() < 1e-3);
        let t = noon_threshold_efficiency(5).unwrap();
        assert!((t.efficiency - 0.758).abs() < 1e-3);
        let t = noon_threshold_efficiency(2).unwrap();
        assert_eq!(t.efficiency, 1.0);
        assert!(!t.reachable);
        assert!(noon_threshold_efficiency(1).is_err());
    }

    #[test]
    fn threshold_separates_advantage() {
        for n in 3..=20u32 {
            let t = noon_threshold_efficiency(n).unwrap().efficiency;
            let above = (t + 1.0) / 2.0;
            let below = t * 0.98;
            assert!(noon_repeated(n, above, 100.0).unwrap().enhancement > 1.0);
            assert!(noon_repeated(n, below, 100.0).unwrap().enhancement <= 1.0);
        }
    }

    #[test]
    fn optimum_matches_scan() {
        let o = noon_optimal_n(0.9).unwrap();
        assert_eq!(o.n_opt, 12);
        assert!((o.enhancement - 1.626).abs() < 1e-3);
        assert_eq!((o.n_opt, o.enhancement), scan_optimum(0.9, 200));
        assert!(optimality_residual(o.root, 0.9).abs() < 1e-10);
        assert!(noon_optimal_n(0.99).unwrap().n_opt > o.n_opt);
        assert!(noon_optimal_n(0.5).unwrap().enhancement < 1.0);
        assert!(noon_optimal_n(1.0).is_err());
        assert!(noon_optimal_n(0.0).is_err());
    }

    #[test]
    fn discrete_optimality_on_grid() {
        for i in 0..50 {
            let eta = 0.05 + 0.94 * i as f64 / 49.0;
            let o = noon_optimal_n(eta).unwrap();
            let e = |n: u32| enhancement_factor(n as f64, eta);
            assert!(o.enhancement >= e(o.n_opt + 1));
            if o.n_opt > 1 {
                assert!(o.enhancement >= e(o.n_opt - 1));
            }
            assert_eq!(
                (o.n_opt, o.enhancement),
                scan_optimum(eta, 200),
                "eta={eta}"
            );
        }
    }

    #[test]
    fn flux_examples() {
        let f = noon_flux_requirement(5, 1e12).unwrap();
        assert!((f.total_power - 4e10).abs() < 1.0);
        assert!(f.total_power >= 1e10 && f.total_power < 1e12);
        let f = noon_flux_requirement(1, 250.0).unwrap();
        assert_eq!(f.sample_matched, 1000.0);
        let f = noon_flux_requirement(10, 1e12).unwrap();
        assert!((f.total_power - 1e10).abs() < 1e-3);
        // lossless NOON precision at the matched rate equals the SQL target
        let f = noon_flux_requirement(7, 1e6).unwrap();
        let dphi = 1.0 / (7.0 * f.sample_matched.sqrt());
        assert!((dphi - sql_sample(1e6).unwrap().delta_phi).abs() < 1e-15);
    }

    #[test]
    fn curve_follows_heisenberg_when_lossless() {
        let grid = crate::dataset::logspace(0.5, 50.0, 30);
        let ds = noon_precision_curve(1.0, &grid).unwrap();
        let noon = ds.column("delta_phi_noon").unwrap();
        for (d, n) in noon.iter().zip(&grid) {
            assert!((d - 1.0 / (2.0 * n)).abs() < 1e-14 * d);
        }
    }

    #[test]
    fn curve_is_continuous_at_kink() {
        for eta in [0.6, 0.9, 0.97] {
            let n_opt = noon_optimal_n(eta).unwrap().n_opt as f64;
            let kink = n_opt / 2.0;
            let single = single_shot_precision(n_opt, eta);
            let repeated = noon_repeated(n_opt as u32, eta, kink).unwrap().delta_phi_m;
            assert!((single - repeated).abs() < 1e-9 * single);
            let s = optimal_noon_precision(eta, kink).unwrap();
            assert!(s.single_state);
            assert!((s.delta_phi - repeated).abs() < 1e-9 * single);
        }
    }

    #[test]
    fn curve_parallel_to_sql_at_high_flux() {
        let grid = crate::dataset::logspace(10.0, 1e6, 40);
        let ds = noon_precision_curve(0.5, &grid).unwrap();
        let e = noon_optimal_n(0.5).unwrap().enhancement;
        for (d, s) in ds
            .column("delta_phi_noon")
            .unwrap()
            .iter()
            .zip(ds.column("sql_sample").unwrap())
        {
            assert!((d / s - 1.0 / e).abs() < 1e-9);
        }
    }

    #[test]
    fn curve_respects_loss_bound() {
        let grid = crate::dataset::logspace(0.05, 1e5, 200);
        for eta in [0.3, 0.5, 0.9, 0.99, 0.999] {
            let ds = noon_precision_curve(eta, &grid).unwrap();
            for (d, b) in ds
                .column("delta_phi_noon")
                .unwrap()
                .iter()
                .zip(ds.column("loss_bound_sample").unwrap())
            {
                assert!(d >= b, "eta={eta}");
            }
        }
        assert!(noon_precision_curve(0.9, &[]).is_err());
        assert!(noon_precision_curve(0.9, &[2.0, 1.0]).is_err());
    }
}
