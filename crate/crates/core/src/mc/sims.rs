use std::f64::consts::{FRAC_PI_2, PI};

use rand::RngExt;
use rand_distr::{Binomial, Distribution, StandardNormal};
use rayon::prelude::*;

use super::poisson::sample_poisson;
use super::rng::{run_trials, trial_rng};
use crate::dataset::{linspace, AxisScale, FigureDataset};
use crate::error::{ensure, Result};
use crate::limits::qnl;
use crate::numeric::golden_section_min;
use crate::squeezed::squeezed_precision;

const STREAM_MZ: u64 = 1;
const STREAM_NOON_FRINGE: u64 = 2;
const STREAM_CLASSICAL_FRINGE: u64 = 3;
const STREAM_HOM: u64 = 4;
const STREAM_HOMODYNE: u64 = 5;
const STREAM_ABSORPTION_HERALDED: u64 = 6;
const STREAM_ABSORPTION_COHERENT: u64 = 7;

/// Fewest trials for which a spread estimate is reported.
pub const MIN_TRIALS: usize = 100;

/// Largest offset from `π/2` accepted by the linearised interferometer
/// estimator.
pub const MZ_PHASE_WINDOW: f64 = PI / 8.0;

/// Homodyne simulations need `|α|² ≥ HOMODYNE_GATE · max(1, 1/V_sqz)`.
pub const HOMODYNE_GATE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: usize,
    /// True phase in radians.
    pub phase: f64,
    /// Mean photon number of the probe (`n0`, or `|α|²` for homodyne).
    pub photons: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimReport {
    pub trials: usize,
    pub estimate_mean: f64,
    pub estimate_std: f64,
    /// `estimate_std / √(2 trials)`.
    pub std_error_of_std: f64,
    pub analytic_reference: f64,
}

impl SimReport {
    fn from_estimates(estimates: &[f64], analytic_reference: f64) -> Self {
        let n = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / n;
        let var = estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let std = var.sqrt();
        Self {
            trials: estimates.len(),
            estimate_mean: mean,
            estimate_std: std,
            std_error_of_std: std / (2.0 * n).sqrt(),
            analytic_reference,
        }
    }

    /// `(estimate_std - analytic_reference) / std_error_of_std`.
    pub fn z_score(&self) -> f64 {
        (self.estimate_std - self.analytic_reference) / self.std_error_of_std
    }

    /// Single-row dataset holding the report fields.
    pub fn to_dataset(&self, figure_id: &str) -> FigureDataset {
        let mut ds = FigureDataset::new(figure_id);
        ds.push_column("estimate_mean", vec![self.estimate_mean]);
        ds.push_column("estimate_std", vec![self.estimate_std]);
        ds.push_column("std_error_of_std", vec![self.std_error_of_std]);
        ds.push_column("analytic_reference", vec![self.analytic_reference]);
        ds.set_meta("trials", self.trials);
        ds
    }
}

fn check_trials(op: &'static str, trials: usize, min: usize) -> Result<()> {
    ensure(
        trials >= min,
        op,
        "trials",
        trials as f64,
        if min == MIN_TRIALS {
            "at least 100 trials"
        } else {
            "at least 1000 trials"
        },
    )
}

fn check_eta(op: &'static str, eta: f64) -> Result<()> {
    ensure(
        eta > 0.0 && eta <= 1.0,
        op,
        "eta",
        eta,
        "efficiency in (0, 1]",
    )
}

/// Mach-Zehnder with a coherent probe of `n0` photons: Poisson counts with
/// means `η n0 (1 ± cos φ)/2` and the estimator `π/2 - (n_A - n_B)/(η n0)`.
/// Reference: `1/√(η n0)`.
pub fn simulate_coherent_mz(cfg: &SimConfig) -> Result<SimReport> {
    const OP: &str = "simulate_coherent_mz";
    check_trials(OP, cfg.trials, MIN_TRIALS)?;
    ensure(
        cfg.photons >= 100.0 && cfg.photons.is_finite(),
        OP,
        "n0",
        cfg.photons,
        "n0 >= 100",
    )?;
    check_eta(OP, cfg.eta)?;
    ensure(
        (cfg.phase - FRAC_PI_2).abs() <= MZ_PHASE_WINDOW,
        OP,
        "phase",
        cfg.phase,
        "operating point within pi/8 of pi/2",
    )?;
    let detected = cfg.eta * cfg.photons;
    let (mean_a, mean_b) = (
        detected * (1.0 + cfg.phase.cos()) / 2.0,
        detected * (1.0 - cfg.phase.cos()) / 2.0,
    );
    let estimates = run_trials(cfg.seed, STREAM_MZ, cfg.trials, |rng| {
        let n_a = sample_poisson(rng, mean_a) as f64;
        let n_b = sample_poisson(rng, mean_b) as f64;
        FRAC_PI_2 - (n_a - n_b) / detected
    });
    Ok(SimReport::from_estimates(
        &estimates,
        qnl(cfg.photons, cfg.eta)?.delta_phi,
    ))
}

/// Homodyne readout of a bright squeezed probe with `|α|² = cfg.photons`:
/// `Y = √η (2αφ + √V z₁) + √(1-η) z₂`, estimator `Y / (2α√η)`.
pub fn simulate_homodyne_squeezed(cfg: &SimConfig, v_sqz: f64) -> Result<SimReport> {
    const OP: &str = "simulate_homodyne_squeezed";
    check_trials(OP, cfg.trials, MIN_TRIALS)?;
    check_eta(OP, cfg.eta)?;
    ensure(
        v_sqz > 0.0 && v_sqz.is_finite(),
        OP,
        "v_sqz",
        v_sqz,
        "squeezed variance > 0",
    )?;
    let v_anti = 1.0 / v_sqz;
    ensure(
        cfg.photons >= HOMODYNE_GATE * v_anti.max(1.0),
        OP,
        "alpha^2",
        cfg.photons,
        "bright probe |alpha|^2 >= 10 max(1, V_anti)",
    )?;
    let alpha = cfg.photons.sqrt();
    let (t, r) = (cfg.eta.sqrt(), (1.0 - cfg.eta).sqrt());
    let sd = v_sqz.sqrt();
    let estimates = run_trials(cfg.seed, STREAM_HOMODYNE, cfg.trials, |rng| {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let y = t * (2.0 * alpha * cfg.phase + sd * z1) + r * z2;
        y / (2.0 * alpha * t)
    });
    Ok(SimReport::from_estimates(
        &estimates,
        squeezed_precision(alpha, v_sqz, cfg.eta)?,
    ))
}

/// Sinusoid `c + a cos(fφ) + b sin(fφ)` fitted by least squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    /// Oscillations per radian of phase.
    pub frequency: f64,
    pub period: f64,
    pub offset: f64,
    pub amplitude: f64,
    /// `amplitude / offset`.
    pub visibility: f64,
    pub residual: f64,
}

fn solve3(m: [[f64; 3]; 3], v: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (c, slot) in out.iter_mut().enumerate() {
        let mut mc = m;
        for r in 0..3 {
            mc[r][c] = v[r];
        }
        *slot = det(mc) / d;
    }
    Some(out)
}

fn fit_at(phases: &[f64], y: &[f64], f: f64) -> Option<([f64; 3], f64)> {
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (&p, &yi) in phases.iter().zip(y) {
        let row = [1.0, (f * p).cos(), (f * p).sin()];
        for i in 0..3 {
            aty[i] += row[i] * yi;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let c = solve3(ata, aty)?;
    let ss = phases
        .iter()
        .zip(y)
        .map(|(&p, &yi)| (yi - c[0] - c[1] * (f * p).cos() - c[2] * (f * p).sin()).powi(2))
        .sum();
    Some((c, ss))
}

/// Scans `f ∈ [0.25, 4]` for the least-squares minimum, then refines by
/// golden section.
pub fn fit_fringe(phases: &[f64], y: &[f64]) -> Option<FringeFit> {
    const STEP: f64 = 0.01;
    let ss = |f: f64| fit_at(phases, y, f).map_or(f64::INFINITY, |(_, s)| s);
    let (mut best_f, mut best) = (f64::NAN, f64::INFINITY);
    let mut f = 0.25;
    while f <= 4.0 + 1e-12 {
        let s = ss(f);
        if s < best {
            (best_f, best) = (f, s);
        }
        f += STEP;
    }
    if !best.is_finite() {
        return None;
    }
    let f = golden_section_min(ss, best_f - STEP, best_f + STEP, 1e-10, 200).x;
    let (c, residual) = fit_at(phases, y, f)?;
    let amplitude = c[1].hypot(c[2]);
    Some(FringeFit {
        frequency: f,
        period: 2.0 * PI / f,
        offset: c[0],
        amplitude,
        visibility: amplitude / c[0],
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoonFringe {
    pub dataset: FigureDataset,
    pub noon: FringeFit,
    pub classical: FringeFit,
}

/// Two-photon NOON fringe over `φ ∈ [0, 2π]`: at each phase point the
/// number of same-detector events among `trials` pairs is binomial with
/// `P = (1 + cos 2φ)/2`. A single-photon fringe `(1 + cos φ)/2` is sampled
/// alongside for comparison.
pub fn simulate_noon_fringe(n_phase_points: usize, trials: usize, seed: u64) -> Result<NoonFringe> {
    const OP: &str = "simulate_noon_fringe";
    ensure(
        n_phase_points >= 16,
        OP,
        "n_phase_points",
        n_phase_points as f64,
        "at least 16 phase points",
    )?;
    ensure(
        trials >= 1,
        OP,
        "trials",
        trials as f64,
        "at least 1 trial per point",
    )?;
    let phases = linspace(0.0, 2.0 * PI, n_phase_points);
    let noon_exact: Vec<f64> = phases
        .iter()
        .map(|p| (1.0 + (2.0 * p).cos()) / 2.0)
        .collect();
    let classical_exact: Vec<f64> = phases.iter().map(|p| (1.0 + p.cos()) / 2.0).collect();
    let sample = |stream: u64, probs: &[f64]| -> Vec<f64> {
        probs
            .par_iter()
            .enumerate()
            .map(|(i, &p)| {
                let mut rng = trial_rng(seed, stream, i as u64);
                let p = p.clamp(0.0, 1.0);
                let k = Binomial::new(trials as u64, p)
                    .expect("probability in [0, 1]")
                    .sample(&mut rng);
                k as f64 / trials as f64
            })
            .collect()
    };
    let noon_sampled = sample(STREAM_NOON_FRINGE, &noon_exact);
    let classical_sampled = sample(STREAM_CLASSICAL_FRINGE, &classical_exact);
    let noon = fit_fringe(&phases, &noon_sampled).expect("fringe fit on a regular grid");
    let classical = fit_fringe(&phases, &classical_sampled).expect("fringe fit on a regular grid");

    let mut dataset =
        FigureDataset::new("noon-fringe").with_axis("phase", AxisScale::Linear, phases);
    dataset.push_column("p_same_noon", noon_sampled);
    dataset.push_column("p_same_noon_exact", noon_exact);
    dataset.push_column("p_classical", classical_sampled);
    dataset.push_column("p_classical_exact", classical_exact);
    dataset.set_meta("trials_per_point", trials);
    dataset.set_meta("seed", seed);
    dataset.set_meta("fit_period", noon.period);
    dataset.set_meta("fit_frequency", noon.frequency);
    dataset.set_meta("fit_visibility", noon.visibility);
    dataset.set_meta("oscillations_per_2pi", noon.frequency);
    dataset.set_meta("classical_fit_period", classical.period);
    dataset.set_meta("classical_fit_visibility", classical.visibility);
    Ok(NoonFringe {
        dataset,
        noon,
        classical,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomReport {
    pub trials: usize,
    /// One photon at each output.
    pub coincidences: u64,
    pub coincidence_rate: f64,
    /// Mean photon number at each output.
    pub mean_photons_a: f64,
    pub mean_photons_b: f64,
}

/// Two single photons on a 50/50 beam splitter with mode overlap `s`:
/// `P(one photon per output) = (1 - s²)/2`, otherwise both leave together
/// through a random port.
pub fn simulate_hom_overlap(trials: usize, overlap: f64, seed: u64) -> Result<HomReport> {
    const OP: &str = "simulate_hom";
    check_trials(OP, trials, 1000)?;
    ensure(
        (0.0..=1.0).contains(&overlap),
        OP,
        "overlap",
        overlap,
        "mode overlap in [0, 1]",
    )?;
    let p_split = (1.0 - overlap * overlap) / 2.0;
    // (photons at A, photons at B)
    let outcomes = run_trials(seed, STREAM_HOM, trials, |rng| {
        let u: f64 = rng.random();
        if u < p_split {
            (1u64, 1u64)
        } else if rng.random::<bool>() {
            (2, 0)
        } else {
            (0, 2)
        }
    });
    let coincidences = outcomes.iter().filter(|&&o| o == (1, 1)).count() as u64;
    let n = trials as f64;
    Ok(HomReport {
        trials,
        coincidences,
        coincidence_rate: coincidences as f64 / n,
        mean_photons_a: outcomes.iter().map(|o| o.0).sum::<u64>() as f64 / n,
        mean_photons_b: outcomes.iter().map(|o| o.1).sum::<u64>() as f64 / n,
    })
}

/// Indistinguishable photons bunch (overlap 1); distinguishable photons
/// route independently (overlap 0).
pub fn simulate_hom(trials: usize, distinguishable: bool, seed: u64) -> Result<HomReport> {
    simulate_hom_overlap(trials, if distinguishable { 0.0 } else { 1.0 }, seed)
}

/// Absorption estimate `1 - k/n_sig` from `k` transmitted photons.
///
/// Heralded: exactly `n_sig` photons, `k ~ Binomial(n_sig, 1-α)`,
/// `Var = α(1-α)/n_sig`. Coherent: `N ~ Poisson(n_sig)` then thinning,
/// `Var = (1-α)/n_sig`.
pub fn simulate_heralded_absorption(
    alpha_true: f64,
    n_sig: u64,
    heralded: bool,
    trials: usize,
    seed: u64,
) -> Result<SimReport> {
    const OP: &str = "simulate_heralded_absorption";
    ensure(
        alpha_true > 0.0 && alpha_true < 1.0,
        OP,
        "alpha",
        alpha_true,
        "absorption in (0, 1)",
    )?;
    ensure(n_sig >= 1, OP, "n_sig", n_sig as f64, "at least one photon")?;
    check_trials(OP, trials, MIN_TRIALS)?;
    let n = n_sig as f64;
    let transmit = 1.0 - alpha_true;
    let (stream, variance) = if heralded {
        (STREAM_ABSORPTION_HERALDED, alpha_true * transmit / n)
    } else {
        (STREAM_ABSORPTION_COHERENT, transmit / n)
    };
    let estimates = run_trials(seed, stream, trials, |rng| {
        let sent = if heralded {
            n_sig
        } else {
            sample_poisson(rng, n)
        };
        let k = Binomial::new(sent, transmit)
            .expect("transmission in (0, 1)")
            .sample(rng);
        1.0 - k as f64 / n
    });
    Ok(SimReport::from_estimates(&estimates, variance.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionComparison {
    pub heralded: SimReport,
    pub coherent: SimReport,
    /// Sampled `Var_heralded / Var_coherent`.
    pub variance_ratio: f64,
    /// `α`, the closed-form ratio.
    pub analytic_ratio: f64,
}

pub fn compare_absorption(
    alpha_true: f64,
    n_sig: u64,
    trials: usize,
    seed: u64,
) -> Result<AbsorptionComparison> {
    let heralded = simulate_heralded_absorption(alpha_true, n_sig, true, trials, seed)?;
    let coherent = simulate_heralded_absorption(alpha_true, n_sig, false, trials, seed)?;
    Ok(AbsorptionComparison {
        heralded,
        coherent,
        variance_ratio: (heralded.estimate_std / coherent.estimate_std).powi(2),
        analytic_ratio: alpha_true,
    })
}
