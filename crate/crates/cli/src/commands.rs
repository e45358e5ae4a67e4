use qmetro::conditioning::{conditional_distribution, DetectorKind, LossSide};
use qmetro::figures::{
    self, DEFAULT_CONDITIONAL_EPSILON, DEFAULT_CONDITIONAL_ETAS, DEFAULT_SQUEEZED_N_SIG,
};
use qmetro::limits::{self, PowerConstraint};
use qmetro::mc::{self, SimConfig};
use qmetro::noon;
use qmetro::squeezed::{self, default_compare_grid};
use qmetro::states::PdcTwinBeam;
use qmetro::{AxisScale, FigureDataset};

use crate::args::*;
use crate::CliError;

type Outcome = Result<FigureDataset, CliError>;

fn missing(flag: &str, context: &str) -> CliError {
    CliError::Usage(format!("{context} needs --{flag}"))
}

/// One-row dataset of named values.
fn scalars(figure_id: &str, values: &[(&str, f64)]) -> FigureDataset {
    let mut ds = FigureDataset::new(figure_id);
    for &(name, v) in values {
        ds.push_column(name, vec![v]);
    }
    ds
}

impl Command {
    /// Formula evaluated by the command, quoted in error messages.
    pub fn formula(&self) -> &'static str {
        match self {
            Command::Limits(_) => {
                "Δφ_SQL = 1/(2√n_sig), Δφ_HL = 1/n0, Δφ_loss = √((1-η)/η)/(2√n_sig)"
            }
            Command::Noon(a) if a.threshold => "η_th = (N-1)^(-1/N)",
            Command::Noon(a) if a.optimal => "N ln η + η^N + 1 = 0",
            Command::Noon(a) if a.flux => "trials per window = 4 n_sig/N²",
            Command::Noon(_) => "Δφ = (1/(2√n_sig)) √((η^-N + 1)/N)",
            Command::Squeezed(a) if a.alpha.is_some() => "Δφ = (1/(2α)) √(V + (1-η)/η)",
            Command::Squeezed(_) => "Δφ = √[(V + (1-η)/η)/(4 n_sig - V - 1/V + 2)]",
            Command::Compare(_) => "Δφ_NOON/Δφ_SQZ at optimal N and V",
            Command::Condition(_) => {
                "p'(N) = Σ C(N',N) η^N (1-η)^(N'-N) p(N'); p(N|N_det) ∝ p(N_det|N) p(N)"
            }
            Command::Simulate { sim } => match sim {
                SimCommand::Mz { .. } => "φ̂ = π/2 - (n_A - n_B)/(η n0), Δφ = 1/√(η n0)",
                SimCommand::Homodyne { .. } => "φ̂ = Y/(2α√η), Δφ = (1/(2α)) √(V + (1-η)/η)",
                SimCommand::NoonFringe { .. } => "P_same = (1 + cos 2φ)/2",
                SimCommand::Hom { .. } => "P_coincidence = (1 - s²)/2",
                SimCommand::Absorption { .. } => {
                    "Var = α(1-α)/n_sig (heralded), (1-α)/n_sig (coherent)"
                }
            },
            Command::Figure { .. } => "figure dataset assembly",
        }
    }

    pub fn execute(&self) -> Outcome {
        match self {
            Command::Limits(a) => run_limits(a),
            Command::Noon(a) => run_noon(a),
            Command::Squeezed(a) => run_squeezed(a),
            Command::Compare(a) => run_compare(a),
            Command::Condition(a) => run_condition(a),
            Command::Simulate { sim } => run_simulation(sim),
            Command::Figure { figure } => run_figure(figure),
        }
    }
}

fn run_limits(a: &LimitsArgs) -> Outcome {
    let n = a.n_sig;
    let n0 = 2.0 * n;
    let mut values = vec![
        ("sql_sample", limits::sql_sample(n)?.delta_phi),
        ("sql_total", limits::sql_total(n0)?.delta_phi),
        ("heisenberg", limits::heisenberg(n0)?.delta_phi),
        ("squeezed_crb", limits::squeezed_vacuum_crb(n)?.delta_phi),
    ];
    if let Some(eta) = a.eta {
        values.push(("qnl", limits::qnl(n0, eta)?.delta_phi));
        if eta < 1.0 {
            values.push((
                "loss_sample",
                limits::loss_bound(n, eta, PowerConstraint::Sample)?.delta_phi,
            ));
            values.push((
                "loss_total",
                limits::loss_bound(n0, eta, PowerConstraint::Total)?.delta_phi,
            ));
        }
    }
    let mut ds = scalars("limits", &values);
    ds.set_meta("n_sig", n);
    ds.set_meta("n0", n0);
    if let Some(eta) = a.eta {
        ds.set_meta("eta", eta);
    }
    Ok(ds)
}

fn run_noon(a: &NoonArgs) -> Outcome {
    if a.threshold {
        let n = a.n.ok_or_else(|| missing("n", "noon --threshold"))?;
        let t = noon::noon_threshold_efficiency(n)?;
        let mut ds = scalars(
            "noon-threshold",
            &[
                ("threshold_eta", t.efficiency),
                ("reachable", t.reachable as u8 as f64),
            ],
        );
        ds.set_meta("n", n);
        return Ok(ds);
    }
    if a.optimal {
        let eta = a.eta.ok_or_else(|| missing("eta", "noon --optimal"))?;
        let o = noon::noon_optimal_n(eta)?;
        let mut ds = scalars(
            "noon-optimal",
            &[
                ("n_opt", o.n_opt as f64),
                ("enhancement", o.enhancement),
                ("root", o.root),
                ("root_residual", o.root_residual),
            ],
        );
        ds.set_meta("eta", eta);
        return Ok(ds);
    }
    if a.flux {
        let n = a.n.ok_or_else(|| missing("n", "noon --flux"))?;
        let n_sig = a.n_sig.ok_or_else(|| missing("n-sig", "noon --flux"))?;
        let f = noon::noon_flux_requirement(n, n_sig)?;
        let mut ds = scalars(
            "noon-flux",
            &[
                ("sample_matched", f.sample_matched),
                ("total_power", f.total_power),
            ],
        );
        ds.set_meta("n", n);
        ds.set_meta("n_sig", n_sig);
        return Ok(ds);
    }
    let eta = a.eta.ok_or_else(|| missing("eta", "noon"))?;
    let n_sig = a.n_sig.ok_or_else(|| missing("n-sig", "noon"))?;
    let mut ds = match a.n {
        Some(n) => {
            let r = noon::noon_repeated(n, eta, n_sig)?;
            let mut ds = scalars(
                "noon",
                &[
                    ("delta_phi_single", r.delta_phi_single),
                    ("delta_phi_m", r.delta_phi_m),
                    ("enhancement", r.enhancement),
                    ("m_repetitions", r.m_repetitions),
                ],
            );
            ds.set_meta("n", n);
            ds
        }
        None => {
            let s = noon::optimal_noon_precision(eta, n_sig)?;
            scalars(
                "noon-optimal-strategy",
                &[
                    ("delta_phi", s.delta_phi),
                    ("n_used", s.n_used),
                    ("m_repetitions", s.m_repetitions),
                ],
            )
        }
    };
    ds.set_meta("eta", eta);
    ds.set_meta("n_sig", n_sig);
    Ok(ds)
}

fn run_squeezed(a: &SqueezedArgs) -> Outcome {
    if let Some(alpha) = a.alpha {
        let v = a.v_sqz.unwrap_or(1.0);
        let mut ds = scalars(
            "squeezed",
            &[("delta_phi", squeezed::squeezed_precision(alpha, v, a.eta)?)],
        );
        ds.set_meta("alpha", alpha);
        ds.set_meta("v_sqz", v);
        ds.set_meta("eta", a.eta);
        return Ok(ds);
    }
    let n_sig = a
        .n_sig
        .ok_or_else(|| missing("n-sig", "squeezed (or give --alpha)"))?;
    let mut ds = match a.v_sqz {
        Some(v) => {
            let d = squeezed::squeezed_precision_budget(n_sig, v, a.eta)?;
            let sql = limits::sql_sample(n_sig)?.delta_phi;
            let mut ds = scalars(
                "squeezed-budget",
                &[
                    ("delta_phi", d),
                    ("n_nonclassical", squeezed::squeezing_photons(v)),
                    ("enhancement", sql / d),
                ],
            );
            ds.set_meta("v_sqz", v);
            ds
        }
        None => {
            let r = squeezed::optimal_squeezing(n_sig, a.eta)?;
            scalars(
                "squeezed-optimal",
                &[
                    ("v_opt", r.v_opt),
                    ("n_opt_nonclassical", r.n_opt_nonclassical),
                    ("delta_phi", r.delta_phi),
                    ("enhancement", r.enhancement),
                ],
            )
        }
    };
    ds.set_meta("n_sig", n_sig);
    ds.set_meta("eta", a.eta);
    Ok(ds)
}

fn run_compare(a: &CompareArgs) -> Outcome {
    match (a.eta, a.n_sig) {
        (Some(eta), Some(n)) => {
            let mut ds = squeezed::noon_vs_squeezed_grid(&[eta], &[n])?.dataset;
            ds.figure_id = "compare".into();
            Ok(ds)
        }
        _ => {
            let (etas, ns) = default_compare_grid();
            Ok(figures::fig_compare(&etas, &ns)?)
        }
    }
}

fn side(s: Side) -> LossSide {
    match s {
        Side::Probe => LossSide::Probe,
        Side::Detector => LossSide::Detector,
    }
}

fn detector(d: Detector) -> DetectorKind {
    match d {
        Detector::NumberResolving => DetectorKind::NumberResolving,
        Detector::Bucket => DetectorKind::Bucket,
    }
}

fn value_name<T: clap::ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

fn run_condition(a: &ConditionArgs) -> Outcome {
    let state = PdcTwinBeam::new(a.epsilon)?;
    let d = conditional_distribution(&state, side(a.side), detector(a.detector), a.eta, a.n_det)?;
    let axis = (0..d.pmf().len()).map(|n| n as f64).collect();
    let mut ds = FigureDataset::new("condition").with_axis("n", AxisScale::Linear, axis);
    ds.push_column("p", d.pmf().to_vec());
    ds.set_meta("epsilon", a.epsilon);
    ds.set_meta("eta", a.eta);
    ds.set_meta("side", value_name(a.side));
    ds.set_meta("detector", value_name(a.detector));
    ds.set_meta("n_det", a.n_det);
    ds.set_meta("mean", d.mean());
    ds.set_meta("tail_mass", d.tail_mass());
    Ok(ds)
}

fn run_simulation(sim: &SimCommand) -> Outcome {
    let mut ds = match *sim {
        SimCommand::Mz {
            n0,
            eta,
            phase,
            trials,
            ref seed,
        } => {
            let cfg = SimConfig {
                seed: seed.seed,
                trials,
                phase,
                photons: n0,
                eta,
            };
            let mut ds = mc::simulate_coherent_mz(&cfg)?.to_dataset("simulate-mz");
            ds.set_meta("n0", n0);
            ds.set_meta("eta", eta);
            ds.set_meta("phase", phase);
            ds.set_meta("seed", seed.seed);
            ds
        }
        SimCommand::Homodyne {
            alpha,
            v_sqz,
            eta,
            phase,
            trials,
            ref seed,
        } => {
            let cfg = SimConfig {
                seed: seed.seed,
                trials,
                phase,
                photons: alpha * alpha,
                eta,
            };
            let mut ds =
                mc::simulate_homodyne_squeezed(&cfg, v_sqz)?.to_dataset("simulate-homodyne");
            ds.set_meta("alpha", alpha);
            ds.set_meta("v_sqz", v_sqz);
            ds.set_meta("eta", eta);
            ds.set_meta("phase", phase);
            ds.set_meta("seed", seed.seed);
            ds
        }
        SimCommand::NoonFringe {
            points,
            trials,
            ref seed,
        } => mc::simulate_noon_fringe(points, trials, seed.seed)?.dataset,
        SimCommand::Hom {
            trials,
            distinguishable,
            ref seed,
        } => {
            let r = mc::simulate_hom(trials, distinguishable, seed.seed)?;
            let mut ds = scalars(
                "simulate-hom",
                &[
                    ("coincidence_rate", r.coincidence_rate),
                    ("coincidences", r.coincidences as f64),
                    ("mean_photons_a", r.mean_photons_a),
                    ("mean_photons_b", r.mean_photons_b),
                ],
            );
            ds.set_meta("trials", trials);
            ds.set_meta("distinguishable", distinguishable);
            ds.set_meta("seed", seed.seed);
            ds
        }
        SimCommand::Absorption {
            alpha,
            n_sig,
            trials,
            ref seed,
        } => {
            let c = mc::compare_absorption(alpha, n_sig, trials, seed.seed)?;
            let mut ds = scalars(
                "simulate-absorption",
                &[
                    ("heralded_mean", c.heralded.estimate_mean),
                    ("heralded_std", c.heralded.estimate_std),
                    ("heralded_reference", c.heralded.analytic_reference),
                    ("coherent_mean", c.coherent.estimate_mean),
                    ("coherent_std", c.coherent.estimate_std),
                    ("coherent_reference", c.coherent.analytic_reference),
                    ("variance_ratio", c.variance_ratio),
                    ("analytic_ratio", c.analytic_ratio),
                ],
            );
            ds.set_meta("alpha", alpha);
            ds.set_meta("n_sig", n_sig);
            ds.set_meta("trials", trials);
            ds.set_meta("seed", seed.seed);
            ds
        }
    };
    ds.set_meta("generator", "chacha8 keyed by (seed, stream, trial)");
    Ok(ds)
}

fn run_figure(figure: &FigureCommand) -> Outcome {
    Ok(match figure {
        FigureCommand::FigLimits { etas } => {
            figures::fig_limits(&figures::default_limits_grid(), etas)?
        }
        FigureCommand::FigNoonLoss => figures::fig_noon_loss(&figures::default_noon_eta_grid())?,
        FigureCommand::FigSqueezedLoss => figures::fig_squeezed_loss(
            &figures::default_squeezed_eta_grid(),
            &DEFAULT_SQUEEZED_N_SIG,
        )?,
        FigureCommand::FigCompare => {
            let (etas, ns) = default_compare_grid();
            figures::fig_compare(&etas, &ns)?
        }
        FigureCommand::FigConditional {
            side: s,
            detector: d,
        } => figures::fig_conditional(
            side(*s),
            detector(*d),
            &DEFAULT_CONDITIONAL_ETAS,
            DEFAULT_CONDITIONAL_EPSILON,
            1,
        )?,
        FigureCommand::FigNoonCurve { eta } => {
            figures::fig_noon_curve(*eta, &qmetro::dataset::logspace(1.0, 1e4, 200))?
        }
    })
}
