use qmetro::conditioning::{apply_loss, condition_probe_bucket, posterior_bucket, LossChannel};
use qmetro::dataset::{logspace, Format};
use qmetro::figures;
use qmetro::limits::{loss_bound, sql_sample, PowerConstraint};
use qmetro::noon::{noon_optimal_n, optimal_noon_precision};
use qmetro::squeezed::{noon_vs_squeezed_grid, optimal_squeezing};
use qmetro::{FigureDataset, PdcTwinBeam};

#[test]
fn noon_strategy_never_beats_loss_bound() {
    for eta in [0.6, 0.8, 0.95, 0.99] {
        for &n in &logspace(1.0, 1e4, 40) {
            let s = optimal_noon_precision(eta, n).unwrap();
            let floor = loss_bound(n, eta, PowerConstraint::Sample)
                .unwrap()
                .delta_phi;
            assert!(s.delta_phi >= floor, "eta={eta} n={n}");
        }
    }
}

#[test]
fn both_strategies_approach_loss_bound_with_different_gaps() {
    let eta = 0.9;
    let n = 1e6;
    let floor = loss_bound(n, eta, PowerConstraint::Sample)
        .unwrap()
        .delta_phi;
    let sqz = optimal_squeezing(n, eta).unwrap().delta_phi;
    let noon = optimal_noon_precision(eta, n).unwrap().delta_phi;
    assert!(sqz / floor < 1.01);
    // NOON stays a fixed factor above the bound at large n
    assert!(noon / floor > 1.1);
    assert!(noon > sqz);
}

#[test]
fn comparison_grid_is_consistent_with_pointwise_calls() {
    let etas = [0.6, 0.97, 0.995];
    let ns = [2.0, 8.0, 50.0];
    let cmp = noon_vs_squeezed_grid(&etas, &ns).unwrap();
    let ratio = cmp.dataset.column("ratio_noon_over_sqz").unwrap();
    for (i, &eta) in etas.iter().enumerate() {
        for (j, &n) in ns.iter().enumerate() {
            let expected = optimal_noon_precision(eta, n).unwrap().delta_phi
                / optimal_squeezing(n, eta).unwrap().delta_phi;
            assert_eq!(ratio[i * ns.len() + j], expected);
        }
    }
}

#[test]
fn noon_optimum_grows_toward_unit_efficiency() {
    let mut last = 0;
    for eta in [0.8, 0.9, 0.99, 0.999] {
        let o = noon_optimal_n(eta).unwrap();
        assert!(o.n_opt > last);
        assert!(o.enhancement > 1.0);
        last = o.n_opt;
    }
    assert!((noon_optimal_n(0.999).unwrap().n_opt as f64 - 1278.0).abs() <= 2.0);
}

#[test]
fn detector_loss_spreads_photon_number_more_than_probe_loss() {
    let s = PdcTwinBeam::new(0.5).unwrap();
    for eta in [0.7, 0.4, 0.1] {
        let ch = LossChannel::new(eta).unwrap();
        let detector = posterior_bucket(&s, ch).unwrap();
        let probe = condition_probe_bucket(&s, ch);
        assert!(detector.mean() > probe.mean());
        // thinning the detector-side posterior can only lower the mean
        assert!(apply_loss(&detector, ch).mean() < detector.mean());
    }
}

#[test]
fn lossless_squeezing_scales_at_heisenberg_rate() {
    let a = optimal_squeezing(1e4, 1.0).unwrap().delta_phi;
    let b = optimal_squeezing(1e5, 1.0).unwrap().delta_phi;
    assert!(((a / b).log10() - 1.0).abs() < 0.01);
    assert!(a < sql_sample(1e4).unwrap().delta_phi);
}

#[test]
fn every_default_figure_serializes_both_ways() {
    let (etas, ns) = qmetro::squeezed::default_compare_grid();
    let sets = [
        figures::fig_limits(
            &figures::default_limits_grid(),
            &figures::DEFAULT_LIMIT_ETAS,
        )
        .unwrap(),
        figures::fig_noon_loss(&figures::default_noon_eta_grid()).unwrap(),
        figures::fig_squeezed_loss(
            &figures::default_squeezed_eta_grid(),
            &figures::DEFAULT_SQUEEZED_N_SIG,
        )
        .unwrap(),
        figures::fig_compare(&etas[..20], &ns[..20]).unwrap(),
    ];
    for ds in sets {
        ds.validate().unwrap();
        for f in [Format::Csv, Format::Json] {
            let text = ds.encode(f).unwrap();
            assert_eq!(FigureDataset::decode(&text, f).unwrap(), ds);
            assert_eq!(
                text,
                FigureDataset::decode(&text, f).unwrap().encode(f).unwrap()
            );
        }
    }
}
