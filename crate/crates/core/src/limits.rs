//! Closed-form phase-precision bounds and auxiliary optics formulas.
//!
//! Photon counts are per averaging window. `n0` denotes photons injected
//! into the interferometer (total-power constraint) and `n_sig` photons
//! passing through the sample arm (sample-power constraint).

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundFamily {
    SqlTotal,
    SqlSample,
    Qnl,
    Heisenberg,
    LossTotal,
    LossSample,
    SqzCrb,
    QfiCrb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerConstraint {
    /// Photons injected into the interferometer are limited.
    Total,
    /// Photons through the sample arm are limited.
    Sample,
}

/// Inputs echoed alongside a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub photons: f64,
    pub eta: Option<f64>,
}

/// A phase standard deviation in radians, tagged with the bound it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionResult {
    pub delta_phi: f64,
    pub family: BoundFamily,
    pub params: BoundParams,
}

impl PrecisionResult {
    fn new(delta_phi: f64, family: BoundFamily, photons: f64, eta: Option<f64>) -> Self {
        debug_assert!(
            delta_phi > 0.0 && delta_phi.is_finite(),
            "{family:?} gave {delta_phi}"
        );
        Self {
            delta_phi,
            family,
            params: BoundParams { photons, eta },
        }
    }
}

fn positive_photons(op: &'static str, name: &'static str, n: f64) -> Result<()> {
    ensure(n > 0.0 && n.is_finite(), op, name, n, "photon number > 0")
}

/// Standard quantum limit under a total-power constraint, `1/√n0`.
pub fn sql_total(n0: f64) -> Result<PrecisionResult> {
    positive_photons("sql_total", "n0", n0)?;
    Ok(PrecisionResult::new(
        1.0 / n0.sqrt(),
        BoundFamily::SqlTotal,
        n0,
        None,
    ))
}

/// Standard quantum limit under a sample-power constraint, `1/(2√n_sig)`.
///
/// Evaluated through [`qfi_phase`] with the Poissonian variance `V = n_sig`.
pub fn sql_sample(n_sig: f64) -> Result<PrecisionResult> {
    positive_photons("sql_sample", "n_sig", n_sig)?;
    let crb = qfi_phase(n_sig)?.crb;
    Ok(PrecisionResult::new(
        crb,
        BoundFamily::SqlSample,
        n_sig,
        None,
    ))
}

/// Quantum noise limit of an apparatus with efficiency `η`, `1/√(η n0)`.
pub fn qnl(n0: f64, eta: f64) -> Result<PrecisionResult> {
    positive_photons("qnl", "n0", n0)?;
    ensure(
        eta > 0.0 && eta <= 1.0,
        "qnl",
        "eta",
        eta,
        "efficiency in (0, 1]",
    )?;
    Ok(PrecisionResult::new(
        1.0 / (eta * n0).sqrt(),
        BoundFamily::Qnl,
        n0,
        Some(eta),
    ))
}

/// Heisenberg limit `1/n0`.
pub fn heisenberg(n0: f64) -> Result<PrecisionResult> {
    ensure(
        n0 >= 1.0 && n0.is_finite(),
        "heisenberg",
        "n0",
        n0,
        "photon number >= 1",
    )?;
    Ok(PrecisionResult::new(
        1.0 / n0,
        BoundFamily::Heisenberg,
        n0,
        None,
    ))
}

/// State-independent bound imposed by loss `1-η`:
/// `√((1-η)/η)/√n` for a total-power constraint, half that for a
/// sample-power constraint.
pub fn loss_bound(n: f64, eta: f64, constraint: PowerConstraint) -> Result<PrecisionResult> {
    positive_photons("loss_bound", "n", n)?;
    ensure(
        eta > 0.0 && eta < 1.0,
        "loss_bound",
        "eta",
        eta,
        "efficiency strictly inside (0, 1)",
    )?;
    let total = ((1.0 - eta) / eta).sqrt() / n.sqrt();
    Ok(match constraint {
        PowerConstraint::Total => PrecisionResult::new(total, BoundFamily::LossTotal, n, Some(eta)),
        PowerConstraint::Sample => {
            PrecisionResult::new(0.5 * total, BoundFamily::LossSample, n, Some(eta))
        }
    })
}

/// Photon number at which the total-power loss bound meets the Heisenberg
/// limit, `η/(1-η)`.
pub fn loss_heisenberg_crossover(eta: f64) -> Result<f64> {
    ensure(
        eta > 0.0 && eta < 1.0,
        "loss_heisenberg_crossover",
        "eta",
        eta,
        "efficiency in (0, 1)",
    )?;
    Ok(eta / (1.0 - eta))
}

/// Cramér-Rao bound of squeezed vacuum with mean photon number `n`,
/// `(1/(2√2)) (n² + n)^(-1/2)`, from its photon-number variance `2(n² + n)`.
pub fn squeezed_vacuum_crb(n: f64) -> Result<PrecisionResult> {
    positive_photons("squeezed_vacuum_crb", "n", n)?;
    let crb = qfi_phase(2.0 * (n * n + n))?.crb;
    Ok(PrecisionResult::new(crb, BoundFamily::SqzCrb, n, None))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiBound {
    /// Quantum Fisher information for phase, `4 V(n_sig)`.
    pub fisher: f64,
    /// `1/√F`.
    pub crb: f64,
}

/// Phase quantum Fisher information of a pure probe from its sample-arm
/// photon-number variance, and the resulting Cramér-Rao bound.
pub fn qfi_phase(variance_n_sig: f64) -> Result<QfiBound> {
    ensure(
        variance_n_sig > 0.0 && variance_n_sig.is_finite(),
        "qfi_phase",
        "variance",
        variance_n_sig,
        "positive photon-number variance (zero variance carries no phase information)",
    )?;
    let fisher = 4.0 * variance_n_sig;
    Ok(QfiBound {
        fisher,
        crb: 1.0 / fisher.sqrt(),
    })
}

/// [`qfi_phase`] wrapped as a [`PrecisionResult`].
pub fn qfi_crb(variance_n_sig: f64) -> Result<PrecisionResult> {
    let q = qfi_phase(variance_n_sig)?;
    Ok(PrecisionResult::new(
        q.crb,
        BoundFamily::QfiCrb,
        variance_n_sig,
        None,
    ))
}

/// Minimum resolvable separation `λ/(2 NA)` (same length unit as `λ`).
pub fn diffraction_limit(wavelength: f64, numerical_aperture: f64) -> Result<f64> {
    ensure(
        wavelength > 0.0,
        "diffraction_limit",
        "wavelength",
        wavelength,
        "wavelength > 0",
    )?;
    ensure(
        numerical_aperture > 0.0,
        "diffraction_limit",
        "numerical_aperture",
        numerical_aperture,
        "numerical aperture > 0",
    )?;
    Ok(wavelength / (2.0 * numerical_aperture))
}

/// OCT axial coherence length `(4 ln2/π) λ̄²/Δλ`.
pub fn oct_coherence_length(central_wavelength: f64, bandwidth: f64) -> Result<f64> {
    const OP: &str = "oct_coherence_length";
    ensure(
        central_wavelength > 0.0,
        OP,
        "central_wavelength",
        central_wavelength,
        "wavelength > 0",
    )?;
    ensure(bandwidth > 0.0, OP, "bandwidth", bandwidth, "bandwidth > 0")?;
    ensure(
        bandwidth < central_wavelength,
        OP,
        "bandwidth",
        bandwidth,
        "bandwidth below the central wavelength",
    )?;
    Ok(4.0 * LN_2 / PI * central_wavelength * central_wavelength / bandwidth)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctSensitivity {
    /// Shot-noise-limited sensitivity `n_sig/4`.
    pub sensitivity: f64,
    /// Smallest detectable reflectivity `1/S`.
    pub min_reflectivity: f64,
}

pub fn oct_sensitivity(n_sig: f64) -> Result<OctSensitivity> {
    positive_photons("oct_sensitivity", "n_sig", n_sig)?;
    let sensitivity = n_sig / 4.0;
    Ok(OctSensitivity {
        sensitivity,
        min_reflectivity: 1.0 / sensitivity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleScattering {
    /// Rayleigh cross-section (length unit squared).
    pub cross_section: f64,
    /// Scattered fraction of a focused beam, `σ/(4π w²)`.
    pub fraction: f64,
}

/// Dipole (Rayleigh) scattering of a dielectric sphere of radius `a` with
/// relative index `m`, `σ = (8π/3) k⁴ a⁶ (m²-1)²/(m²+2)²`, `k = 2π/λ` in the
/// medium.
pub fn dipole_scattering_fraction(
    radius: f64,
    wavelength_in_medium: f64,
    index_ratio: f64,
    beam_waist: f64,
) -> Result<DipoleScattering> {
    const OP: &str = "dipole_scattering_fraction";
    ensure(radius > 0.0, OP, "radius", radius, "radius > 0")?;
    ensure(
        wavelength_in_medium > 0.0,
        OP,
        "wavelength",
        wavelength_in_medium,
        "wavelength > 0",
    )?;
    ensure(
        index_ratio > 0.0,
        OP,
        "index_ratio",
        index_ratio,
        "index ratio > 0",
    )?;
    ensure(
        beam_waist > 0.0,
        OP,
        "beam_waist",
        beam_waist,
        "beam waist > 0",
    )?;
    let k = 2.0 * PI / wavelength_in_medium;
    let m2 = index_ratio * index_ratio;
    let clausius = (m2 - 1.0) / (m2 + 2.0);
    let cross_section = 8.0 * PI / 3.0 * k.powi(4) * radius.powi(6) * clausius * clausius;
    Ok(DipoleScattering {
        cross_section,
        fraction: cross_section / (4.0 * PI * beam_waist * beam_waist),
    })
}

/// Coherent amplitude scattered into the signal mode, `α p / 𝒩`.
pub fn signal_mode_amplitude(alpha: f64, perturbation: f64, norm_coeff: f64) -> Result<f64> {
    ensure(
        norm_coeff != 0.0 && norm_coeff.is_finite(),
        "signal_mode_amplitude",
        "norm_coeff",
        norm_coeff,
        "nonzero mode-overlap normalisation",
    )?;
    Ok(alpha * perturbation / norm_coeff)
}

/// Shot-noise limit on a single imaging parameter, `Δp = |𝒩| Δφ_SQL(n_sig)`.
pub fn imaging_parameter_sql(norm_coeff: f64, n_sig: f64) -> Result<f64> {
    ensure(
        norm_coeff != 0.0 && norm_coeff.is_finite(),
        "imaging_parameter_sql",
        "norm_coeff",
        norm_coeff,
        "nonzero mode-overlap normalisation",
    )?;
    Ok(norm_coeff.abs() * sql_sample(n_sig)?.delta_phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn sql_total_examples() {
        assert_eq!(sql_total(1.0).unwrap().delta_phi, 1.0);
        assert!(close(sql_total(100.0).unwrap().delta_phi, 0.1, 1e-15));
        let n = 1e16;
        let ratio = sql_total(n).unwrap().delta_phi / heisenberg(n).unwrap().delta_phi;
        assert!(close(ratio, 1e8, 1e-12));
        assert!(sql_total(0.0).is_err());
    }

    #[test]
    fn sql_sample_examples() {
        assert!(close(sql_sample(1e12).unwrap().delta_phi, 5e-7, 1e-14));
        assert!(close(sql_sample(0.25).unwrap().delta_phi, 1.0, 1e-15));
        let n0 = 40.0;
        let a = sql_sample(n0 / 2.0).unwrap().delta_phi;
        let b = sql_total(n0).unwrap().delta_phi / 2f64.sqrt();
        assert!(close(a, b, 1e-14));
        assert!(sql_sample(-1.0).is_err());
    }

    #[test]
    fn qnl_examples() {
        assert_eq!(
            qnl(7.0, 1.0).unwrap().delta_phi,
            sql_total(7.0).unwrap().delta_phi
        );
        assert!(close(qnl(100.0, 0.25).unwrap().delta_phi, 0.2, 1e-15));
        assert!((qnl(1e4, 0.5).unwrap().delta_phi - 0.01414).abs() < 1e-5);
        assert!(qnl(10.0, 0.0).is_err());
    }

    #[test]
    fn heisenberg_examples() {
        assert_eq!(
            heisenberg(1.0).unwrap().delta_phi,
            sql_total(1.0).unwrap().delta_phi
        );
        assert!(close(heisenberg(1000.0).unwrap().delta_phi, 0.001, 1e-15));
        assert!(heisenberg(0.5).is_err());
    }

    #[test]
    fn loss_bound_examples() {
        let n = 37.0;
        assert!(close(
            loss_bound(n, 0.5, PowerConstraint::Total)
                .unwrap()
                .delta_phi,
            sql_total(n).unwrap().delta_phi,
            1e-15
        ));
        let crossover = loss_heisenberg_crossover(0.5).unwrap();
        assert_eq!(crossover, 1.0);
        assert!(close(
            loss_bound(crossover, 0.5, PowerConstraint::Total)
                .unwrap()
                .delta_phi,
            heisenberg(crossover).unwrap().delta_phi,
            1e-15
        ));
        let lb = loss_bound(100.0, 0.9, PowerConstraint::Total)
            .unwrap()
            .delta_phi;
        assert!((lb - 0.0333).abs() < 1e-4);
        let s = loss_bound(100.0, 0.9, PowerConstraint::Sample).unwrap();
        assert_eq!(s.family, BoundFamily::LossSample);
        assert!(close(s.delta_phi, lb / 2.0, 1e-15));
        assert!(loss_bound(1.0, 0.0, PowerConstraint::Total).is_err());
        assert!(loss_bound(1.0, 1.0, PowerConstraint::Sample).is_err());
    }

    #[test]
    fn squeezed_crb_examples() {
        assert!(close(
            squeezed_vacuum_crb(1.0).unwrap().delta_phi,
            0.25,
            1e-15
        ));
        // QFI oracle: F = 8(n² + n)
        let n = 3.0f64;
        let oracle = 1.0 / (8.0 * (n * n + n)).sqrt();
        assert!(close(
            squeezed_vacuum_crb(n).unwrap().delta_phi,
            oracle,
            1e-14
        ));
        assert!((squeezed_vacuum_crb(3.0).unwrap().delta_phi - 0.1021).abs() < 1e-4);
        let big = 1e9;
        let ratio =
            squeezed_vacuum_crb(big).unwrap().delta_phi / heisenberg(big).unwrap().delta_phi;
        assert!(close(ratio, 1.0 / (2.0 * 2f64.sqrt()), 1e-8));
        assert!(squeezed_vacuum_crb(0.0).is_err());
    }

    #[test]
    fn qfi_examples() {
        let n = 25.0;
        assert!(close(
            qfi_phase(n).unwrap().crb,
            sql_sample(n).unwrap().delta_phi,
            1e-15
        ));
        let big_n = 6.0;
        assert!(close(
            qfi_phase(big_n * big_n / 4.0).unwrap().fisher,
            big_n * big_n,
            1e-15
        ));
        assert!(close(
            qfi_phase(2.0 * (n * n + n)).unwrap().crb,
            squeezed_vacuum_crb(n).unwrap().delta_phi,
            1e-15
        ));
        assert!(qfi_phase(0.0).is_err());
        assert_eq!(qfi_crb(1.0).unwrap().family, BoundFamily::QfiCrb);
    }

    #[test]
    fn diffraction_examples() {
        assert!(close(
            diffraction_limit(400e-9, 1.0).unwrap(),
            200e-9,
            1e-12
        ));
        assert!(close(
            diffraction_limit(1064.0, 0.532).unwrap(),
            1000.0,
            1e-12
        ));
        assert!(close(diffraction_limit(750.0, 1.25).unwrap(), 300.0, 1e-12));
        assert!(diffraction_limit(0.0, 1.0).is_err());
        assert!(diffraction_limit(500.0, -1.0).is_err());
    }

    #[test]
    fn oct_examples() {
        let lc = oct_coherence_length(800e-9, 28e-9).unwrap();
        assert!((lc - 20.2e-6).abs() < 0.1e-6);
        let lc = oct_coherence_length(800e-9, 300e-9).unwrap();
        assert!((lc - 1.88e-6).abs() < 0.01e-6);
        let lc = oct_coherence_length(1.0, 0.5).unwrap();
        assert!((lc - 1.765).abs() < 1e-3);
        assert!(oct_coherence_length(800.0, 900.0).is_err());

        assert_eq!(oct_sensitivity(4e6).unwrap().sensitivity, 1e6);
        assert_eq!(oct_sensitivity(4.0).unwrap().min_reflectivity, 1.0);
        assert_eq!(oct_sensitivity(4e10).unwrap().sensitivity, 1e10);
    }

    #[test]
    fn dipole_scattering_examples() {
        let m = 1.45 / 1.33;
        let d = dipole_scattering_fraction(150e-9, 750e-9, m, 1e-6).unwrap();
        // direct evaluation of the Rayleigh formula
        let k = 2.0 * PI / 750e-9;
        let cm = (m * m - 1.0) / (m * m + 2.0);
        let sigma = 8.0 * PI / 3.0 * k.powi(4) * (150e-9f64).powi(6) * cm * cm;
        assert!(close(d.cross_section, sigma, 1e-12));
        // order-of-magnitude agreement with the quoted σ ≈ 3e-15 m², fraction ≈ 3e-4
        assert!(d.cross_section > 1.5e-15 && d.cross_section < 6e-15);
        assert!(d.fraction > 1e-4 && d.fraction < 6e-4);

        let matched = dipole_scattering_fraction(150e-9, 750e-9, 1.0, 1e-6).unwrap();
        assert_eq!(matched.cross_section, 0.0);
        assert!(dipole_scattering_fraction(0.0, 750e-9, 1.1, 1e-6).is_err());
    }

    #[test]
    fn signal_mode_examples() {
        assert_eq!(signal_mode_amplitude(10.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(close(
            signal_mode_amplitude(10.0, 0.1, 1.0).unwrap(),
            1.0,
            1e-15
        ));
        assert!(signal_mode_amplitude(1.0, 1.0, 0.0).is_err());
        let dp = imaging_parameter_sql(-3.0, 100.0).unwrap();
        assert!(close(dp, 3.0 / (2.0 * 10.0), 1e-15));
    }

    #[test]
    fn ordering_invariants() {
        for i in 0..40 {
            let n = 10f64.powf(i as f64 / 8.0);
            let sql = sql_total(n).unwrap().delta_phi;
            let h = heisenberg(n).unwrap().delta_phi;
            assert!(h <= sql);
            assert!(squeezed_vacuum_crb(n).unwrap().delta_phi < h);
            for eta in [0.05, 0.3, 0.5, 0.77, 0.999] {
                assert!(qnl(n, eta).unwrap().delta_phi >= sql);
                if eta < 0.5 {
                    assert!(
                        loss_bound(n, eta, PowerConstraint::Total)
                            .unwrap()
                            .delta_phi
                            > sql
                    );
                }
            }
        }
    }

    #[test]
    fn doubling_scaling() {
        for i in 0..20 {
            let n = 1.0 + 3.7 * i as f64;
            let half = |f: fn(f64) -> Result<PrecisionResult>| {
                f(2.0 * n).unwrap().delta_phi / f(n).unwrap().delta_phi
            };
            assert!(close(half(sql_total), 1.0 / 2f64.sqrt(), 1e-12));
            assert!(close(half(sql_sample), 1.0 / 2f64.sqrt(), 1e-12));
            assert!(close(half(heisenberg), 0.5, 1e-12));
        }
    }
}
