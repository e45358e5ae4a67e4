//! Loss channels on photon-number distributions and Bayesian conditioning of
//! twin-beam sources on detections in the reference beam.
//!
//! The reference beam of a [`PdcTwinBeam`] carries exactly the photon number
//! of the probe beam, so a count at the reference detector is evidence about
//! the probe. Loss can act on the probe path (after heralding) or on the
//! reference detector (before heralding); the two cases give different
//! conditional distributions.

use crate::error::{ensure, Error, Result};
use crate::special::ln_factorial;
use crate::states::{geometric_cutoff, PdcTwinBeam, PhotonDistribution, TAIL_BOUND};

/// Binomial thinning with transmissivity `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    eta: f64,
}

impl LossChannel {
    pub fn new(eta: f64) -> Result<Self> {
        ensure(
            (0.0..=1.0).contains(&eta),
            "LossChannel",
            "eta",
            eta,
            "transmissivity in [0, 1]",
        )?;
        Ok(Self { eta })
    }

    pub fn lossless() -> Self {
        Self { eta: 1.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    /// Reports the photon count.
    NumberResolving,
    /// Clicks on one or more photons.
    Bucket,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    kind: DetectorKind,
    efficiency: f64,
}

impl DetectorModel {
    pub fn new(kind: DetectorKind, efficiency: f64) -> Result<Self> {
        ensure(
            (0.0..=1.0).contains(&efficiency),
            "DetectorModel",
            "efficiency",
            efficiency,
            "detector efficiency in [0, 1]",
        )?;
        Ok(Self { kind, efficiency })
    }

    pub fn perfect(kind: DetectorKind) -> Self {
        Self {
            kind,
            efficiency: 1.0,
        }
    }

    pub fn kind(&self) -> DetectorKind {
        self.kind
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn channel(&self) -> LossChannel {
        LossChannel {
            eta: self.efficiency,
        }
    }
}

/// Where the loss sits relative to the herald.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossSide {
    /// Perfect herald, lossy path to the sample.
    Probe,
    /// Lossy herald, lossless path to the sample.
    Detector,
}

/// `p'(N) = Σ_{N'≥N} C(N',N) η^N (1-η)^(N'-N) p(N')`.
///
/// The represented mass and the truncation tail are carried over unchanged.
pub fn apply_loss(d: &PhotonDistribution, channel: LossChannel) -> PhotonDistribution {
    let eta = channel.eta;
    let pmf = d.pmf();
    if eta == 1.0 {
        return d.clone();
    }
    let total: f64 = pmf.iter().sum();
    if eta == 0.0 {
        return PhotonDistribution::from_parts(vec![total], d.tail_mass());
    }
    let n_max = pmf.len() - 1;
    let lf: Vec<f64> = (0..=n_max as u64).map(ln_factorial).collect();
    let (ln_t, ln_r) = (eta.ln(), (-eta).ln_1p());
    let mut out = vec![0.0; n_max + 1];
    for (src, &p) in pmf.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for (n, slot) in out.iter_mut().enumerate().take(src + 1) {
            let ln_w = lf[src] - lf[n] - lf[src - n] + n as f64 * ln_t + (src - n) as f64 * ln_r;
            *slot += p * ln_w.exp();
        }
    }
    PhotonDistribution::from_parts(out, d.tail_mass())
}

fn check_herald_count(op: &'static str, state: &PdcTwinBeam, n_det: usize) -> Result<()> {
    if state.epsilon() == 0.0 && n_det > 0 {
        return Err(Error::ImpossibleObservation {
            op,
            reason: format!("vacuum source (epsilon = 0) cannot produce {n_det} reference photons"),
        });
    }
    if n_det > state.cutoff() {
        return Err(Error::ImpossibleObservation {
            op,
            reason: format!(
                "n_det = {n_det} lies beyond the source truncation N_max = {} (tail < 1e-12)",
                state.cutoff()
            ),
        });
    }
    Ok(())
}

/// Perfect number-resolving herald of `n_det` photons, then probe loss:
/// a binomial distribution on `0..=n_det`.
pub fn condition_probe_number_resolving(
    state: &PdcTwinBeam,
    n_det: usize,
    probe_loss: LossChannel,
) -> Result<PhotonDistribution> {
    check_herald_count("condition_probe_number_resolving", state, n_det)?;
    Ok(apply_loss(&PhotonDistribution::delta(n_det), probe_loss))
}

/// Pre-loss distribution after a perfect bucket click,
/// `p(N) = (1-ε) ε^(N-1)` for `N ≥ 1`.
pub fn bucket_herald_prior(state: &PdcTwinBeam) -> PhotonDistribution {
    let eps = state.epsilon();
    let n_max = state.cutoff() + 1;
    let mut pmf = vec![0.0; n_max + 1];
    let mut w = 1.0 - eps;
    for slot in pmf.iter_mut().skip(1) {
        *slot = w;
        w *= eps;
    }
    PhotonDistribution::from_parts(pmf, eps.powi(n_max as i32))
}

/// Perfect bucket herald, then probe loss.
pub fn condition_probe_bucket(state: &PdcTwinBeam, probe_loss: LossChannel) -> PhotonDistribution {
    apply_loss(&bucket_herald_prior(state), probe_loss)
}

/// Photon-count distribution at a lossy reference detector: the thinned
/// thermal marginal.
pub fn detector_count_distribution(
    state: &PdcTwinBeam,
    detector_loss: LossChannel,
) -> PhotonDistribution {
    apply_loss(&state.marginal_pmf(), detector_loss)
}

/// `p(N | N_det)` for a number-resolving detector of efficiency `η`:
/// `C(N, N_det) q^(N-N_det) (1-q)^(N_det+1)` with `q = ε(1-η)`, truncated
/// once the remaining mass falls below 1e-12.
pub fn posterior_number_resolving(
    state: &PdcTwinBeam,
    n_det: usize,
    detector_loss: LossChannel,
) -> Result<PhotonDistribution> {
    const OP: &str = "posterior_number_resolving";
    check_herald_count(OP, state, n_det)?;
    if detector_loss.eta == 0.0 && n_det > 0 {
        return Err(Error::ImpossibleObservation {
            op: OP,
            reason: format!("a detector with efficiency 0 cannot register {n_det} photons"),
        });
    }
    let q = state.epsilon() * (1.0 - detector_loss.eta);
    let mut pmf = vec![0.0; n_det];
    if q == 0.0 {
        pmf.push(1.0);
        return Ok(PhotonDistribution::from_parts(pmf, 0.0));
    }
    let k = n_det as u64;
    let (ln_q, ln_1q) = (q.ln(), (-q).ln_1p());
    let mode = (k as f64 * q / (1.0 - q)).ceil() as u64 + k;
    let mut acc = 0.0;
    for n in k.. {
        let p = (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
            + (n - k) as f64 * ln_q
            + (k + 1) as f64 * ln_1q)
            .exp();
        pmf.push(p);
        acc += p;
        if n >= mode && (1.0 - acc <= TAIL_BOUND || p < f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(PhotonDistribution::from_parts(pmf, 1.0 - acc))
}

/// Click probability of a bucket detector, `1 - (1-ε)/(1-ε(1-η))`.
pub fn bucket_click_probability(state: &PdcTwinBeam, detector_loss: LossChannel) -> f64 {
    let eps = state.epsilon();
    let p0 = (1.0 - eps) / (1.0 - eps * (1.0 - detector_loss.eta));
    1.0 - p0
}

/// `p(N | click) = (1 - (1-η)^N) p(N) / P(click)`.
pub fn posterior_bucket(
    state: &PdcTwinBeam,
    detector_loss: LossChannel,
) -> Result<PhotonDistribution> {
    const OP: &str = "posterior_bucket";
    let (eps, eta) = (state.epsilon(), detector_loss.eta);
    if eps == 0.0 || eta == 0.0 {
        return Err(Error::ImpossibleObservation {
            op: OP,
            reason: format!("no clicks possible with epsilon = {eps}, eta = {eta}"),
        });
    }
    let click = bucket_click_probability(state, detector_loss);
    // posterior weight is bounded by the prior, so this bounds the tail
    let n_max = geometric_cutoff(eps, TAIL_BOUND * click).max(1);
    let r = 1.0 - eta;
    let pmf: Vec<f64> = (0..=n_max as i32)
        .map(|n| (1.0 - r.powi(n)) * (1.0 - eps) * eps.powi(n) / click)
        .collect();
    let m = n_max as i32 + 1;
    let tail = (eps.powi(m) - (1.0 - eps) * (eps * r).powi(m) / (1.0 - eps * r)) / click;
    Ok(PhotonDistribution::from_parts(pmf, tail))
}

/// Photon distribution at the sample after a herald, for loss `eta` on the
/// given side. A bucket herald ignores `n_det`.
pub fn conditional_distribution(
    state: &PdcTwinBeam,
    side: LossSide,
    kind: DetectorKind,
    eta: f64,
    n_det: usize,
) -> Result<PhotonDistribution> {
    let channel = LossChannel::new(eta)?;
    match (side, kind) {
        (LossSide::Probe, DetectorKind::NumberResolving) => {
            condition_probe_number_resolving(state, n_det, channel)
        }
        (LossSide::Probe, DetectorKind::Bucket) => Ok(condition_probe_bucket(state, channel)),
        (LossSide::Detector, DetectorKind::NumberResolving) => {
            posterior_number_resolving(state, n_det, channel)
        }
        (LossSide::Detector, DetectorKind::Bucket) => posterior_bucket(state, channel),
    }
}

/// Smallest resolvable absorption coefficient: `n_sig^(-1/2)` for a
/// coherent probe, `n_sig^(-1)` with ideal heralding.
pub fn min_detectable_absorption(n_sig: f64, heralded: bool) -> Result<f64> {
    ensure(
        n_sig > 0.0 && n_sig.is_finite(),
        "min_detectable_absorption",
        "n_sig",
        n_sig,
        "photon number > 0",
    )?;
    Ok(if heralded {
        1.0 / n_sig
    } else {
        1.0 / n_sig.sqrt()
    })
}
