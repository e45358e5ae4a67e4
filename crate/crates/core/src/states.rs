//! Quantum-state models and their counting, quadrature and coherence
//! observables.

use crate::error::{ensure, Error, Result};
use crate::special::ln_factorial;

/// Allowed deviation of a pmf's total mass from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Target bound on the probability mass discarded by truncation.
pub const TAIL_BOUND: f64 = 1e-12;

/// Probability mass over photon number `N = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    pmf: Vec<f64>,
    tail_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl PhotonDistribution {
    /// Validates entries in `[0, 1]` and total mass within
    /// [`NORMALIZATION_TOL`] of one. The mass missing from one is kept as the
    /// reported truncation tail.
    pub fn from_pmf(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::Dataset(
                "photon distribution needs at least one entry".into(),
            ));
        }
        for (n, &p) in pmf.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain {
                    op: "PhotonDistribution",
                    name: "p(N)",
                    value: p,
                    requirement: if n == 0 {
                        "0 <= p(0) <= 1"
                    } else {
                        "0 <= p(N) <= 1"
                    },
                });
            }
        }
        let total: f64 = pmf.iter().sum();
        ensure(
            (total - 1.0).abs() <= NORMALIZATION_TOL,
            "PhotonDistribution",
            "sum p(N)",
            total,
            "total probability within 1e-9 of 1",
        )?;
        Ok(Self {
            pmf,
            tail_mass: (1.0 - total).max(0.0),
        })
    }

    /// Truncated pmf whose missing mass is known analytically.
    pub(crate) fn from_parts(pmf: Vec<f64>, tail_mass: f64) -> Self {
        debug_assert!(!pmf.is_empty());
        Self {
            pmf,
            tail_mass: tail_mass.max(0.0),
        }
    }

    /// All probability at photon number `n`.
    pub fn delta(n: usize) -> Self {
        let mut pmf = vec![0.0; n + 1];
        pmf[n] = 1.0;
        Self {
            pmf,
            tail_mass: 0.0,
        }
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn n_max(&self) -> usize {
        self.pmf.len() - 1
    }

    /// `p(N)`, zero beyond the truncation bound.
    pub fn prob(&self, n: usize) -> f64 {
        self.pmf.get(n).copied().unwrap_or(0.0)
    }

    /// Mass not represented in the pmf (truncation tail).
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn total(&self) -> f64 {
        self.pmf.iter().sum()
    }

    /// `P(N > n)` within the represented support.
    pub fn mass_above(&self, n: usize) -> f64 {
        self.pmf.iter().skip(n + 1).sum()
    }

    pub fn moments(&self) -> Moments {
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (n, &p) in self.pmf.iter().enumerate() {
            let n = n as f64;
            m1 += n * p;
            m2 += n * n * p;
        }
        Moments {
            mean: m1,
            variance: m2 - m1 * m1,
        }
    }

    pub fn mean(&self) -> f64 {
        self.moments().mean
    }

    /// `⟨N(N-1)⟩`.
    pub fn second_factorial_moment(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(n, &p)| (n as f64) * (n as f64 - 1.0) * p)
            .sum()
    }

    /// Half the L1 distance, zero-padding the shorter support.
    pub fn total_variation(&self, other: &PhotonDistribution) -> f64 {
        let len = self.pmf.len().max(other.pmf.len());
        0.5 * (0..len)
            .map(|n| (self.prob(n) - other.prob(n)).abs())
            .sum::<f64>()
    }
}

/// `(mean, variance)` of a distribution.
pub fn distribution_moments(d: &PhotonDistribution) -> Moments {
    d.moments()
}

/// Truncation for a Poisson pmf: `max(32, ceil(m + 12·√m))`.
pub fn poisson_cutoff(mean_n: f64) -> usize {
    (mean_n + 12.0 * mean_n.sqrt()).ceil().max(32.0) as usize
}

/// Poisson photon statistics of a coherent state with mean `mean_n`.
pub fn coherent_pmf(mean_n: f64) -> Result<PhotonDistribution> {
    ensure(
        mean_n >= 0.0 && mean_n.is_finite(),
        "coherent_pmf",
        "mean_n",
        mean_n,
        "mean photon number >= 0",
    )?;
    coherent_pmf_with_cutoff(mean_n, poisson_cutoff(mean_n))
}

/// As [`coherent_pmf`] with an explicit truncation bound; fails if the
/// discarded tail exceeds the normalisation tolerance.
pub fn coherent_pmf_with_cutoff(mean_n: f64, n_max: usize) -> Result<PhotonDistribution> {
    ensure(
        mean_n >= 0.0 && mean_n.is_finite(),
        "coherent_pmf",
        "mean_n",
        mean_n,
        "mean photon number >= 0",
    )?;
    let pmf = if mean_n == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else {
        let ln_m = mean_n.ln();
        (0..=n_max as u64)
            .map(|n| (-mean_n + n as f64 * ln_m - ln_factorial(n)).exp())
            .collect()
    };
    PhotonDistribution::from_pmf(pmf)
}

/// Two-mode squeezed vacuum from parametric down-conversion, parameterised
/// by the interaction strength `ε ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdcTwinBeam {
    epsilon: f64,
}

impl PdcTwinBeam {
    pub fn new(epsilon: f64) -> Result<Self> {
        ensure(
            (0.0..1.0).contains(&epsilon),
            "PdcTwinBeam",
            "epsilon",
            epsilon,
            "0 <= epsilon < 1 (normalisable twin-beam state)",
        )?;
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `ε/(1-ε)`, the mean photon number in either beam.
    pub fn mean_photons(&self) -> f64 {
        self.epsilon / (1.0 - self.epsilon)
    }

    /// Truncation with geometric tail `ε^(n_max+1) < 1e-12`.
    pub fn cutoff(&self) -> usize {
        geometric_cutoff(self.epsilon, TAIL_BOUND)
    }

    /// Thermal marginal `p(N) = (1-ε) ε^N` of either beam.
    pub fn marginal_pmf(&self) -> PhotonDistribution {
        let eps = self.epsilon;
        let pmf = (0..=self.cutoff() as i32)
            .map(|n| (1.0 - eps) * eps.powi(n))
            .collect();
        PhotonDistribution {
            pmf,
            tail_mass: eps.powi(self.cutoff() as i32 + 1),
        }
    }
}

/// Smallest `n` with `ratio^(n+1) < tail` (zero when `ratio == 0`).
pub(crate) fn geometric_cutoff(ratio: f64, tail: f64) -> usize {
    if ratio <= 0.0 {
        return 0;
    }
    (tail.ln() / ratio.ln()).ceil().max(0.0) as usize
}

pub fn pdc_marginal_pmf(state: &PdcTwinBeam) -> PhotonDistribution {
    state.marginal_pmf()
}

/// Normalised zero-delay second-order coherence
/// `g2 = 1 + V(n)/⟨n⟩² - 1/⟨n⟩`.
pub fn g2_self(d: &PhotonDistribution) -> Result<f64> {
    let mean = d.mean();
    ensure(
        mean > 0.0,
        "g2_self",
        "mean",
        mean,
        "nonzero mean photon number",
    )?;
    Ok(d.second_factorial_moment() / (mean * mean))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bunching {
    /// `g2 < 1`: no classical intensity distribution produces this.
    NonclassicalAntibunched,
    ClassicalAllowed,
}

pub fn classify_bunching(g2_zero: f64) -> Result<Bunching> {
    ensure(
        g2_zero >= 0.0,
        "classify_bunching",
        "g2",
        g2_zero,
        "g2 >= 0",
    )?;
    Ok(if g2_zero < 1.0 {
        Bunching::NonclassicalAntibunched
    } else {
        Bunching::ClassicalAllowed
    })
}

/// Bright displaced squeezed (or coherent) state.
///
/// `v_anti` is the variance of the quadrature along the coherent amplitude
/// when `theta = 0`; at `theta = π/2` the squeezed quadrature lies along it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProbe {
    alpha: f64,
    v_sqz: f64,
    v_anti: f64,
    theta: f64,
}

/// Slack for the uncertainty product when it is saturated up to rounding.
const UNCERTAINTY_SLACK: f64 = 1e-12;

impl GaussianProbe {
    pub fn new(alpha: f64, v_sqz: f64, v_anti: f64, theta: f64) -> Result<Self> {
        const OP: &str = "GaussianProbe";
        ensure(
            alpha >= 0.0 && alpha.is_finite(),
            OP,
            "alpha",
            alpha,
            "real alpha >= 0",
        )?;
        ensure(
            v_sqz > 0.0 && v_sqz.is_finite(),
            OP,
            "v_sqz",
            v_sqz,
            "v_sqz > 0",
        )?;
        ensure(
            v_anti > 0.0 && v_anti.is_finite(),
            OP,
            "v_anti",
            v_anti,
            "v_anti > 0",
        )?;
        ensure(theta.is_finite(), OP, "theta", theta, "finite angle")?;
        let product = v_sqz * v_anti;
        ensure(
            product >= 1.0 - UNCERTAINTY_SLACK,
            OP,
            "v_sqz*v_anti",
            product,
            "uncertainty product v_sqz*v_anti >= 1",
        )?;
        Ok(Self {
            alpha,
            v_sqz,
            v_anti,
            theta,
        })
    }

    pub fn coherent(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 1.0, 0.0)
    }

    /// Pure state with `v_anti = 1/v_sqz`.
    pub fn minimum_uncertainty(alpha: f64, v_sqz: f64, theta: f64) -> Result<Self> {
        Self::new(alpha, v_sqz, 1.0 / v_sqz, theta)
    }

    pub fn squeezed_vacuum(v_sqz: f64) -> Result<Self> {
        Self::minimum_uncertainty(0.0, v_sqz, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn v_sqz(&self) -> f64 {
        self.v_sqz
    }
    pub fn v_anti(&self) -> f64 {
        self.v_anti
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `V(X) cos²θ + V(Y) sin²θ`: the quadrature variance seen along the
    /// coherent amplitude.
    fn amplitude_variance(&self) -> f64 {
        let (s, c) = self.theta.sin_cos();
        self.v_anti * c * c + self.v_sqz * s * s
    }
}

/// `|α|² + (V(Y) + V(X) - 2)/4`.
pub fn gaussian_mean_photons(probe: &GaussianProbe) -> f64 {
    probe.alpha * probe.alpha + (probe.v_sqz + probe.v_anti - 2.0) / 4.0
}

/// `|α|²[V(X)cos²θ + V(Y)sin²θ] + [V(Y)² + V(X)² - 2]/8`.
pub fn gaussian_photon_variance(probe: &GaussianProbe) -> f64 {
    probe.alpha * probe.alpha * probe.amplitude_variance()
        + (probe.v_sqz * probe.v_sqz + probe.v_anti * probe.v_anti - 2.0) / 8.0
}

/// Required ratio `|α|² / v_anti` for the bright-probe approximations.
pub const BRIGHTNESS_GATE: f64 = 100.0;

/// `g2` of a bright squeezed probe, `1 + (V(X)cos²θ + V(Y)sin²θ - 1)/⟨n⟩`.
pub fn bright_squeezed_g2(probe: &GaussianProbe) -> Result<f64> {
    let a2 = probe.alpha * probe.alpha;
    ensure(
        a2 >= BRIGHTNESS_GATE * probe.v_anti,
        "bright_squeezed_g2",
        "alpha^2",
        a2,
        "bright probe, alpha^2 >= 100 * v_anti",
    )?;
    Ok(1.0 + (probe.amplitude_variance() - 1.0) / gaussian_mean_photons(probe))
}

/// NOON state of `n` photons used `m` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoonSpec {
    n: u32,
    m: u32,
}

impl NoonSpec {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        ensure(n >= 1, "NoonSpec", "n", n as f64, "n >= 1")?;
        ensure(m >= 1, "NoonSpec", "m", m as f64, "m >= 1")?;
        Ok(Self { n, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Lossless precision `1/(N √M)` after `M` independent repetitions.
    pub fn lossless_precision(&self) -> f64 {
        1.0 / (self.n as f64 * (self.m as f64).sqrt())
    }
}

/// Upper limit on `ε` for the single-pair truncation.
pub const ETPA_MAX_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCoherence {
    /// `g12 = 1/ε` for the pair-truncated state.
    pub g2_cross: f64,
    /// `√(g11 g22)` from the thermal marginals.
    pub classical_bound: f64,
    pub violates_cauchy_schwarz: bool,
}

/// Cross-beam coherence of a weakly pumped twin beam, compared with the
/// Cauchy-Schwarz bound for classical fields.
pub fn etpa_cross_coherence(state: &PdcTwinBeam) -> Result<CrossCoherence> {
    let eps = state.epsilon();
    ensure(
        eps > 0.0,
        "etpa_cross_coherence",
        "epsilon",
        eps,
        "epsilon > 0",
    )?;
    ensure(
        eps <= ETPA_MAX_EPSILON,
        "etpa_cross_coherence",
        "epsilon",
        eps,
        "epsilon <= 0.1 (single-pair truncation)",
    )?;
    let marginal = g2_self(&state.marginal_pmf())?;
    let g2_cross = 1.0 / eps;
    let classical_bound = (marginal * marginal).sqrt();
    Ok(CrossCoherence {
        g2_cross,
        classical_bound,
        violates_cauchy_schwarz: g2_cross > classical_bound,
    })
}
