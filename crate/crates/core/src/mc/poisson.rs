//! Exact Poisson variates: sequential inversion for small means, transformed
//! rejection with squeeze (PTRS) otherwise.

use rand::{Rng, RngExt};

use crate::special::ln_factorial;

/// Means at or above this use transformed rejection.
pub const INVERSION_LIMIT: f64 = 30.0;

pub fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    debug_assert!(mean >= 0.0 && mean.is_finite());
    if mean == 0.0 {
        0
    } else if mean < INVERSION_LIMIT {
        inversion(rng, mean)
    } else {
        ptrs(rng, mean)
    }
}

fn inversion<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    let u: f64 = rng.random();
    let mut k = 0u64;
    let mut p = (-mean).exp();
    let mut cdf = p;
    while u >= cdf {
        k += 1;
        p *= mean / k as f64;
        // rounding can leave cdf just short of 1
        if p == 0.0 && k as f64 > mean {
            break;
        }
        cdf += p;
    }
    k
}

fn ptrs<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    let ln_mean = mean.ln();
    let b = 0.931 + 2.53 * mean.sqrt();
    let a = -0.059 + 0.02483 * b;
    let ln_inv_alpha = (1.1239 + 1.1328 / (b - 3.4)).ln();
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.random::<f64>() - 0.5;
        let v: f64 = rng.random();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + ln_inv_alpha - (a / (us * us) + b).ln();
        if lhs <= -mean + k * ln_mean - ln_factorial(k as u64) {
            return k as u64;
        }
    }
}
