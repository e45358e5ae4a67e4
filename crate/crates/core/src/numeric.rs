//! Scalar root bracketing and one-dimensional minimisation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite
/// sign. Runs until the bracket stops shrinking in floating point.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, max_iter: usize) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Domain {
            op: "bisect",
            name: "f(lo)*f(hi)",
            value: f_lo * f_hi,
            requirement: "a sign change across the bracket",
        });
    }
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(Root {
                x: mid,
                residual: 0.0,
                iterations,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let (x, residual) = {
        let (a, b) = (f(lo), f(hi));
        if a.abs() <= b.abs() {
            (lo, a)
        } else {
            (hi, b)
        }
    };
    Ok(Root {
        x,
        residual,
        iterations,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
pub fn golden_section_min<F>(f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a).abs() > tol && iterations < max_iter {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let x = 0.5 * (a + b);
    Minimum {
        x,
        value: f(x),
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 200).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 100).is_err());
    }

    #[test]
    fn golden_section_parabola() {
        let m = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-12, 500);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-14);
    }
}
