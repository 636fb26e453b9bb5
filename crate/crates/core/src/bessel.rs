//! K-Bessel function through its integral representation,
//! K_s(z) = 1/2 * integral over t > 0 of exp(-z/2 (t + 1/t)) t^(s-1) dt.
//!
//! The substitution t = e^w turns this into
//! K_s(z) = 1/2 * integral over R of exp(-z cosh w + s w) dw,
//! whose integrand decays doubly exponentially; the trapezoid rule then
//! converges spectrally in the step. Derivatives in z come from
//! differentiating under the integral, which powers the Bessel-valued
//! jets used by the eigenfunction catalog.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jet::{CJet, Jet};
use crate::num::{Scalar, C64};

/// Truncation half-width: beyond W the integrand (including a cosh^k
/// polynomial factor) is below 1e-18 of its peak.
fn half_width(s_re: f64, z: f64, k: usize) -> f64 {
    let slope = s_re.abs() + k as f64 + 1.0;
    // peak exponent (coarse scan is enough; cosh wins quickly)
    let mut peak = -z;
    let mut w = 0.0;
    while w <= 60.0 {
        let e = -z * libm::cosh(w) + slope * w;
        if e > peak {
            peak = e;
        }
        w += 0.25;
    }
    let mut cap = 1.0;
    while cap < 60.0 {
        let e = -z * libm::cosh(cap) + slope * cap;
        if e < peak - 45.0 {
            return cap;
        }
        cap += 0.25;
    }
    cap
}

/// One trapezoid pass at step `h` for the k-th z-derivative.
fn trapezoid(s: C64, z: f64, k: usize, w_cap: f64, h: f64) -> C64 {
    let n = libm::ceil(w_cap / h) as i64;
    let mut acc = C64::ZERO;
    for j in -n..=n {
        let w = j as f64 * h;
        let ch = libm::cosh(w);
        let expo = C64::c(-z * ch + s.re * w, s.im * w).exp();
        // (-cosh w)^k from differentiating under the integral
        let mut factor = 1.0;
        for _ in 0..k {
            factor *= -ch;
        }
        acc = acc + expo.scale(factor);
    }
    acc.scale(0.5 * h)
}

/// K_s(z) together with its first `kmax` z-derivatives.
///
/// Adaptive step halving until two successive passes agree to 1e-13
/// relative on every derivative.
pub fn bessel_k_derivs(s: C64, z: f64, kmax: usize) -> Result<Vec<C64>> {
    assert!(z > 0.0, "integral representation needs z > 0");
    let w_cap = half_width(s.re, z, kmax);
    let mut h = 0.5;
    let mut prev: Option<Vec<C64>> = None;
    let mut last_delta = f64::INFINITY;
    for _ in 0..8 {
        let vals: Vec<C64> = (0..=kmax)
            .map(|k| trapezoid(s.clone(), z, k, w_cap, h))
            .collect();
        if let Some(p) = &prev {
            let mut worst = 0.0f64;
            for (a, b) in vals.iter().zip(p.iter()) {
                let scale = 1.0 + a.abs();
                worst = worst.max((a.clone() - b.clone()).abs() / scale);
            }
            if worst < 1e-13 {
                return Ok(vals);
            }
            last_delta = worst;
        }
        prev = Some(vals);
        h *= 0.5;
    }
    Err(Error::QuadratureNotConverged { last_delta })
}

pub fn bessel_k(s: C64, z: f64) -> Result<C64> {
    Ok(bessel_k_derivs(s, z, 0)?[0].clone())
}

/// Independent oracle: one fixed pass at roughly ten times the resolution
/// the adaptive rule settles for, on a widened window.
pub fn bessel_k_oracle(s: C64, z: f64) -> C64 {
    let w_cap = half_width(s.re, z, 0) + 2.0;
    trapezoid(s, z, 0, w_cap, 0.5 / 512.0)
}

/// Bessel-valued jet: K_s applied to a positive real jet argument, with
/// derivatives under the integral composed through the Taylor rule.
pub fn bessel_k_cjet(s: C64, zjet: &Jet) -> Result<CJet> {
    let z0 = zjet.value();
    let derivs = bessel_k_derivs(s, z0, zjet.order())?;
    Ok(CJet::compose_from_real(zjet, &derivs))
}
