//! Theta sums over the progressions `2*pi*(offset + Z)`.
//!
//! For `a = 4 pi^2 t`,
//!
//! ```text
//! sum_m exp(-a (m+d)^2)             = (4 pi t)^{-1/2} sum_k exp(-k^2/(4t)) cos(2 pi k d)
//! sum_m 2pi (m+d) exp(-a (m+d)^2)   = (2 sqrt(pi) t^{3/2})^{-1} sum_{k>=1} k sin(2 pi k d) exp(-k^2/(4t))
//! ```
//!
//! The left sides converge fast for large `t`, the right sides for small `t`.

use std::f64::consts::PI;

use crate::rational::{int, Rational};
use crate::spectrum::SpectrumFamily;

/// Crossover between direct and dual summation.
pub const T_SWITCH: f64 = 1.0 / (4.0 * PI);

// exp(-LOG_CUTOFF) is far below double precision relative to the leading term
const LOG_CUTOFF: f64 = 45.0;

fn sum_ascending(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.into_iter().sum()
}

fn direct_range(offset: f64, t: f64) -> (i64, i64) {
    let a = 4.0 * PI * PI * t;
    let reach = (LOG_CUTOFF / a).sqrt() + 1.0;
    ((-reach - offset).floor() as i64, (reach - offset).ceil() as i64)
}

fn dual_count(t: f64) -> i64 {
    (4.0 * t * LOG_CUTOFF).sqrt().ceil() as i64 + 1
}

/// `sum_m exp(-4 pi^2 t (m+offset)^2)` by direct summation.
pub fn theta_direct(offset: f64, t: f64) -> f64 {
    let a = 4.0 * PI * PI * t;
    let (lo, hi) = direct_range(offset, t);
    sum_ascending(
        (lo..=hi)
            .map(|m| {
                let x = m as f64 + offset;
                (-a * x * x).exp()
            })
            .collect(),
    )
}

/// The same sum through its Poisson dual.
pub fn theta_dual(offset: f64, t: f64) -> f64 {
    let kmax = dual_count(t);
    let mut terms: Vec<f64> = (1..=kmax)
        .map(|k| {
            let k = k as f64;
            2.0 * (-k * k / (4.0 * t)).exp() * (2.0 * PI * k * offset).cos()
        })
        .collect();
    terms.push(1.0);
    sum_ascending(terms) / (4.0 * PI * t).sqrt()
}

/// `sum_m 2 pi (m+offset) exp(-4 pi^2 t (m+offset)^2)` by direct summation.
pub fn eta_integrand_direct(offset: f64, t: f64) -> f64 {
    let a = 4.0 * PI * PI * t;
    let (lo, hi) = direct_range(offset, t);
    sum_ascending(
        (lo..=hi)
            .map(|m| {
                let x = m as f64 + offset;
                2.0 * PI * x * (-a * x * x).exp()
            })
            .collect(),
    )
}

/// The same sum through its Poisson dual.
pub fn eta_integrand_dual(offset: f64, t: f64) -> f64 {
    let kmax = dual_count(t);
    let terms = (1..=kmax)
        .map(|k| {
            let kf = k as f64;
            kf * (2.0 * PI * kf * offset).sin() * (-kf * kf / (4.0 * t)).exp()
        })
        .collect();
    sum_ascending(terms) / (2.0 * PI.sqrt() * t.powf(1.5))
}

/// Offsets in `{0, 1/2, -1/2}` give progressions symmetric about zero.
pub(crate) fn is_symmetric_offset(offset: &Rational) -> bool {
    (offset * int(2)).is_integer()
}

/// Heat trace of the square of the vertical operator with the given spectrum.
pub fn heat_trace_vertical(spec: &SpectrumFamily, t: f64) -> f64 {
    spec.float_families()
        .into_iter()
        .map(|(o, m)| {
            m * if t >= T_SWITCH {
                theta_direct(o, t)
            } else {
                theta_dual(o, t)
            }
        })
        .sum()
}

/// `Tr(D exp(-t D^2))` for the vertical operator with the given spectrum.
pub fn eta_heat_integrand(spec: &SpectrumFamily, t: f64) -> f64 {
    spec.families()
        .filter(|(o, _)| !is_symmetric_offset(o))
        .map(|(o, m)| m as f64 * progression_eta_integrand(crate::rational::to_f64(&o), t))
        .sum()
}

pub(crate) fn progression_eta_integrand(offset: f64, t: f64) -> f64 {
    if t >= T_SWITCH {
        eta_integrand_direct(offset, t)
    } else {
        eta_integrand_dual(offset, t)
    }
}
