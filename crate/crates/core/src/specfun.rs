//! Hurwitz zeta function on the real line.
//!
//! `zeta_H(s, q) = sum_{k >= 0} (k + q)^{-s}` for `s > 1`, continued to all
//! real `s != 1` by the Euler-Maclaurin formula
//!
//! ```text
//! zeta_H(s, q) = sum_{k<N} (k+q)^{-s} + (N+q)^{1-s}/(s-1) + (N+q)^{-s}/2
//!              + sum_{j=1}^{M} B_{2j}/(2j)! * s(s+1)...(s+2j-2) * (N+q)^{-s-2j+1} + R_{N,M}
//! ```
//!
//! `N` is doubled until the Bernoulli tail drops below the target tolerance.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPolicy {
    pub target_abs_tol: f64,
    pub max_terms: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            target_abs_tol: 1e-12,
            max_terms: 1 << 20,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(target_abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(target_abs_tol > 0.0 && target_abs_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {target_abs_tol}"
            )));
        }
        if max_terms < 8 {
            return Err(Error::Domain(format!(
                "max_terms must be at least 8, got {max_terms}"
            )));
        }
        Ok(Self {
            target_abs_tol,
            max_terms,
        })
    }

    pub fn with_tol(self, target_abs_tol: f64) -> Result<Self> {
        Self::new(target_abs_tol, self.max_terms)
    }
}

// B_{2j} for j = 1..=15 as (numerator, denominator).
const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// `B_{2j} / (2j)!` for `j = 1..=15`.
fn bernoulli_over_factorial() -> [f64; 15] {
    let mut out = [0.0; 15];
    let mut fact = 1.0f64;
    for (j, slot) in out.iter_mut().enumerate() {
        let n = 2 * (j + 1);
        fact *= ((n - 1) * n) as f64;
        let (num, den) = BERNOULLI_EVEN[j];
        *slot = num / den / fact;
    }
    out
}

fn check_beta(beta: &Rational) -> Result<f64> {
    if *beta <= int(0) || *beta > int(1) {
        return Err(Error::Domain(format!(
            "beta must lie in (0,1], got {}",
            crate::rational::fmt_rational(beta)
        )));
    }
    Ok(to_f64(beta))
}

/// Hurwitz zeta `zeta_H(s, beta)` for rational `beta` in `(0, 1]`.
pub fn hurwitz_zeta(s: f64, beta: &Rational, policy: &PrecisionPolicy) -> Result<f64> {
    let q = check_beta(beta)?;
    hurwitz_zeta_real(s, q, policy)
}

/// Hurwitz zeta for any real `q > 0`.
pub fn hurwitz_zeta_real(s: f64, q: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::PoleAtOne);
    }
    if !(q > 0.0 && q.is_finite()) || !s.is_finite() {
        return Err(Error::Domain(format!("need q > 0 and finite s, got s={s}, q={q}")));
    }
    let coeffs = bernoulli_over_factorial();
    let tol = policy.target_abs_tol;
    let mut n = 8usize.max(s.abs().ceil() as usize + 4);
    let mut best = f64::INFINITY;
    loop {
        let (value, tail) = euler_maclaurin(s, q, n, &coeffs, tol);
        if tail <= tol * 0.5 {
            return Ok(value);
        }
        best = best.min(tail);
        if n >= policy.max_terms {
            return Err(Error::NonConvergence {
                what: "Hurwitz zeta Euler-Maclaurin tail",
                reached: best,
                wanted: tol,
            });
        }
        n = (2 * n).min(policy.max_terms);
    }
}

/// One Euler-Maclaurin evaluation with `n` explicit terms. Returns the value and
/// the size of the first omitted correction.
fn euler_maclaurin(s: f64, q: f64, n: usize, coeffs: &[f64; 15], tol: f64) -> (f64, f64) {
    // smallest terms first
    let mut direct = 0.0;
    for k in (0..n).rev() {
        direct += (k as f64 + q).powf(-s);
    }
    let a = n as f64 + q;
    let a_pow = a.powf(-s);
    let mut total = direct + a * a_pow / (s - 1.0) + 0.5 * a_pow;

    // rising factorial s(s+1)...(s+2j-2) times a^{-s-2j+1}
    let mut rising = s;
    let mut power = a_pow / a;
    let mut last = f64::INFINITY;
    for (j, c) in coeffs.iter().enumerate() {
        let term = c * rising * power;
        if term.abs() > last && j > 1 {
            // asymptotic series started to diverge
            return (total, last);
        }
        total += term;
        last = term.abs();
        if last <= tol * 1e-3 {
            return (total, last);
        }
        let m = 2.0 * (j as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        power /= a * a;
    }
    (total, last)
}

/// Exact value `zeta_H(0, beta) = 1/2 - beta`.
pub fn hurwitz_zeta_at_zero(beta: &Rational) -> Result<Rational> {
    check_beta(beta)?;
    Ok(Rational::new(1, 2) - beta)
}

/// `d/ds zeta_H(s, beta)` at `s = 0` via Lerch's formula `log Gamma(beta) - log(2 pi)/2`.
pub fn hurwitz_zeta_deriv_at_zero(beta: &Rational, _policy: &PrecisionPolicy) -> Result<f64> {
    let q = check_beta(beta)?;
    Ok(ln_gamma(q) - 0.5 * (2.0 * std::f64::consts::PI).ln())
}

/// `sum_{k=0}^{n-1} (k + beta)^{-s}` for `s > 1`.
pub fn truncated_dirichlet_sum(s: f64, beta: &Rational, n: usize) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::Domain(format!("Dirichlet sum needs s > 1, got {s}")));
    }
    if n == 0 {
        return Err(Error::Domain("Dirichlet sum needs N >= 1".into()));
    }
    let q = check_beta(beta)?;
    Ok((0..n).rev().map(|k| (k as f64 + q).powf(-s)).sum())
}
