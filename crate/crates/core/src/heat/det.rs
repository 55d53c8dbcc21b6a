//! Zeta-regularized determinant of the model vertical Laplacian with spectrum
//! `{4 pi^2 (m + offset)^2 : m in Z}`.
//!
//! `zeta(s) = (2 pi)^{-2s} [zeta_H(2s, b) + zeta_H(2s, 1-b)]` with `b` the
//! representative of the offset in `(0,1)`, so
//! `-zeta'(0) = 2 log(2 pi) [zeta_H(0,b) + zeta_H(0,1-b)] - 2 [zeta_H'(0,b) + zeta_H'(0,1-b)]`.

use std::f64::consts::PI;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, to_f64, Rational};
use crate::specfun::{hurwitz_zeta_at_zero, hurwitz_zeta_deriv_at_zero, PrecisionPolicy};

/// `log det` of the model Laplacian, `mult` copies. Offsets in `(-1, 0)` are
/// shifted by one.
pub fn log_det_model_vertical(offset: &Rational, mult: u64, policy: &PrecisionPolicy) -> Result<f64> {
    if offset.is_zero() {
        return Err(Error::ZeroMode);
    }
    if *offset <= -Rational::one() || *offset >= Rational::one() {
        return Err(Error::Domain(format!(
            "offset {} not in (-1,1)",
            fmt_rational(offset)
        )));
    }
    let b = if *offset < Rational::zero() { offset + int(1) } else { *offset };
    let c = int(1) - b;
    let zeta0 = to_f64(&(hurwitz_zeta_at_zero(&b)? + hurwitz_zeta_at_zero(&c)?));
    let dzeta0 = hurwitz_zeta_deriv_at_zero(&b, policy)? + hurwitz_zeta_deriv_at_zero(&c, policy)?;
    let per_copy = 2.0 * (2.0 * PI).ln() * zeta0 - 2.0 * dzeta0;
    Ok(mult as f64 * per_copy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn oracle(b: f64) -> f64 {
        (4.0 * (PI * b).sin().powi(2)).ln()
    }

    #[test]
    fn matches_sine_product() {
        let p = PrecisionPolicy::default();
        for (n, d) in [(1, 2), (1, 4), (1, 3), (1, 6), (5, 7), (-1, 3)] {
            let b = rat(n, d);
            let v = log_det_model_vertical(&b, 1, &p).unwrap();
            assert!((v - oracle(to_f64(&b))).abs() < 1e-12, "{n}/{d}: {v}");
        }
        let v = log_det_model_vertical(&rat(1, 3), 2, &p).unwrap();
        assert!((v - 2.0 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn zero_offset_is_a_zero_mode() {
        assert_eq!(
            log_det_model_vertical(&int(0), 1, &PrecisionPolicy::default()),
            Err(Error::ZeroMode)
        );
    }
}
