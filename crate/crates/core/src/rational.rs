//! Exact rational helpers shared by every module.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number used for weights, degrees and class coefficients.
pub type Rational = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Sign as a rational in {-1, 0, 1}.
pub fn sign(q: &Rational) -> Rational {
    if q.is_zero() {
        Rational::zero()
    } else if q.is_positive() {
        int(1)
    } else {
        int(-1)
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Canonical "p/q" (or "p" for integers) rendering.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        s.parse::<i64>().ok().map(Rational::from_integer)
    }
}
