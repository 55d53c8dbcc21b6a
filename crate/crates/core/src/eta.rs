//! Eta invariants of the vertical families.
//!
//! A progression `2 pi (d + Z)` with multiplicity `m` has eta invariant
//! `m sign(d) (1 - 2|d|)`. It is computed three ways: in closed form, through
//! the Hurwitz zeta continuation, and as a heat integral.

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::heat::theta::{progression_eta_integrand, T_SWITCH};
use crate::parabolic::ParabolicData;
use crate::rational::{fmt_rational, int, sign, to_f64, Rational};
use crate::specfun::{hurwitz_zeta, PrecisionPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EtaMethod {
    Closed,
    Zeta,
    Heat,
}

impl EtaMethod {
    pub fn name(self) -> &'static str {
        match self {
            EtaMethod::Closed => "closed",
            EtaMethod::Zeta => "zeta",
            EtaMethod::Heat => "heat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaValue {
    Exact(Rational),
    Numeric(f64),
}

impl EtaValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            EtaValue::Exact(q) => to_f64(q),
            EtaValue::Numeric(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            EtaValue::Exact(q) => Some(*q),
            EtaValue::Numeric(_) => None,
        }
    }
}

/// One term of an eta sum: a single level `j`, or an ordered pair `(j, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaContribution {
    pub puncture: usize,
    pub levels: (usize, Option<usize>),
    pub offset: Rational,
    pub multiplicity: u64,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaResult {
    pub value: EtaValue,
    pub method: EtaMethod,
    pub per_puncture_breakdown: Vec<EtaContribution>,
}

fn check_offset(offset: &Rational) -> Result<()> {
    if *offset <= -Rational::one() || *offset >= Rational::one() {
        return Err(Error::Domain(format!(
            "offset {} not in (-1,1)",
            fmt_rational(offset)
        )));
    }
    Ok(())
}

/// `mult * sign(offset) * (1 - 2|offset|)`.
pub fn eta_closed_progression(offset: &Rational, mult: u64) -> Rational {
    if offset.is_zero() {
        return Rational::zero();
    }
    int(mult as i64) * sign(offset) * (int(1) - int(2) * offset.abs())
}

/// Eta invariant of the vertical operator on `E` at one puncture.
pub fn eta_e(data: &ParabolicData, puncture: usize) -> Result<EtaResult> {
    let flag = data.flag(puncture)?;
    let breakdown: Vec<_> = flag
        .levels()
        .enumerate()
        .filter(|(_, (a, _))| *a > Rational::zero())
        .map(|(j, (a, k))| EtaContribution {
            puncture,
            levels: (j, None),
            offset: a,
            multiplicity: k as u64,
            value: eta_closed_progression(&a, k as u64),
        })
        .collect();
    let total = breakdown.iter().map(|c| c.value).sum();
    Ok(EtaResult {
        value: EtaValue::Exact(total),
        method: EtaMethod::Closed,
        per_puncture_breakdown: breakdown,
    })
}

/// Eta invariant of the vertical operator on `End(E)` at one puncture,
/// summed over ordered pairs `j != l`. The pairs cancel, so this is zero.
pub fn eta_end(data: &ParabolicData, puncture: usize) -> Result<EtaResult> {
    let flag = data.flag(puncture)?;
    let levels: Vec<_> = flag.levels().collect();
    let mut breakdown = Vec::new();
    for (j, &(aj, kj)) in levels.iter().enumerate() {
        for (l, &(al, kl)) in levels.iter().enumerate() {
            if j == l {
                continue;
            }
            let delta = aj - al;
            let mult = kj as u64 * kl as u64;
            breakdown.push(EtaContribution {
                puncture,
                levels: (j, Some(l)),
                offset: delta,
                multiplicity: mult,
                value: eta_closed_progression(&delta, mult),
            });
        }
    }
    let total: Rational = breakdown.iter().map(|c| c.value).sum();
    debug_assert!(total.is_zero());
    Ok(EtaResult {
        value: EtaValue::Exact(total),
        method: EtaMethod::Closed,
        per_puncture_breakdown: breakdown,
    })
}

/// `mult * sign(d) * (zeta_H(0,|d|) - zeta_H(0,1-|d|))`, both values taken
/// from the Euler-Maclaurin continuation.
pub fn eta_numeric_zeta(offset: &Rational, mult: u64, policy: &PrecisionPolicy) -> Result<f64> {
    check_offset(offset)?;
    if offset.is_zero() {
        return Ok(0.0);
    }
    let a = offset.abs();
    let diff = hurwitz_zeta(0.0, &a, policy)? - hurwitz_zeta(0.0, &(int(1) - a), policy)?;
    Ok(mult as f64 * to_f64(&sign(offset)) * diff)
}

const HEAT_MAX_LEVELS: u32 = 14;

/// `pi^{-1/2} int_0^inf t^{-1/2} Tr(D exp(-t D^2)) dt` by the trapezoid rule
/// in `u = log t`, halving the step until two levels agree.
pub fn eta_numeric_heat(offset: &Rational, mult: u64, policy: &PrecisionPolicy) -> Result<f64> {
    check_offset(offset)?;
    if crate::heat::theta::is_symmetric_offset(offset) {
        return Ok(0.0);
    }
    let d = to_f64(offset);
    let gap = d.abs().min(1.0 - d.abs());
    // integrand below exp(-45) relative outside [t_lo, t_hi]
    let t_lo: f64 = 1.0 / 180.0;
    let t_hi = (50.0 / (4.0 * PI * PI * gap * gap)).max(1.0);
    let (u_lo, u_hi) = (t_lo.ln(), t_hi.ln());
    let g = |u: f64| {
        let t = u.exp();
        t.sqrt() * progression_eta_integrand(d, t)
    };
    debug_assert!(t_lo < T_SWITCH);

    let tol = policy.target_abs_tol.max(1e-10);
    let mut n = 32usize;
    let mut h = (u_hi - u_lo) / n as f64;
    let mut sum = 0.5 * (g(u_lo) + g(u_hi)) + (1..n).map(|i| g(u_lo + i as f64 * h)).sum::<f64>();
    let mut prev = sum * h;
    for _ in 0..HEAT_MAX_LEVELS {
        // new midpoints only
        let mids: f64 = (0..n).map(|i| g(u_lo + (i as f64 + 0.5) * h)).sum();
        sum += mids;
        n *= 2;
        h *= 0.5;
        let cur = sum * h;
        if (cur - prev).abs() <= tol {
            return Ok(mult as f64 * cur / PI.sqrt());
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "eta heat integral",
        reached: (sum * h - prev).abs(),
        wanted: tol,
    })
}

/// Closed form and both numeric routes for one progression.
pub fn eta_all_routes(offset: &Rational, mult: u64, policy: &PrecisionPolicy) -> Result<[EtaResult; 3]> {
    let single = |value, method| EtaResult {
        value,
        method,
        per_puncture_breakdown: Vec::new(),
    };
    Ok([
        single(EtaValue::Exact(eta_closed_progression(offset, mult)), EtaMethod::Closed),
        single(EtaValue::Numeric(eta_numeric_zeta(offset, mult, policy)?), EtaMethod::Zeta),
        single(EtaValue::Numeric(eta_numeric_heat(offset, mult, policy)?), EtaMethod::Heat),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::FlagData;
    use crate::rational::rat;

    fn one_puncture(rank: u32, degree: i64, weights: &[Rational], mults: &[u32]) -> ParabolicData {
        ParabolicData::new_unchecked(2, rank, degree, vec![FlagData::new(weights.to_vec(), mults.to_vec())])
    }

    #[test]
    fn closed_examples() {
        assert_eq!(eta_closed_progression(&rat(1, 4), 1), rat(1, 2));
        assert_eq!(eta_closed_progression(&int(0), 5), int(0));
        assert_eq!(eta_closed_progression(&rat(-1, 3), 2), rat(-2, 3));
        assert_eq!(eta_closed_progression(&rat(1, 3), 2), rat(2, 3));
        assert_eq!(eta_closed_progression(&rat(-1, 2), 4), int(0));
    }

    #[test]
    fn eta_e_examples() {
        let d = one_puncture(2, -1, &[rat(1, 4), rat(3, 4)], &[1, 1]);
        assert_eq!(eta_e(&d, 0).unwrap().value, EtaValue::Exact(int(0)));
        let d = one_puncture(3, 0, &[int(0)], &[3]);
        assert_eq!(eta_e(&d, 0).unwrap().value, EtaValue::Exact(int(0)));
        let d = one_puncture(3, 0, &[int(0), rat(1, 3)], &[1, 2]);
        let r = eta_e(&d, 0).unwrap();
        assert_eq!(r.value, EtaValue::Exact(rat(2, 3)));
        assert_eq!(r.per_puncture_breakdown.len(), 1);
        assert!(matches!(eta_e(&d, 1), Err(Error::PunctureOutOfRange { .. })));
    }

    #[test]
    fn eta_end_cancels() {
        let d = one_puncture(4, 0, &[int(0), rat(1, 6), rat(2, 3)], &[1, 2, 1]);
        let r = eta_end(&d, 0).unwrap();
        assert_eq!(r.value, EtaValue::Exact(int(0)));
        assert_eq!(r.per_puncture_breakdown.len(), 6);
        let pair = r
            .per_puncture_breakdown
            .iter()
            .find(|c| c.levels == (2, Some(1)))
            .unwrap();
        // delta = 1/2
        assert_eq!(pair.value, int(0));
    }

    #[test]
    fn zeta_route() {
        let p = PrecisionPolicy::default();
        assert!((eta_numeric_zeta(&rat(1, 4), 1, &p).unwrap() - 0.5).abs() < 1e-10);
        assert!(eta_numeric_zeta(&rat(1, 2), 3, &p).unwrap().abs() < 1e-10);
        assert_eq!(eta_numeric_zeta(&int(0), 7, &p).unwrap(), 0.0);
    }

    #[test]
    fn heat_route() {
        let p = PrecisionPolicy::default();
        assert!((eta_numeric_heat(&rat(1, 4), 1, &p).unwrap() - 0.5).abs() < 1e-6);
        assert!((eta_numeric_heat(&rat(-1, 4), 1, &p).unwrap() + 0.5).abs() < 1e-6);
        assert_eq!(eta_numeric_heat(&int(0), 3, &p).unwrap(), 0.0);
        for (n, dd) in [(1, 6), (1, 3), (2, 5), (-2, 5), (1, 24), (23, 24)] {
            let o = rat(n, dd);
            let closed = to_f64(&eta_closed_progression(&o, 2));
            let heat = eta_numeric_heat(&o, 2, &p).unwrap();
            assert!((closed - heat).abs() < 1e-6, "{n}/{dd}: {heat} vs {closed}");
        }
    }
}
