//! Formal characteristic classes over exact rationals.
//!
//! A [`GradedClass`] is a polynomial in even-degree generators, truncated
//! above a form degree `D`. The generators are the Chern character
//! components `ch_m(E_ij)` of the boundary eigenbundles, opaque interior
//! components for each bundle, and an inert marker for the exact term of the
//! endomorphism index formula.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::parabolic::{FlagData, ParabolicData};
use crate::rational::{fmt_rational, int, rat, sign, Rational};
use crate::spectrum::Bundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `ch_m(E_ij)`, form degree `2m`.
    Ch { puncture: usize, level: usize, m: u32 },
    /// Degree `2 * half_degree` part of the pushed-forward interior class.
    /// `half_degree = 0` is the unevaluated degree-0 part.
    Interior { bundle: Bundle, half_degree: u32 },
    /// Inert marker for an exact form of degree `2 * half_degree`.
    Exact { half_degree: u32 },
}

impl Generator {
    pub fn degree(&self) -> u32 {
        match *self {
            Generator::Ch { m, .. } => 2 * m,
            Generator::Interior { half_degree, .. } | Generator::Exact { half_degree } => {
                2 * half_degree
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Ch { puncture, level, m } => {
                write!(f, "ch{m}(E_{},{})", puncture + 1, level + 1)
            }
            Generator::Interior { bundle, half_degree } => {
                write!(f, "interior_{}[{}]", bundle.name(), 2 * half_degree)
            }
            Generator::Exact { half_degree } => write!(f, "exact[{}]", 2 * half_degree),
        }
    }
}

/// A product of generators with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<Generator, u32>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn of(g: Generator) -> Self {
        Self(BTreeMap::from([(g, 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(g, e)| g.degree() * e).sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Generator, &u32)> {
        self.0.iter()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (g, e) in &other.0 {
            *out.entry(*g).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// Total `m` over the `ch` factors, counted with exponent.
    fn ch_weight(&self) -> u32 {
        self.0
            .iter()
            .filter_map(|(g, e)| match g {
                Generator::Ch { m, .. } => Some(m * e),
                _ => None,
            })
            .sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedClass {
    terms: BTreeMap<Monomial, Rational>,
    truncation: u32,
}

impl GradedClass {
    pub fn zero(truncation: u32) -> Self {
        Self {
            terms: BTreeMap::new(),
            truncation,
        }
    }

    pub fn constant(c: Rational, truncation: u32) -> Self {
        Self::zero(truncation).plus_term(Monomial::one(), c)
    }

    pub fn one(truncation: u32) -> Self {
        Self::constant(int(1), truncation)
    }

    pub fn generator(g: Generator, truncation: u32) -> Self {
        Self::zero(truncation).plus_term(Monomial::of(g), int(1))
    }

    fn plus_term(mut self, m: Monomial, c: Rational) -> Self {
        if m.degree() <= self.truncation && !c.is_zero() {
            let entry = self.terms.entry(m).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.retain(|_, v| !v.is_zero());
            }
        }
        self
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).copied().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &GradedClass) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch(self.truncation, other.truncation));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check(other)?;
        Ok(other
            .terms
            .iter()
            .fold(self.clone(), |acc, (m, c)| acc.plus_term(m.clone(), *c)))
    }

    pub fn sub(&self, other: &GradedClass) -> Result<GradedClass> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> GradedClass {
        self.terms
            .iter()
            .fold(Self::zero(self.truncation), |acc, (m, v)| acc.plus_term(m.clone(), v * c))
    }

    pub fn multiply(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check(other)?;
        let mut out = Self::zero(self.truncation);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out = out.plus_term(ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// The homogeneous part of form degree `d`.
    pub fn degree_part(&self, d: u32) -> GradedClass {
        GradedClass {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
            truncation: self.truncation,
        }
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// Applies `ch_m -> (-1)^m ch_m`; an involution.
    pub fn dual(&self) -> GradedClass {
        GradedClass {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let s = if m.ch_weight() % 2 == 1 { -*c } else { *c };
                    (m.clone(), s)
                })
                .collect(),
            truncation: self.truncation,
        }
    }

    /// Same terms with the generator set restricted to `ch` components.
    pub fn boundary_part(&self) -> GradedClass {
        GradedClass {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.factors().all(|(g, _)| matches!(g, Generator::Ch { .. })))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
            truncation: self.truncation,
        }
    }
}

/// Terms sorted by degree then monomial, e.g. `-1 + 1/4*ch1(E_1,1)`.
impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| (a.0.degree(), a.0).cmp(&(b.0.degree(), b.0)));
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs == int(1) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

/// `k_j + sum_{1 <= m <= D/2} (+-1)^m ch_m(E_ij)`, sign `(-1)^m` when `dual`.
pub fn chern_character(puncture: usize, level: usize, rank: u32, dual: bool, truncation: u32) -> GradedClass {
    let mut out = GradedClass::constant(int(rank as i64), truncation);
    for m in 1..=truncation / 2 {
        let s = if dual && m % 2 == 1 { -1 } else { 1 };
        out = out.plus_term(Monomial::of(Generator::Ch { puncture, level, m }), int(s));
    }
    out
}

fn ch(flag: &FlagData, puncture: usize, level: usize, dual: bool, d: u32) -> GradedClass {
    chern_character(puncture, level, flag.multiplicities[level], dual, d)
}

fn levels(flag: &FlagData) -> Vec<(Rational, u32)> {
    flag.levels().collect()
}

/// Interior contribution for `bundle`. Degree 0 is `rank * (2 - 2g - n) / 2`
/// with `rank = k` or `k^2`, or the opaque symbol when `evaluate_degree0` is false.
pub fn interior_term(data: &ParabolicData, bundle: Bundle, truncation: u32, evaluate_degree0: bool) -> GradedClass {
    let k = data.rank as i64;
    let rank = match bundle {
        Bundle::E => k,
        Bundle::End => k * k,
    };
    let mut out = if evaluate_degree0 {
        GradedClass::constant(rat(rank * data.surface.euler_characteristic(), 2), truncation)
    } else {
        GradedClass::generator(Generator::Interior { bundle, half_degree: 0 }, truncation)
    };
    for h in 1..=truncation / 2 {
        out = out.plus_term(Monomial::of(Generator::Interior { bundle, half_degree: h }), int(1));
    }
    out
}

/// `sum_i sum_{a_j > 0} (1/2 - a_j) Ch(E_ij)`.
pub fn eta_form_e(data: &ParabolicData, truncation: u32) -> GradedClass {
    let mut out = GradedClass::zero(truncation);
    for (i, flag) in data.flags.iter().enumerate() {
        for (j, (a, _)) in levels(flag).into_iter().enumerate() {
            if a > Rational::zero() {
                let term = ch(flag, i, j, false, truncation).scale(&(rat(1, 2) - a));
                out = out.add(&term).expect("same truncation");
            }
        }
    }
    out
}

/// `sum_{j != l} c(a_j - a_l) Ch(E_ij) Ch(E_il^*)` at every puncture.
fn pair_sum<F: Fn(&Rational) -> Rational>(data: &ParabolicData, truncation: u32, coefficient: F) -> GradedClass {
    let mut out = GradedClass::zero(truncation);
    for (i, flag) in data.flags.iter().enumerate() {
        let lv = levels(flag);
        for (j, (aj, _)) in lv.iter().enumerate() {
            for (l, (al, _)) in lv.iter().enumerate() {
                if j == l {
                    continue;
                }
                let c = coefficient(&(aj - al));
                if c.is_zero() {
                    continue;
                }
                let prod = ch(flag, i, j, false, truncation)
                    .multiply(&ch(flag, i, l, true, truncation))
                    .expect("same truncation");
                out = out.add(&prod.scale(&c)).expect("same truncation");
            }
        }
    }
    out
}

/// `sum_i sum_l Ch(E_il) Ch(E_il^*)`.
fn diagonal_sum(data: &ParabolicData, truncation: u32) -> GradedClass {
    let mut out = GradedClass::zero(truncation);
    for (i, flag) in data.flags.iter().enumerate() {
        for l in 0..flag.len() {
            let prod = ch(flag, i, l, false, truncation)
                .multiply(&ch(flag, i, l, true, truncation))
                .expect("same truncation");
            out = out.add(&prod).expect("same truncation");
        }
    }
    out
}

/// `sign(d) (1/2 - |d|)`.
pub fn mu(delta: &Rational) -> Rational {
    sign(delta) * (rat(1, 2) - delta.abs())
}

/// `sum_i sum_{j != l} sign(d)(1 - 2|d|)/2 Ch(E_ij) Ch(E_il^*)`, `d = a_j - a_l`.
pub fn eta_form_end(data: &ParabolicData, truncation: u32) -> GradedClass {
    pair_sum(data, truncation, mu)
}

/// `-1/2 sum_{a_1(p_i) = 0} Ch(E_i1)` for `E`; `-1/2 sum_i sum_j Ch(E_ij) Ch(E_ij^*)` for `End`.
pub fn horizontal_eta_form(data: &ParabolicData, bundle: Bundle, truncation: u32) -> GradedClass {
    match bundle {
        Bundle::E => zero_weight_sum(data, truncation).scale(&rat(-1, 2)),
        Bundle::End => diagonal_sum(data, truncation).scale(&rat(-1, 2)),
    }
}

fn zero_weight_sum(data: &ParabolicData, truncation: u32) -> GradedClass {
    let mut out = GradedClass::zero(truncation);
    for (i, flag) in data.flags.iter().enumerate() {
        if flag.has_zero_weight() {
            out = out.add(&ch(flag, i, 0, false, truncation)).expect("same truncation");
        }
    }
    out
}

/// Index class of the operator on `E`:
/// `interior - sum_i sum_j (1/2 - a_j) Ch(E_ij) + sum_{a_1(p_i) = 0} Ch(E_i1)`.
/// The first sum runs over every level, zero weights included.
pub fn index_class_e(data: &ParabolicData, truncation: u32) -> GradedClass {
    let mut boundary = GradedClass::zero(truncation);
    for (i, flag) in data.flags.iter().enumerate() {
        for (j, (a, _)) in levels(flag).into_iter().enumerate() {
            let term = ch(flag, i, j, false, truncation).scale(&(rat(1, 2) - a));
            boundary = boundary.add(&term).expect("same truncation");
        }
    }
    interior_term(data, Bundle::E, truncation, true)
        .sub(&boundary)
        .and_then(|c| c.add(&zero_weight_sum(data, truncation)))
        .expect("same truncation")
}

/// Index class of the operator on `End(E)`:
/// `interior - sum_{j != l} mu_jl Ch(E_ij) Ch(E_il^*) + 1/2 sum_l Ch(E_il) Ch(E_il^*)`,
/// minus the inert exact marker in positive degrees when requested.
pub fn index_class_end(data: &ParabolicData, truncation: u32, include_exact_term_symbol: bool) -> GradedClass {
    let mut out = interior_term(data, Bundle::End, truncation, true)
        .sub(&pair_sum(data, truncation, mu))
        .and_then(|c| c.add(&diagonal_sum(data, truncation).scale(&rat(1, 2))))
        .expect("same truncation");
    if include_exact_term_symbol {
        for h in 1..=truncation / 2 {
            out = out.plus_term(Monomial::of(Generator::Exact { half_degree: h }), int(-1));
        }
    }
    out
}

/// Degree-0 coefficient of a class.
pub fn numerical_index(cls: &GradedClass) -> Result<Rational> {
    let symbolic: Vec<String> = cls
        .terms()
        .filter(|(m, _)| !m.is_one() && m.degree() == 0)
        .map(|(m, c)| format!("{}*{m}", fmt_rational(c)))
        .collect();
    if !symbolic.is_empty() {
        return Err(Error::SymbolicResidue(symbolic.join(" + ")));
    }
    Ok(cls.constant_term())
}

/// `1 - index(End)` for degree-zero data.
pub fn moduli_dimension(data: &ParabolicData) -> Result<u64> {
    if !data.is_degree_zero() {
        return Err(Error::NotDegreeZero(fmt_rational(&data.parabolic_degree())));
    }
    let idx = numerical_index(&index_class_end(data, 0, false))?;
    let dim = int(1) - idx;
    debug_assert!(dim.is_integer());
    let dim = dim.to_integer();
    if dim < 0 {
        return Err(Error::NegativeDimension(dim));
    }
    Ok(dim as u64)
}

/// Curvature of the Quillen connection on the determinant line, as a
/// degree-2 class: `interior[2] - sum (1/2 - a_j) c1(E_ij)` for `E` (all
/// weights nonzero), `interior[2] - sum_{j != l} sign(d)(1 - 2|d|) k_l c1(E_ij)` for `End`.
pub fn quillen_curvature(data: &ParabolicData, bundle: Bundle, truncation: u32) -> Result<GradedClass> {
    let c1 = |i, j| Monomial::of(Generator::Ch { puncture: i, level: j, m: 1 });
    let mut out = GradedClass::zero(truncation)
        .plus_term(Monomial::of(Generator::Interior { bundle, half_degree: 1 }), int(1));
    match bundle {
        Bundle::E => {
            if let Some(i) = data.flags.iter().position(|f| f.has_zero_weight()) {
                return Err(Error::ZeroWeightPresent { puncture: i });
            }
            for (i, flag) in data.flags.iter().enumerate() {
                for (j, (a, _)) in levels(flag).into_iter().enumerate() {
                    out = out.plus_term(c1(i, j), a - rat(1, 2));
                }
            }
        }
        Bundle::End => {
            for (i, flag) in data.flags.iter().enumerate() {
                let lv = levels(flag);
                for (j, (aj, _)) in lv.iter().enumerate() {
                    for (l, (al, kl)) in lv.iter().enumerate() {
                        if j != l {
                            let d = aj - al;
                            let c = sign(&d) * (int(1) - int(2) * d.abs()) * int(*kl as i64);
                            out = out.plus_term(c1(i, j), -c);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
