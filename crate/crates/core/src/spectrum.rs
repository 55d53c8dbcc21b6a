//! Vertical boundary spectra at the cusps and the Fredholm classification.
//!
//! Each spectrum is a finite union of progressions `2*pi*(offset + Z)` with
//! multiplicities. Offsets stay exact; the factor `2*pi` is applied only when
//! eigenvalues are realized as floats.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};

use crate::parabolic::{FlagData, ParabolicData};
use crate::rational::{int, to_f64, Rational};

/// Which bundle the operator acts on: the parabolic bundle itself or its endomorphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bundle {
    E,
    End,
}

impl Bundle {
    pub fn name(self) -> &'static str {
        match self {
            Bundle::E => "E",
            Bundle::End => "End",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpectrumFamily {
    families: BTreeMap<Rational, u64>,
}

impl SpectrumFamily {
    /// Collects `(offset, multiplicity)` pairs, merging equal offsets.
    ///
    /// Panics if an offset lies outside `(-1, 1)`.
    pub fn from_pairs<I: IntoIterator<Item = (Rational, u64)>>(pairs: I) -> Self {
        let mut families = BTreeMap::new();
        for (offset, mult) in pairs {
            assert!(
                offset > -Rational::one() && offset < Rational::one(),
                "offset outside (-1,1)"
            );
            if mult > 0 {
                *families.entry(offset).or_insert(0) += mult;
            }
        }
        Self { families }
    }

    /// Scale of the progressions.
    pub const SCALE: f64 = 2.0 * PI;

    pub fn families(&self) -> impl Iterator<Item = (Rational, u64)> + '_ {
        self.families.iter().map(|(o, m)| (*o, *m))
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.families.values().sum()
    }

    pub fn multiplicity_of(&self, offset: &Rational) -> u64 {
        self.families.get(offset).copied().unwrap_or(0)
    }

    /// Float view: `(offset, multiplicity)` as `f64`.
    pub fn float_families(&self) -> Vec<(f64, f64)> {
        self.families()
            .map(|(o, m)| (to_f64(&o), m as f64))
            .collect()
    }
}

/// Spectrum of the vertical operator on `E` at one puncture: offset `a_j`
/// with multiplicity `k_j`.
pub fn vertical_spectrum_e(flag: &FlagData) -> SpectrumFamily {
    SpectrumFamily::from_pairs(flag.levels().map(|(a, k)| (a, k as u64)))
}

/// Spectrum of the vertical operator on `End(E)`: offset `a_j - a_l` with
/// multiplicity `k_j k_l` for every ordered pair.
pub fn vertical_spectrum_end(flag: &FlagData) -> SpectrumFamily {
    let levels: Vec<_> = flag.levels().collect();
    SpectrumFamily::from_pairs(levels.iter().flat_map(|&(aj, kj)| {
        levels
            .iter()
            .map(move |&(al, kl)| (aj - al, kj as u64 * kl as u64))
    }))
}

pub fn vertical_spectrum(flag: &FlagData, bundle: Bundle) -> SpectrumFamily {
    match bundle {
        Bundle::E => vertical_spectrum_e(flag),
        Bundle::End => vertical_spectrum_end(flag),
    }
}

/// All eigenvalues `2*pi*(offset + m)` with `|value| <= bound`, ascending.
/// Coincident eigenvalues from different offsets are merged.
pub fn eigenvalues_in_window(spec: &SpectrumFamily, bound: f64) -> Vec<(f64, u64)> {
    if !(bound > 0.0) || !bound.is_finite() {
        return Vec::new();
    }
    let reach = bound / SpectrumFamily::SCALE;
    let mut merged: BTreeMap<Rational, u64> = BTreeMap::new();
    for (offset, mult) in spec.families() {
        let o = to_f64(&offset);
        let lo = (-reach - o).floor() as i64 - 1;
        let hi = (reach - o).ceil() as i64 + 1;
        for m in lo..=hi {
            let q = offset + int(m);
            if to_f64(&q.abs()) * SpectrumFamily::SCALE <= bound {
                *merged.entry(q).or_insert(0) += mult;
            }
        }
    }
    merged
        .into_iter()
        .map(|(q, m)| (to_f64(&q) * SpectrumFamily::SCALE, m))
        .collect()
}

/// Multiplicity of the zero offset.
pub fn vertical_kernel_rank(spec: &SpectrumFamily) -> u64 {
    spec.multiplicity_of(&Rational::zero())
}

/// Constant eigenvalue of the horizontal operator on the vertical kernel
/// (reported unscaled; it is `-(i/2)` times Clifford multiplication by `du`).
pub const HORIZONTAL_EIGENVALUE: f64 = -0.5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FredholmReport {
    pub bundle: Bundle,
    pub fredholm: bool,
    pub discrete_spectrum: bool,
    pub vertical_kernel_rank_per_puncture: Vec<u64>,
    pub horizontal_invertible: bool,
    pub reasons: Vec<String>,
}

pub fn fredholm_classify(data: &ParabolicData, bundle: Bundle) -> FredholmReport {
    let ranks: Vec<u64> = data
        .flags
        .iter()
        .map(|f| vertical_kernel_rank(&vertical_spectrum(f, bundle)))
        .collect();
    let mut reasons = vec!["horizontal_invertible".to_string()];
    for (i, r) in ranks.iter().enumerate() {
        if *r > 0 {
            reasons.push(format!("vertical_kernel:puncture={i}:rank={r}"));
        }
    }
    let discrete = ranks.iter().all(|r| *r == 0);
    if discrete {
        reasons.push("vertical_invertible".to_string());
    } else {
        reasons.push("continuous_band_edge=+-1/2:unscaled".to_string());
    }
    FredholmReport {
        bundle,
        fredholm: true,
        discrete_spectrum: discrete,
        vertical_kernel_rank_per_puncture: ranks,
        horizontal_invertible: true,
        reasons,
    }
}
