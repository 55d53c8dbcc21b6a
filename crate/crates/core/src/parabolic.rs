//! Punctured surfaces carrying a parabolic weight system.
//!
//! A [`ParabolicData`] records the genus, the rank and degree of the
//! compactified bundle, and at every puncture a weighted flag: weights
//! `0 <= a_1 < ... < a_r < 1` with multiplicities `k_1, ..., k_r` summing to
//! the rank. All arithmetic is exact.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PuncturedSurface {
    pub genus: u32,
    pub punctures: u32,
}

impl PuncturedSurface {
    pub fn new(genus: u32, punctures: u32) -> Self {
        Self { genus, punctures }
    }

    /// `2 - 2g - n`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.euler_characteristic() < 0
    }
}

pub fn euler_characteristic(surface: &PuncturedSurface) -> i64 {
    surface.euler_characteristic()
}

/// Weighted flag at one puncture.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlagData {
    pub weights: Vec<Rational>,
    pub multiplicities: Vec<u32>,
}

impl FlagData {
    pub fn new(weights: Vec<Rational>, multiplicities: Vec<u32>) -> Self {
        Self {
            weights,
            multiplicities,
        }
    }

    /// The flag with a single weight-zero block of the given rank.
    pub fn trivial(rank: u32) -> Self {
        Self::new(vec![Rational::zero()], vec![rank])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicities.iter().map(|&k| k as u64).sum()
    }

    /// `(weight, multiplicity)` pairs in increasing weight order.
    pub fn levels(&self) -> impl Iterator<Item = (Rational, u32)> + '_ {
        self.weights
            .iter()
            .copied()
            .zip(self.multiplicities.iter().copied())
    }

    /// True when the lowest weight is zero.
    pub fn has_zero_weight(&self) -> bool {
        self.weights.first().is_some_and(|a| a.is_zero())
    }

    /// Shape violations independent of the ambient rank.
    fn shape_violations(&self, puncture: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.weights.is_empty() {
            out.push(Violation::EmptyFlag { puncture });
        }
        if self.weights.len() != self.multiplicities.len() {
            out.push(Violation::LengthMismatch {
                puncture,
                weights: self.weights.len(),
                multiplicities: self.multiplicities.len(),
            });
        }
        for (level, a) in self.weights.iter().enumerate() {
            if *a < Rational::zero() || *a >= Rational::one() {
                out.push(Violation::WeightOutOfRange {
                    puncture,
                    level,
                    weight: *a,
                });
            }
        }
        if self.weights.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::WeightsNotIncreasing { puncture });
        }
        for (level, &k) in self.multiplicities.iter().enumerate() {
            if k == 0 {
                out.push(Violation::ZeroMultiplicity { puncture, level });
            }
        }
        out
    }
}

/// Complex dimension `(k^2 - sum_j k_j^2) / 2` of the flag variety of the given type.
pub fn flag_correction_dimension(flag: &FlagData, rank: u32) -> Rational {
    let k = rank as i64;
    let sq: i64 = flag.multiplicities.iter().map(|&m| (m as i64) * (m as i64)).sum();
    Rational::new(k * k - sq, 2)
}

/// The complete input object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParabolicData {
    pub surface: PuncturedSurface,
    pub rank: u32,
    /// Degree of the compactified bundle.
    pub degree: i64,
    pub flags: Vec<FlagData>,
}

impl ParabolicData {
    /// Builds the datum, rejecting anything [`ParabolicData::validate`] objects to.
    pub fn try_new(genus: u32, rank: u32, degree: i64, flags: Vec<FlagData>) -> Result<Self> {
        let data = Self::new_unchecked(genus, rank, degree, flags);
        let report = data.validate();
        if report.is_admissible() {
            Ok(data)
        } else {
            Err(Error::InvalidData(report.violations))
        }
    }

    /// Builds the datum without checks. The puncture count is taken from `flags`.
    pub fn new_unchecked(genus: u32, rank: u32, degree: i64, flags: Vec<FlagData>) -> Self {
        Self {
            surface: PuncturedSurface::new(genus, flags.len() as u32),
            rank,
            degree,
            flags,
        }
    }

    pub fn genus(&self) -> u32 {
        self.surface.genus
    }

    pub fn puncture_count(&self) -> usize {
        self.flags.len()
    }

    pub fn flag(&self, puncture: usize) -> Result<&FlagData> {
        self.flags.get(puncture).ok_or(Error::PunctureOutOfRange {
            index: puncture,
            count: self.flags.len(),
        })
    }

    /// `deg + sum_p sum_j a_j(p) k_j(p)`.
    pub fn parabolic_degree(&self) -> Rational {
        let boundary: Rational = self
            .flags
            .iter()
            .flat_map(|f| f.levels())
            .map(|(a, k)| a * int(k as i64))
            .sum();
        int(self.degree) + boundary
    }

    pub fn parabolic_slope(&self) -> Rational {
        self.parabolic_degree() / int(self.rank as i64)
    }

    pub fn is_degree_zero(&self) -> bool {
        self.parabolic_degree().is_zero()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.rank == 0 {
            violations.push(Violation::ZeroRank);
        }
        if self.surface.punctures as usize != self.flags.len() {
            violations.push(Violation::PunctureCountMismatch {
                declared: self.surface.punctures,
                flags: self.flags.len(),
            });
        }
        if !self.surface.is_hyperbolic() {
            violations.push(Violation::NonNegativeEulerCharacteristic(
                self.surface.euler_characteristic(),
            ));
        }
        for (i, flag) in self.flags.iter().enumerate() {
            violations.extend(flag.shape_violations(i));
            let total = flag.total_multiplicity();
            if total != self.rank as u64 {
                violations.push(Violation::FlagRank {
                    puncture: i,
                    total,
                    rank: self.rank,
                });
            }
        }
        let mut warnings = Vec::new();
        let pardeg_zero = violations.is_empty() && self.is_degree_zero();
        if violations.is_empty() && !pardeg_zero {
            warnings.push(Warning::PardegNonzero);
        }
        ValidationReport {
            violations,
            warnings,
            pardeg_zero,
        }
    }
}

pub fn parabolic_degree(data: &ParabolicData) -> Rational {
    data.parabolic_degree()
}

pub fn parabolic_slope(data: &ParabolicData) -> Rational {
    data.parabolic_slope()
}

pub fn validate(data: &ParabolicData) -> ValidationReport {
    data.validate()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroRank,
    NonNegativeEulerCharacteristic(i64),
    PunctureCountMismatch { declared: u32, flags: usize },
    EmptyFlag { puncture: usize },
    LengthMismatch { puncture: usize, weights: usize, multiplicities: usize },
    WeightOutOfRange { puncture: usize, level: usize, weight: Rational },
    WeightsNotIncreasing { puncture: usize },
    ZeroMultiplicity { puncture: usize, level: usize },
    FlagRank { puncture: usize, total: u64, rank: u32 },
}

impl Violation {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::ZeroRank => "zero_rank",
            Violation::NonNegativeEulerCharacteristic(_) => "euler_characteristic",
            Violation::PunctureCountMismatch { .. } => "puncture_count",
            Violation::EmptyFlag { .. } => "empty_flag",
            Violation::LengthMismatch { .. } => "length_mismatch",
            Violation::WeightOutOfRange { .. } => "weight_range",
            Violation::WeightsNotIncreasing { .. } => "weights_not_increasing",
            Violation::ZeroMultiplicity { .. } => "zero_multiplicity",
            Violation::FlagRank { .. } => "flag_ranks",
        }
    }

    pub fn puncture(&self) -> Option<usize> {
        match self {
            Violation::EmptyFlag { puncture }
            | Violation::LengthMismatch { puncture, .. }
            | Violation::WeightOutOfRange { puncture, .. }
            | Violation::WeightsNotIncreasing { puncture }
            | Violation::ZeroMultiplicity { puncture, .. }
            | Violation::FlagRank { puncture, .. } => Some(*puncture),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroRank => write!(f, "rank must be positive"),
            Violation::NonNegativeEulerCharacteristic(chi) => {
                write!(f, "euler characteristic {chi} is not negative")
            }
            Violation::PunctureCountMismatch { declared, flags } => {
                write!(f, "{declared} punctures declared but {flags} flags given")
            }
            Violation::EmptyFlag { puncture } => write!(f, "puncture {puncture}: empty flag"),
            Violation::LengthMismatch {
                puncture,
                weights,
                multiplicities,
            } => write!(
                f,
                "puncture {puncture}: {weights} weights but {multiplicities} multiplicities"
            ),
            Violation::WeightOutOfRange {
                puncture,
                level,
                weight,
            } => write!(
                f,
                "puncture {puncture}: weight {} at level {level} is outside [0,1)",
                fmt_rational(weight)
            ),
            Violation::WeightsNotIncreasing { puncture } => {
                write!(f, "puncture {puncture}: weights not increasing")
            }
            Violation::ZeroMultiplicity { puncture, level } => {
                write!(f, "puncture {puncture}: multiplicity at level {level} is zero")
            }
            Violation::FlagRank {
                puncture,
                total,
                rank,
            } => write!(
                f,
                "puncture {puncture}: flag ranks sum to {total}, expected {rank}"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    PardegNonzero,
}

impl Warning {
    pub fn code(&self) -> &'static str {
        match self {
            Warning::PardegNonzero => "pardeg_nonzero",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
    /// Whether the parabolic degree vanishes (only meaningful when admissible).
    pub pardeg_zero: bool,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn flag(w: &[(i64, i64)], k: &[u32]) -> FlagData {
        FlagData::new(w.iter().map(|&(n, d)| rat(n, d)).collect(), k.to_vec())
    }

    fn worked() -> ParabolicData {
        ParabolicData::try_new(2, 2, -1, vec![flag(&[(1, 4), (3, 4)], &[1, 1])]).unwrap()
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(PuncturedSurface::new(2, 1).euler_characteristic(), -3);
        assert_eq!(PuncturedSurface::new(2, 0).euler_characteristic(), -2);
        assert_eq!(PuncturedSurface::new(0, 3).euler_characteristic(), -1);
    }

    #[test]
    fn parabolic_degree_examples() {
        assert_eq!(worked().parabolic_degree(), int(0));

        let zero = ParabolicData::try_new(2, 1, 0, vec![FlagData::trivial(1)]).unwrap();
        assert_eq!(zero.parabolic_degree(), int(0));

        let d = ParabolicData::try_new(2, 3, 0, vec![flag(&[(0, 1), (1, 3)], &[1, 2])]).unwrap();
        assert_eq!(d.parabolic_degree(), rat(2, 3));
        assert_eq!(d.parabolic_slope(), rat(2, 9));
    }

    #[test]
    fn slope_examples() {
        assert_eq!(worked().parabolic_slope(), int(0));
        let closed = ParabolicData::try_new(2, 2, 1, vec![]).unwrap();
        assert_eq!(closed.parabolic_slope(), rat(1, 2));
    }

    #[test]
    fn validate_examples() {
        let report = worked().validate();
        assert!(report.is_admissible());
        assert!(report.warnings.is_empty());
        assert!(report.pardeg_zero);

        let bad = ParabolicData::new_unchecked(2, 2, -1, vec![flag(&[(3, 4), (1, 4)], &[1, 1])]);
        let codes: Vec<_> = bad.validate().violations.iter().map(|v| v.code()).collect();
        assert_eq!(codes, vec!["weights_not_increasing"]);

        let short = ParabolicData::new_unchecked(2, 2, -1, vec![flag(&[(1, 4)], &[1])]);
        let codes: Vec<_> = short.validate().violations.iter().map(|v| v.code()).collect();
        assert_eq!(codes, vec!["flag_ranks"]);

        let sphere = ParabolicData::new_unchecked(0, 1, 0, vec![FlagData::trivial(1)]);
        assert_eq!(sphere.validate().violations[0].code(), "euler_characteristic");
    }

    #[test]
    fn pardeg_warning() {
        let d = ParabolicData::try_new(2, 2, 0, vec![flag(&[(1, 4), (3, 4)], &[1, 1])]).unwrap();
        let report = d.validate();
        assert!(report.is_admissible());
        assert_eq!(report.warnings, vec![Warning::PardegNonzero]);
    }

    #[test]
    fn flag_dimension_examples() {
        assert_eq!(flag_correction_dimension(&flag(&[(0, 1), (1, 2)], &[1, 1]), 2), int(1));
        assert_eq!(flag_correction_dimension(&FlagData::trivial(4), 4), int(0));
        assert_eq!(flag_correction_dimension(&flag(&[(0, 1), (1, 3)], &[1, 2]), 3), int(2));
    }

    #[test]
    fn fully_trivial_flag_is_accepted() {
        let d = ParabolicData::try_new(3, 3, 0, vec![FlagData::trivial(3)]).unwrap();
        assert!(d.validate().pardeg_zero);
    }
}
