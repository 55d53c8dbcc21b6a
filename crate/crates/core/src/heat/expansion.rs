//! Finite expansions `sum c * t^{p/2} * (log t)^q` and least-squares fitting.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub coefficient: f64,
    /// Exponent of `t` is `half_power / 2`.
    pub half_power: i32,
    /// Power of `log t`, 0 or 1.
    pub log_power: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AsymptoticExpansion {
    terms: Vec<ExpansionTerm>,
}

impl AsymptoticExpansion {
    /// Merges terms with the same `(half_power, log_power)` and sorts them.
    pub fn new<I: IntoIterator<Item = ExpansionTerm>>(terms: I) -> Result<Self> {
        let mut merged: BTreeMap<(i32, u32), f64> = BTreeMap::new();
        for t in terms {
            if t.log_power > 1 {
                return Err(Error::Domain(format!(
                    "log power {} exceeds 1",
                    t.log_power
                )));
            }
            *merged.entry((t.half_power, t.log_power)).or_insert(0.0) += t.coefficient;
        }
        Ok(Self {
            terms: merged
                .into_iter()
                .map(|((p, q), c)| ExpansionTerm {
                    coefficient: c,
                    half_power: p,
                    log_power: q,
                })
                .collect(),
        })
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    pub fn coefficient(&self, half_power: i32, log_power: u32) -> f64 {
        self.terms
            .iter()
            .find(|t| t.half_power == half_power && t.log_power == log_power)
            .map_or(0.0, |t| t.coefficient)
    }

    /// Largest `|coefficient|` among the `log t` terms.
    pub fn max_log_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.log_power > 0)
            .map(|t| t.coefficient.abs())
            .fold(0.0, f64::max)
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        let lt = t.ln();
        self.terms
            .iter()
            .map(|term| basis(t, lt, term.half_power, term.log_power) * term.coefficient)
            .sum()
    }
}

fn basis(t: f64, log_t: f64, half_power: i32, log_power: u32) -> f64 {
    t.powf(half_power as f64 / 2.0) * log_t.powi(log_power as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub expansion: AsymptoticExpansion,
    /// Root-mean-square residual.
    pub residual: f64,
    /// Condition number of the column-scaled design matrix.
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_condition: f64,
    /// Minimum `log10(t_max / t_min)`.
    pub min_decades: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_condition: 1e12,
            min_decades: 2.0,
        }
    }
}

/// Ordinary least squares of `samples` against the template columns
/// `t^{p/2} (log t)^q`, with unit-norm column scaling.
pub fn fit_small_time_expansion(
    samples: &[(f64, f64)],
    template: &[(i32, u32)],
    opts: &FitOptions,
) -> Result<FitResult> {
    if template.is_empty() {
        return Err(Error::InsufficientSamples("empty template".into()));
    }
    if samples.len() < 2 * template.len() {
        return Err(Error::InsufficientSamples(format!(
            "{} samples for {} template terms",
            samples.len(),
            template.len()
        )));
    }
    if samples.iter().any(|(t, v)| !(*t > 0.0) || !t.is_finite() || !v.is_finite()) {
        return Err(Error::Domain("samples need t > 0 and finite values".into()));
    }
    let (tmin, tmax) = samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), (t, _)| (lo.min(*t), hi.max(*t)));
    if (tmax / tmin).log10() < opts.min_decades - 1e-9 {
        return Err(Error::InsufficientSamples(format!(
            "t-range [{tmin:e}, {tmax:e}] spans fewer than {} decades",
            opts.min_decades
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for pq in template {
        if pq.1 > 1 || !seen.insert(*pq) {
            return Err(Error::Domain(format!("bad template entry {pq:?}")));
        }
    }

    let rows = samples.len();
    let cols = template.len();
    let mut design = DMatrix::from_fn(rows, cols, |i, j| {
        let t = samples[i].0;
        basis(t, t.ln(), template[j].0, template[j].1)
    });
    let mut scales = vec![1.0; cols];
    for (j, scale) in scales.iter_mut().enumerate() {
        let norm = design.column(j).norm();
        if norm > 0.0 {
            *scale = norm;
            design.column_mut(j).scale_mut(1.0 / norm);
        }
    }
    let rhs = DVector::from_iterator(rows, samples.iter().map(|s| s.1));

    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > opts.max_condition {
        return Err(Error::IllConditioned(condition));
    }
    let solution = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Domain(format!("least squares failed: {e}")))?;
    let residual = (&design * &solution - &rhs).norm() / (rows as f64).sqrt();

    let expansion = AsymptoticExpansion::new(template.iter().enumerate().map(|(j, &(p, q))| {
        ExpansionTerm {
            coefficient: solution[j] / scales[j],
            half_power: p,
            log_power: q,
        }
    }))?;
    Ok(FitResult {
        expansion,
        residual,
        condition,
    })
}

/// `points` values of `t` spaced evenly in `log t` over `[start, stop]`.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), stop.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}
