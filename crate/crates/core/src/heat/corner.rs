//! Slice integrals of model heat-kernel densities near the two corners of the
//! blown-up heat space diagonal.
//!
//! Near the corner of the temporal face and the front face the density is
//! `sum a_{kl} C^k x^{l-k} dx` on the slice `sqrt(t) = C`, integrated over
//! `C/eps <= x <= eps`. A term with `l - k = -1` produces `C^k log C`.
//!
//! Near the corner of the side face and the front face the density is
//! `sum a_{kl} C^{l-k-1} x^k dx` over `0 < x <= C eps`. Renormalizing with
//! `x^z` produces `C^l log C` for `k = -1`; renormalizing with the face
//! defining function `x / C` does not.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::heat::expansion::{AsymptoticExpansion, ExpansionTerm};
use crate::heat::finite_part::{renormalized_integral, FinitePartOptions, SingularModel};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Corner {
    /// Temporal face meets front face; coordinates `rho_11 = x`, `rho_01 = sqrt(t)/x`.
    TemporalFront,
    /// Side face meets front face; coordinates `rho_11 = sqrt(t)`, `rho_10 = x/sqrt(t)`.
    SideFront,
}

impl Corner {
    pub fn label(self) -> &'static str {
        match self {
            Corner::TemporalFront => "01^11",
            Corner::SideFront => "10^11",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticKernel {
    corner: Corner,
    coefficients: BTreeMap<(i32, i32), f64>,
    n_model: u32,
    h_model: u32,
    epsilon: f64,
}

impl SyntheticKernel {
    /// `coefficients` maps `(k, l)` to `a_{kl}`. Index bounds: `k >= -n`,
    /// `l >= -h-2` at the temporal corner; `k >= -1`, `l >= -h-1` at the side corner.
    pub fn new(
        corner: Corner,
        coefficients: BTreeMap<(i32, i32), f64>,
        n_model: u32,
        h_model: u32,
        epsilon: f64,
    ) -> Result<Self> {
        if n_model == 0 {
            return Err(Error::InvalidKernel("model dimension must be positive".into()));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidKernel(format!("epsilon {epsilon} not in (0,1)")));
        }
        let (kmin, lmin) = match corner {
            Corner::TemporalFront => (-(n_model as i32), -(h_model as i32) - 2),
            Corner::SideFront => (-1, -(h_model as i32) - 1),
        };
        for (&(k, l), a) in &coefficients {
            if k < kmin || l < lmin {
                return Err(Error::InvalidKernel(format!(
                    "index ({k},{l}) below ({kmin},{lmin})"
                )));
            }
            if !a.is_finite() {
                return Err(Error::InvalidKernel(format!("coefficient at ({k},{l}) not finite")));
            }
        }
        let mut coefficients = coefficients;
        coefficients.retain(|_, a| *a != 0.0);
        Ok(Self {
            corner,
            coefficients,
            n_model,
            h_model,
            epsilon,
        })
    }

    pub fn corner(&self) -> Corner {
        self.corner
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n_model(&self) -> u32 {
        self.n_model
    }

    pub fn h_model(&self) -> u32 {
        self.h_model
    }

    pub fn coefficients(&self) -> &BTreeMap<(i32, i32), f64> {
        &self.coefficients
    }

    /// True when the closed form contains a `log t` term.
    pub fn produces_log(&self, renormalize_with_x: bool) -> bool {
        self.coefficients.keys().any(|&(k, l)| match self.corner {
            Corner::TemporalFront => l - k == -1,
            Corner::SideFront => renormalize_with_x && k == -1,
        })
    }
}

/// Exact expansion in `t` (with `C = sqrt(t)`) of the corner slice integral.
///
/// `renormalize_with_x` selects the `x^z` finite part at the side corner;
/// `false` renormalizes with `(x/C)^z` instead. It has no effect at the
/// temporal corner, whose slice integrals converge.
pub fn corner_asymptotics(kern: &SyntheticKernel, renormalize_with_x: bool) -> AsymptoticExpansion {
    let eps = kern.epsilon;
    let log_eps = eps.ln();
    let mut terms = Vec::new();
    let mut push = |coefficient: f64, half_power: i32, log_power: u32| {
        terms.push(ExpansionTerm {
            coefficient,
            half_power,
            log_power,
        })
    };
    for (&(k, l), &a) in &kern.coefficients {
        match kern.corner {
            Corner::TemporalFront => {
                let e = l - k;
                if e == -1 {
                    // -a C^k log(C / eps^2); log C = (log t)/2
                    push(-a / 2.0, k, 1);
                    push(2.0 * a * log_eps, k, 0);
                } else {
                    let m = (e + 1) as f64;
                    push(a * eps.powi(e + 1) / m, k, 0);
                    push(-a * eps.powi(-(e + 1)) / m, l + 1, 0);
                }
            }
            Corner::SideFront => {
                if k == -1 {
                    push(a * log_eps, l, 0);
                    if renormalize_with_x {
                        push(a / 2.0, l, 1);
                    }
                } else {
                    push(a * eps.powi(k + 1) / (k + 1) as f64, l, 0);
                }
            }
        }
    }
    AsymptoticExpansion::new(terms).expect("log powers are at most 1")
}

/// Numerical value of the slice integral at `sqrt(t) = c`, by quadrature.
pub fn slice_integral_numeric(kern: &SyntheticKernel, c: f64, renormalize_with_x: bool) -> Result<f64> {
    let eps = kern.epsilon;
    let coeffs: Vec<((i32, i32), f64)> = kern.coefficients.iter().map(|(k, a)| (*k, *a)).collect();
    match kern.corner {
        Corner::TemporalFront => {
            let lo = c / eps;
            if !(lo < eps) {
                return Err(Error::Domain(format!("slice C = {c} leaves the corner region")));
            }
            let density = |x: f64| {
                coeffs
                    .iter()
                    .map(|&((k, l), a)| a * c.powi(k) * x.powi(l - k))
                    .sum::<f64>()
            };
            let (v, _) = quad::integrate(density, lo, eps, 0.0, 1e-13, 4000)?;
            Ok(v)
        }
        Corner::SideFront => {
            // rounding in f - model scales with the coefficients
            let scale: f64 = coeffs.iter().map(|&((_, l), a)| a.abs() * c.powi(l)).sum();
            let opts = FinitePartOptions {
                abs_tol: 1e-13 * scale.max(1.0),
                ..FinitePartOptions::default()
            };
            if renormalize_with_x {
                let density = |x: f64| {
                    coeffs
                        .iter()
                        .map(|&((k, l), a)| a * c.powi(l - k - 1) * x.powi(k))
                        .sum::<f64>()
                };
                let residue: f64 = coeffs
                    .iter()
                    .filter(|((k, _), _)| *k == -1)
                    .map(|&((_, l), a)| a * c.powi(l))
                    .sum();
                let model = SingularModel::new().with(-1.0, residue);
                renormalized_integral(density, c * eps, &model, &opts)
            } else {
                // substitute x = C rho; the finite part is taken in rho
                let density = |rho: f64| {
                    coeffs
                        .iter()
                        .map(|&((k, l), a)| a * c.powi(l) * rho.powi(k))
                        .sum::<f64>()
                };
                let residue: f64 = coeffs
                    .iter()
                    .filter(|((k, _), _)| *k == -1)
                    .map(|&((_, l), a)| a * c.powi(l))
                    .sum();
                let model = SingularModel::new().with(-1.0, residue);
                renormalized_integral(density, eps, &model, &opts)
            }
        }
    }
}
