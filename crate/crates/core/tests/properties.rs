mod common;

use std::f64::consts::PI;

use num_traits::{Signed, Zero};
use parabolic_index::chern::{
    index_class_e, index_class_end, moduli_dimension, mu, numerical_index, quillen_curvature, GradedClass, Generator,
};
use parabolic_index::cli::config::{parse_config, serialize_data, Document};
use parabolic_index::eta::{eta_closed_progression, eta_e, eta_end, eta_numeric_zeta, EtaValue};
use parabolic_index::heat::{
    heat_trace_vertical, log_det_model_vertical, renormalized_integral, theta_direct, theta_dual, FinitePartOptions,
    SingularModel,
};
use parabolic_index::parabolic::ParabolicData;
use parabolic_index::rational::{int, rat, to_f64, Rational};
use parabolic_index::specfun::{hurwitz_zeta, truncated_dirichlet_sum, PrecisionPolicy};
use parabolic_index::spectrum::{vertical_spectrum_e, vertical_spectrum_end, Bundle};
use parabolic_index::Error;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// `n/d` in `(0, 1]`.
fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=48).prop_flat_map(|d| (1..=d).prop_map(move |n| rat(n, d)))
}

/// Nonzero offset in `(-1, 1)`.
fn offset() -> impl Strategy<Value = Rational> {
    (2i64..=48).prop_flat_map(|d| (1..d).prop_flat_map(move |n| prop_oneof![Just(rat(n, d)), Just(rat(-n, d))]))
}

fn pardeg_zero() -> impl Strategy<Value = ParabolicData> {
    any::<u64>().prop_map(|seed| common::random_pardeg_zero(&mut StdRng::seed_from_u64(seed), 4, 3, 3))
}

fn flag_system() -> impl Strategy<Value = ParabolicData> {
    (any::<u64>(), 1u32..=5, 1usize..=3).prop_map(|(seed, k, n)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let flags = (0..n).map(|_| common::random_flag(&mut rng, k, 24)).collect();
        ParabolicData::new_unchecked(1, k, 0, flags)
    })
}

const TRUNC: u32 = 4;

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        (0usize..2, 0usize..2, 1u32..=2).prop_map(|(puncture, level, m)| Generator::Ch { puncture, level, m }),
        (1u32..=2).prop_map(|half_degree| Generator::Interior { bundle: Bundle::E, half_degree }),
    ]
}

fn class() -> impl Strategy<Value = GradedClass> {
    let term = (proptest::collection::vec(generator(), 0..=2), -6i64..=6, 1i64..=4);
    proptest::collection::vec(term, 0..5).prop_map(|terms| {
        let mut out = GradedClass::zero(TRUNC);
        for (gens, n, d) in terms {
            let mut t = GradedClass::constant(rat(n, d), TRUNC);
            for g in gens {
                t = t.multiply(&GradedClass::generator(g, TRUNC)).unwrap();
            }
            out = out.add(&t).unwrap();
        }
        out
    })
}

fn flag_oracle(d: &ParabolicData) -> i64 {
    let k = d.rank as i64;
    let flags: i64 = d
        .flags
        .iter()
        .map(|f| (k * k - f.multiplicities.iter().map(|&m| (m as i64).pow(2)).sum::<i64>()) / 2)
        .sum();
    k * k * (d.surface.genus as i64 - 1) + 1 + flags
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hurwitz_between_integral_bounds(s in 2.5f64..8.0, beta in unit_rational(), n in 1usize..20) {
        let p = PrecisionPolicy::default();
        let z = hurwitz_zeta(s, &beta, &p).unwrap();
        let tail = z - truncated_dirichlet_sum(s, &beta, n).unwrap();
        let b = to_f64(&beta);
        // int_N^inf <= tail <= int_{N-1}^inf
        let lo = (n as f64 + b).powf(1.0 - s) / (s - 1.0);
        let hi = (n as f64 - 1.0 + b).powf(1.0 - s) / (s - 1.0);
        let slack = 1e-14 * z.abs() + 1e-12;
        prop_assert!(tail >= lo - slack && tail <= hi + slack, "{tail} not in [{lo}, {hi}]");
    }

    #[test]
    fn hurwitz_at_zero(beta in unit_rational()) {
        let v = hurwitz_zeta(0.0, &beta, &PrecisionPolicy::default()).unwrap();
        prop_assert!((v - (0.5 - to_f64(&beta))).abs() < 1e-10);
    }

    #[test]
    fn eta_is_odd_and_bounded(d in offset(), m in 1u64..20) {
        let e = eta_closed_progression(&d, m);
        prop_assert_eq!(eta_closed_progression(&-d, m), -e);
        prop_assert!(e.abs() < int(m as i64));
        let z = eta_numeric_zeta(&d, m, &PrecisionPolicy::default()).unwrap();
        prop_assert!((z - to_f64(&e)).abs() < 1e-9);
    }

    #[test]
    fn eta_end_vanishes(d in flag_system()) {
        for p in 0..d.puncture_count() {
            prop_assert_eq!(eta_end(&d, p).unwrap().value, EtaValue::Exact(Rational::zero()));
            let e = eta_e(&d, p).unwrap();
            let sum: Rational = d.flags[p]
                .levels()
                .map(|(a, k)| eta_closed_progression(&a, k as u64))
                .sum();
            prop_assert_eq!(e.value, EtaValue::Exact(sum));
        }
    }

    #[test]
    fn ring_laws(a in class(), b in class(), c in class()) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(&ab, &b.multiply(&a).unwrap());
        prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        let lhs = a.multiply(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, ab.add(&a.multiply(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn dual_is_multiplicative_involution(a in class(), b in class()) {
        prop_assert_eq!(&a.dual().dual(), &a);
        prop_assert_eq!(a.multiply(&b).unwrap().dual(), a.dual().multiply(&b.dual()).unwrap());
    }

    #[test]
    fn two_form_identity(d in flag_system()) {
        let lhs = index_class_end(&d, 2, false).degree_part(2);
        prop_assert_eq!(lhs, quillen_curvature(&d, Bundle::End, 2).unwrap());
    }

    #[test]
    fn mu_pairs_cancel(d in flag_system()) {
        for f in &d.flags {
            let total: Rational = f
                .levels()
                .flat_map(|(aj, kj)| f.levels().map(move |(al, kl)| mu(&(aj - al)) * int(kj as i64 * kl as i64)))
                .sum();
            prop_assert!(total.is_zero());
        }
    }

    #[test]
    fn index_integral_and_dimension(d in pardeg_zero()) {
        let idx = numerical_index(&index_class_e(&d, 2)).unwrap();
        prop_assert!(idx.is_integer());
        let oracle = flag_oracle(&d);
        match moduli_dimension(&d) {
            Ok(dim) => prop_assert_eq!(dim as i64, oracle),
            Err(Error::NegativeDimension(v)) => prop_assert!(v == oracle && v < 0),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn spectrum_multiplicities(d in flag_system()) {
        let k = d.rank as u64;
        for f in &d.flags {
            prop_assert_eq!(vertical_spectrum_e(f).total_multiplicity(), k);
            prop_assert_eq!(vertical_spectrum_end(f).total_multiplicity(), k * k);
        }
    }

    #[test]
    fn heat_trace_positive_decreasing(d in flag_system(), lt in -6.0f64..1.0) {
        let t = lt.exp();
        let spec = vertical_spectrum_e(&d.flags[0]);
        let (a, b) = (heat_trace_vertical(&spec, t), heat_trace_vertical(&spec, 1.5 * t));
        prop_assert!(a > 0.0 && b > 0.0 && b <= a);
    }

    #[test]
    fn theta_branches_agree(o in -1.0f64..1.0, lt in -5.0f64..0.7) {
        let t = lt.exp();
        let (x, y) = (theta_direct(o, t), theta_dual(o, t));
        prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
    }

    #[test]
    fn finite_part_linear(c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        // f - model cancels near 0, which caps the accuracy at about sqrt(eps)
        let opts = FinitePartOptions { abs_tol: 1e-8, ..FinitePartOptions::default() };
        let f = |x: f64| c1 / x + x.cos();
        let g = |x: f64| c2 * x.powi(-2) + x * x;
        let mf = SingularModel::new().with(-1.0, c1);
        let mg = SingularModel::new().with(-2.0, c2);
        let mh = SingularModel::new().with(-1.0, a * c1).with(-2.0, b * c2);
        let vf = renormalized_integral(f, 1.0, &mf, &opts).unwrap();
        let vg = renormalized_integral(g, 1.0, &mg, &opts).unwrap();
        let vh = renormalized_integral(|x| a * f(x) + b * g(x), 1.0, &mh, &opts).unwrap();
        prop_assert!((vh - (a * vf + b * vg)).abs() < 1e-7, "{vh} vs {}", a * vf + b * vg);
    }

    #[test]
    fn log_det_symmetric(beta in offset().prop_filter("positive", |b| *b > Rational::zero())) {
        let p = PrecisionPolicy::default();
        let v = log_det_model_vertical(&beta, 1, &p).unwrap();
        let w = log_det_model_vertical(&(int(1) - beta), 1, &p).unwrap();
        prop_assert!((v - w).abs() < 1e-12);
        let oracle = (4.0 * (PI * to_f64(&beta)).sin().powi(2)).ln();
        prop_assert!((v - oracle).abs() < 1e-10);
    }

    #[test]
    fn config_round_trip(d in pardeg_zero()) {
        let text = serialize_data(&d).to_string();
        prop_assert_eq!(parse_config(&text).unwrap(), Document::Single(d));
    }
}
