//! Report documents for each command.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use crate::chern::{
    index_class_e, index_class_end, moduli_dimension, numerical_index, quillen_curvature, GradedClass,
};
use crate::error::{Error, Result};
use crate::eta::{eta_closed_progression, eta_e, eta_end, eta_numeric_heat, eta_numeric_zeta, EtaValue};
use crate::heat::{fit_small_time_expansion, heat_trace_vertical, log_det_model_vertical, log_grid, FitOptions};
use crate::parabolic::{flag_correction_dimension, ParabolicData};
use crate::rational::{fmt_rational, int, to_f64, Rational};
use crate::specfun::PrecisionPolicy;
use crate::spectrum::{
    eigenvalues_in_window, fredholm_classify, vertical_kernel_rank, vertical_spectrum, Bundle,
};

use super::config::serialize_data;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Spectrum,
    Eta,
    Index,
    Dimension,
    Curvature,
    Heat,
    Detmodel,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Validate,
        Command::Spectrum,
        Command::Eta,
        Command::Index,
        Command::Dimension,
        Command::Curvature,
        Command::Heat,
        Command::Detmodel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Spectrum => "spectrum",
            Command::Eta => "eta",
            Command::Index => "index",
            Command::Dimension => "dimension",
            Command::Curvature => "curvature",
            Command::Heat => "heat",
            Command::Detmodel => "detmodel",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TGrid {
    pub fn parse(s: &str) -> Option<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return None;
        }
        let start: f64 = parts[0].parse().ok()?;
        let stop: f64 = parts[1].parse().ok()?;
        let points: usize = parts[2].parse().ok()?;
        (start > 0.0 && stop > start && stop.is_finite() && points >= 1).then_some(Self {
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        log_grid(self.start, self.stop, self.points)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub bundle: Bundle,
    pub window: f64,
    pub degree_cap: u32,
    pub tol: f64,
    pub t_grid: TGrid,
    pub puncture: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Validate,
            bundle: Bundle::E,
            window: 20.0,
            degree_cap: 2,
            tol: 1e-12,
            t_grid: TGrid {
                start: 1e-4,
                stop: 1e-1,
                points: 24,
            },
            puncture: None,
        }
    }
}

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    json!(if r == 0.0 { 0.0 } else { r })
}

fn q(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

fn class_value(cls: &GradedClass) -> Value {
    let mut terms: Vec<_> = cls.terms().collect();
    terms.sort_by(|a, b| (a.0.degree(), a.0).cmp(&(b.0.degree(), b.0)));
    json!({
        "rendered": cls.to_string(),
        "degree_cap": cls.truncation(),
        "terms": terms.iter().map(|(m, c)| json!({
            "monomial": m.to_string(),
            "degree": m.degree(),
            "coefficient": q(c),
        })).collect::<Vec<_>>(),
    })
}

fn punctures(data: &ParabolicData, cfg: &RunConfig) -> Result<Vec<usize>> {
    match cfg.puncture {
        Some(p) => {
            data.flag(p)?;
            Ok(vec![p])
        }
        None => Ok((0..data.puncture_count()).collect()),
    }
}

fn policy(cfg: &RunConfig) -> Result<PrecisionPolicy> {
    PrecisionPolicy::default().with_tol(cfg.tol)
}

/// Builds the report for one datum.
pub fn run_report(data: &ParabolicData, cfg: &RunConfig) -> Result<Value> {
    let mut out = Map::new();
    out.insert("command".into(), json!(cfg.command.name()));
    out.insert("input".into(), serialize_data(data));
    let (body, tags) = match cfg.command {
        Command::Validate => validate(data),
        Command::Spectrum => spectrum(data, cfg)?,
        Command::Eta => eta(data, cfg)?,
        Command::Index => index(data, cfg),
        Command::Dimension => dimension(data)?,
        Command::Curvature => curvature(data, cfg)?,
        Command::Heat => heat(data, cfg)?,
        Command::Detmodel => detmodel(data, cfg)?,
    };
    out.extend(body);
    out.insert(
        "tags".into(),
        Value::Object(tags.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect()),
    );
    Ok(Value::Object(out))
}

type Body = (Map<String, Value>, Vec<(&'static str, &'static str)>);

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn validate(data: &ParabolicData) -> Body {
    let report = data.validate();
    let body = json!({
        "admissible": report.is_admissible(),
        "violations": report.violations.iter().map(|v| json!({
            "code": v.code(),
            "puncture": v.puncture(),
            "message": v.to_string(),
        })).collect::<Vec<_>>(),
        "warnings": report.warnings.iter().map(|w| w.code()).collect::<Vec<_>>(),
        "euler_characteristic": data.surface.euler_characteristic(),
        "parabolic_degree": q(&data.parabolic_degree()),
        "parabolic_slope": q(&data.parabolic_slope()),
    });
    (
        obj(body),
        vec![
            ("parabolic_degree", "deg + sum_i sum_j a_j(p_i) k_j(p_i)"),
            ("parabolic_slope", "pardeg / rank"),
            ("euler_characteristic", "2 - 2g - n"),
        ],
    )
}

fn spectrum(data: &ParabolicData, cfg: &RunConfig) -> Result<Body> {
    let fred = fredholm_classify(data, cfg.bundle);
    let mut per = Vec::new();
    for p in punctures(data, cfg)? {
        let spec = vertical_spectrum(data.flag(p)?, cfg.bundle);
        per.push(json!({
            "puncture": p,
            "families": spec.families().map(|(o, m)| json!({"offset": q(&o), "multiplicity": m})).collect::<Vec<_>>(),
            "kernel_rank": vertical_kernel_rank(&spec),
            "eigenvalues": eigenvalues_in_window(&spec, cfg.window).into_iter()
                .map(|(e, m)| json!({"eigenvalue": round15(e), "multiplicity": m})).collect::<Vec<_>>(),
        }));
    }
    let body = json!({
        "bundle": cfg.bundle.name(),
        "window": round15(cfg.window),
        "punctures": per,
        "fredholm": {
            "fredholm": fred.fredholm,
            "discrete_spectrum": fred.discrete_spectrum,
            "horizontal_invertible": fred.horizontal_invertible,
            "vertical_kernel_rank_per_puncture": fred.vertical_kernel_rank_per_puncture,
            "reasons": fred.reasons,
        },
    });
    Ok((
        obj(body),
        vec![
            ("families", "E: offsets a_j, multiplicity k_j; End: offsets a_j - a_l, multiplicity k_j k_l"),
            ("eigenvalues", "2 pi (offset + m), |value| <= window"),
            ("fredholm", "horizontal eigenvalue -1/2 is never zero, so the operator is Fredholm"),
        ],
    ))
}

fn eta(data: &ParabolicData, cfg: &RunConfig) -> Result<Body> {
    let pol = policy(cfg)?;
    let mut per = Vec::new();
    for p in punctures(data, cfg)? {
        let e = eta_e(data, p)?;
        let end = eta_end(data, p)?;
        let mut agree = true;
        let mut routes = Map::new();
        for (name, r) in [("E", &e), ("End", &end)] {
            let (mut zeta, mut heat) = (0.0, 0.0);
            for c in &r.per_puncture_breakdown {
                zeta += eta_numeric_zeta(&c.offset, c.multiplicity, &pol)?;
                heat += eta_numeric_heat(&c.offset, c.multiplicity, &pol)?;
                debug_assert_eq!(c.value, eta_closed_progression(&c.offset, c.multiplicity));
            }
            let closed = r.value.as_f64();
            agree &= (closed - zeta).abs() < 1e-10 && (closed - heat).abs() < 1e-6;
            routes.insert(name.into(), json!({"zeta": round15(zeta), "heat": round15(heat)}));
        }
        let exact = |v: &EtaValue| q(&v.exact().expect("closed form is exact"));
        per.push(json!({
            "puncture": p,
            "eta_E": exact(&e.value),
            "eta_End": exact(&end.value),
            "methods_agree": agree,
            "numeric_routes": routes,
            "breakdown_E": e.per_puncture_breakdown.iter().map(|c| json!({
                "level": c.levels.0,
                "offset": q(&c.offset),
                "multiplicity": c.multiplicity,
                "value": q(&c.value),
            })).collect::<Vec<_>>(),
        }));
    }
    let tags = vec![
        ("eta_E", "sum_{a_j > 0} k_j (1 - 2 a_j)"),
        ("eta_End", "sum_{j != l} k_j k_l sign(a_j - a_l)(1 - 2|a_j - a_l|)"),
        ("numeric_routes.zeta", "sign(d)(zeta_H(0,|d|) - zeta_H(0,1-|d|)) by Euler-Maclaurin"),
        ("numeric_routes.heat", "pi^{-1/2} int_0^inf t^{-1/2} Tr(D exp(-t D^2)) dt"),
    ];
    let body = if per.len() == 1 && cfg.puncture.is_some() {
        obj(per.pop().expect("one entry"))
    } else {
        obj(json!({ "punctures": per }))
    };
    Ok((body, tags))
}

fn index(data: &ParabolicData, cfg: &RunConfig) -> Body {
    let cls = match cfg.bundle {
        Bundle::E => index_class_e(data, cfg.degree_cap),
        Bundle::End => index_class_end(data, cfg.degree_cap, true),
    };
    let idx = numerical_index(&cls).expect("interior degree 0 is evaluated");
    let body = json!({
        "bundle": cfg.bundle.name(),
        "class": class_value(&cls),
        "numerical_index": q(&idx),
    });
    let tag = match cfg.bundle {
        Bundle::E => "interior - sum_i sum_j (1/2 - a_j) Ch(E_ij) + sum_{a_1(p_i)=0} Ch(E_i1)",
        Bundle::End => {
            "interior - sum_{j != l} mu_jl Ch(E_ij) Ch(E_il*) + 1/2 sum_l Ch(E_il) Ch(E_il*) - exact"
        }
    };
    (
        obj(body),
        vec![
            ("class", tag),
            ("numerical_index", "degree-0 part; interior degree 0 is rank (2 - 2g - n)/2"),
        ],
    )
}

fn dimension(data: &ParabolicData) -> Result<Body> {
    let dim = moduli_dimension(data)?;
    let k = data.rank as i64;
    let oracle = data
        .flags
        .iter()
        .map(|f| flag_correction_dimension(f, data.rank))
        .fold(int(k * k * (data.surface.genus as i64 - 1) + 1), |a, b| a + b);
    let body = json!({
        "dimension": dim,
        "index_End": q(&(int(1) - int(dim as i64))),
        "flag_oracle": q(&oracle),
        "agrees": oracle == int(dim as i64),
    });
    Ok((
        obj(body),
        vec![
            ("dimension", "1 - index(End)"),
            ("flag_oracle", "k^2 (g - 1) + 1 + sum_i (k^2 - sum_j k_j^2)/2"),
        ],
    ))
}

fn curvature(data: &ParabolicData, cfg: &RunConfig) -> Result<Body> {
    let cls = quillen_curvature(data, cfg.bundle, cfg.degree_cap.max(2))?;
    let tag = match cfg.bundle {
        Bundle::E => "interior[2] - sum_i sum_j (1/2 - a_j) c1(E_ij)",
        Bundle::End => "interior[2] - sum_i sum_{j != l} sign(d)(1 - 2|d|) k_l c1(E_ij)",
    };
    Ok((
        obj(json!({"bundle": cfg.bundle.name(), "curvature": class_value(&cls)})),
        vec![("curvature", tag)],
    ))
}

fn heat(data: &ParabolicData, cfg: &RunConfig) -> Result<Body> {
    let p = cfg.puncture.unwrap_or(0);
    let spec = vertical_spectrum(data.flag(p)?, cfg.bundle);
    let ts = cfg.t_grid.values();
    let samples: Vec<(f64, f64)> = ts.iter().map(|&t| (t, heat_trace_vertical(&spec, t))).collect();
    let template = [(-1, 0), (0, 0), (-1, 1), (0, 1)];
    let fit = match fit_small_time_expansion(&samples, &template, &FitOptions::default()) {
        Ok(f) => json!({
            "terms": f.expansion.terms().iter().map(|t| json!({
                "half_power": t.half_power,
                "log_power": t.log_power,
                "coefficient": round15(t.coefficient),
            })).collect::<Vec<_>>(),
            "residual": round15(f.residual),
            "condition": round15(f.condition),
        }),
        Err(e @ (Error::InsufficientSamples(_) | Error::IllConditioned(_))) => {
            json!({"skipped": e.to_string()})
        }
        Err(e) => return Err(e),
    };
    let body = json!({
        "bundle": cfg.bundle.name(),
        "puncture": p,
        "samples": samples.iter().map(|(t, v)| json!({"t": round15(*t), "trace": round15(*v)})).collect::<Vec<_>>(),
        "fit": fit,
        "leading_oracle": round15(spec.total_multiplicity() as f64 / (2.0 * PI.sqrt())),
    });
    Ok((
        obj(body),
        vec![
            ("trace", "sum mult sum_m exp(-4 pi^2 t (m + offset)^2)"),
            ("leading_oracle", "total multiplicity / (2 sqrt(pi)), coefficient of t^{-1/2}"),
        ],
    ))
}

fn detmodel(data: &ParabolicData, cfg: &RunConfig) -> Result<Body> {
    let pol = policy(cfg)?;
    let mut per = Vec::new();
    for p in punctures(data, cfg)? {
        let spec = vertical_spectrum(data.flag(p)?, cfg.bundle);
        let mut fams = Vec::new();
        let mut excluded = 0;
        for (o, m) in spec.families() {
            match log_det_model_vertical(&o, m, &pol) {
                Ok(v) => {
                    let oracle = m as f64 * (4.0 * (PI * to_f64(&o)).sin().powi(2)).ln();
                    fams.push(json!({
                        "offset": q(&o),
                        "multiplicity": m,
                        "log_det": round15(v),
                        "sine_oracle": round15(oracle),
                    }));
                }
                Err(Error::ZeroMode) => excluded += m,
                Err(e) => return Err(e),
            }
        }
        per.push(json!({"puncture": p, "families": fams, "excluded_zero_modes": excluded}));
    }
    Ok((
        obj(json!({"bundle": cfg.bundle.name(), "punctures": per})),
        vec![
            ("log_det", "-zeta'(0) of 4 pi^2 (m + offset)^2 via log Gamma"),
            ("sine_oracle", "mult log(4 sin^2(pi offset))"),
        ],
    ))
}

/// Rows for CSV output: a header and records.
pub fn csv_rows(report: &Value, cmd: Command) -> (Vec<String>, Vec<Vec<String>>) {
    let s = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match cmd {
        Command::Spectrum => {
            let mut rows = Vec::new();
            for p in report["punctures"].as_array().into_iter().flatten() {
                for e in p["eigenvalues"].as_array().into_iter().flatten() {
                    rows.push(vec![s(&p["puncture"]), s(&e["eigenvalue"]), s(&e["multiplicity"])]);
                }
            }
            (vec!["puncture".into(), "eigenvalue".into(), "multiplicity".into()], rows)
        }
        Command::Heat => {
            let rows = report["samples"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|r| vec![s(&r["t"]), s(&r["trace"])])
                .collect();
            (vec!["t".into(), "trace".into()], rows)
        }
        _ => {
            let mut rows = Vec::new();
            flatten("", report, &mut rows);
            (vec!["key".into(), "value".into()], rows)
        }
    }
}

/// Leaf values keyed by dotted paths.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) if !a.is_empty() => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
        other => out.push(vec![prefix.to_string(), other.to_string()]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{parse_config, Document};

    fn worked() -> ParabolicData {
        let doc = parse_config(
            r#"{"genus":2,"rank":2,"degree":-1,"punctures":[{"weights":["1/4","3/4"],"mults":[1,1]}]}"#,
        )
        .unwrap();
        match doc {
            Document::Single(d) => d,
            Document::Batch(_) => unreachable!(),
        }
    }

    fn cfg(command: Command) -> RunConfig {
        RunConfig {
            command,
            ..RunConfig::default()
        }
    }

    #[test]
    fn dimension_report() {
        let r = run_report(&worked(), &cfg(Command::Dimension)).unwrap();
        assert_eq!(r["dimension"], json!(6));
        assert_eq!(r["agrees"], json!(true));
    }

    #[test]
    fn eta_report() {
        let c = RunConfig {
            puncture: Some(0),
            ..cfg(Command::Eta)
        };
        let r = run_report(&worked(), &c).unwrap();
        assert_eq!(r["eta_E"], json!("0"));
        assert_eq!(r["eta_End"], json!("0"));
        assert_eq!(r["methods_agree"], json!(true));
    }

    #[test]
    fn validate_warns_on_nonzero_pardeg() {
        let mut d = worked();
        d.degree = 0;
        let r = run_report(&d, &cfg(Command::Validate)).unwrap();
        assert_eq!(r["warnings"], json!(["pardeg_nonzero"]));
    }

    #[test]
    fn t_grid_parsing() {
        assert_eq!(TGrid::parse("1e-3:1:5").unwrap().values().len(), 5);
        assert!(TGrid::parse("1:0.1:5").is_none());
        assert!(TGrid::parse("0:1:5").is_none());
        assert!(TGrid::parse("1:2").is_none());
    }

    #[test]
    fn rounding() {
        assert_eq!(round15(0.1 + 0.2), json!(0.3));
        assert_eq!(round15(f64::NAN), Value::Null);
    }
}
