//! JSON input documents.
//!
//! ```json
//! {"genus": 2, "rank": 2, "degree": -1,
//!  "punctures": [{"weights": ["1/4", "3/4"], "mults": [1, 1]}]}
//! ```
//!
//! A top-level array holds a batch of such objects.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::parabolic::{FlagData, ParabolicData, Violation};
use crate::rational::{fmt_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Schema { pointer: String, message: String },
    RationalParse { pointer: String, text: String },
    Io(String),
}

impl ConfigError {
    fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub fn pointer(&self) -> Option<&str> {
        match self {
            ConfigError::Schema { pointer, .. } | ConfigError::RationalParse { pointer, .. } => {
                Some(pointer)
            }
            ConfigError::Io(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Schema { .. } => "SchemaError",
            ConfigError::RationalParse { .. } => "RationalParseError",
            ConfigError::Io(_) => "IoError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Schema { pointer, message } => {
                write!(f, "SchemaError at {}: {message}", display_pointer(pointer))
            }
            ConfigError::RationalParse { pointer, text } => write!(
                f,
                "RationalParseError at {}: cannot parse {text:?} as p/q",
                display_pointer(pointer)
            ),
            ConfigError::Io(msg) => write!(f, "IoError: {msg}"),
        }
    }
}

fn display_pointer(p: &str) -> &str {
    if p.is_empty() {
        "/"
    } else {
        p
    }
}

impl std::error::Error for ConfigError {}

/// Parsed document: one datum or a batch.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Single(ParabolicData),
    Batch(Vec<ParabolicData>),
}

impl Document {
    pub fn entries(&self) -> Vec<&ParabolicData> {
        match self {
            Document::Single(d) => vec![d],
            Document::Batch(v) => v.iter().collect(),
        }
    }
}

pub fn parse_config(text: &str) -> Result<Document, ConfigError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| ConfigError::schema("", format!("invalid JSON: {e}")))?;
    match &value {
        Value::Array(items) => {
            if items.is_empty() {
                return Err(ConfigError::schema("", "empty batch"));
            }
            items
                .iter()
                .enumerate()
                .map(|(i, v)| parse_datum(v, &format!("/{i}")))
                .collect::<Result<Vec<_>, _>>()
                .map(Document::Batch)
        }
        _ => parse_datum(&value, "").map(Document::Single),
    }
}

fn parse_datum(value: &Value, at: &str) -> Result<ParabolicData, ConfigError> {
    let obj = value
        .as_object()
        .ok_or_else(|| ConfigError::schema(at, "expected an object"))?;
    for key in obj.keys() {
        if !["genus", "rank", "degree", "punctures"].contains(&key.as_str()) {
            return Err(ConfigError::schema(format!("{at}/{key}"), "unknown key"));
        }
    }
    let genus = unsigned(obj, "genus", at)?;
    let rank = unsigned(obj, "rank", at)?;
    let degree = field(obj, "degree", at)?
        .as_i64()
        .ok_or_else(|| ConfigError::schema(format!("{at}/degree"), "expected an integer"))?;
    let punctures = field(obj, "punctures", at)?
        .as_array()
        .ok_or_else(|| ConfigError::schema(format!("{at}/punctures"), "expected an array"))?;

    let mut flags = Vec::with_capacity(punctures.len());
    for (i, p) in punctures.iter().enumerate() {
        let pat = format!("{at}/punctures/{i}");
        let pobj = p
            .as_object()
            .ok_or_else(|| ConfigError::schema(pat.clone(), "expected an object"))?;
        for key in pobj.keys() {
            if key != "weights" && key != "mults" {
                return Err(ConfigError::schema(format!("{pat}/{key}"), "unknown key"));
            }
        }
        let weights = field(pobj, "weights", &pat)?
            .as_array()
            .ok_or_else(|| ConfigError::schema(format!("{pat}/weights"), "expected an array"))?
            .iter()
            .enumerate()
            .map(|(j, w)| {
                let wat = format!("{pat}/weights/{j}");
                let s = w
                    .as_str()
                    .ok_or_else(|| ConfigError::schema(wat.clone(), "expected a \"p/q\" string"))?;
                parse_rational(s).ok_or(ConfigError::RationalParse {
                    pointer: wat,
                    text: s.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mults = field(pobj, "mults", &pat)?
            .as_array()
            .ok_or_else(|| ConfigError::schema(format!("{pat}/mults"), "expected an array"))?
            .iter()
            .enumerate()
            .map(|(j, m)| {
                m.as_u64()
                    .and_then(|m| u32::try_from(m).ok())
                    .ok_or_else(|| {
                        ConfigError::schema(format!("{pat}/mults/{j}"), "expected a non-negative integer")
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        flags.push(FlagData::new(weights, mults));
    }

    let data = ParabolicData::new_unchecked(genus, rank, degree, flags);
    let report = data.validate();
    if let Some(v) = report.violations.first() {
        return Err(ConfigError::schema(
            format!("{at}{}", violation_pointer(v)),
            format!("{} ({})", v, v.code()),
        ));
    }
    Ok(data)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, ConfigError> {
    obj.get(key)
        .ok_or_else(|| ConfigError::schema(format!("{at}/{key}"), "missing required key"))
}

fn unsigned(obj: &Map<String, Value>, key: &str, at: &str) -> Result<u32, ConfigError> {
    field(obj, key, at)?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| ConfigError::schema(format!("{at}/{key}"), "expected a non-negative integer"))
}

fn violation_pointer(v: &Violation) -> String {
    match v {
        Violation::ZeroRank => "/rank".into(),
        Violation::NonNegativeEulerCharacteristic(_) => "/genus".into(),
        Violation::PunctureCountMismatch { .. } => "/punctures".into(),
        Violation::EmptyFlag { puncture } | Violation::WeightsNotIncreasing { puncture } => {
            format!("/punctures/{puncture}/weights")
        }
        Violation::LengthMismatch { puncture, .. } | Violation::FlagRank { puncture, .. } => {
            format!("/punctures/{puncture}/mults")
        }
        Violation::WeightOutOfRange { puncture, level, .. } => {
            format!("/punctures/{puncture}/weights/{level}")
        }
        Violation::ZeroMultiplicity { puncture, level } => {
            format!("/punctures/{puncture}/mults/{level}")
        }
    }
}

/// Canonical JSON form: reduced fractions, sorted keys.
pub fn serialize_data(data: &ParabolicData) -> Value {
    json!({
        "genus": data.surface.genus,
        "rank": data.rank,
        "degree": data.degree,
        "punctures": data.flags.iter().map(|f| json!({
            "weights": f.weights.iter().map(fmt_rational).collect::<Vec<_>>(),
            "mults": f.multiplicities,
        })).collect::<Vec<_>>(),
    })
}

pub fn serialize_document(doc: &Document) -> Value {
    match doc {
        Document::Single(d) => serialize_data(d),
        Document::Batch(v) => Value::Array(v.iter().map(serialize_data).collect()),
    }
}
