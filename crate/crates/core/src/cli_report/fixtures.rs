use std::fmt;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::asymptotics::SciNumber;
use crate::exact_enum::BigCount;
use crate::problem_model::{make_problem, ProblemSpec};

pub const BUILTIN_FIXTURES: &str = include_str!("../../fixtures/tables.json");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An exact count, either in full or as its leading digits `d.ddd…eX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactValue {
    Integer(BigCount),
    Digits(SciNumber),
}

impl ExactValue {
    pub fn to_rational(&self) -> BigRational {
        match self {
            ExactValue::Integer(c) => BigRational::from_integer(c.0.clone().into()),
            ExactValue::Digits(s) => s.to_rational(),
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Integer(c) => write!(f, "{c}"),
            ExactValue::Digits(s) => write!(f, "{s}"),
        }
    }
}

impl std::str::FromStr for ExactValue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            return Ok(ExactValue::Integer(s.parse().map_err(|e| format!("{e}"))?));
        }
        let sci: SciNumber = s.parse().map_err(|e| format!("{e}"))?;
        if sci.is_negative() {
            return Err(format!("negative count {s}"));
        }
        Ok(ExactValue::Digits(sci))
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub alpha: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub degree: u32,
    pub exact: ExactValue,
    pub source: String,
}

impl Fixture {
    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec { alpha: self.alpha, n: self.n, degree: self.degree }
    }

    fn validate(&self) -> Result<(), String> {
        make_problem(self.alpha, self.n, self.degree).map_err(|e| e.to_string())?;
        if self.source.trim().is_empty() {
            return Err("empty source tag".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadedFixtures {
    pub fixtures: Vec<Fixture>,
    pub warnings: Vec<String>,
}

/// Parses a single JSON array or one JSON object per line (`#` comments allowed).
pub fn parse_fixtures(text: &str) -> Result<LoadedFixtures, FixtureError> {
    let mut out = LoadedFixtures::default();
    if text.trim().is_empty() {
        out.warnings.push("fixture file is empty".into());
        return Ok(out);
    }
    if text.trim_start().starts_with('[') {
        let list: Vec<serde_json::Value> = serde_json::from_str(text)
            .map_err(|e| FixtureError::Parse { line: e.line(), message: e.to_string() })?;
        // recover a line number per record for validation messages
        let mut starts = text.lines().enumerate().filter(|(_, l)| l.trim_start().starts_with('{')).map(|(i, _)| i + 1);
        for v in list {
            let line = starts.next().unwrap_or(1);
            let fx: Fixture =
                serde_json::from_value(v).map_err(|e| FixtureError::Parse { line, message: e.to_string() })?;
            fx.validate().map_err(|message| FixtureError::Parse { line, message })?;
            out.fixtures.push(fx);
        }
    } else {
        for (i, raw) in text.lines().enumerate() {
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let fx: Fixture =
                serde_json::from_str(l).map_err(|e| FixtureError::Parse { line: i + 1, message: e.to_string() })?;
            fx.validate().map_err(|message| FixtureError::Parse { line: i + 1, message })?;
            out.fixtures.push(fx);
        }
    }
    Ok(out)
}

pub fn load_fixtures(path: &Path) -> Result<LoadedFixtures, FixtureError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| FixtureError::Io { path: path.display().to_string(), source })?;
    parse_fixtures(&text)
}

/// The fixtures compiled into the binary.
pub fn builtin_fixtures() -> Vec<Fixture> {
    parse_fixtures(BUILTIN_FIXTURES).expect("built-in fixtures parse").fixtures
}
