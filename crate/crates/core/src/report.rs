//! Structured verification outcomes.
//!
//! A [`VerificationReport`] is a flat list of named checks, each carrying
//! the measured value, the bound it was compared against, and whether it
//! passed. Reports serialize to a fixed JSON schema in which every float is
//! printed with 17 significant digits, so a parse of the output recovers
//! the exact `f64`s.

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Outcome {
    /// Passes iff `value <= bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Outcome {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }

    /// Passes iff `value >= bound`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Outcome {
            name: name.into(),
            value,
            bound,
            pass: value >= bound,
        }
    }

    /// Passes iff `|value - target| <= tol`; `bound` records the tolerance.
    pub fn within(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Outcome {
            name: name.into(),
            value,
            bound: tol,
            pass: (value - target).abs() <= tol,
        }
    }

    /// Informational entry that never fails.
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Outcome {
            name: name.into(),
            value,
            bound: value,
            pass: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Bool(b) => write!(f, "{b}"),
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Float(x) => write!(f, "{x}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Bool(v)
    }
}
impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}
impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}
impl From<u32> for ParamValue {
    fn from(v: u32) -> Self {
        ParamValue::Int(v as i64)
    }
}
impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}
impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_owned())
    }
}
impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub params: BTreeMap<String, ParamValue>,
    pub outcomes: Vec<Outcome>,
    pub seed: u64,
    #[serde(rename = "elapsed_s")]
    pub elapsed: f64,
    status: Status,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        VerificationReport {
            command: command.into(),
            params: BTreeMap::new(),
            outcomes: Vec::new(),
            seed,
            elapsed: 0.0,
            status: Status::Pass,
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl Into<ParamValue>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn push(&mut self, outcome: Outcome) -> &mut Self {
        if !outcome.pass && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.outcomes.push(outcome);
        self
    }

    /// Appends the outcomes of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) -> &mut Self {
        for mut o in other.outcomes {
            o.name = format!("{prefix}{}", o.name);
            self.push(o);
        }
        if other.status == Status::Error {
            self.status = Status::Error;
        }
        self
    }

    /// Marks the run as errored (resource or usage failure).
    pub fn set_error(&mut self, message: impl Into<String>) -> &mut Self {
        self.params.insert("error".into(), ParamValue::Text(message.into()));
        self.status = Status::Error;
        self
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// Compact JSON with every float printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
        self.serialize(&mut ser)
            .expect("report serialization into memory cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}  seed={}  status={}", self.command, self.seed, self.status)?;
        for (k, v) in &self.params {
            writeln!(f, "  {k} = {v}")?;
        }
        let width = self.outcomes.iter().map(|o| o.name.len()).max().unwrap_or(4).max(4);
        writeln!(f, "  {:<width$}  {:>24}  {:>24}  result", "check", "value", "bound")?;
        for o in &self.outcomes {
            writeln!(
                f,
                "  {:<width$}  {:>24.16e}  {:>24.16e}  {}",
                o.name,
                o.value,
                o.bound,
                if o.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}
