use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome category of a command. Each maps to one exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failure,
    ParseError,
    InvalidInput,
    Vanishes,
    Undefined,
    CapTooSmall,
    PremiseFailed,
    InvalidDatum,
    Findings,
    BudgetExhausted,
    Inconclusive,
}

impl Status {
    pub const ALL: [Status; 12] = [
        Status::Ok,
        Status::Failure,
        Status::ParseError,
        Status::InvalidInput,
        Status::Vanishes,
        Status::Undefined,
        Status::CapTooSmall,
        Status::PremiseFailed,
        Status::InvalidDatum,
        Status::Findings,
        Status::BudgetExhausted,
        Status::Inconclusive,
    ];

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure => 1,
            Status::ParseError => 2,
            Status::InvalidInput => 3,
            Status::Vanishes => 10,
            Status::Undefined => 11,
            Status::CapTooSmall => 12,
            Status::PremiseFailed => 13,
            Status::InvalidDatum => 14,
            Status::Findings => 15,
            Status::BudgetExhausted => 16,
            Status::Inconclusive => 17,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failure => "failure",
            Status::ParseError => "parse-error",
            Status::InvalidInput => "invalid-input",
            Status::Vanishes => "vanishes",
            Status::Undefined => "undefined",
            Status::CapTooSmall => "cap-too-small",
            Status::PremiseFailed => "premise-failed",
            Status::InvalidDatum => "invalid-datum",
            Status::Findings => "findings",
            Status::BudgetExhausted => "budget-exhausted",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Result of one command. Rationals inside `payload` are strings such as
/// `"-3/4"` so nothing is lost in the structured format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub payload: Value,
}

impl Report {
    pub fn new(command: &str, status: Status, payload: Value) -> Self {
        Report {
            command: command.to_string(),
            status,
            exit_code: status.exit_code(),
            payload,
        }
    }

    pub fn to_structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_structured(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// Indented plain-text rendering of the whole payload.
    pub fn to_human(&self) -> String {
        let mut out = format!("{}: {} (exit {})\n", self.command, self.status.as_str(), self.exit_code);
        render(&self.payload, 1, &mut out);
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(t) => out.push_str(&format!("{pad}{k}: {t}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar_text(x) {
                    Some(t) => out.push_str(&format!("{pad}- {t}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}
