use serde_json::{json, Value};
use singlab::expr::ParseError;
use singlab::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments.
    Usage(String),
    /// Invalid configuration document.
    Config(String),
    Parse { field: &'static str, source: ParseError },
    /// A computation failed.
    Compute(Error),
    Io(String),
    /// A check ran to completion and found violations; the summary is
    /// still reported.
    Check { message: String, summary: Value },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Parse { .. } => 2,
            CliError::Compute(_) | CliError::Io(_) => 3,
            CliError::Check { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Usage(m) => json!({ "kind": "usage", "message": m }),
            CliError::Config(m) => json!({ "kind": "config", "message": m }),
            CliError::Parse { field, source } => json!({
                "kind": "parse",
                "field": field,
                "offset": source.offset(),
                "message": source.to_string(),
            }),
            CliError::Compute(e) => json!({ "kind": "compute", "message": e.to_string() }),
            CliError::Io(m) => json!({ "kind": "io", "message": m }),
            CliError::Check { message, .. } => json!({ "kind": "check", "message": message }),
        };
        json!({ "error": body })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { field, source } => CliError::Parse { field, source },
            other => CliError::Compute(other),
        }
    }
}
