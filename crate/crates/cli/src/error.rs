//! Error categories and their exit codes.

use std::fmt;

use hyplat::coxgram::DiagramError;
use hyplat::coxgroup::GroupError;
use hyplat::lorentz::FormError;
use hyplat::quat::QuatError;
use hyplat::report::ReportError;
use hyplat::skewherm::SkewError;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    /// Malformed or inconsistent input.
    Validation,
    /// Well-formed input outside the supported mathematical domain.
    Unsupported,
    /// A computed result failed its own consistency check.
    Internal,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Validation => 2,
            ErrorKind::Unsupported => 3,
            ErrorKind::Internal => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Validation, message: message.into() }
    }

    pub fn unsupported(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Unsupported, message: message.into() }
    }

    /// Prefixes the message with the input it came from.
    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Serialize)]
pub struct ErrorDoc<'a> {
    pub error: ErrorBody<'a>,
}

#[derive(Serialize)]
pub struct ErrorBody<'a> {
    pub code: i32,
    pub kind: ErrorKind,
    pub message: &'a str,
}

impl CliError {
    pub fn to_json(&self) -> String {
        let doc = ErrorDoc {
            error: ErrorBody { code: self.kind.exit_code(), kind: self.kind, message: &self.message },
        };
        serde_json::to_string_pretty(&doc).expect("error document serializes")
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        let kind = if e.is_unsupported() { ErrorKind::Unsupported } else { ErrorKind::Validation };
        Self { kind, message: e.to_string() }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Diagram(d) => d.into(),
            e => CliError::validation(e.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Diagram(d) => d.into(),
            ReportError::Group(g) => g.into(),
            e => CliError::validation(e.to_string()),
        }
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<QuatError> for CliError {
    fn from(e: QuatError) -> Self {
        match e {
            QuatError::NotSplitRepresentable { .. } => CliError::unsupported(e.to_string()),
            e => CliError::validation(e.to_string()),
        }
    }
}

impl From<SkewError> for CliError {
    fn from(e: SkewError) -> Self {
        let kind = match &e {
            SkewError::Inconsistent(_) => ErrorKind::Internal,
            SkewError::Ramified(_) | SkewError::NoSquareRoot { .. } | SkewError::Isotropic(_) => ErrorKind::Unsupported,
            SkewError::Quat(QuatError::NotSplitRepresentable { .. }) => ErrorKind::Unsupported,
            _ => ErrorKind::Validation,
        };
        Self { kind, message: e.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(ErrorKind::Validation.exit_code(), 2);
        assert_eq!(ErrorKind::Unsupported.exit_code(), 3);
        assert_eq!(ErrorKind::Internal.exit_code(), 4);
    }

    #[test]
    fn unsupported_label_maps_to_three() {
        let e: CliError = DiagramError::UnsupportedLabel("7".into()).into();
        assert_eq!(e.kind, ErrorKind::Unsupported);
        let e: CliError = ReportError::Group(GroupError::Diagram(DiagramError::UnsupportedLabel("7".into()))).into();
        assert_eq!(e.kind, ErrorKind::Unsupported);
    }

    #[test]
    fn inconsistency_maps_to_four() {
        let e: CliError = SkewError::Inconsistent("theta squared".into()).into();
        assert_eq!(e.kind.exit_code(), 4);
    }

    #[test]
    fn error_json_shape() {
        let v: serde_json::Value = serde_json::from_str(&CliError::validation("bad").to_json()).unwrap();
        assert_eq!(v["error"]["code"], 2);
        assert_eq!(v["error"]["kind"], "validation");
        assert_eq!(v["error"]["message"], "bad");
    }
}
