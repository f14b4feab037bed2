use std::fmt;

use serde_json::Value;
use slicegb::family::FamilyError;
use slicegb::formats::FormatError;
use slicegb::hough::HoughError;
use slicegb::section::SectionError;
use slicegb::GroebnerError;

/// What a successful command prints.
pub struct Output {
    pub text: String,
    pub json: Value,
}

impl Output {
    pub fn new(text: String, json: Value) -> Self {
        Output { text, json }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input. Exit code 1.
    Input(String),
    /// A hypothesis of the requested construction fails. Exit code 2.
    Hypothesis(String),
    /// Timeout or retry limit. Exit code 3.
    Limit(String),
    Internal,
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Internal => 1,
            CliError::Hypothesis(_) => 2,
            CliError::Limit(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
            CliError::Limit(m) => write!(f, "resource limit: {m}"),
            CliError::Internal => f.write_str("internal error"),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GroebnerError> for CliError {
    fn from(e: GroebnerError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SectionError> for CliError {
    fn from(e: SectionError) -> Self {
        if e.is_hypothesis_failure() {
            CliError::Hypothesis(format!("{e:?}: {e}"))
        } else if matches!(e, SectionError::RetryLimit(_)) {
            CliError::Limit(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Section(e) => e.into(),
            FamilyError::DependentParameters | FamilyError::DenominatorVanishes => CliError::Hypothesis(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<HoughError> for CliError {
    fn from(e: HoughError) -> Self {
        match e {
            HoughError::Section(e) => e.into(),
            HoughError::Family(e) => e.into(),
            HoughError::NotLinearInParams | HoughError::Groebner(_) => CliError::Input(e.to_string()),
            other => CliError::Hypothesis(other.to_string()),
        }
    }
}
