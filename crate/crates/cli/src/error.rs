use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("invalid `{section}`: {source}")]
    Invalid {
        section: String,
        source: descent_core::Error,
    },
    #[error("{0}")]
    Core(#[from] descent_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn missing(section: &str) -> CliError {
        CliError::schema(section, "required section is missing")
    }

    /// Attaches the section name to core validation errors.
    pub fn in_section(section: &str) -> impl Fn(descent_core::Error) -> CliError + '_ {
        move |source| CliError::Invalid {
            section: section.to_string(),
            source,
        }
    }

    /// 1 for internal invariant failures, 2 for everything caused by input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(descent_core::Error::Invariant(_))
            | CliError::Invalid {
                source: descent_core::Error::Invariant(_),
                ..
            } => 1,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        let (line, column) = (e.line(), e.column());
        let text = e.to_string();
        let message = text
            .strip_suffix(&format!(" at line {line} column {column}"))
            .unwrap_or(&text)
            .to_string();
        CliError::Parse {
            line,
            column,
            message,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use descent_core::Error;

    #[test]
    fn exit_codes_separate_internal_failures_from_bad_input() {
        assert_eq!(CliError::Core(Error::Invariant("x".into())).exit_code(), 1);
        let invalid = CliError::in_section("site")(Error::Invariant("x".into()));
        assert_eq!(invalid.exit_code(), 1);
        assert_eq!(CliError::Core(Error::UnknownId("x".into())).exit_code(), 2);
        assert_eq!(CliError::missing("site").exit_code(), 2);
        let parse: CliError = serde_json::from_str::<u8>("[").unwrap_err().into();
        assert_eq!(parse.exit_code(), 2);
        assert!(!parse.to_string().ends_with("column 1"));
    }
}
