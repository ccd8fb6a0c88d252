use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A run that started and failed; exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    /// Prefixes the message, keeping the class.
    pub fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{what}: {m}")),
            CliError::Runtime(m) => CliError::Runtime(format!("{what}: {m}")),
        }
    }
}

impl From<oweno::Error> for CliError {
    fn from(e: oweno::Error) -> Self {
        use oweno::Error::*;
        match e {
            UnsupportedOrder { .. }
            | InvalidParams(_)
            | InvalidProblem(_)
            | DimensionMismatch { .. }
            | PrecisionInsufficient { .. }
            | TableFormat { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_class() {
        let blow_up = oweno::Error::BlowUp { time: 0.1, cell: 4, component: 0 };
        assert_eq!(CliError::from(blow_up).exit_code(), 1);
        assert_eq!(CliError::from(oweno::Error::NoConvergence { x: 0.0, t: 1.0 }).exit_code(), 1);
        assert_eq!(CliError::from(oweno::Error::UnsupportedOrder { r: 7 }).exit_code(), 2);
        let e = CliError::from(oweno::Error::InvalidParams("s1".into())).context("oweno N=40");
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().starts_with("oweno N=40: "));
    }
}
