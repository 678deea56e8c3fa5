use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Capacity(String),

    #[error("{message}")]
    Verification { message: String, failed: Vec<String> },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Internal(String),
}

impl From<bgg_core::Error> for CliError {
    fn from(e: bgg_core::Error) -> Self {
        use bgg_core::Error as E;
        match e {
            E::InvalidLabel(..) | E::InvalidInput(_) | E::MissingWeight { .. } => CliError::Usage(e.to_string()),
            E::Capacity(_) => CliError::Capacity(e.to_string()),
            E::Consistency(_) | E::DegenerateDecomposition { .. } => {
                CliError::Verification { message: e.to_string(), failed: Vec::new() }
            }
            E::Io(io) => CliError::Io(io),
            E::BasisMismatch { .. } | E::Format(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Verification { .. } => 4,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Capacity(_) => "capacity",
            CliError::Verification { .. } => "verification",
            CliError::Io(_) => "io",
            CliError::Internal(_) => "internal",
        }
    }

    /// One-line JSON failure record for stderr.
    pub fn record(&self) -> String {
        let failed = match self {
            CliError::Verification { failed, .. } => failed.clone(),
            _ => Vec::new(),
        };
        json!({
            "status": "error",
            "exit_code": self.exit_code(),
            "kind": self.kind(),
            "message": self.to_string(),
            "failed": failed,
        })
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(bgg_core::Error::InvalidLabel(0, 1, 0)).exit_code(), 2);
        assert_eq!(CliError::from(bgg_core::Error::Capacity("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(bgg_core::Error::Consistency("x".into())).exit_code(), 4);
    }

    #[test]
    fn record_is_json() {
        let e = CliError::Verification { message: "bad".into(), failed: vec!["a".into()] };
        let v: serde_json::Value = serde_json::from_str(&e.record()).unwrap();
        assert_eq!(v["exit_code"], 4);
        assert_eq!(v["failed"][0], "a");
    }
}
