use rig_core::ErrorKind;
use serde_json::json;
use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Core(#[from] rig_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) | CliError::Json(_) => "parse",
            CliError::Io(_) | CliError::Csv(_) => "io",
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => "parse",
                ErrorKind::Geometry => "geometry",
                ErrorKind::Convergence => "convergence",
            },
        }
    }

    /// 2 for bad input, 3 for geometry, 4 for convergence, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "parse" => 2,
            "geometry" => 3,
            "convergence" => 4,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(CliError::Parse("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(rig_core::Error::CriticalPoint("0".into())).exit_code(), 3);
        assert_eq!(CliError::Core(rig_core::Error::CriticalTooClose(60)).exit_code(), 3);
        assert_eq!(CliError::Core(rig_core::Error::BranchTracking("0".into())).exit_code(), 4);
        assert_eq!(CliError::Core(rig_core::Error::InvalidInput("x".into())).exit_code(), 2);
    }

    #[test]
    fn error_json_is_structured() {
        let v: serde_json::Value = serde_json::from_str(&CliError::Parse("bad".into()).to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "parse");
        assert_eq!(v["error"]["exit_code"], 2);
    }
}
