use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] boussinesq::Error),
    #[error("{0}")]
    Validation(String),
}

#[derive(Debug, Serialize)]
pub struct FailureRecord<'a> {
    pub status: &'static str,
    pub kind: &'static str,
    pub exit_code: u8,
    pub message: &'a str,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use boussinesq::ErrorKind;
        match self {
            Self::Config(_) => "config",
            Self::Validation(_) => "validation",
            Self::Core(e) => match e.kind() {
                ErrorKind::Config => "config",
                ErrorKind::Numeric => "numeric",
                ErrorKind::Validation => "validation",
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "config" => 1,
            "numeric" => 2,
            _ => 3,
        }
    }

    /// One-line JSON description for standard error.
    pub fn record(&self) -> String {
        let message = self.to_string();
        let rec = FailureRecord {
            status: "error",
            kind: self.kind(),
            exit_code: self.exit_code(),
            message: &message,
        };
        serde_json::to_string(&rec).expect("failure record serialises")
    }
}

pub type CliResult<T> = Result<T, CliError>;
