use thiserror::Error;

/// Errors raised by the numerical pipeline.
///
/// Each variant maps onto a stable machine-readable code (see [`Error::code`])
/// and a process exit code used by the command-line harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resolution guard `{guard}`: {detail}")]
    Resolution { guard: &'static str, detail: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("resource cap exceeded: {candidates} candidates > cap {cap}")]
    ResourceCap { candidates: u128, cap: u64 },

    #[error("singular lattice basis (det = {det:e})")]
    SingularBasis { det: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::Resolution { .. } => "RESOLUTION_GUARD",
            Error::InsufficientData(_) => "RADIUS_GUARD",
            Error::Undefined(_) => "UNDEFINED_QUANTITY",
            Error::ResourceCap { .. } => "RESOURCE_CAP",
            Error::SingularBasis { .. } => "CPS_SINGULAR",
            Error::Config(_) => "CONFIG_INVALID",
            Error::Io(_) => "IO",
            Error::Json(_) => "JSON",
        }
    }

    /// 0 success, 2 validation, 3 resolution/radius guard, 4 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resolution { .. } | Error::InsufficientData(_) => 3,
            Error::ResourceCap { .. } => 4,
            Error::Io(_) => 1,
            _ => 2,
        }
    }

    /// Name of the violated guard, if this is a guard failure.
    pub fn guard(&self) -> Option<&str> {
        match self {
            Error::Resolution { guard, .. } => Some(guard),
            Error::InsufficientData(_) => Some("radius"),
            _ => None,
        }
    }
}
