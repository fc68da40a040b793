use serde_json::{json, Value};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID_CHANNEL: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

/// A failure reported as one JSON object on stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit_code: i32,
    pub kind: &'static str,
    pub message: String,
    /// Name of the violated channel invariant, if any.
    pub invariant: Option<&'static str>,
    pub residual: Option<f64>,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_PARSE,
            kind: "parse",
            message: message.into(),
            invariant: None,
            residual: None,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: "io",
            ..Self::parse(message)
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "error": self.kind,
            "exit_code": self.exit_code,
            "message": self.message,
            "version": crate::VERSION,
        });
        if let Some(inv) = self.invariant {
            v["invariant"] = json!(inv);
        }
        if let Some(r) = self.residual {
            v["residual"] = json!(r);
        }
        v
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crolab::Error> for CliError {
    fn from(e: crolab::Error) -> Self {
        use crolab::Error as E;
        let message = e.to_string();
        let invalid = |invariant, residual| CliError {
            exit_code: EXIT_INVALID_CHANNEL,
            kind: "invalid_channel",
            message: message.clone(),
            invariant: Some(invariant),
            residual: Some(residual),
        };
        match e {
            E::NotCompletelyPositive { min_eigenvalue } => invalid("completely_positive", min_eigenvalue),
            E::NotTracePreserving { residual } => invalid("trace_preserving", residual),
            E::NotHermitian { defect } => invalid("hermitian", defect),
            E::NotUnitary { residual } => invalid("unitary", residual),
            E::InvalidDensity { residual, .. } => invalid("density_matrix", residual),
            E::InvalidProjectors { residual, .. } => invalid("projectors", residual),
            E::InvalidStochastic { residual, .. } => invalid("stochastic", residual),
            E::Sdp(_) | E::Singular => CliError {
                exit_code: EXIT_SOLVER,
                kind: "solver_failure",
                message,
                invariant: None,
                residual: None,
            },
            E::Unsupported(_) => CliError {
                kind: "unsupported",
                ..CliError::parse(message)
            },
            _ => CliError::parse(message),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::parse(e.to_string())
    }
}
