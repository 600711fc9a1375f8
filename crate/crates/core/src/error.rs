use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("unknown edge ({a}, {b})")]
    UnknownEdge { a: String, b: String },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("labeling is partial: {0}")]
    PartialLabeling(String),

    #[error("variable {variable} does not occur in test {test}")]
    VariableNotInTest { test: usize, variable: usize },

    #[error("variable {variable} is not shared by tests {first} and {second}")]
    VariableNotShared {
        first: usize,
        second: usize,
        variable: usize,
    },

    #[error("labeling violates edge ({a}, {b})")]
    EdgeUnsatisfied { a: String, b: String },

    #[error("test {test} has an empty range")]
    EmptyRange { test: String },

    #[error("instance carries no label cover provenance")]
    NotLcDerived,

    #[error("super-assignment is inconsistent")]
    InconsistentInput,

    #[error(
        "test {test}: assignment {assignment} has no assigned value and no multi-good witness exists"
    )]
    ClassificationImpossible { test: usize, assignment: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("infeasible: inequality {index} of group {group} is violated")]
    Infeasible { group: String, index: usize },

    #[error("x[{index}]/y is not an integer")]
    NotIntegral { index: usize },

    #[error("search space of {states} states exceeds the cap of {cap}")]
    SearchSpaceTooLarge { states: String, cap: u64 },

    #[error("norm {norm} exceeds the bound {bound}")]
    NormBoundViolated { norm: String, bound: String },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),

    #[error("candidate grid is empty")]
    EmptyGrid,

    #[error("schema violation at {pointer:?}: {message}")]
    SchemaViolation { pointer: String, message: String },

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInstance(_) => "MalformedInstance",
            Error::UnknownEdge { .. } => "UnknownEdge",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::PartialLabeling(_) => "PartialLabeling",
            Error::VariableNotInTest { .. } => "VariableNotInTest",
            Error::VariableNotShared { .. } => "VariableNotShared",
            Error::EdgeUnsatisfied { .. } => "EdgeUnsatisfied",
            Error::EmptyRange { .. } => "EmptyRange",
            Error::NotLcDerived => "NotLcDerived",
            Error::InconsistentInput => "InconsistentInput",
            Error::ClassificationImpossible { .. } => "ClassificationImpossible",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::BadParameters(_) => "BadParameters",
            Error::Infeasible { .. } => "Infeasible",
            Error::NotIntegral { .. } => "NotIntegral",
            Error::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
            Error::NormBoundViolated { .. } => "NormBoundViolated",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::InfeasibleSpec(_) => "InfeasibleSpec",
            Error::EmptyGrid => "EmptyGrid",
            Error::SchemaViolation { .. } => "SchemaViolation",
            Error::FileNotFound(_) => "FileNotFound",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
