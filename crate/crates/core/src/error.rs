use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot add exponential terms with different exponents")]
    ExpMixing,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("operator order {0} exceeds the supported maximum of 4")]
    UnsupportedOrder(u32),
    #[error("operator is not of the form DxDy + a*Dx + b*Dy + c")]
    NotNormalForm,
    #[error("function is not in the kernel of the operator")]
    NotInKernel,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("expression is not an X-invariant of the operator")]
    NotAnXInvariant,
    #[error("expression is not a Y-invariant of the operator")]
    NotAYInvariant,
    #[error("invariant is identically zero")]
    ZeroInvariant,
    #[error("the transported invariant coincides with the generator of the transformation")]
    GeneratorExcluded,
    #[error("integral outside the supported class: {0}")]
    NonElementaryIntegral(String),
    #[error("coefficients are singular at the base point {0}")]
    SingularBasePoint(String),
    #[error("expression must be free of jet symbols here")]
    JetsNotAllowed,
    #[error("relation is not linear in `{0}`")]
    NotLinearInTarget(String),
    #[error("relation does not contain `{0}`")]
    TargetAbsent(String),
    #[error("relation contains `{found}`, which ranks above the target `{target}`")]
    TargetNotLeading { target: String, found: String },
    #[error("reduction did not terminate within {0} substitutions")]
    NonTermination(usize),
    #[error("coefficient matching has no unique solution: {0}")]
    Unsolvable(String),
    #[error("{0} is an extension outside the strict feature set")]
    StrictModeRejected(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
