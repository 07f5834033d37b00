use thiserror::Error;

use crate::trinomials::UnivariateReduction;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient matrix does not have full row rank (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("no strictly positive vector in the kernel of the coefficient matrix")]
    EmptyInterior,

    #[error("class partition is not compatible with a direct-product decomposition of ker A")]
    IncompatiblePartition,

    #[error("dimension {dim} exceeds the enumeration limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("ker A is a direct product; no segment normal form exists")]
    Decomposable,

    #[error("dependency subspace is not a product over the classes")]
    NotDecomposable,

    #[error("monomial dependency is {0}, expected 0")]
    NotDependencyZero(usize),

    #[error("point violates the dependency conditions (log residual {0:.3e})")]
    ConditionViolated(f64),

    #[error("point is not in the positive coefficient cone: {0}")]
    NotInCoefficientCone(String),

    #[error("argument {0} outside the open unit interval")]
    DomainError(f64),

    #[error("value {value} outside the range of the requested branch (bound {bound})")]
    OutOfRange { value: f64, bound: f64 },

    #[error("degenerate exponents: {0}")]
    DegenerateExponents(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no positive solutions: {0}")]
    NoSolutions(String),

    #[error("exponent vectors of the first trinomial are linearly dependent")]
    DegenerateToUnivariate(Box<UnivariateReduction>),

    #[error("infinitely many solutions")]
    InfiniteSolutions,

    #[error("system is not square ({equations} equations, {variables} variables)")]
    NonSquare { equations: usize, variables: usize },

    #[error("instance has the wrong shape: {0}")]
    Shape(String),

    #[error("{}", format_parse(.field, .line, .message))]
    Parse {
        field: String,
        line: Option<usize>,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_parse(field: &str, line: &Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("parse error at line {l}, field `{field}`: {message}"),
        None => format!("parse error in field `{field}`: {message}"),
    }
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            line: None,
            message: message.into(),
        }
    }
}
