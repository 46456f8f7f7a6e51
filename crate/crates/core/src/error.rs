use thiserror::Error;

use crate::metric::FourPointReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("distance matrix is not square: {rows} rows for {labels} labels")]
    ShapeMismatch { rows: usize, labels: usize },
    #[error("asymmetric matrix: d({a},{b}) != d({b},{a})")]
    AsymmetricMatrix { a: String, b: String },
    #[error("nonzero diagonal entry at {label}")]
    NonzeroDiagonal { label: String },
    #[error("negative distance between {a} and {b}")]
    NegativeDistance { a: String, b: String },
    #[error("triangle inequality fails: d({x},{z}) > d({x},{y}) + d({y},{z})")]
    TriangleViolation { x: String, y: String, z: String },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("empty label at position {0}")]
    EmptyLabel(usize),
    #[error("distinct labels {a} and {b} are at distance zero")]
    ZeroDistanceBetweenDistinctLabels { a: String, b: String },

    #[error("expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("functions belong to different spaces")]
    SpaceMismatch,
    #[error("function is not admissible: f({a}) + f({b}) < d({a},{b})")]
    NotAdmissible { a: String, b: String },
    #[error("balls around {a} and {b} do not overlap")]
    NotPairwiseOverlapping { a: String, b: String },
    #[error("empty ball family")]
    EmptyFamily,
    #[error("minimization did not settle within {passes} passes")]
    NonTermination { passes: usize },
    #[error("index {index} out of range for {len} points")]
    InvalidIndex { index: usize, len: usize },
    #[error("negative radius for ball {0}")]
    NegativeRadius(usize),

    #[error("{n} points exceed the enumeration bound of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("not a tree metric: four-point condition fails by {} at {:?}", crate::rational::format_rational(&.0.excess), .0.worst_quadruple)]
    NotATreeMetric(Box<FourPointReport>),
    #[error("unknown tree node {0}")]
    UnknownNode(usize),
    #[error("unknown tree edge {0}")]
    UnknownEdge(usize),
    #[error("edge offset must lie strictly inside edge {0}")]
    InvalidOffset(usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("label {0:?} occurs more than once in the glued space")]
    LabelCollision(String),
    #[error("duplicate point {0:?}")]
    DuplicatePoint(String),
    #[error("point {0:?} has no rational Euclidean norm")]
    IrrationalNorm(String),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("map violates the modulus at ({a}, {b})")]
    ModulusViolated { a: String, b: String },
    #[error("subset is degenerate: {0}")]
    DegenerateSubset(String),
    #[error("operation needs a {0} target")]
    WrongTarget(&'static str),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Parse and input-shape problems, as opposed to domain failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::ShapeMismatch { .. })
    }
}
