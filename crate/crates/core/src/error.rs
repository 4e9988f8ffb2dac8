use serde_json::Value;
use thiserror::Error;

/// Every failure the toolkit can report.
///
/// `Malformed` covers input that does not even describe a well-shaped object
/// (bad JSON, out-of-range table entries, ragged arrays). Everything else is a
/// domain error: the input is well-formed but violates a mathematical
/// precondition, and most variants carry a witness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not an Abelian semigroup: {0}")]
    NotSemigroup(String),
    #[error("not a Lie algebra: {0}")]
    NotLie(String),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("semigroup has no zero element")]
    NoZeroElement,
    #[error("subspace is not closed under the bracket: [{left:?}, {right:?}] leaves it")]
    NotClosed { left: Vec<String>, right: Vec<String> },
    #[error("subspaces are not complementary: {0}")]
    NotComplement(String),
    #[error("[checked, hatted] is not contained in hatted: pair ({0}, {1})")]
    SplitViolated(usize, usize),
    #[error("resonance condition violated: {0}")]
    ResonanceViolated(String),
    #[error("matrices are not closed under the commutator: pair ({0}, {1})")]
    NotBracketClosed(usize, usize),
    #[error("limit diverges at entry ({i}, {j}, {k}) with valuation {valuation}")]
    Divergent {
        i: usize,
        j: usize,
        k: usize,
        valuation: i64,
    },
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("semigroup order {order} exceeds the enumeration bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("expected a {expected}-dimensional algebra, got dimension {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("class {class} needs an irrational parameter")]
    ParameterNotRational { class: String },
    #[error("class {class} has no basis-change witness over the rationals")]
    NoRationalWitness { class: String },
    #[error("internal failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed",
            Error::NotSemigroup(_) => "not_semigroup",
            Error::NotLie(_) => "not_lie",
            Error::Singular => "singular_matrix",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NoZeroElement => "no_zero_element",
            Error::NotClosed { .. } => "not_closed",
            Error::NotComplement(_) => "not_complement",
            Error::SplitViolated(..) => "split_condition_violated",
            Error::ResonanceViolated(_) => "resonance_violation",
            Error::NotBracketClosed(..) => "not_bracket_closed",
            Error::Divergent { .. } => "divergent",
            Error::UnknownName(_) => "unknown_name",
            Error::ParameterOutOfRange(_) => "parameter_out_of_range",
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::WrongDimension { .. } => "wrong_dimension",
            Error::ParameterNotRational { .. } => "parameter_not_rational",
            Error::NoRationalWitness { .. } => "no_rational_witness",
            Error::Internal(_) => "internal",
        }
    }

    pub fn is_malformed(&self) -> bool {
        matches!(self, Error::Malformed(_))
    }

    pub fn witness(&self) -> Option<Value> {
        use serde_json::json;
        match self {
            Error::NotClosed { left, right } => Some(json!({ "left": left, "right": right })),
            Error::SplitViolated(a, b) | Error::NotBracketClosed(a, b) => Some(json!([a, b])),
            Error::Divergent { i, j, k, valuation } => {
                Some(json!({ "i": i, "j": j, "k": k, "valuation": valuation }))
            }
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
