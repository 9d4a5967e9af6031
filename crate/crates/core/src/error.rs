use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An exact division by `p^needed` was requested but the dividend only
    /// has valuation `found`.
    #[error("division by p^{needed} is not exact (valuation {found}){}", context_suffix(.context))]
    DivisionNotExact {
        needed: u32,
        found: u32,
        context: Option<String>,
    },

    #[error("precision exhausted: need {needed}, have {available}")]
    PrecisionExhausted { needed: u32, available: u32 },

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("not a lift of Frobenius: phi(x) != x^q mod p at {witness}")]
    NotAFrobeniusLift { witness: String },

    #[error("delta axiom '{law}' violated at {witness}")]
    AxiomViolation { law: String, witness: String },

    #[error("{m} is not coprime to p = {p}")]
    NotCoprime { m: u64, p: u64 },

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("bad reduction at p = {p} (discriminant {discriminant})")]
    BadReduction { p: u64, discriminant: String },

    #[error("truncation underflow: {0}")]
    TruncationUnderflow(String),

    #[error("element is not a diamond eigenvector; occupied pieces {pieces:?}")]
    NotEigen { pieces: Vec<usize> },

    #[error("zero element has no eigenweight")]
    ZeroElement,

    #[error("out of range: {0}")]
    Range(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cache error: {0}")]
    Cache(String),
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" in {c}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn not_exact(needed: u32, found: u32) -> Self {
        Error::DivisionNotExact {
            needed,
            found,
            context: None,
        }
    }

    /// Attaches a location description to a `DivisionNotExact` error; other
    /// variants pass through unchanged.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::DivisionNotExact { needed, found, .. } => Error::DivisionNotExact {
                needed,
                found,
                context: Some(ctx.into()),
            },
            other => other,
        }
    }
}
