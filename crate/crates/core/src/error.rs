use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex count must be between 1 and {max}, got {n}")]
    InvalidVertexCount { n: u32, max: u32 },

    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: u32, n: u32 },

    #[error("vertex {0} appears twice in the domain")]
    DuplicateDomain(u32),

    #[error("vertex {0} is the image of two domain points")]
    NotInjective(u32),

    #[error("operands act on different vertex counts ({left} and {right})")]
    SizeMismatch { left: u32, right: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} is not an injective partial endomorphism of the path")]
    NotInIEnd(String),

    #[error("{0} is not a partial automorphism of the path")]
    NotInPAut(String),

    #[error("[{lo}, {hi}] is not a maximal interval of the image")]
    NotMaximalInterval { lo: u32, hi: u32 },

    #[error("generator {symbol} is not defined for n = {n}")]
    IllegalSymbol { symbol: String, n: u32 },

    #[error("no generating alphabet is defined for n = {0} (requires n >= 3)")]
    NoAlphabet(u32),

    #[error("element set is not closed under composition")]
    NotClosed,

    #[error("resource bound exceeded: {what} ({requested} > {limit})")]
    ResourceBound {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("factorization exceeded {bound} emitted letters")]
    StepBoundExceeded { bound: usize },

    #[error("construction broke an internal invariant: {0}")]
    Invariant(String),
}

impl Error {
    /// True for refusals caused by configured size limits rather than bad input.
    pub fn is_resource_refusal(&self) -> bool {
        matches!(self, Error::ResourceBound { .. })
    }

    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidVertexCount { .. } => "invalid_vertex_count",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::DuplicateDomain(_) => "duplicate_domain",
            Error::NotInjective(_) => "not_injective",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::Parse(_) => "parse",
            Error::NotInIEnd(_) => "not_in_iend",
            Error::NotInPAut(_) => "not_in_paut",
            Error::NotMaximalInterval { .. } => "not_maximal_interval",
            Error::IllegalSymbol { .. } => "illegal_symbol",
            Error::NoAlphabet(_) => "no_alphabet",
            Error::NotClosed => "not_closed",
            Error::ResourceBound { .. } => "resource_bound",
            Error::StepBoundExceeded { .. } => "step_bound_exceeded",
            Error::Invariant(_) => "invariant",
        }
    }

    /// Errors caused by the caller's input rather than by a failed check.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            Error::ResourceBound { .. } | Error::NotClosed | Error::StepBoundExceeded { .. } | Error::Invariant(_)
        )
    }
}
