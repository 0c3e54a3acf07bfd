use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("cycle length mismatch: {0} vs {1}")]
    CycleLengthMismatch(usize, usize),
    #[error("representation is not locally nilpotent")]
    NotLocallyNilpotent,
    #[error("representation is not regular (some map is not invertible)")]
    NotRegular,
    #[error("{0} does not accept representations with saturated cells")]
    SaturatedUnsupported(&'static str),
    #[error("matrix part is not reduced")]
    NotReduced,
    #[error("ordinal {0} is not a limit ordinal")]
    NotLimit(String),
    #[error("ordinal {0} is finite")]
    FiniteOrdinal(String),

    #[error("height mismatch: {left} vs {right}")]
    HeightMismatch { left: String, right: String },
    #[error("pair already present in the graph at vertex {0}")]
    AlreadyPresent(usize),
    #[error("{side} vector is not adapted at vertex {k}")]
    NotAdapted { side: &'static str, k: usize },
    #[error("image of the pair at vertex {0} is not in the graph")]
    ImageNotInGraph(usize),
    #[error("vector is not in the kernel at vertex {0}")]
    NotInKernel(usize),
    #[error("no witness vector at vertex {k}, height {height}: invariants differ")]
    NoWitness { k: usize, height: String },
    #[error("limit-ordinal extension case reached at vertex {0}")]
    LimitOrdinalUnreachable(usize),
    #[error("graph is not a coherent subrepresentation: {0}")]
    IncoherentGraph(String),

    #[error("not a terminal representation: {0}")]
    InvalidTerminal(String),
    #[error("property (A_{l}) fails at height {alpha}")]
    PropertyAViolated { l: usize, alpha: usize },
    #[error("pointed sum of an empty list")]
    EmptySum,

    #[error("transfinite support is not realizable here: {0}")]
    UnsupportedTransfinite(String),
    #[error("multiplicity {0} cannot be realized by finite matrices")]
    Unrepresentable(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid adapted basis: {0}")]
    InvalidAdaptedBasis(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
