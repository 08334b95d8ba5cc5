use core::fmt;

/// Errors raised by construction, analysis and simulation preconditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Block length is not a power of two.
    NotPowerOfTwo(usize),
    /// An index set is outside [1, N] or not sorted/deduplicated.
    BadIndexSet { level: usize },
    /// Nesting I_l <= I_{l+1} violated between the named pair of levels.
    NotNested { lower: usize, upper: usize },
    /// Level count out of range.
    BadLevelCount(usize),
    /// A convolution matrix is not upper unitriangular 0/1.
    NotUnitriangular,
    /// Exactly one description of T (taps or dense) must be given.
    AmbiguousConvolution,
    /// Vector length does not match the lattice dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Monte Carlo trial count below the supported minimum.
    TooFewTrials { got: u64, min: u64 },
    /// Per-level selection targets must be nondecreasing.
    TargetsDecreasing,
    /// Policy length does not match the number of levels.
    BadPolicyLength { expected: usize, got: usize },
    /// Decoder kind incompatible with the lattice kind.
    DecoderMismatch,
    /// Exhaustive enumeration size limit exceeded.
    EnumerationTooLarge { dim: usize, limit: usize },
    /// Minimal-vector enumeration preconditions not met.
    MinVectorPrecondition,
    /// Matrix is singular where a nonsingular one is required.
    SingularMatrix,
    /// A row of a coordinate array contains a non-binary entry.
    NonBinaryRow,
    /// Empty sweep grid.
    EmptyGrid,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPowerOfTwo(n) => write!(f, "length {n} is not a power of two"),
            Error::BadIndexSet { level } => {
                write!(f, "index set at level {level} is out of range or unsorted")
            }
            Error::NotNested { lower, upper } => {
                write!(f, "profile sets not nested: I_{lower} is not a subset of I_{upper}")
            }
            Error::BadLevelCount(r) => write!(f, "unsupported level count r = {r}"),
            Error::NotUnitriangular => write!(f, "convolution matrix is not upper unitriangular"),
            Error::AmbiguousConvolution => {
                write!(f, "convolution must be given as exactly one of taps or dense matrix")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::TooFewTrials { got, min } => {
                write!(f, "trial count {got} below minimum {min}")
            }
            Error::TargetsDecreasing => write!(f, "per-level size targets must be nondecreasing"),
            Error::BadPolicyLength { expected, got } => {
                write!(f, "policy has {got} entries, profile needs {expected}")
            }
            Error::DecoderMismatch => write!(f, "decoder kind incompatible with lattice kind"),
            Error::EnumerationTooLarge { dim, limit } => {
                write!(f, "enumeration dimension {dim} exceeds limit {limit}")
            }
            Error::MinVectorPrecondition => {
                write!(f, "minimal-vector enumeration preconditions not met")
            }
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::NonBinaryRow => write!(f, "coordinate array row contains a non-binary entry"),
            Error::EmptyGrid => write!(f, "sweep grid is empty"),
        }
    }
}

impl core::error::Error for Error {}
