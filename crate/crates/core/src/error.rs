use thiserror::Error;

/// Errors shared across the crate. Verification failures are *not* errors:
/// a coverage report with an `Under`/`Over` verdict is ordinary data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range [1, {1}]")]
    VertexRange(u32, u32),

    #[error("pair ({0}, {1}) listed as both edge and wildcard, or twice")]
    PairConflict(u32, u32),

    #[error("window [{start}, len {len}] out of range on a linear {n}-vertex host")]
    WindowRange { start: u32, len: u32, n: u32 },

    #[error("window length {0} exceeds host length {1}")]
    WindowTooLong(u32, u32),

    #[error("overlap {s} out of range 1..={max}")]
    OverlapRange { s: u32, max: u32 },

    #[error("size guard exceeded: {0} (set UCF_GUARD_OVERRIDE=1 to lift)")]
    Guard(String),

    #[error("graphs do not overlap by {0}")]
    NoOverlap(u32),

    #[error("cyclic gluing precondition failed: {0}")]
    GluePrecondition(&'static str),

    #[error("conflicting pair kinds at ({0}, {1}) while closing the cycle")]
    GlueConflict(u32, u32),

    #[error("closed form does not reproduce the source windows")]
    GlueWindowMismatch,

    #[error("digraph is not balanced")]
    NotBalanced,

    #[error("digraph is not strongly connected")]
    NotConnected,

    #[error("edge {0} out of range")]
    EdgeRange(usize),

    #[error("edges {0} and {1} are not twins")]
    NotTwins(usize, usize),

    #[error("twin pairs overlap on edge {0}")]
    TwinPairOverlap(usize),

    #[error("payload already carries a wildcard on the long pair")]
    AlreadyCompressed,

    #[error("no balanced edge selection of size {0} (valid ranges 0..={1} and {2}..={3})")]
    TourSize(u64, u64, u64, u64),

    #[error("requested length {0} is outside the constructible ranges")]
    LengthRange(u64),

    #[error("not a valid tour: {0}")]
    BadTour(&'static str),

    #[error("word is not a universal cycle/word for the expected family")]
    NotUniversal,

    #[error("word has wrong length: got {0}, expected {1}")]
    WordLength(usize, usize),

    #[error("letter {0} outside alphabet of size {1}")]
    Alphabet(u8, u8),

    #[error("position {0} out of range for a linear word of length {1}")]
    WordPosition(usize, usize),

    #[error("values are not distinct")]
    NotDistinct,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("operation requires a diamond-free graph")]
    NotPlain,

    #[error("graph is not a threshold graph")]
    NotThreshold,

    #[error("graph is not in threshold construction order")]
    NotConstructionOrdered,

    #[error("graph is not a permutation inversion graph")]
    NotInversionGraph,

    #[error("compressed-cycle count {0} out of range 0..={1}")]
    CycleCount(u64, u64),

    #[error("family arity mismatch: host windows have {0} vertices, family expects {1}")]
    ArityMismatch(u32, u32),

    #[error("host length {0} is not divisible by the window step {1}")]
    WindowStep(u32, u32),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
