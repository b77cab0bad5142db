use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Structured failure modes for matrix construction, recursion steps,
/// gauge handling, decomposition and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Matrix product with incompatible inner dimensions.
    #[error("cannot multiply a {left_rows}x{left_cols} matrix by a {right_rows}x{right_cols} matrix")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    /// Elementwise operation on two matrices of different shapes.
    #[error("shape mismatch: {a_rows}x{a_cols} vs {b_rows}x{b_cols}")]
    DifferentShapes {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    /// Operation defined only for square matrices.
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// Entry buffer does not match the declared matrix shape.
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    BadEntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    /// Matrix-vector product with incompatible sizes, or a recursion step
    /// whose vector length does not match the sub-block order.
    #[error("size mismatch: matrix of order {matrix} vs vector of length {vector}")]
    SizeMismatch { matrix: usize, vector: usize },

    /// A vector that must have unit Euclidean norm does not.
    #[error("vector norm {norm} deviates from 1 by more than {tolerance}")]
    NotUnitNorm { norm: f64, tolerance: f64 },

    /// A matrix that must be unitary fails the deviation gate.
    #[error("unitarity deviation {deviation} exceeds tolerance {tolerance}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    /// Embedding target order is too small for the block.
    #[error("cannot embed a block of order {block} into a matrix of order {n}")]
    BlockTooLarge { block: usize, n: usize },

    /// Dimension outside the supported range.
    #[error("dimension must be at least {min}, got {n}")]
    DimensionTooSmall { n: usize, min: usize },

    /// A factor list does not cover levels 1..n-1 in order.
    #[error("expected factor for level {expected}, got level {got}")]
    LevelOutOfOrder { expected: usize, got: usize },

    /// A factor list has the wrong length for the target order.
    #[error("expected {expected} levels for order {n}, got {got}")]
    LevelCount {
        n: usize,
        expected: usize,
        got: usize,
    },

    /// A factor of one orientation was passed where the other is required.
    #[error("level {level}: expected an {expected} factor")]
    FactorKindMismatch {
        level: usize,
        expected: &'static str,
    },

    /// Phase list length does not match the matrix order.
    #[error("{name} must have length {expected}, got {got}")]
    PhaseCount {
        name: &'static str,
        expected: usize,
        got: usize,
    },

    /// Spherical coordinate lists sized inconsistently with the level.
    #[error("level {level} takes {expected} polar and {expected} azimuthal angles, got {gammas} and {deltas}")]
    CoordCount {
        level: usize,
        expected: usize,
        gammas: usize,
        deltas: usize,
    },

    /// Canonical-form vector whose leading component is not real non-negative.
    #[error("first component {re}+{im}i is not real non-negative within {tolerance}")]
    FirstComponentNotCanonical { re: f64, im: f64, tolerance: f64 },

    /// Every component sits below the phase threshold, so no leading phase exists.
    #[error("vector has no component above the phase threshold {threshold}")]
    ZeroVector { threshold: f64 },

    /// The gauge convention pins the first right-hand phase to zero.
    #[error("beta[0] must be exactly 0, got {got}")]
    BetaNotPinned { got: f64 },

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    /// Fit configuration field outside its valid range.
    #[error("invalid configuration: {detail}")]
    InvalidConfig { detail: String },
}
