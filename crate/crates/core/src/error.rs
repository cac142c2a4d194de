use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a metric space needs at least one point")]
    EmptySpace,
    #[error("distance matrix row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("{labels} labels given for a {rows}x{rows} distance matrix")]
    LabelCount { labels: usize, rows: usize },
    #[error("unknown point label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("distance d({i},{j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("distance d({i},{j}) = {value} is negative")]
    Negative { i: usize, j: usize, value: f64 },
    #[error("diagonal entry d({i},{i}) = {value} is not zero")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("distance matrix is not symmetric at ({i},{j})")]
    Asymmetric { i: usize, j: usize },
    #[error("distinct points {i} and {j} are at distance zero")]
    ZeroDistance { i: usize, j: usize },
    #[error("triangle violation at ({i},{j},{k}): d({i},{k}) = {direct} > d({i},{j}) + d({j},{k}) = {via}")]
    Triangle { i: usize, j: usize, k: usize, direct: f64, via: f64 },
    #[error("base index {base} out of range for {len} points")]
    BaseOutOfRange { base: usize, len: usize },
    #[error("alpha = {alpha} is outside {allowed}")]
    AlphaOutOfRange { alpha: f64, allowed: &'static str },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("function value at the base point must be 0, found {0}")]
    BaseValueNonzero(f64),
    #[error("function value at point {0} is not finite")]
    NonFiniteValue(usize),
    #[error("functions live on different spaces")]
    SpaceMismatch,
    #[error("threshold list is empty")]
    EmptyThresholds,
    #[error("thresholds must be positive and strictly ascending (entry {0})")]
    BadThresholds(usize),
    #[error("construction needs a space with at least two points (diameter is zero)")]
    SingletonSpace,
    #[error("center set is empty")]
    EmptyCenters,
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("order/degree/index must be at least 1")]
    ZeroIndex,
    #[error("x = {0} is outside [0,1]")]
    OutsideInterval(f64),
    #[error("grid of {size} points is too coarse (minimum {min})")]
    GridTooCoarse { size: usize, min: usize },
    #[error("torus grid of {grid} nodes is too small for order {order} (need at least {required})")]
    AliasingGuard { grid: usize, order: usize, required: usize },
    #[error("imaginary residue {0:e} exceeds tolerance; input is not real-valued")]
    ImaginaryResidue(f64),
    #[error("Hölder constant {lip} exceeds 1; input is outside the unit ball")]
    OutsideUnitBall { lip: f64 },
}
