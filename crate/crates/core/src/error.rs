use thiserror::Error;

/// Errors produced by geometry, meshing, solving and capacity computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("boundary loop {loop_index} intersects itself")]
    SelfIntersecting { loop_index: usize },

    #[error("hole {hole} is not contained in the outer loop")]
    HoleOutsideOuter { hole: usize },

    #[error("loops {a} and {b} overlap")]
    OverlappingLoops { a: usize, b: usize },

    #[error("empty gamma selection: the Robin problem is undefined without a Dirichlet part")]
    EmptyGamma,

    #[error("degenerate gamma interval on loop {loop_index}, arc {arc}")]
    DegenerateInterval { loop_index: usize, arc: usize },

    #[error("invalid arc reference: loop {loop_index}, arc {arc}")]
    InvalidArcRef { loop_index: usize, arc: usize },

    #[error("mesh size h = {h} is not usable: {reason}")]
    BadMeshSize { h: f64, reason: String },

    #[error("point ({re}, {im}) lies outside the domain")]
    OutsideDomain { re: f64, im: f64 },

    #[error("domain is unbounded and cannot be meshed directly; use a conformal model")]
    Unbounded,

    #[error("singular system: no Dirichlet nodes")]
    SingularSystem,

    #[error("linear solve did not converge (relative residual {residual:e})")]
    NonConvergent { residual: f64 },

    #[error("zero derivative of the conformal map at the pole")]
    ZeroDerivative,

    #[error("pole lies on gamma")]
    PoleOnGamma,

    #[error("pole on the boundary is only supported for closed-form models")]
    BoundaryPole,

    #[error("coincident points")]
    CoincidentPoints,

    #[error("compact set is polar or empty")]
    PolarSet,

    #[error("plates {a} and {b} overlap")]
    OverlappingPlates { a: usize, b: usize },

    #[error("plate {0} touches the boundary")]
    PlateTouchesBoundary(usize),

    #[error("invalid condenser: {0}")]
    InvalidCondenser(String),

    #[error("asymptotic formula not applicable at r = {0}")]
    BadAsymptoticRadius(f64),

    #[error("invalid study: {0}")]
    InvalidStudy(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
