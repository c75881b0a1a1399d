use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("two points of the quadruple coincide")]
    DegenerateQuadruple,
    #[error("degenerate or inconsistently oriented triple")]
    DegenerateTriple,
    #[error("map is not cyclically monotone: {0}")]
    NonMonotone(String),
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("all points lie on one circle; the hull is planar")]
    CollinearInput,
    #[error("cyclic order is not compatible with the hull: {0}")]
    NonJordanOrder(String),
    #[error("the requested side is not a disk")]
    NonDiskSide,
    #[error("hull is degenerate (planar)")]
    DegenerateHull,
    #[error("point lies on the curve")]
    PointOnCurve,
    #[error("point is not normalized to q = -1")]
    NonUnitPoint,
    #[error("polygon is not acausal: {0}")]
    NotAcausal(String),
    #[error("no affine chart contains the hull")]
    ChartFailure,
    #[error("points are not timelike related")]
    NotTimelike,
    #[error("hull is planar")]
    PlanarHull,
    #[error("the two gluing routes disagree by {0:e}")]
    RouteMismatch(f64),
    #[error("face is not spacelike")]
    NotSpacelike,
    #[error("point is not on the face")]
    NotOnFace,
    #[error("side is planar; lamination is empty")]
    PlanarSide,
    #[error("point lies on a weighted leaf")]
    OnWeightedLeaf,
    #[error("input leaves cross")]
    CrossingInput,
    #[error("polygon construction failed: {0}")]
    ConstructionFailure(String),
    #[error("orbit enumeration exceeded the element budget")]
    OrbitBudgetExceeded,
    #[error("invalid jet: {0}")]
    InvalidJet(String),
    #[error("shape operator is singular")]
    DegenerateShape,
    #[error("projection is singular")]
    SingularProjection,
    #[error("a principal curvature equals -1")]
    CuspidalJet,
    #[error("parameters leave the monotone cone")]
    InfeasibleParams,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateQuadruple => "DegenerateQuadruple",
            Error::DegenerateTriple => "DegenerateTriple",
            Error::NonMonotone(_) => "NonMonotone",
            Error::InvalidSamples(_) => "InvalidSamples",
            Error::CollinearInput => "CollinearInput",
            Error::NonJordanOrder(_) => "NonJordanOrder",
            Error::NonDiskSide => "NonDiskSide",
            Error::DegenerateHull => "DegenerateHull",
            Error::PointOnCurve => "PointOnCurve",
            Error::NonUnitPoint => "NonUnitPoint",
            Error::NotAcausal(_) => "NotAcausal",
            Error::ChartFailure => "ChartFailure",
            Error::NotTimelike => "NotTimelike",
            Error::PlanarHull => "PlanarHull",
            Error::RouteMismatch(_) => "RouteMismatch",
            Error::NotSpacelike => "NotSpacelike",
            Error::NotOnFace => "NotOnFace",
            Error::PlanarSide => "PlanarSide",
            Error::OnWeightedLeaf => "OnWeightedLeaf",
            Error::CrossingInput => "CrossingInput",
            Error::ConstructionFailure(_) => "ConstructionFailure",
            Error::OrbitBudgetExceeded => "OrbitBudgetExceeded",
            Error::InvalidJet(_) => "InvalidJet",
            Error::DegenerateShape => "DegenerateShape",
            Error::SingularProjection => "SingularProjection",
            Error::CuspidalJet => "CuspidalJet",
            Error::InfeasibleParams => "InfeasibleParams",
            Error::Schema(_) => "SchemaError",
            Error::Io(_) => "IoError",
        }
    }
}
