use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("degree {requested} exceeds the configured cap {cap}")]
    DegreeCap { requested: usize, cap: usize },

    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("relation space is not stable under the action; violating vector: {0}")]
    ActionNotStable(String),

    #[error("socle not one-dimensional: dim K^{degree} = {dim}")]
    SocleNotOneDimensional { degree: usize, dim: usize },

    #[error("syzygy space K^{0} is not weight-homogeneous")]
    SocleNotHomogeneous(usize),

    #[error("presentation is not known to be finite dimensional (checked up to grade {0})")]
    NotFiniteDimensional(usize),

    #[error("relabeling maps are not bijections: {0}")]
    NotBijective(String),

    #[error("arrow `{0}` does not name a generator of the action")]
    UnknownGenerator(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
