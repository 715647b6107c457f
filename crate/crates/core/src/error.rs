use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("variable index {var} out of range for {nvars} variables")]
    VarOutOfRange { var: usize, nvars: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("variable {var} still occurs in the polynomial")]
    VariableOccurs { var: usize },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("base mismatch: expected {expected} variables, got {got}")]
    BaseMismatch { expected: usize, got: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("diagonal bracket [{0}, {0}] must be zero")]
    DiagonalBracket(String),
    #[error("unknown built-in `{0}`")]
    UnknownBuiltin(String),
    #[error("modifier value on ({0}, {1}) is not in the kernel of the anchor")]
    ModifierNotKernel(usize, usize),
    #[error("endomorphism does not square to minus the identity")]
    NotAlmostComplex,
    #[error("cometric is not symmetric")]
    AsymmetricCometric,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("algebroid fails anchor compatibility on ({0}, {1})")]
    AxiomFailure(usize, usize),
    #[error("connection has nonzero torsion on ({0}, {1})")]
    NonzeroTorsion(usize, usize),
    #[error("torsion is only defined for connections on the algebroid itself")]
    NotSelfConnection,
    #[error("generators are linearly dependent at every sampled point")]
    DependentGenerators,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
