use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("degree {degree} is too small for this operation (needs at least {min})")]
    DegreeTooSmall { degree: usize, min: usize },
    #[error("image table is not a bijection")]
    NotBijection,
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {point} repeated within a cycle")]
    RepeatedPoint { point: usize },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("layer {k} out of range for degree {degree}")]
    LayerOutOfRange { k: usize, degree: usize },
    #[error("group is not transitive")]
    Intransitive,
    #[error("group is primitive")]
    Primitive,
    #[error("group is not primitive")]
    NotPrimitive,
    #[error("work cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("group is not the invariance group of the given relation")]
    NotInvarianceGroup,
    #[error("subset is not regular: its setwise stabilizer has order {stabilizer_order}")]
    NotRegular { stabilizer_order: u128 },
    #[error("set size {size} already occurs in the relation's arity")]
    ArityClash { size: usize },
    #[error("relation set of size {size} violates 2 <= size <= {max}")]
    BlockRelationSize { size: usize, max: usize },
    #[error("block relation is empty, so it cannot force the block system")]
    EmptyBlockRelation,
    #[error("regular set of size {size} is exactly half of degree {degree}")]
    HalfSizeRegular { size: usize, degree: usize },
    #[error("regular pieces have a repeated size {size}")]
    SizeCollision { size: usize },
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
    #[error("catalog entry {name} failed verification: {detail}")]
    CatalogVerification { name: String, detail: String },
}
