use thiserror::Error;

use crate::tree::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("step {step}: vertex {vertex} does not exist yet")]
    UnknownVertex { step: usize, vertex: VertexId },
    #[error("step {step}: edge {a}-{b} is not present in the tree")]
    Rule2EdgeMissing { step: usize, a: VertexId, b: VertexId },
    #[error("step {step}: a satellite vertex needs two distinct parents, got {a} twice")]
    RepeatedParent { step: usize, a: VertexId },
    #[error("vertex {vertex}: {reason}")]
    InvalidParentSet { vertex: VertexId, reason: String },
    #[error("vertex {c} is not below {target} in the tree order")]
    NotComparable { c: VertexId, target: VertexId },
    #[error("numbering has {got} entries but the tree has {expected} vertices")]
    NumberingLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DicriticityError {
    #[error("configuration entry at vertex {vertex} is not an integer ({value})")]
    IntegralityViolation { vertex: VertexId, value: String },
    #[error("expected exactly one admissible dicriticity, found {found}")]
    UniquenessViolation { found: usize },
    #[error("tree has {size} vertices, brute force is capped at {cap}")]
    TreeTooLarge { size: usize, cap: usize },
    #[error("inductive solver: {admissible} root candidates are admissible at {vertices} vertices")]
    InternalInconsistency { admissible: usize, vertices: usize },
    #[error("vertex {vertex} has multiplicity {multiplicity}, expected 1")]
    MultiplicityNotOne { vertex: VertexId, multiplicity: i64 },
    #[error("dicriticity has {got} entries but the tree has {expected} vertices")]
    DicriticityLength { expected: usize, got: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("invalid characteristic sequence: {0}")]
    InvalidCharacteristic(String),
    #[error("a smooth branch has no singular resolution tree")]
    SmoothCurve,
    #[error("unknown curve family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` expects {expected}")]
    BadParameters { family: String, expected: String },
    #[error("the r-cusps family needs an even r for the dimension formula, got {0}")]
    OddR(u32),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error("gluing weights degenerate at vertex {vertex} after {attempts} attempts")]
    DegenerateAssignment { vertex: VertexId, attempts: usize },
    #[error("white component containing vertex {vertex} has no vertex with positive configuration")]
    NoFreeWeight { vertex: VertexId },
    #[error(transparent)]
    Dicriticity(#[from] DicriticityError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("level {level}: rule `{rule}` declines the instance ({reason}); snapshot {snapshot}")]
    UnsupportedInstance {
        level: usize,
        rule: String,
        reason: String,
        snapshot: String,
    },
    #[error("generic Tjurina number would be negative: {mu} - {modularity} + {dimension}")]
    NegativeResult { mu: i64, modularity: i64, dimension: i64 },
    #[error(transparent)]
    Dicriticity(#[from] DicriticityError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("document declares no vertices")]
    EmptyTree,
    #[error("line {line}: vertex id {id} declared twice")]
    DuplicateId { line: usize, id: usize },
    #[error("line {line}: vertex {id} refers to undeclared vertex {target}")]
    ForwardReference { line: usize, id: usize, target: usize },
    #[error("line {line}: vertex ids must be consecutive from 0, expected {expected} but got {got}")]
    NonConsecutiveId { line: usize, expected: usize, got: usize },
    #[error("line {line}: `{record}` splits edge {a}-{b}, which does not exist at this point")]
    Rule2EdgeMissing {
        line: usize,
        record: String,
        a: usize,
        b: usize,
    },
    #[error("line {line}: {source}")]
    Tree { line: usize, source: TreeError },
}

/// Umbrella error for callers that drive the whole pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Dicriticity(#[from] DicriticityError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error(transparent)]
    Format(#[from] FormatError),
}
