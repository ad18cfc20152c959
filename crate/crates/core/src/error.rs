use crate::surface_map::MapViolation;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Map(#[from] MapViolation),
    #[error("no crossings: a curve system needs at least one vertex")]
    NoCrossings,
    #[error("self-crossing orbit at vertex {vertex}")]
    SelfCrossing { vertex: usize },
    #[error("genus overflow: map genus {map_genus} exceeds ambient genus {ambient}")]
    GenusOverflow { map_genus: u32, ambient: u32 },
    #[error("ambient genus must be at least 2, got {0}")]
    AmbientGenus(u32),
    #[error("unknown curve: {0}")]
    UnknownCurve(String),
    #[error("duplicate curve name: {0}")]
    DuplicateName(String),
    #[error("curve {0} has no name")]
    UnnamedCurve(usize),
    #[error("dart {dart} does not lie on curve {name}")]
    RepresentativeMismatch { name: String, dart: u32 },
    #[error("curves must be distinct: {0}")]
    SameCurve(String),
    #[error("not a filling pair")]
    NotFillingPair,
    #[error("d must be >= 2, got {0}")]
    FamilyTooSmall(i64),
    #[error("system does not fill its ambient surface (traced genus {traced}, ambient {ambient}); bigons cannot be certified")]
    NotCellular { traced: u32, ambient: u32 },
    #[error("non-innermost bigon suspected: {0}")]
    BigonSuspected(String),
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid input at line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("catalog entry failed verification: {id}, {violation}")]
    Catalog { id: String, violation: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
