use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("lattice not full: the columns of A do not span Z^{0}")]
    LatticeNotFull(usize),
    #[error("matrix not pointed")]
    NotPointed,
    #[error("not a Gale dual: {0}")]
    NotGaleDual(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("not torus invariant: A-degree {0:?}")]
    NotInvariant(Vec<i64>),
    #[error("inhomogeneous operator")]
    Inhomogeneous,
    #[error("outside lattice image: exponent {0:?}")]
    OutsideLattice(Vec<i64>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resonant start exponent: {0}")]
    Resonant(String),
    #[error("zero operator")]
    ZeroOperator,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
