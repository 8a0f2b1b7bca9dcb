//! Exact computations around the K3 elliptic genus: q-series and Jacobi forms,
//! symmetric-power genera, N=4 superconformal characters and character lattices
//! of finite symplectic automorphism groups.

pub mod exactcore;
pub mod fgdata;
pub mod genus;
pub mod modforms;
pub mod n4char;
pub mod replattice;
pub mod verify;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("underdetermined: {0}")]
    Underdetermined(String),
    #[error("no rational fit: residual at index {index}")]
    NoFit { index: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
