//! Permutation asymmetry of Dicke states with an attached bit-string.

pub mod activation;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod info_spectrum;
pub mod numeric;
pub mod oracle;
pub mod report;
pub mod schur_weyl;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::LogBase;
pub use schur_weyl::Params;
