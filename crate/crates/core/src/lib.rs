pub mod error;
pub mod hyperfree;
pub mod linalg;
pub mod measures;
pub mod partition;
pub mod relations;
pub mod verifier;

pub use error::{Error, Result};
