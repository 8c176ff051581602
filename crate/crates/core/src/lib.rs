pub mod error;
pub mod extremal;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod witness;

pub use error::{Error, Result};
