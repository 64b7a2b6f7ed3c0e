pub mod arith;
pub mod certify;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod ff;
pub mod pairs;
pub mod polyff;
mod serde_util;

pub use error::{Error, Result};
