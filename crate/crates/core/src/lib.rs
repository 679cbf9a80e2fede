pub mod cli;
pub mod corpus;
pub mod curves;
pub mod divisor;
pub mod error;
pub mod exactlin;
pub mod fan;
pub mod io;
pub mod mmp;
pub mod newton;
pub mod sections;
pub mod singularities;

pub use error::{Error, Result};
