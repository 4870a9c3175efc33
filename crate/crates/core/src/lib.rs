pub mod arith;
pub mod atkin;
pub mod classpoly;
pub mod cli;
pub mod cm;
pub mod error;
pub mod ffield;
pub mod modpoly;
pub mod precision;
pub mod qforms;
pub mod sl2;

pub use error::{Error, Result};
