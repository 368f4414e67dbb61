pub mod effective;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod hopf;
pub mod multiscale;
pub mod poly;
pub mod renorm;
pub mod verify;
pub mod wick;

pub use error::{Error, Result};
