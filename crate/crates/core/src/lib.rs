pub mod complexity;
pub mod config;
pub mod cps;
pub mod delone;
pub mod error;
pub mod grid;
pub mod io;
pub mod pipeline;
pub mod stats;
pub mod window;

pub use error::{Error, Result};
