//! IO side of lexforge: text file formats, the HTTP mask-fill client and the
//! `lexforge` command line. The algorithms live in `lexforge-core`.

pub mod cli;
pub mod client;
pub mod config;
pub mod error;
pub mod formats;

pub use error::{Error, Result};
