//! Batch front-end for `koszul-core`: a JSON document format for dg
//! categories, pointed curved coalgebras, functors and MC elements, and the
//! commands run on them.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

pub use commands::{run, Options};
pub use document::{parse, print, print_text, Workspace};
pub use error::CliError;
pub use report::{Report, Status};
