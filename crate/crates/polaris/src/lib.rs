//! Text and JSON formats, the example catalog and the `polaris` command
//! line on top of [`polaris_core`].

pub mod catalog;
pub mod cli;
pub mod parse;
pub mod print;
pub mod report;
pub mod tensor_json;

pub use catalog::{catalog, CatalogEntry, Orientation, CATALOG};
pub use parse::{parse_map, MapDocument, ParseError};
pub use report::{analyze, Bounds, Report, Subject};
