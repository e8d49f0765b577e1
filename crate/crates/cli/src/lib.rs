//! Support code for the `psdl` command-line tool.

pub mod bench;
pub mod corpus;
pub mod inject;
pub mod render;
