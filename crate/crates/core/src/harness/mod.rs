//! File format, corpus enumeration and the command-line driver.

pub mod cli;
pub mod corpus;
pub mod file;
pub mod fixtures;

pub use corpus::{enumerate_corpus, CorpusError, CorpusSpec};
pub use file::{parse, serialize, GraphFile, ParseError};
