//! JSON formats, the fixture corpus and the command-line driver for
//! [`segal_core`].

pub mod json;
pub mod cli;
pub mod corpus;
pub mod dot;
