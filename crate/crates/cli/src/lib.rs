//! IO, JSON formats, the command-line front end and the verification
//! suite for the Siegel-Jacobi geometry crate.

pub mod acceptance;
pub mod commands;
pub mod json;
