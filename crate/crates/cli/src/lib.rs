//! Library surface of the `citerank` binary: argument definitions, run
//! manifests, and the subcommand implementations, exposed so
//! integration tests can drive commands in-process.

pub mod args;
pub mod commands;
pub mod manifest;
