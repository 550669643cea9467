//! Command-line front end for `photostat`: state-spec parsing, report
//! rendering and the subcommands behind the `photostat` binary.

pub mod commands;
pub mod error;
pub mod figures;
pub mod report;
pub mod spec;
