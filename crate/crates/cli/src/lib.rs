//! Command-line front end for `polyprog`: progression parsing, configuration,
//! subcommands and the acceptance suite.

pub mod commands;
pub mod config;
pub mod parse;
pub mod report;
pub mod scenario;
pub mod verify;
