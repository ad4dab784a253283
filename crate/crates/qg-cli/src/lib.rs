//! File formats, reports and subcommands of the `qg` tool.

pub mod commands;
pub mod corpus;
pub mod formats;
pub mod report;
