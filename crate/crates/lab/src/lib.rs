//! Verification driver for the noetherlab kernel: numeric oracle, verification
//! suites, reports, run configuration, catalog export and the command-line
//! front end.

pub mod oracle;
pub mod config;
pub mod identities;
pub mod report;
pub mod suite;
pub mod catalog_io;
pub mod cli;
