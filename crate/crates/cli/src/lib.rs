//! Library surface of the demandsel CLI: configuration, panel ingestion,
//! report rendering, and the subcommand drivers. The binary in `main.rs` is
//! a thin argument-parsing wrapper over [`runner`].

pub mod config;
pub mod ingest;
pub mod report;
pub mod runner;
