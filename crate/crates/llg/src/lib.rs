//! Files, command line, and HTTP service around `llg-core`.
//!
//! - [`ingest`]: line-delimited document records and the project tree.
//! - [`resources`]: gazetteer, abbreviation, and stopword files.
//! - [`store`]: checksummed snapshot and corpus files with atomic writes.
//! - [`feedback_store`]: the durable feedback log.
//! - [`ops`]: build, rebuild, and evaluation steps shared by CLI and service.
//! - [`service`]: the HTTP API.
//! - [`cli`]: the `llg` command.

pub mod cli;
pub mod feedback_store;
pub mod ingest;
pub mod ops;
pub mod resources;
pub mod service;
pub mod store;
