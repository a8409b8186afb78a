//! Project files, the HTTP API and batch reports for storyscope.
//!
//! [`project`] defines the on-disk project document, [`store`] keeps open
//! projects with their orchestrators, [`api`] serves them over HTTP and
//! [`report`] builds the batch report written by the command line.

pub mod api;
pub mod project;
pub mod report;
pub mod store;

/// Directory holding `<id>.json` project files.
pub const ENV_DATA_DIR: &str = "STORYSCOPE_DATA_DIR";
/// TCP port for `serve`.
pub const ENV_PORT: &str = "STORYSCOPE_PORT";
/// Word embedding file used for candidate pairs.
pub const ENV_EMBEDDINGS: &str = "STORYSCOPE_EMBEDDINGS";
