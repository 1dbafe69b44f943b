//! Reference oracle, scans and file formats on top of cqed-core.

pub mod config;
pub mod error;
pub mod oracle;
pub mod runs;
pub mod table;
