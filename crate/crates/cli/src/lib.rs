//! Library half of the `lexdist` CLI: report assembly, error-to-exit-code
//! mapping, and the command implementations. The binary in `main.rs` is a
//! thin clap wrapper over [`commands`].

pub mod commands;
pub mod error;
pub mod report;
