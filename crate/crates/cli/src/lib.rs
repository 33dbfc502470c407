//! The `mlw` command line tool and its local HTTP service.

pub mod commands;
pub mod service;

pub use commands::Output;
