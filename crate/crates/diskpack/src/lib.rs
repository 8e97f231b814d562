//! File formats, batch experiments and the command-line front end for `diskpack-core`.

pub mod batch;
pub mod cli;
pub mod experiments;
pub mod io;
pub mod svg;

pub use diskpack_core as core;
