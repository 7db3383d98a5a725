//! Library side of the `rtk` binary.

pub mod commands;
pub mod report;
