//! Library side of the workbench CLI: DSL parsing and printing, file
//! resolution, command dispatch and report construction.

pub mod commands;
pub mod dsl;
pub mod report;
pub mod workbench;
