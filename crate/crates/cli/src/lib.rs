//! Configuration, job execution, rendering and the acceptance corpus for the
//! `ifunc` command-line tool.

pub mod bigi;
pub mod config;
pub mod corpus;
pub mod job;
pub mod render;
