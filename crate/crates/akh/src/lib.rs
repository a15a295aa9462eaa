//! File formats, result records and the command layer of the `akh` tool.

pub mod adt;
pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;
