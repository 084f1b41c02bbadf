//! Command line, batch runner and session service for idealgames.

pub mod batch;
pub mod cli;
pub mod service;
