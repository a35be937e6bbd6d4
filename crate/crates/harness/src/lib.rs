//! Configuration, manufactured solutions and experiment drivers for the
//! slab solver in `nsf-core`.

pub mod manufactured;
pub mod config;
pub mod experiments;
pub mod output;
pub mod checks;
pub mod commands;
