pub mod config;
pub mod error;
pub mod noise;
pub mod output;
pub mod runner;
pub mod spectrum;
pub mod thermal;

pub use memspin_core as core;
