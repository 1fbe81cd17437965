pub mod affect;
pub mod analysis;
pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod genome;
pub mod metrics;
pub mod world;
