pub mod config;
pub mod plot;
pub mod spectrum;
pub mod sweep;
pub mod validate;
