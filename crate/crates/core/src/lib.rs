pub mod chain_complex;
pub mod experiments;
pub mod geometry;
pub mod grammar;
pub mod splitter;
pub mod words;
