pub mod cli;
pub mod engine;
pub mod games;
pub mod regret;
pub mod rng;
pub mod rules;
