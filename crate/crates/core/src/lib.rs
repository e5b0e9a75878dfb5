//! Width-based planning over STRIPS tasks and deterministic simulators.

pub mod control;
pub mod envs;
pub mod model;
pub mod novelty;
pub mod parser;
pub mod search;
