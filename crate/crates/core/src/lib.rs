pub mod boxoff;
pub mod error;
pub mod rng;
pub mod search;
pub mod pretzel;
pub mod fujisan;
pub mod counting;
pub mod generator;
pub mod stats;
pub mod harness;
