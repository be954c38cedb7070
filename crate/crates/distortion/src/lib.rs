//! Holomorphic maps between marked domains and numeric checks of
//! distortion inequalities for Robin radii and Robin functions.

pub mod budget;
pub mod catalog;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod map;
pub mod poly;
pub mod runner;
pub mod scenario;
pub mod verify;

pub use catalog::{DomainRef, Provider};
pub use error::{Error, Result};
pub use map::HolomorphicMap;
pub use scenario::{Kind, Scenario};
pub use verify::{verify, VerificationReport};
