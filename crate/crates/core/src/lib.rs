pub mod bounds;
pub mod combinatorics;
pub mod efgame;
pub mod error;
pub mod explab;
pub mod extlab;
pub mod folio;
pub mod hypercore;
pub mod limits;
pub mod rational;
pub mod sampler;

pub use error::{Error, Result};
pub use hypercore::Hypergraph;
pub use limits::Limits;
pub use rational::Rational;
