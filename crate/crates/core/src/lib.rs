//! Riemannian Bergman metrics from Laplace eigenfunction embeddings on the
//! circle, the flat torus and the round sphere.

pub mod bergman;
pub mod cli;
pub mod error;
pub mod hilb;
pub mod manifolds;
pub mod metspace;
pub mod numerics;
pub mod operators;
pub mod sphereband;
pub mod tensor;

pub use error::{Error, Result};
