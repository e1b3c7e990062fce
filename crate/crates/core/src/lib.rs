//! Numerics for degenerate complex Hessian equations: symmetric functions of
//! eigenvalues, Gårding cones, additive compounds, k-Monge-Ampère operators,
//! Pogorelov-type singular solutions, ball mollification and the real
//! embedding of `C^n`.

pub mod cli;
pub mod compound;
pub mod embedding;
pub mod error;
pub mod field;
pub mod linalg;
pub mod mollifier;
pub mod operator;
pub mod pogorelov;
pub mod regression;
pub mod sampling;
pub mod symmetric;
pub mod verify;

pub use error::{Error, Result};
