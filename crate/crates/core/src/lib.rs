//! Automorphic equivalence and semiinvariants for the free associative
//! algebra `K<x,y>` and the polynomial algebra `K[x,y]` over the rationals,
//! with solvability decided over the algebraic closure.

pub mod autgroup;
pub mod budget;
pub mod commalg;
pub mod decide;
pub mod error;
pub mod freealg;
pub mod groebner;
pub mod param;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
