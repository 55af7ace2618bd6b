//! Exact divisor and curve-class calculus on the moduli spaces of stable
//! pointed curves `Mbar_{g,n}`, with the linear-algebraic checks behind the
//! extremality of the forgetful fibre class and the non-polyhedrality of the
//! pseudoeffective cone.

pub mod cli;
pub mod cones;
pub mod error;
pub mod hurwitz;
pub mod morphisms;
pub mod picard;
pub mod ratlin;
pub mod sample;
pub mod surface;
pub mod verify;

pub use error::Error;
