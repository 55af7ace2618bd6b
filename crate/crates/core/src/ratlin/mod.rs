//! Exact rational arithmetic and dense linear algebra.

mod matrix;
mod rational;

pub use matrix::{Matrix, Solution};
pub use rational::{q, qi, Rational};
