//! Search engine for peg solitaire on square-grid boards with orthogonal and
//! diagonal jumps.

pub mod board;
pub mod cli;
pub mod error;
pub mod heuristics;
pub mod invariants;
pub mod search;
pub mod solver;

pub use board::{BoardName, DiagonalAxis, Geometry, Hole, Jump, Move, Position, Solution, Variant};
pub use error::{Error, Result};
