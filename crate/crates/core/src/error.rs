use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown board `{0}`")]
    UnknownBoard(String),

    #[error("unknown variant `{0}` (expected 4, 6, 6-nesw or 8)")]
    UnknownVariant(String),

    #[error("malformed coordinate `{0}`")]
    MalformedCoordinate(String),

    #[error("{coord} is not a hole of {board}")]
    NotAHole { coord: String, board: String },

    #[error("{from}-{to} is not a jump: {reason}")]
    BadJump {
        from: String,
        to: String,
        reason: &'static str,
    },

    #[error("malformed move `{0}`")]
    MalformedMove(String),

    #[error("malformed position: {0}")]
    MalformedPosition(String),

    #[error("malformed resource count: {0}")]
    MalformedWeights(String),

    #[error("illegal jump {jump} (move {move_index}, jump {jump_index})")]
    IllegalJump {
        move_index: usize,
        jump_index: usize,
        jump: String,
    },

    #[error("fixture `{name}`: {reason}")]
    Fixture { name: String, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("search budget exceeded after {nodes} nodes ({seconds:.1} s)")]
    BudgetExceeded { nodes: u64, seconds: f64 },

    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) => 1,
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}
