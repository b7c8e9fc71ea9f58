//! Breadth-first search by levels with an A*-style admission bound.
//!
//! Level `L_i` holds the canonical codes of positions first reached in exactly
//! `i` moves. With a heuristic `h` and a bound `m`, a position `B` produced at
//! level `i` is kept only when `i + h(B) ≤ m`; the test runs once a move has
//! finished, never on the intermediate states of a multi-jump chain.

use std::path::PathBuf;
use std::sync::Arc;

use crate::board::{Geometry, Position, SymmetryGroup, Variant};
use crate::error::Result;
use crate::heuristics::{derive_merson_decomposition, CornerBound, MersonDecomposition, WaypointBound};
use crate::invariants::ResourceCount;

mod levels;
mod meet;
mod movegen;
mod reach;
mod shortest;
mod store;

pub use levels::{expand_level, run_levels, LevelRun, LevelStat};
pub use meet::{bidirectional_meet, MeetResult};
pub use movegen::{enumerate_moves, moves_between, Direction, MoveGen};
pub use reach::{reachable_set, Reachability};
pub use shortest::{
    diagonal_jump_counts, reconstruct_solutions, search_shortest, ShortestResult, SolutionMode,
};
pub use store::{read_level_file, write_level_file, LevelStore};

/// Lower bound on the moves still needed from a position.
#[derive(Clone, Debug, Default)]
pub enum Heuristic {
    #[default]
    None,
    /// Corner counting with the survivor allowance `f` (0 or 1).
    Corner(CornerBound, u8),
    /// Corner counting plus unfilled waypoint holes.
    Waypoint(WaypointBound),
    /// Filled Merson regions, refined on the level before last.
    Merson(Arc<MersonDecomposition>),
}

impl Heuristic {
    pub fn h1(geom: &Geometry, f: u8) -> Result<Heuristic> {
        Ok(Heuristic::Corner(CornerBound::new(geom)?, f))
    }

    pub fn h2(geom: &Geometry, variant: Variant) -> Heuristic {
        Heuristic::Waypoint(WaypointBound::central_nine(geom, variant))
    }

    pub fn h3(geom: &'static Geometry, variant: Variant) -> Result<Heuristic> {
        Ok(Heuristic::Merson(Arc::new(derive_merson_decomposition(geom, variant)?)))
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Heuristic::None)
    }

    /// Bound for a position with `remaining` moves left in the budget.
    #[inline]
    pub fn eval(&self, bits: u64, remaining: u32) -> u32 {
        match self {
            Heuristic::None => 0,
            Heuristic::Corner(cb, f) => cb.eval(bits, *f),
            Heuristic::Waypoint(wb) => wb.eval(bits),
            Heuristic::Merson(dec) if remaining == 1 => dec.eval_final(bits),
            Heuristic::Merson(dec) => dec.eval(bits),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Heuristic::None => "none".into(),
            Heuristic::Corner(_, f) => format!("h1(f={f})"),
            Heuristic::Waypoint(_) => "h2".into(),
            Heuristic::Merson(_) => "h3".into(),
        }
    }
}

/// Which finishing positions count as solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    AnySinglePeg,
    /// A single peg on one of the holes in the mask.
    SinglePegIn(u64),
    Exact(u64),
}

impl Target {
    #[inline]
    pub fn matches(self, bits: u64) -> bool {
        match self {
            Target::AnySinglePeg => bits.count_ones() == 1,
            Target::SinglePegIn(mask) => bits.count_ones() == 1 && bits & mask != 0,
            Target::Exact(code) => bits == code,
        }
    }

    /// Symmetries of `within` mapping the target family onto itself.
    pub fn stabilizer(self, geom: &Geometry, within: SymmetryGroup) -> SymmetryGroup {
        match self {
            Target::AnySinglePeg => within,
            Target::SinglePegIn(mask) => geom.stabilizer(mask, within),
            Target::Exact(code) => geom.stabilizer(code, within),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DedupPolicy {
    /// Drop positions already present in any earlier level.
    #[default]
    Full,
    /// Drop duplicates within the level only.
    CurrentLevelOnly,
}

/// Stops a search once either limit is passed.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub variant: Variant,
    pub heuristic: Heuristic,
    /// The bound `m`; without a heuristic it simply caps the depth.
    pub max_moves: Option<u32>,
    pub symmetry: bool,
    pub dedup: DedupPolicy,
    /// Positions whose count value falls below the minimum are dropped.
    pub resource_floor: Option<(ResourceCount, i32)>,
    pub spill_dir: Option<PathBuf>,
    pub target: Target,
    pub budget: Budget,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SearchConfig {
    pub fn new(variant: Variant) -> SearchConfig {
        SearchConfig {
            variant,
            heuristic: Heuristic::None,
            max_moves: None,
            symmetry: true,
            dedup: DedupPolicy::Full,
            resource_floor: None,
            spill_dir: None,
            target: Target::AnySinglePeg,
            budget: Budget::default(),
            threads: None,
        }
    }

    pub fn with_heuristic(mut self, heuristic: Heuristic) -> Self {
        self.heuristic = heuristic;
        self
    }

    pub fn with_max_moves(mut self, m: u32) -> Self {
        self.max_moves = Some(m);
        self
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn with_symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn with_dedup(mut self, dedup: DedupPolicy) -> Self {
        self.dedup = dedup;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Symmetries usable for reduction: those fixing both the start and the
    /// target family, within the variant's own symmetry group.
    pub fn reduction_group(&self, start: &Position) -> SymmetryGroup {
        if !self.symmetry {
            return SymmetryGroup::TRIVIAL;
        }
        let geom = start.geometry();
        let group = geom.stabilizer(start.code(), self.variant.symmetry_group());
        self.target.stabilizer(geom, group)
    }

    /// Runs `f` on the configured worker pool.
    pub(crate) fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            None => f(),
        }
    }
}
