//! Multi-jump move generation.
//!
//! Moves are generated in two directions over the same jump table. A forward
//! chain continues from where the last jump landed. A reverse chain runs on
//! complemented positions and continues with a jump *into* the hole the last
//! jump started from: replaying a forward move backwards on the complement
//! visits its jumps in reverse order, so one reverse-chain move from `Q′`
//! lands on `P′` exactly when one forward move takes `P` to `Q`.

use rustc_hash::FxHashSet;

use crate::board::{Hole, Jump, JumpTable, Move, Position, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    /// Reverse chains on complemented positions.
    Backward,
}

/// Reusable scratch space for enumerating successor codes.
pub struct MoveGen<'a> {
    table: &'a JumpTable,
    visited: FxHashSet<(u64, u8)>,
    stack: Vec<(u64, u8)>,
}

const VISITED_RESET: usize = 4096;

impl<'a> MoveGen<'a> {
    pub fn new(table: &'a JumpTable) -> MoveGen<'a> {
        MoveGen {
            table,
            visited: FxHashSet::default(),
            stack: Vec::new(),
        }
    }

    /// Calls `emit` with the result of every move from `bits`. A result may be
    /// reported more than once when different chains reach it.
    pub fn successors(&mut self, bits: u64, direction: Direction, mut emit: impl FnMut(u64)) {
        if !self.visited.is_empty() {
            if self.visited.capacity() > VISITED_RESET {
                self.visited = FxHashSet::default();
            } else {
                self.visited.clear();
            }
        }
        let table = self.table;
        match direction {
            Direction::Forward => {
                let mut pegs = bits;
                while pegs != 0 {
                    let o = Hole(pegs.trailing_zeros() as u8);
                    pegs &= pegs - 1;
                    for &j in table.from(o) {
                        if j.is_legal(bits) {
                            let next = j.apply(bits);
                            emit(next);
                            self.stack.push((next, j.target.0));
                        }
                    }
                }
                // Every jump removes a peg, so chains of different lengths never
                // share a state; only continuations need the visited set.
                while let Some((b, c)) = self.stack.pop() {
                    for &j in table.from(Hole(c)) {
                        if j.is_legal(b) {
                            let next = j.apply(b);
                            if self.visited.insert((next, j.target.0)) {
                                emit(next);
                                self.stack.push((next, j.target.0));
                            }
                        }
                    }
                }
            }
            Direction::Backward => {
                let mut holes = !bits & full_mask(table);
                while holes != 0 {
                    let t = Hole(holes.trailing_zeros() as u8);
                    holes &= holes - 1;
                    for &j in table.into(t) {
                        if j.is_legal(bits) {
                            let next = j.apply(bits);
                            emit(next);
                            self.stack.push((next, j.origin.0));
                        }
                    }
                }
                while let Some((b, c)) = self.stack.pop() {
                    for &j in table.into(Hole(c)) {
                        if j.is_legal(b) {
                            let next = j.apply(b);
                            if self.visited.insert((next, j.origin.0)) {
                                emit(next);
                                self.stack.push((next, j.origin.0));
                            }
                        }
                    }
                }
            }
        }
    }
}

fn full_mask(table: &JumpTable) -> u64 {
    let n = table.hole_count();
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Every move from `pos`, one per distinct (final hole, result) pair, each
/// with the first jump chain found for it.
pub fn enumerate_moves(pos: &Position, variant: Variant) -> Vec<(Move, Position)> {
    let geom = pos.geometry();
    let table = geom.jumps(variant);
    let mut seen: FxHashSet<(u64, u8)> = FxHashSet::default();
    let mut out = Vec::new();
    let mut stack: Vec<(u64, Move)> = Vec::new();
    for o in pos.occupied() {
        for &j in table.from(o) {
            if j.is_legal(pos.code()) {
                stack.push((j.apply(pos.code()), Move::single(j)));
            }
        }
    }
    stack.reverse();
    while let Some((bits, mv)) = stack.pop() {
        let end = mv.destination();
        if !seen.insert((bits, end.0)) {
            continue;
        }
        let mut next = Vec::new();
        for &j in table.from(end) {
            if j.is_legal(bits) {
                let mut longer = mv.clone();
                longer.push(j);
                next.push((j.apply(bits), longer));
            }
        }
        out.push((mv, geom.position(bits)));
        stack.extend(next.into_iter().rev());
    }
    out
}

/// Every jump chain by one peg taking `from` to `to`.
pub fn moves_between(from: &Position, to: &Position, variant: Variant) -> Vec<Move> {
    let removed = from.code() & !to.code();
    let added = to.code() & !from.code();
    // One peg moves, so at most one hole can gain a peg.
    if added.count_ones() > 1 {
        return Vec::new();
    }
    let table = from.geometry().jumps(variant);
    let mut out = Vec::new();
    let mut path: Vec<Jump> = Vec::new();
    // Memoise dead ends so long tours on large boards stay cheap.
    let mut dead: FxHashSet<(u64, u8)> = FxHashSet::default();

    #[allow(clippy::too_many_arguments)]
    fn walk(
        table: &JumpTable,
        bits: u64,
        at: Hole,
        goal: u64,
        removed: u64,
        path: &mut Vec<Jump>,
        out: &mut Vec<Move>,
        dead: &mut FxHashSet<(u64, u8)>,
    ) -> bool {
        let mut found = false;
        if bits == goal {
            out.push(Move::new(path.clone()).expect("chained"));
            found = true;
        }
        if dead.contains(&(bits, at.0)) {
            return found;
        }
        for &j in table.from(at) {
            // Only pegs absent from the goal may be captured.
            if j.is_legal(bits) && removed & j.over.bit() != 0 {
                path.push(j);
                found |= walk(table, j.apply(bits), j.target, goal, removed, path, out, dead);
                path.pop();
            }
        }
        if !found {
            dead.insert((bits, at.0));
        }
        found
    }

    for o in from.occupied() {
        // The mover leaves its hole unless the tour ends where it began.
        if removed & o.bit() == 0 && added != 0 {
            continue;
        }
        for &j in table.from(o) {
            if j.is_legal(from.code()) && removed & j.over.bit() != 0 {
                path.push(j);
                walk(table, j.apply(from.code()), j.target, to.code(), removed, &mut path, &mut out, &mut dead);
                path.pop();
            }
        }
    }
    out
}
