//! Exhaustive forward closure for boards of at most 32 holes, kept as one bit
//! per position.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::board::{Hole, Position, SymmetryGroup, Variant};
use crate::error::{Error, Result};

const MAX_HOLES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    /// Distinct positions reachable, the start included.
    pub count: u64,
    /// Symmetry classes among them, when requested.
    pub classes: Option<u64>,
    /// Holes where a lone peg can finish.
    pub finishes: Vec<Hole>,
}

/// Every position reachable from `start`. Moves are chains of jumps whose
/// partial chains are themselves moves, so single jumps span the same set.
pub fn reachable_set(start: &Position, variant: Variant, symmetry: bool) -> Result<Reachability> {
    let geom = start.geometry();
    let n = geom.hole_count();
    if n > MAX_HOLES {
        return Err(Error::Unsupported(format!(
            "exhaustive reachability needs at most {MAX_HOLES} holes; {} has {n}",
            geom.name()
        )));
    }
    let words = (1usize << n).div_ceil(64);
    let seen: Vec<AtomicU64> = (0..words).map(|_| AtomicU64::new(0)).collect();
    let mark = |code: u64| {
        seen[(code >> 6) as usize].fetch_or(1 << (code & 63), Ordering::Relaxed);
    };
    mark(start.code());
    let table = geom.jumps(variant);

    // Jumps lower the peg count by one, so layer k only feeds layer k − 1.
    for k in (2..=start.pegs()).rev() {
        seen.par_iter().enumerate().for_each(|(w, word)| {
            let mut bits = word.load(Ordering::Relaxed);
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                let code = ((w as u64) << 6) | b;
                if code.count_ones() != k {
                    continue;
                }
                let mut pegs = code;
                while pegs != 0 {
                    let o = Hole(pegs.trailing_zeros() as u8);
                    pegs &= pegs - 1;
                    for j in table.from(o) {
                        if j.is_legal(code) {
                            mark(j.apply(code));
                        }
                    }
                }
            }
        });
    }

    let count = seen
        .par_iter()
        .map(|w| w.load(Ordering::Relaxed).count_ones() as u64)
        .sum();
    let finishes = geom
        .holes()
        .filter(|h| {
            let code = h.bit();
            seen[(code >> 6) as usize].load(Ordering::Relaxed) & (1 << (code & 63)) != 0
        })
        .collect();
    let classes = symmetry.then(|| {
        let group: SymmetryGroup = geom.stabilizer(start.code(), variant.symmetry_group());
        seen.par_iter()
            .enumerate()
            .map(|(w, word)| {
                let mut bits = word.load(Ordering::Relaxed);
                let mut c = 0u64;
                while bits != 0 {
                    let code = ((w as u64) << 6) | bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    if geom.canonical_in(group, code) == code {
                        c += 1;
                    }
                }
                c
            })
            .sum()
    });
    Ok(Reachability {
        count,
        classes,
        finishes,
    })
}
