use super::levels::{run_with, LevelRun, Options};
use super::movegen::Direction;
use super::store::merge_sorted;
use super::{SearchConfig, Target};
use crate::board::Position;
use crate::error::Result;

#[derive(Debug)]
pub struct MeetResult {
    /// Canonical codes found both within `a` moves of the start and within
    /// `b` moves of the target.
    pub meet: Vec<u64>,
    pub forward: LevelRun,
    /// Levels of the reverse-chain search from the complemented target.
    pub backward: LevelRun,
}

impl MeetResult {
    pub fn is_empty(&self) -> bool {
        self.meet.is_empty()
    }
}

/// Forward levels `F_0..F_a` from `start` against backward levels
/// `B_0..B_b` from `target`. An empty meet proves there is no solution of
/// `a + b` moves or fewer.
///
/// Backward levels come from searching forward from `target′` with reverse
/// chains; their complements are the positions that reach `target`. The
/// forward side honours the configured heuristic under the bound `a + b`.
pub fn bidirectional_meet(
    start: &Position,
    target: &Position,
    a: u32,
    b: u32,
    config: &SearchConfig,
) -> Result<MeetResult> {
    let geom = start.geometry();
    let full = geom.full_mask();

    let mut fwd_cfg = config.clone();
    fwd_cfg.max_moves = Some(a + b);
    fwd_cfg.target = Target::Exact(target.code());
    let mut bwd_cfg = config.clone();
    bwd_cfg.max_moves = None;
    bwd_cfg.target = Target::Exact(start.code());
    if let Some(dir) = &config.spill_dir {
        fwd_cfg.spill_dir = Some(dir.join("forward"));
        bwd_cfg.spill_dir = Some(dir.join("backward"));
    }
    let forward = run_with(
        start,
        &fwd_cfg,
        Options {
            direction: Direction::Forward,
            stop_on_target: false,
            depth: Some(a),
        },
    )?;

    let backward = run_with(
        target,
        &bwd_cfg,
        Options {
            direction: Direction::Backward,
            stop_on_target: false,
            depth: Some(b),
        },
    )?;
    debug_assert_eq!(forward.group, backward.group);

    let mut reached = Vec::new();
    for i in 0..forward.levels.len() {
        reached = merge_sorted(reached, forward.level(i)?);
    }
    let mut reaching = Vec::new();
    for j in 0..backward.levels.len() {
        let mut level: Vec<u64> = backward
            .level(j)?
            .into_iter()
            .map(|r| geom.canonical_in(backward.group, !r & full))
            .collect();
        level.sort_unstable();
        level.dedup();
        reaching = merge_sorted(reaching, level);
    }
    let meet = intersect(&reached, &reaching);
    Ok(MeetResult {
        meet,
        forward,
        backward,
    })
}

fn intersect(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Geometry, Variant};

    #[test]
    fn zero_levels_meet_at_start() {
        let d4 = Geometry::named("diamond-4").unwrap();
        let start = d4.vacancy(d4.center());
        let r = bidirectional_meet(&start, &start, 0, 0, &SearchConfig::new(Variant::Eight)).unwrap();
        assert_eq!(r.meet, vec![d4.canonical_in(r.forward.group, start.code())]);
    }

    #[test]
    fn meet_length_matches_shortest_on_diamond3() {
        let d3 = Geometry::named("diamond-3").unwrap();
        let start = d3.vacancy(d3.center());
        let target = d3.single(d3.center());
        let cfg = SearchConfig::new(Variant::Eight);
        assert!(bidirectional_meet(&start, &target, 3, 3, &cfg).unwrap().is_empty());
        assert!(!bidirectional_meet(&start, &target, 4, 3, &cfg).unwrap().is_empty());
        assert!(!bidirectional_meet(&start, &target, 3, 4, &cfg).unwrap().is_empty());
    }
}
