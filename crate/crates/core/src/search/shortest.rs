use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use super::levels::{run_with, LevelRun, LevelStat, Options};
use super::movegen::{moves_between, Direction, MoveGen};
use super::SearchConfig;
use crate::board::{Move, Position, Solution};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionMode {
    /// Length only.
    None,
    First,
    /// Up to `limit` solutions, one per distinct sequence of positions.
    All { limit: usize },
}

#[derive(Debug)]
pub struct ShortestResult {
    pub length: u32,
    pub solutions: Vec<Solution>,
    /// Canonical codes of the target positions in the final level.
    pub finishes: Vec<u64>,
    /// Nodes over every bound tried.
    pub nodes_total: u64,
    /// Nodes of the successful run alone.
    pub nodes_final: u64,
    /// `(m, nodes)` for every bound tried, in order.
    pub iterations: Vec<(u32, u64)>,
    pub run: LevelRun,
}

impl ShortestResult {
    pub fn stats(&self) -> &[LevelStat] {
        &self.run.stats
    }
}

/// Shortest solution from `start` to the configured target.
///
/// With a heuristic the bound `m` starts at `max(h(start), floor)` and rises
/// one move at a time; each bound is a fresh search by levels. Without a
/// heuristic one unbounded search runs until a level holds a target.
/// `config.max_moves` caps the bound.
pub fn search_shortest(
    start: &Position,
    config: &SearchConfig,
    floor: u32,
    mode: SolutionMode,
) -> Result<ShortestResult> {
    let pegs = start.pegs();
    let most = pegs.saturating_sub(1);
    let cap = config.max_moves.map_or(most, |m| m.min(most));
    let mut iterations = Vec::new();
    let mut nodes_total = 0;

    let no_solution = |bound: u32, proven_all: bool| {
        if proven_all {
            Error::Infeasible("state space exhausted without reaching the target".into())
        } else {
            Error::Infeasible(format!("no solution of length <= {bound}"))
        }
    };

    if config.heuristic.is_none() {
        let run = run_with(
            start,
            config,
            Options {
                direction: Direction::Forward,
                stop_on_target: true,
                depth: Some(cap),
            },
        )?;
        nodes_total += run.nodes();
        iterations.push((run.stats.len() as u32 - 1, run.nodes()));
        return match run.target_level {
            Some(l) => finish(start, run, l as u32, config, mode, nodes_total, iterations),
            None => Err(no_solution(cap, run.exhausted || cap == most)),
        };
    }

    let first = config.heuristic.eval(start.code(), u32::MAX).max(floor);
    for m in first..=cap {
        let mut cfg = config.clone();
        cfg.max_moves = Some(m);
        let run = run_with(
            start,
            &cfg,
            Options {
                direction: Direction::Forward,
                stop_on_target: false,
                depth: Some(m),
            },
        )?;
        nodes_total += run.nodes();
        iterations.push((m, run.nodes()));
        if let Some(l) = run.target_level {
            return finish(start, run, l as u32, config, mode, nodes_total, iterations);
        }
        // Nothing was cut by the bound, so a larger bound cannot help.
        if run.exhausted && run.pruned == 0 {
            return Err(no_solution(m, true));
        }
    }
    Err(no_solution(cap, cap == most))
}

fn finish(
    start: &Position,
    run: LevelRun,
    length: u32,
    config: &SearchConfig,
    mode: SolutionMode,
    nodes_total: u64,
    iterations: Vec<(u32, u64)>,
) -> Result<ShortestResult> {
    let geom = start.geometry();
    let finishes = run.targets_at(length as usize, config.target)?;
    let limit = match mode {
        SolutionMode::None => 0,
        SolutionMode::First => 1,
        SolutionMode::All { limit } => limit,
    };
    let mut solutions = Vec::new();
    for &code in &finishes {
        if solutions.len() >= limit {
            break;
        }
        let found = reconstruct_solutions(&run, &geom.position(code), limit - solutions.len())?;
        solutions.extend(found);
    }
    Ok(ShortestResult {
        length,
        solutions,
        finishes,
        nodes_total,
        nodes_final: run.nodes(),
        iterations,
        run,
    })
}

/// Predecessor positions of each position on a shortest path to one target,
/// layer by layer from the target back to the start.
struct Dag {
    /// `layers[i]` maps each position at distance `i` from the start to its
    /// predecessors at distance `i − 1`.
    layers: Vec<FxHashMap<u64, Vec<u64>>>,
}

fn build_dag(run: &LevelRun, target: &Position, first_only: bool) -> Result<Dag> {
    if run.direction != Direction::Forward {
        return Err(Error::Unsupported("solutions are traced through forward runs".into()));
    }
    let geom = target.geometry();
    let full = geom.full_mask();
    let canon = geom.canonical_in(run.group, target.code());
    let depth = (0..run.levels.len())
        .rev()
        .find(|&i| run.level(i).is_ok_and(|l| l.binary_search(&canon).is_ok()))
        .ok_or_else(|| Error::Infeasible("target absent from the level sets".into()))?;

    let table = geom.jumps(run.variant);
    let mut gen = MoveGen::new(table);
    let mut layers: Vec<FxHashMap<u64, Vec<u64>>> = vec![FxHashMap::default(); depth + 1];
    layers[depth].insert(target.code(), Vec::new());
    for i in (1..=depth).rev() {
        let prev = run.level(i - 1)?;
        let current: Vec<u64> = layers[i].keys().copied().collect();
        let mut next: FxHashMap<u64, Vec<u64>> = FxHashMap::default();
        for q in current {
            let mut preds = Vec::new();
            gen.successors(!q & full, Direction::Backward, |r| {
                let p = !r & full;
                if prev.binary_search(&geom.canonical_in(run.group, p)).is_ok() {
                    preds.push(p);
                }
            });
            preds.sort_unstable();
            preds.dedup();
            if first_only {
                preds.truncate(1);
            }
            for &p in &preds {
                next.entry(p).or_default();
            }
            layers[i].insert(q, preds);
        }
        layers[i - 1] = next;
    }
    if !layers[0].contains_key(&run.start.code()) {
        return Err(Error::Infeasible("trace does not return to the start".into()));
    }
    Ok(Dag { layers })
}

/// Solutions ending at `target`, traced back through the level sets of a
/// forward run; at most `limit`, each replay-checked.
pub fn reconstruct_solutions(run: &LevelRun, target: &Position, limit: usize) -> Result<Vec<Solution>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let dag = build_dag(run, target, limit == 1)?;
    let geom = target.geometry();
    let depth = dag.layers.len() - 1;
    let mut out = Vec::new();
    // Walk position paths from the target back to the start.
    let mut path = vec![target.code()];
    fn walk(
        dag: &Dag,
        i: usize,
        path: &mut Vec<u64>,
        paths: &mut Vec<Vec<u64>>,
        limit: usize,
    ) {
        if paths.len() >= limit {
            return;
        }
        if i == 0 {
            let mut p = path.clone();
            p.reverse();
            paths.push(p);
            return;
        }
        let q = *path.last().expect("non-empty");
        for &p in &dag.layers[i][&q] {
            path.push(p);
            walk(dag, i - 1, path, paths, limit);
            path.pop();
        }
    }
    let mut paths = Vec::new();
    walk(&dag, depth, &mut path, &mut paths, limit);
    for codes in paths {
        let moves: Vec<Move> = codes
            .windows(2)
            .map(|w| {
                moves_between(&geom.position(w[0]), &geom.position(w[1]), run.variant)
                    .into_iter()
                    .next()
                    .expect("consecutive levels are one move apart")
            })
            .collect();
        let sol = Solution::new(run.variant, geom.position(codes[0]), moves);
        if sol.replay()? != *target {
            return Err(Error::Infeasible("reconstructed solution misses its target".into()));
        }
        out.push(sol);
    }
    Ok(out)
}

/// The set of diagonal-jump totals over every shortest solution ending at
/// `target`, counting every jump chain realising each move.
pub fn diagonal_jump_counts(run: &LevelRun, target: &Position) -> Result<BTreeSet<usize>> {
    let dag = build_dag(run, target, false)?;
    let geom = target.geometry();
    let diagonal = |m: &Move| {
        m.jumps()
            .iter()
            .filter(|j| {
                let (ox, oy) = geom.cell(j.origin);
                let (tx, ty) = geom.cell(j.target);
                ox != tx && oy != ty
            })
            .count()
    };
    let mut counts: FxHashMap<u64, BTreeSet<usize>> = FxHashMap::default();
    counts.insert(run.start.code(), BTreeSet::from([0]));
    for i in 1..dag.layers.len() {
        let mut next: FxHashMap<u64, BTreeSet<usize>> = FxHashMap::default();
        for (&q, preds) in &dag.layers[i] {
            let entry = next.entry(q).or_default();
            for &p in preds {
                let Some(before) = counts.get(&p) else { continue };
                for m in moves_between(&geom.position(p), &geom.position(q), run.variant) {
                    let d = diagonal(&m);
                    entry.extend(before.iter().map(|c| c + d));
                }
            }
        }
        counts = next;
    }
    Ok(counts.remove(&target.code()).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Geometry, Variant};
    use crate::search::{Heuristic, Target};

    #[test]
    fn diamond3_central_game_takes_seven() {
        let d3 = Geometry::named("diamond-3").unwrap();
        let target = Target::SinglePegIn(d3.center().bit());
        let start = d3.vacancy(d3.center());
        let cfg = SearchConfig::new(Variant::Eight).with_target(target);
        let plain = search_shortest(&start, &cfg, 0, SolutionMode::First).unwrap();
        assert_eq!(plain.length, 7);
        let sol = &plain.solutions[0];
        assert_eq!(sol.len(), 7);
        assert_eq!(sol.replay().unwrap(), d3.single(d3.center()));

        let h3 = cfg.clone().with_heuristic(Heuristic::h3(d3, Variant::Eight).unwrap());
        let bounded = search_shortest(&start, &h3, 0, SolutionMode::All { limit: 50 }).unwrap();
        assert_eq!(bounded.length, 7);
        assert!(!bounded.solutions.is_empty());
        for s in &bounded.solutions {
            assert_eq!(s.len(), 7);
            assert_eq!(s.replay().unwrap(), d3.single(d3.center()));
        }
    }

    #[test]
    fn bound_below_optimum_is_infeasible() {
        let d3 = Geometry::named("diamond-3").unwrap();
        let start = d3.vacancy(d3.center());
        let cfg = SearchConfig::new(Variant::Eight)
            .with_target(Target::SinglePegIn(d3.center().bit()))
            .with_heuristic(Heuristic::h3(d3, Variant::Eight).unwrap())
            .with_max_moves(6);
        assert!(matches!(
            search_shortest(&start, &cfg, 0, SolutionMode::None),
            Err(Error::Infeasible(_))
        ));
    }
}
