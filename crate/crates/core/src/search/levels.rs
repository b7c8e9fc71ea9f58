use std::fs;
use std::io::{BufWriter, Write};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::movegen::{Direction, MoveGen};
use super::store::{merge_sorted, subtract_sorted, CodeReader, KwayMerge, LevelStore};
use super::{DedupPolicy, Heuristic, SearchConfig, Target};
use crate::board::{Geometry, JumpTable, Position, SymmetryGroup, Variant};
use crate::error::{Error, Result};
use crate::invariants::ResourceCount;

/// Frontier codes handed to one worker at a time.
const CHUNK: usize = 1024;
/// Frontier codes expanded per run file when spilling.
const SPILL_BATCH: usize = 1 << 20;

/// One stats record: the level index, its size, the running node total and
/// the wall time since the run began.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelStat {
    pub level: usize,
    pub size: u64,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl LevelStat {
    /// `key=value` record; `timing` off drops the wall-clock field.
    pub fn record(&self, timing: bool) -> String {
        let mut s = format!("level={} size={} nodes={}", self.level, self.size, self.nodes);
        if timing {
            s.push_str(&format!(" elapsed_ms={}", self.elapsed.as_millis()));
        }
        s
    }
}

/// The level sets produced by one search by levels.
#[derive(Debug)]
pub struct LevelRun {
    pub start: Position,
    pub variant: Variant,
    pub direction: Direction,
    pub group: SymmetryGroup,
    pub bound: Option<u32>,
    pub levels: LevelStore,
    pub stats: Vec<LevelStat>,
    /// Successors rejected by the admission bound (not by the resource floor).
    pub pruned: u64,
    /// Whether a level came out empty, ending the run early.
    pub exhausted: bool,
    /// First level holding a target position, for forward runs.
    pub target_level: Option<usize>,
}

impl LevelRun {
    /// Σ|L_i| over the levels produced.
    pub fn nodes(&self) -> u64 {
        self.stats.last().map_or(0, |s| s.nodes)
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.levels.sizes()
    }

    pub fn level(&self, i: usize) -> Result<Vec<u64>> {
        self.levels.load(i)
    }

    /// Target positions present in level `i`.
    pub fn targets_at(&self, i: usize, target: Target) -> Result<Vec<u64>> {
        Ok(self.level(i)?.into_iter().filter(|&c| target.matches(c)).collect())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Admission {
    /// `i + h(B) ≤ m`, with only targets admitted at level `m`.
    Bounded(u32),
    Open,
}

pub(crate) struct Options {
    pub direction: Direction,
    pub stop_on_target: bool,
    pub depth: Option<u32>,
}

struct Expander<'a> {
    geom: &'static Geometry,
    table: &'a JumpTable,
    group: SymmetryGroup,
    direction: Direction,
    heuristic: &'a Heuristic,
    admission: Admission,
    target: Target,
    floor: Option<&'a (ResourceCount, i32)>,
    deadline: Option<Instant>,
}

enum Verdict {
    Admit,
    Pruned,
    BelowFloor,
}

impl Expander<'_> {
    #[inline]
    fn real(&self, bits: u64) -> u64 {
        match self.direction {
            Direction::Forward => bits,
            Direction::Backward => !bits & self.geom.full_mask(),
        }
    }

    #[inline]
    fn verdict(&self, bits: u64, level: u32) -> Verdict {
        let real = self.real(bits);
        if let Some((count, min)) = self.floor {
            // The canonical code stands for its whole orbit and every image
            // must reach a target, so one image below the floor rules out all.
            let below = self
                .group
                .iter()
                .any(|s| count.value_of(self.geom.transform_code(s, real)) < *min);
            if below {
                return Verdict::BelowFloor;
            }
        }
        if let Admission::Bounded(m) = self.admission {
            if self.heuristic.is_none() {
                return Verdict::Admit;
            }
            let remaining = m - level;
            if remaining == 0 || real.count_ones() == 1 {
                return if self.target.matches(real) {
                    Verdict::Admit
                } else {
                    Verdict::Pruned
                };
            }
            if self.heuristic.eval(real, remaining) > remaining {
                return Verdict::Pruned;
            }
        }
        Verdict::Admit
    }

    /// Sorted, duplicate-free admitted successors of `frontier`, canonical.
    fn expand(&self, frontier: &[u64], level: u32, pruned: &AtomicU64, stop: &AtomicBool) -> Vec<u64> {
        frontier
            .par_chunks(CHUNK)
            .map_init(
                || MoveGen::new(self.table),
                |gen, chunk| {
                    if stop.load(Ordering::Relaxed) {
                        return Vec::new();
                    }
                    if self.deadline.is_some_and(|d| Instant::now() > d) {
                        stop.store(true, Ordering::Relaxed);
                        return Vec::new();
                    }
                    let mut out = Vec::with_capacity(chunk.len() * 8);
                    let mut rejected = 0u64;
                    for &code in chunk {
                        gen.successors(code, self.direction, |next| match self.verdict(next, level) {
                            Verdict::Admit => out.push(self.geom.canonical_in(self.group, next)),
                            Verdict::Pruned => rejected += 1,
                            Verdict::BelowFloor => {}
                        });
                    }
                    if rejected > 0 {
                        pruned.fetch_add(rejected, Ordering::Relaxed);
                    }
                    out.sort_unstable();
                    out.dedup();
                    out
                },
            )
            .reduce(Vec::new, merge_sorted)
    }
}

fn budget_error(nodes: u64, started: Instant) -> Error {
    Error::BudgetExceeded {
        nodes,
        seconds: started.elapsed().as_secs_f64(),
    }
}

/// Runs a forward search by levels from `start` under `config`.
///
/// With a heuristic and `max_moves = m`, positions are admitted under the
/// bound and the run stops at level `m`. Without a heuristic `max_moves`
/// only caps the depth.
pub fn run_levels(start: &Position, config: &SearchConfig) -> Result<LevelRun> {
    run_with(
        start,
        config,
        Options {
            direction: Direction::Forward,
            stop_on_target: false,
            depth: config.max_moves,
        },
    )
}

pub(crate) fn run_with(start: &Position, config: &SearchConfig, opts: Options) -> Result<LevelRun> {
    config.install(|| run_inner(start, config, opts))
}

fn run_inner(start: &Position, config: &SearchConfig, opts: Options) -> Result<LevelRun> {
    let started = Instant::now();
    let geom = start.geometry();
    let group = config.reduction_group(start);
    let admission = match (opts.direction, config.max_moves, config.heuristic.is_none()) {
        (Direction::Forward, Some(m), false) => Admission::Bounded(m),
        _ => Admission::Open,
    };
    let depth = opts.depth.or(match admission {
        Admission::Bounded(m) => Some(m),
        Admission::Open => None,
    });
    let exp = Expander {
        geom,
        table: geom.jumps(config.variant),
        group,
        direction: opts.direction,
        heuristic: &config.heuristic,
        admission,
        target: config.target,
        floor: config.resource_floor.as_ref(),
        deadline: config
            .budget
            .max_seconds
            .map(|s| started + Duration::from_secs_f64(s.max(0.0))),
    };

    let origin = match opts.direction {
        Direction::Forward => start.code(),
        Direction::Backward => start.complement().code(),
    };
    let mut levels = match &config.spill_dir {
        Some(dir) => LevelStore::disk(dir)?,
        None => LevelStore::memory(),
    };
    let mut run = LevelRun {
        start: *start,
        variant: config.variant,
        direction: opts.direction,
        group,
        bound: match admission {
            Admission::Bounded(m) => Some(m),
            Admission::Open => None,
        },
        levels: LevelStore::memory(),
        stats: Vec::new(),
        pruned: 0,
        exhausted: false,
        target_level: None,
    };

    let l0 = vec![geom.canonical_in(group, origin)];
    let mut nodes = 1u64;
    if opts.direction == Direction::Forward && config.target.matches(start.code()) {
        run.target_level = Some(0);
    }
    levels.push(l0)?;
    run.stats.push(LevelStat {
        level: 0,
        size: 1,
        nodes,
        elapsed: started.elapsed(),
    });

    let pruned = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let mut level = 0u32;
    loop {
        if depth.is_some_and(|d| level >= d) {
            break;
        }
        if opts.stop_on_target && run.target_level.is_some() {
            break;
        }
        level += 1;
        let size = if levels.is_disk() {
            expand_spilled(&exp, &mut levels, level, config.dedup, &pruned, &stop)?
        } else {
            let frontier = levels.get(level as usize - 1).expect("memory");
            let mut next = exp.expand(frontier, level, &pruned, &stop);
            if config.dedup == DedupPolicy::Full {
                for i in 0..level as usize {
                    subtract_sorted(&mut next, levels.get(i).expect("memory").iter().copied());
                }
            }
            let n = next.len() as u64;
            if opts.direction == Direction::Forward
                && run.target_level.is_none()
                && next.iter().any(|&c| config.target.matches(c))
            {
                run.target_level = Some(level as usize);
            }
            levels.push(next)?;
            n
        };
        if stop.load(Ordering::Relaxed) {
            return Err(budget_error(nodes, started));
        }
        if levels.is_disk()
            && opts.direction == Direction::Forward
            && run.target_level.is_none()
            && levels
                .reader(level as usize)?
                .any(|c| config.target.matches(c))
        {
            run.target_level = Some(level as usize);
        }
        nodes += size;
        run.stats.push(LevelStat {
            level: level as usize,
            size,
            nodes,
            elapsed: started.elapsed(),
        });
        if config.budget.max_nodes.is_some_and(|max| nodes > max) {
            return Err(budget_error(nodes, started));
        }
        if size == 0 {
            run.exhausted = true;
            break;
        }
    }
    run.pruned = pruned.load(Ordering::Relaxed);
    run.levels = levels;
    Ok(run)
}

/// Expands the spilled level `level − 1` into `level_<level>.bin` through
/// sorted run files, returning the new level's size.
fn expand_spilled(
    exp: &Expander<'_>,
    levels: &mut LevelStore,
    level: u32,
    dedup: DedupPolicy,
    pruned: &AtomicU64,
    stop: &AtomicBool,
) -> Result<u64> {
    let prev = level as usize - 1;
    let mut frontier = levels.reader(prev)?;
    let mut runs = Vec::new();
    loop {
        let batch: Vec<u64> = frontier.by_ref().take(SPILL_BATCH).collect();
        if batch.is_empty() {
            break;
        }
        let shard = exp.expand(&batch, level, pruned, stop);
        let path = levels.run_path(level as usize, runs.len()).expect("disk");
        super::store::write_level_file(&path, &shard)?;
        runs.push(path);
    }
    frontier.finish()?;

    let readers = runs
        .iter()
        .map(|p| CodeReader::open(p))
        .collect::<std::io::Result<Vec<_>>>()?;
    let merged = KwayMerge::new(readers);
    let priors = match dedup {
        DedupPolicy::Full => (0..level as usize)
            .map(|i| levels.reader(i))
            .collect::<Result<Vec<_>>>()?,
        DedupPolicy::CurrentLevelOnly => Vec::new(),
    };
    let mut priors = KwayMerge::new(priors).peekable();

    let out_path = levels.level_path(level as usize).expect("disk");
    let mut w = BufWriter::new(fs::File::create(&out_path)?);
    let mut size = 0u64;
    let mut merged = merged;
    for code in merged.by_ref() {
        while priors.peek().is_some_and(|&p| p < code) {
            priors.next();
        }
        if priors.peek() == Some(&code) {
            continue;
        }
        w.write_all(&code.to_le_bytes())?;
        size += 1;
    }
    w.flush()?;
    for r in merged.into_sources() {
        r.finish()?;
    }
    for p in &runs {
        fs::remove_file(p)?;
    }
    levels.push_written(size);
    Ok(size)
}

/// Expands one in-memory level: the admitted, canonical successors of
/// `frontier` as level `level`, minus every code in `priors`.
pub fn expand_level(
    start: &Position,
    config: &SearchConfig,
    frontier: &[u64],
    level: u32,
    priors: &[&[u64]],
) -> Vec<u64> {
    let geom = start.geometry();
    let exp = Expander {
        geom,
        table: geom.jumps(config.variant),
        group: config.reduction_group(start),
        direction: Direction::Forward,
        heuristic: &config.heuristic,
        admission: match (config.max_moves, config.heuristic.is_none()) {
            (Some(m), false) => Admission::Bounded(m),
            _ => Admission::Open,
        },
        target: config.target,
        floor: config.resource_floor.as_ref(),
        deadline: None,
    };
    let pruned = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let mut next = config.install(|| exp.expand(frontier, level, &pruned, &stop));
    if config.dedup == DedupPolicy::Full {
        for p in priors {
            subtract_sorted(&mut next, p.iter().copied());
        }
    }
    next
}
