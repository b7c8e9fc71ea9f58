//! Single-vacancy-to-single-survivor problems: shortest solutions by search
//! and guaranteed solutions by composing reference plays through the central
//! waypoints.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::board::{BoardName, Geometry, Hole, Move, Position, Solution, Symmetry, SymmetryGroup, Variant};
use crate::error::{Error, Result};
use crate::heuristics::corner_category_mask;
use crate::invariants::reverse_solution;
use crate::search::{
    reachable_set, search_shortest, Budget, Heuristic, SearchConfig, ShortestResult, SolutionMode,
    Target,
};

mod fixtures;
mod verify;

pub use fixtures::{parse_fixtures, reconstruct_waypoint, transplant, Fixture, FixtureLibrary, P12};
pub use verify::{verify_solution, verify_text, VerifyReport};

/// Start with every hole filled but `vacancy`; finish with one peg on one of
/// `targets` (any hole when `None`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvssProblem {
    pub geometry: &'static Geometry,
    pub variant: Variant,
    pub vacancy: Hole,
    pub targets: Option<u64>,
}

impl SvssProblem {
    pub fn new(geometry: &'static Geometry, variant: Variant, vacancy: Hole, target: Option<Hole>) -> Self {
        SvssProblem {
            geometry,
            variant,
            vacancy,
            targets: target.map(Hole::bit),
        }
    }

    /// The complement problem at `hole`.
    pub fn complement(geometry: &'static Geometry, variant: Variant, hole: Hole) -> Self {
        SvssProblem::new(geometry, variant, hole, Some(hole))
    }

    pub fn start(&self) -> Position {
        self.geometry.vacancy(self.vacancy)
    }

    pub fn accepts(&self, pos: &Position) -> bool {
        pos.pegs() == 1 && self.targets.is_none_or(|t| pos.code() & t != 0)
    }

    fn target_holes(&self) -> Vec<Hole> {
        let mask = self.targets.unwrap_or(self.geometry.full_mask());
        self.geometry.holes().filter(|h| mask & h.bit() != 0).collect()
    }
}

/// Knobs shared by the shortest-solution entry points.
#[derive(Clone, Debug)]
pub struct ShortestOptions {
    /// Analytic lower bound on the length; iterations below it are skipped.
    pub floor: u32,
    pub mode: SolutionMode,
    pub max_moves: Option<u32>,
    pub budget: Budget,
    pub threads: Option<usize>,
    pub spill_dir: Option<std::path::PathBuf>,
    pub symmetry: bool,
    /// Overrides the board's default heuristic.
    pub heuristic: Option<Heuristic>,
}

impl Default for ShortestOptions {
    fn default() -> Self {
        ShortestOptions {
            floor: 0,
            mode: SolutionMode::First,
            max_moves: None,
            budget: Budget::default(),
            threads: None,
            spill_dir: None,
            symmetry: true,
            heuristic: None,
        }
    }
}

#[derive(Debug)]
pub struct ShortestSvss {
    pub length: u32,
    /// Solutions ending on the requested targets, the first being canonical.
    pub solutions: Vec<Solution>,
    pub search: ShortestResult,
}

impl ShortestSvss {
    pub fn solution(&self) -> Option<&Solution> {
        self.solutions.first()
    }
}

/// The heuristic used for `problem` unless overridden: corner counting on the
/// 33- and 37-hole boards (allowing a corner-category survivor only when a
/// target is one), filled Merson regions on diamonds, nothing otherwise.
pub fn default_heuristic(problem: &SvssProblem) -> Result<Heuristic> {
    let geom = problem.geometry;
    let corner_target = problem
        .targets
        .is_none_or(|t| t & corner_category_mask(geom, Variant::Eight) != 0);
    let f = u8::from(corner_target);
    Ok(match (geom.name(), problem.variant) {
        (BoardName::English33 | BoardName::French37, Variant::Eight) => Heuristic::h1(geom, f)?,
        (BoardName::English33, Variant::Four) => Heuristic::h1(geom, f)?,
        (BoardName::Diamond(_), Variant::Eight) => Heuristic::h3(geom, Variant::Eight)?,
        _ => Heuristic::None,
    })
}

/// Union of the images of `mask` under `group`.
fn orbit_mask(geom: &Geometry, group: SymmetryGroup, mask: u64) -> u64 {
    group.iter().fold(0, |m, s| m | geom.transform_code(s, mask))
}

/// A symmetry in `group` carrying `from` onto some hole of `onto`.
fn symmetry_onto(geom: &Geometry, group: SymmetryGroup, from: Hole, onto: u64) -> Option<Symmetry> {
    group
        .iter()
        .find(|&s| geom.transform_hole(s, from).bit() & onto != 0)
}

fn search_config(problem: &SvssProblem, target: Target, opts: &ShortestOptions, heuristic: Heuristic) -> SearchConfig {
    let mut cfg = SearchConfig::new(problem.variant)
        .with_target(target)
        .with_heuristic(heuristic)
        .with_budget(opts.budget)
        .with_symmetry(opts.symmetry);
    cfg.max_moves = opts.max_moves;
    cfg.threads = opts.threads;
    cfg.spill_dir = opts.spill_dir.clone();
    cfg
}

fn is_english_four_central(problem: &SvssProblem) -> bool {
    let geom = problem.geometry;
    geom.name() == BoardName::English33
        && problem.variant == Variant::Four
        && problem.vacancy == geom.center()
        && problem.targets == Some(geom.center().bit())
}

/// Minimum-length solution of `problem`.
///
/// Targets are widened to their images under the start's symmetries, which
/// leaves the optimum unchanged, and the solution found is mapped back onto a
/// requested hole. The four-move central game on the 33-hole board is solved
/// through its last-but-one position: an `n`-move finish at `d1` ends with
/// `d3-d1` from pegs on `d2` and `d3`, and replacing that jump by `d2-d4`
/// gives a central game of at most `n + 1` moves. Its optimality rests on the
/// known 18-move minimum, not on this search alone.
pub fn solve_shortest_svss(problem: &SvssProblem, opts: &ShortestOptions) -> Result<ShortestSvss> {
    let geom = problem.geometry;
    let start = problem.start();
    let stab = geom.stabilizer(start.code(), problem.variant.symmetry_group());
    let group = if opts.symmetry { stab } else { SymmetryGroup::TRIVIAL };

    let english_four = is_english_four_central(problem);
    let requested = if english_four {
        geom.parse_hole("d1")?.bit()
    } else {
        problem.targets.unwrap_or(geom.full_mask())
    };
    let widened = orbit_mask(geom, group, requested);
    let target = if problem.targets.is_none() && !english_four {
        Target::AnySinglePeg
    } else {
        Target::SinglePegIn(widened)
    };
    let heuristic = match (&opts.heuristic, english_four) {
        (Some(h), _) => h.clone(),
        (None, true) => Heuristic::h1(geom, 0)?,
        (None, false) => default_heuristic(problem)?,
    };
    let mut sub_opts = opts.clone();
    if english_four {
        sub_opts.max_moves = opts.max_moves.map(|m| m.saturating_sub(1));
        sub_opts.floor = opts.floor.saturating_sub(1);
    }
    let cfg = search_config(problem, target, &sub_opts, heuristic);
    let result = search_shortest(&start, &cfg, sub_opts.floor, opts.mode)?;

    let mut solutions = Vec::new();
    for sol in &result.solutions {
        let finish = sol.replay()?.single_peg().expect("single-peg target");
        let s = symmetry_onto(geom, group, finish, requested)
            .ok_or_else(|| Error::Infeasible("finish outside the target orbit".into()))?;
        let mut mapped = sol.transform(s);
        if english_four {
            mapped = extend_to_center(mapped)?;
        }
        solutions.push(mapped);
    }
    let length = match solutions.first() {
        Some(sol) if english_four => sol.len() as u32,
        _ => result.length + u32::from(english_four),
    };
    Ok(ShortestSvss {
        length,
        solutions,
        search: result,
    })
}

/// Turns a finish at `d1` on the 33-hole board into a central-game finish by
/// splitting the closing jump `d3-d1` off and playing `d2-d4` instead.
fn extend_to_center(sol: Solution) -> Result<Solution> {
    let geom = sol.geometry();
    let mut moves = sol.moves.clone();
    let last = moves.pop().ok_or_else(|| Error::Infeasible("empty solution".into()))?;
    let mut jumps = last.jumps().to_vec();
    let closing = jumps.pop().expect("moves are non-empty");
    if !jumps.is_empty() {
        moves.push(Move::new(jumps).expect("prefix of a chain"));
    }
    // The peg jumped over now jumps the mover.
    let (ox, oy) = geom.cell(closing.origin);
    let (mx, my) = geom.cell(closing.over);
    let to = geom
        .hole_at(2 * ox as i32 - mx as i32, 2 * oy as i32 - my as i32)
        .ok_or_else(|| Error::Infeasible("no room to finish".into()))?;
    moves.push(Move::single(geom.jump_between(closing.over, to, sol.variant)?));
    let out = Solution::new(sol.variant, sol.start, moves);
    verify_solution(&out)?;
    Ok(out)
}

/// Shortest solution over every single-vacancy start with any single-peg
/// finish; returns the length and the vacancy attaining it.
pub fn shortest_any_svss(geom: &'static Geometry, variant: Variant, opts: &ShortestOptions) -> Result<(u32, Hole)> {
    let group = variant.symmetry_group();
    let mut seen = Vec::new();
    let mut best: Option<(u32, Hole)> = None;
    for v in geom.holes() {
        let canon = geom.canonical_in(group, geom.vacancy(v).code());
        if seen.contains(&canon) {
            continue;
        }
        seen.push(canon);
        let problem = SvssProblem::new(geom, variant, v, None);
        let mut o = opts.clone();
        o.mode = SolutionMode::None;
        if let Some((b, _)) = best {
            o.max_moves = Some(o.max_moves.map_or(b, |m| m.min(b)));
        }
        match solve_shortest_svss(&problem, &o) {
            Ok(r) => {
                if best.is_none_or(|(b, _)| r.length < b) {
                    best = Some((r.length, v));
                }
            }
            Err(Error::Infeasible(_)) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("no single-vacancy start on {} is solvable", geom.name())))
}

/// A fixture from `waypoint` to a lone peg at `hole` (up to symmetry), moved
/// onto `board` and turned so that it finishes exactly at `hole`.
fn leg_to(
    lib: &FixtureLibrary,
    board: BoardName,
    start_name: &str,
    sources: &[BoardName],
    hole: Hole,
) -> Result<Solution> {
    let geom = Geometry::get(board);
    for f in lib.iter().filter(|f| f.start == start_name && sources.contains(&f.board)) {
        let Ok(sol) = lib.solution(f).and_then(|s| transplant(&s, board)) else {
            continue;
        };
        let Some(finish) = sol.replay()?.single_peg() else { continue };
        if let Some(s) = symmetry_onto(geom, SymmetryGroup::FULL, finish, hole.bit()) {
            return Ok(sol.transform(s));
        }
    }
    Err(Error::Fixture {
        name: start_name.into(),
        reason: format!("no reference play reaches {} on {board}", geom.hole_name(hole)),
    })
}

/// Solutions found by direct search, keyed by board, vacancy and target mask.
type DirectCache = Mutex<HashMap<(BoardName, u8, u64), Solution>>;

fn direct_cache() -> &'static DirectCache {
    static CACHE: std::sync::OnceLock<DirectCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn solve_directly(problem: &SvssProblem) -> Result<Solution> {
    let key = (
        problem.geometry.name(),
        problem.vacancy.0,
        problem.targets.unwrap_or(u64::MAX),
    );
    if let Some(s) = direct_cache().lock().expect("cache").get(&key) {
        return Ok(s.clone());
    }
    let found = match solve_shortest_svss(problem, &ShortestOptions::default()) {
        Ok(r) => r.solutions.into_iter().next().expect("first solution requested"),
        Err(Error::Infeasible(_)) => {
            let geom = problem.geometry;
            let reach = reachable_set(&problem.start(), problem.variant, false)?;
            let finishes: Vec<String> = reach.finishes.iter().map(|&h| geom.hole_name(h)).collect();
            return Err(Error::Infeasible(format!(
                "from {}' a lone peg can finish only at {{{}}}",
                geom.hole_name(problem.vacancy),
                finishes.join(", ")
            )));
        }
        Err(e) => return Err(e),
    };
    direct_cache().lock().expect("cache").insert(key, found.clone());
    Ok(found)
}

/// A solution (not necessarily shortest) built from reference plays: undo a
/// waypoint-to-`a` play to go from `a′` to the waypoint's complement, bridge
/// to the waypoint, then play the waypoint-to-`b` reference.
///
/// On the 33-hole board the waypoint is the 12-peg position P12 and the
/// bridge from P12′ to C9 uses orthogonal jumps only; on the 37-hole board
/// and Diamond(5) the waypoint is C9 itself. The small diamonds are searched
/// directly.
pub fn solve_any(problem: &SvssProblem) -> Result<Solution> {
    let geom = problem.geometry;
    let board = geom.name();
    if problem.variant != Variant::Eight {
        return Err(Error::Unsupported("composition needs eight-move jumps".into()));
    }
    let b = *problem
        .target_holes()
        .first()
        .ok_or_else(|| Error::Infeasible("no target holes".into()))?;
    let a = problem.vacancy;

    let solution = match board {
        BoardName::Diamond(3) | BoardName::Diamond(4) => solve_directly(problem)?,
        BoardName::English33 | BoardName::French37 | BoardName::Diamond(5) => {
            let lib = FixtureLibrary::builtin()?;
            let c9_sources: &[BoardName] = match board {
                BoardName::English33 => &[BoardName::English33],
                _ => &[BoardName::English33, BoardName::French37, BoardName::Diamond(5)],
            };
            let out = leg_to(lib, board, "C9", c9_sources, b)?;
            let (into, bridge) = match board {
                BoardName::English33 => {
                    let w = leg_to(lib, board, P12, &[BoardName::English33], a)?;
                    // The same symmetry turns the waypoint and its bridge.
                    let s = SymmetryGroup::FULL
                        .iter()
                        .find(|&s| lib.waypoint().transform(s) == w.start)
                        .expect("leg starts at an image of the waypoint");
                    let bridge = lib.solution_named("p12-bridge")?.transform(s);
                    (w, bridge)
                }
                BoardName::French37 => (
                    leg_to(lib, board, "C9", c9_sources, a)?,
                    lib.solution_named("french-c9")?,
                ),
                _ => (
                    leg_to(lib, board, "C9", c9_sources, a)?,
                    lib.solution_named("diamond5-c9")?,
                ),
            };
            let first = reverse_solution(&into)?;
            first.concat(&bridge).concat(&out)
        }
        _ => return Err(Error::Unsupported(format!("no composition route on {board}"))),
    };
    let report = verify_solution(&solution)?;
    if solution.start != problem.start() || report.final_position != geom.single(b) {
        return Err(Error::Infeasible("composed solution misses its target".into()));
    }
    Ok(solution)
}

/// Searches for the orthogonal-jump bridge from P12′ to C9 on the 33-hole
/// board; its result is stored as the `p12-bridge` fixture.
pub fn find_p12_bridge(budget: Budget) -> Result<Solution> {
    let lib = FixtureLibrary::builtin()?;
    let geom = Geometry::get(BoardName::English33);
    let start = lib.waypoint().complement();
    let c9 = geom.position(geom.central_nine());
    let mut cfg = SearchConfig::new(Variant::Four)
        .with_target(Target::Exact(c9.code()))
        .with_heuristic(Heuristic::h2(geom, Variant::Four))
        .with_budget(budget);
    cfg.symmetry = true;
    let r = search_shortest(&start, &cfg, 0, SolutionMode::First)?;
    Ok(r.solutions.into_iter().next().expect("first solution requested"))
}
