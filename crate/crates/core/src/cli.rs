//! The `pegsol` command-line tool.
//!
//! Every command can print `key=value` line records (`--records`); with
//! `--no-timing` as well the output is byte-for-byte reproducible.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::board::{Geometry, Position, Solution, Variant};
use crate::error::{Error, Result};
use crate::heuristics::{derive_merson_decomposition, find_corners, validate_merson_region};
use crate::invariants::{
    category_counts, category_mask, category_of, derive_resource_count, position_class, Category,
    Constraint, DeriveOptions, ResourceCount,
};
use crate::search::{
    bidirectional_meet, reachable_set, run_levels, search_shortest, Budget, Heuristic, SearchConfig,
    SolutionMode, Target,
};
use crate::solver::{
    default_heuristic, solve_any, solve_shortest_svss, verify_solution, verify_text, FixtureLibrary,
    ShortestOptions, SvssProblem,
};

#[derive(Debug, Parser)]
#[command(name = "pegsol", version, about = "Peg solitaire solver for 4-, 6- and 8-move play")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Print `key=value` records, one per line.
    #[arg(long, global = true)]
    pub records: bool,
    /// Leave wall-clock times out of the output.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Worker threads for the search.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Stop a search after this many nodes.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Stop a search after this many seconds.
    #[arg(long, global = true)]
    pub max_seconds: Option<f64>,
    /// Keep level sets in files under this directory instead of memory.
    #[arg(long, global = true)]
    pub spill_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a single-vacancy problem, or any start/finish pair.
    Solve(SolveArgs),
    /// Replay a solution and report where it ends.
    Verify(VerifyArgs),
    /// Print the level sizes of a search by levels.
    Levels(LevelsArgs),
    /// Report invariants of a board.
    Analyze(AnalyzeArgs),
    /// Count every position reachable from a start (boards of 32 holes or fewer).
    Reach(ReachArgs),
    /// Check the built-in reference solutions.
    Fixtures(FixturesArgs),
    /// Intersect forward and backward level sets to bound a solution length.
    Meet(MeetArgs),
}

#[derive(Debug, Args)]
pub struct BoardArgs {
    /// english-33, french-37 or diamond-N.
    pub board: String,
    /// 4, 6 (or 6-nesw) or 8.
    #[arg(long, default_value = "8")]
    pub variant: String,
}

impl BoardArgs {
    fn resolve(&self) -> Result<(&'static Geometry, Variant)> {
        Ok((Geometry::named(&self.board)?, self.variant.parse()?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeuristicKind {
    /// The board's usual bound.
    Auto,
    None,
    /// Corner counting.
    H1,
    /// Corner counting plus unfilled central holes.
    H2,
    /// Filled Merson regions.
    H3,
}

#[derive(Debug, Args)]
pub struct HeuristicArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub heuristic: HeuristicKind,
    /// Survivor allowance for h1: 1 lets the last peg sit in a corner category.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub f: Option<u8>,
}

impl HeuristicArgs {
    /// `None` for `auto`, leaving the choice to the solver.
    fn explicit(&self, geom: &'static Geometry, variant: Variant) -> Result<Option<Heuristic>> {
        Ok(match self.heuristic {
            HeuristicKind::Auto => match self.f {
                Some(f) => Heuristic::h1(geom, f).ok(),
                None => None,
            },
            HeuristicKind::None => Some(Heuristic::None),
            HeuristicKind::H1 => Some(Heuristic::h1(geom, self.f.unwrap_or(1))?),
            HeuristicKind::H2 => Some(Heuristic::h2(geom, variant)),
            HeuristicKind::H3 => Some(Heuristic::h3(geom, variant)?),
        })
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    /// Empty hole of the start (default: the center).
    #[arg(long, conflicts_with = "start")]
    pub vacancy: Option<String>,
    /// Finishing hole, or `any`.
    #[arg(long, conflicts_with = "finish")]
    pub target: Option<String>,
    /// General start position: a grid or a short name such as `C9'`.
    #[arg(long, requires = "finish")]
    pub start: Option<String>,
    /// General finishing position.
    #[arg(long, requires = "start")]
    pub finish: Option<String>,
    /// Minimum number of moves (the default).
    #[arg(long, conflicts_with = "any")]
    pub shortest: bool,
    /// Any solution, built from reference plays.
    #[arg(long)]
    pub any: bool,
    #[command(flatten)]
    pub heuristic: HeuristicArgs,
    /// Known lower bound on the length; shorter bounds are not tried.
    #[arg(long, default_value_t = 0)]
    pub floor: u32,
    /// Largest length tried.
    #[arg(long)]
    pub max_moves: Option<u32>,
    /// Print up to this many shortest solutions.
    #[arg(long)]
    pub all: Option<usize>,
    /// Search without symmetry reduction.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Print the final position.
    #[arg(long)]
    pub show: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    /// Start position (grid or short name); default: the center vacancy.
    #[arg(long)]
    pub start: Option<String>,
    /// Solution text, e.g. `d2-d4, f3-d3`.
    #[arg(long, conflicts_with = "file")]
    pub solution: Option<String>,
    /// File holding the solution text.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Expected final position.
    #[arg(long)]
    pub finish: Option<String>,
}

#[derive(Debug, Args)]
pub struct LevelsArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    #[arg(long, conflicts_with = "start")]
    pub vacancy: Option<String>,
    #[arg(long)]
    pub start: Option<String>,
    /// Finishing hole or `any` (default); with `--finish` an exact position.
    #[arg(long, conflicts_with = "finish")]
    pub target: Option<String>,
    #[arg(long)]
    pub finish: Option<String>,
    /// The bound m; without a heuristic it only caps the depth.
    #[arg(long)]
    pub max_moves: Option<u32>,
    /// Heuristic for the bound (none unless given).
    #[arg(long, value_enum, default_value = "none")]
    pub heuristic: HeuristicKind,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub f: Option<u8>,
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    /// Four-move position class.
    Class,
    /// Peg categories.
    Categories,
    /// Holes no jump can pass over.
    Corners,
    /// Merson regions of a diamond board.
    Regions,
    /// Check or derive a resource count.
    Resource,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    #[arg(long, value_enum)]
    pub what: Analysis,
    /// Position to analyse (default: the full board).
    #[arg(long)]
    pub position: Option<String>,
    /// Weight grid file for `resource`.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// For `resource`: derive a count proving `--position` cannot reach `--finish`.
    #[arg(long, requires = "finish")]
    pub derive: bool,
    #[arg(long)]
    pub finish: Option<String>,
    /// Largest weight magnitude tried when deriving.
    #[arg(long, default_value_t = 3)]
    pub bound: i32,
}

#[derive(Debug, Args)]
pub struct ReachArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    #[arg(long, conflicts_with = "start")]
    pub vacancy: Option<String>,
    #[arg(long)]
    pub start: Option<String>,
    /// Also count symmetry classes.
    #[arg(long)]
    pub classes: bool,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// Print this fixture's solution and final position.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct MeetArgs {
    #[command(flatten)]
    pub board: BoardArgs,
    #[arg(long)]
    pub start: String,
    #[arg(long)]
    pub finish: String,
    /// Forward depth.
    #[arg(long)]
    pub a: u32,
    /// Backward depth.
    #[arg(long)]
    pub b: u32,
    #[command(flatten)]
    pub heuristic: HeuristicArgs,
}

/// Collects output as human lines or `key=value` records.
struct Out<'a> {
    w: &'a mut dyn Write,
    records: bool,
    timing: bool,
}

impl Out<'_> {
    /// One record; in human mode the pairs print as `key: value`.
    fn rec(&mut self, pairs: &[(&str, String)]) -> Result<()> {
        let line = if self.records {
            pairs
                .iter()
                .map(|(k, v)| format!("{k}={}", v.replace(' ', "")))
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            pairs
                .iter()
                .map(|(k, v)| format!("{k}: {v}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(self.w, "{line}")?;
        Ok(())
    }

    /// Free text shown only in human mode.
    fn text(&mut self, s: impl std::fmt::Display) -> Result<()> {
        if !self.records {
            write!(self.w, "{s}")?;
        }
        Ok(())
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let mut o = Out {
        w: out,
        records: cli.global.records,
        timing: !cli.global.no_timing,
    };
    match dispatch(&cli, &mut o) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, o: &mut Out) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Solve(a) => solve(g, a, o),
        Command::Verify(a) => verify(a, o),
        Command::Levels(a) => levels(g, a, o),
        Command::Analyze(a) => analyze(a, o),
        Command::Reach(a) => reach(a, o),
        Command::Fixtures(a) => fixtures(a, o),
        Command::Meet(a) => meet(g, a, o),
    }
}

fn budget(g: &GlobalArgs) -> Budget {
    Budget {
        max_nodes: g.max_nodes,
        max_seconds: g.max_seconds,
    }
}

fn start_of(geom: &'static Geometry, vacancy: Option<&str>, start: Option<&str>) -> Result<Position> {
    match (vacancy, start) {
        (_, Some(s)) => geom.parse_position_spec(s),
        (Some(v), None) => Ok(geom.vacancy(geom.parse_hole(v)?)),
        (None, None) => Ok(geom.vacancy(geom.center())),
    }
}

fn target_of(geom: &'static Geometry, target: Option<&str>, finish: Option<&str>) -> Result<Target> {
    match (target, finish) {
        (_, Some(f)) => Ok(Target::Exact(geom.parse_position_spec(f)?.code())),
        (Some(t), None) if !t.eq_ignore_ascii_case("any") => {
            Ok(Target::SinglePegIn(geom.parse_hole(t)?.bit()))
        }
        _ => Ok(Target::AnySinglePeg),
    }
}

fn solution_line(sol: &Solution, records: bool) -> String {
    if records {
        sol.to_text().replace(' ', "")
    } else {
        sol.to_text()
    }
}

fn solve(g: &GlobalArgs, a: &SolveArgs, o: &mut Out) -> Result<i32> {
    let (geom, variant) = a.board.resolve()?;
    let explicit = a.heuristic.explicit(geom, variant)?;

    if let (Some(start), Some(finish)) = (&a.start, &a.finish) {
        let start = geom.parse_position_spec(start)?;
        let finish = geom.parse_position_spec(finish)?;
        let heuristic = match explicit {
            Some(h) => h,
            None if finish.code() == geom.central_nine() => Heuristic::h2(geom, variant),
            None => Heuristic::None,
        };
        let mut cfg = SearchConfig::new(variant)
            .with_target(Target::Exact(finish.code()))
            .with_heuristic(heuristic)
            .with_budget(budget(g))
            .with_symmetry(!a.no_symmetry);
        cfg.max_moves = a.max_moves;
        cfg.threads = g.threads;
        cfg.spill_dir = g.spill_dir.clone();
        let mode = a.all.map_or(SolutionMode::First, |limit| SolutionMode::All { limit });
        let r = search_shortest(&start, &cfg, a.floor, mode)?;
        report_shortest(o, r.length, &r.solutions, &cfg.heuristic.label(), r.nodes_total, r.nodes_final, a.show)?;
        return Ok(0);
    }

    let vacancy = match &a.vacancy {
        Some(v) => geom.parse_hole(v)?,
        None => geom.center(),
    };
    let target = match a.target.as_deref() {
        None => None,
        Some(t) if t.eq_ignore_ascii_case("any") => None,
        Some(t) => Some(geom.parse_hole(t)?),
    };
    let problem = SvssProblem::new(geom, variant, vacancy, target);

    if a.any {
        let sol = solve_any(&problem)?;
        o.rec(&[
            ("length", sol.len().to_string()),
            ("method", "composition".into()),
        ])?;
        o.rec(&[("solution", solution_line(&sol, o.records))])?;
        if a.show {
            o.text(sol.replay()?)?;
        }
        return Ok(0);
    }

    let opts = ShortestOptions {
        floor: a.floor,
        mode: a.all.map_or(SolutionMode::First, |limit| SolutionMode::All { limit }),
        max_moves: a.max_moves,
        budget: budget(g),
        threads: g.threads,
        spill_dir: g.spill_dir.clone(),
        symmetry: !a.no_symmetry,
        heuristic: explicit,
    };
    let label = match &opts.heuristic {
        Some(h) => h.label(),
        None => default_heuristic(&problem)?.label(),
    };
    let r = solve_shortest_svss(&problem, &opts)?;
    report_shortest(
        o,
        r.length,
        &r.solutions,
        &label,
        r.search.nodes_total,
        r.search.nodes_final,
        a.show,
    )?;
    Ok(0)
}

fn report_shortest(
    o: &mut Out,
    length: u32,
    solutions: &[Solution],
    heuristic: &str,
    nodes_total: u64,
    nodes_final: u64,
    show: bool,
) -> Result<()> {
    o.rec(&[
        ("length", length.to_string()),
        ("heuristic", heuristic.to_string()),
        ("nodes_total", nodes_total.to_string()),
        ("nodes_final", nodes_final.to_string()),
        ("solutions", solutions.len().to_string()),
    ])?;
    for sol in solutions {
        o.rec(&[("solution", solution_line(sol, o.records))])?;
    }
    if show {
        if let Some(sol) = solutions.first() {
            o.text(sol.replay()?)?;
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs, o: &mut Out) -> Result<i32> {
    let (geom, variant) = a.board.resolve()?;
    let start = start_of(geom, None, a.start.as_deref())?;
    let text = match (&a.solution, &a.file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)?,
        (None, None) => return Err(Error::MalformedMove("give --solution or --file".into())),
    };
    let report = verify_text(start, variant, &text)?;
    let finish_ok = match &a.finish {
        Some(f) => geom.parse_position_spec(f)? == report.final_position,
        None => true,
    };
    let survivor = report
        .final_position
        .single_peg()
        .map_or("-".to_string(), |h| geom.hole_name(h));
    o.rec(&[
        ("legal", "true".into()),
        ("moves", report.moves.to_string()),
        ("jumps", report.jumps.to_string()),
        ("diagonal_jumps", report.diagonal_jumps.to_string()),
        ("longest_move", report.longest_move.to_string()),
        ("pegs", report.final_position.pegs().to_string()),
        ("survivor", survivor),
        ("finish_ok", finish_ok.to_string()),
    ])?;
    o.text(report.final_position)?;
    if finish_ok {
        Ok(0)
    } else {
        Err(Error::MalformedPosition("the solution does not end at the stated finish".into()))
    }
}

fn levels(g: &GlobalArgs, a: &LevelsArgs, o: &mut Out) -> Result<i32> {
    let (geom, variant) = a.board.resolve()?;
    let start = start_of(geom, a.vacancy.as_deref(), a.start.as_deref())?;
    let target = target_of(geom, a.target.as_deref(), a.finish.as_deref())?;
    let h = HeuristicArgs {
        heuristic: a.heuristic,
        f: a.f,
    };
    let heuristic = h.explicit(geom, variant)?.unwrap_or_default();
    if !heuristic.is_none() && a.max_moves.is_none() {
        return Err(Error::Unsupported("a heuristic needs a bound (--max-moves)".into()));
    }
    let mut cfg = SearchConfig::new(variant)
        .with_target(target)
        .with_heuristic(heuristic)
        .with_budget(budget(g))
        .with_symmetry(!a.no_symmetry);
    cfg.max_moves = a.max_moves;
    cfg.threads = g.threads;
    cfg.spill_dir = g.spill_dir.clone();
    let bounded = !cfg.heuristic.is_none();
    let run = run_levels(&start, &cfg)?;
    for s in &run.stats {
        if o.records {
            writeln!(o.w, "{}", s.record(o.timing))?;
        } else {
            let time = if o.timing {
                format!("  {:>8.3} s", s.elapsed.as_secs_f64())
            } else {
                String::new()
            };
            writeln!(o.w, "L{:<3} {:>12} {:>14}{time}", s.level, s.size, s.nodes)?;
        }
    }
    let finishes = match run.target_level {
        Some(l) => run.targets_at(l, target)?.len(),
        None => 0,
    };
    o.rec(&[
        ("heuristic", cfg.heuristic.label()),
        ("nodes", run.nodes().to_string()),
        (
            "target_level",
            run.target_level.map_or("-".into(), |l| l.to_string()),
        ),
        ("finishes", finishes.to_string()),
    ])?;
    // A bounded run, or one that ran dry, proves there is nothing shorter.
    let proven = run.target_level.is_none() && (bounded || run.exhausted);
    if proven {
        let m = a.max_moves.map_or("any length".into(), |m| format!("length <= {m}"));
        o.text(format!("no solution of {m}\n"))?;
        return Ok(1);
    }
    Ok(0)
}

fn analyze(a: &AnalyzeArgs, o: &mut Out) -> Result<i32> {
    let (geom, variant) = a.board.resolve()?;
    let pos = match &a.position {
        Some(p) => geom.parse_position_spec(p)?,
        None => geom.full(),
    };
    let names = |mask: u64| -> String {
        geom.holes()
            .filter(|h| mask & h.bit() != 0)
            .map(|h| geom.hole_name(h))
            .collect::<Vec<_>>()
            .join(",")
    };
    match a.what {
        Analysis::Class => {
            let class = position_class(&pos);
            let empty = position_class(&geom.empty());
            o.rec(&[
                ("class", class.to_string()),
                ("empty_class", empty.to_string()),
                ("same_as_empty", (class == empty).to_string()),
            ])?;
        }
        Analysis::Categories => {
            let counts = category_counts(&pos);
            for c in 0..4u8 {
                o.rec(&[
                    ("category", c.to_string()),
                    ("pegs", counts[c as usize].to_string()),
                    ("holes", names(category_mask(geom, Category(c)))),
                ])?;
            }
            let side = geom.side() as i32;
            let mut grid = String::new();
            for y in 0..side {
                for x in 0..side {
                    grid.push(match geom.hole_at(x, y) {
                        Some(h) => (b'0' + category_of(geom, h).0) as char,
                        None => '#',
                    });
                }
                grid.push('\n');
            }
            o.text(grid)?;
        }
        Analysis::Corners => {
            let corners = find_corners(geom, variant);
            let mask = corners.iter().fold(0, |m, h| m | h.bit());
            o.rec(&[("corners", corners.len().to_string()), ("holes", names(mask))])?;
        }
        Analysis::Regions => {
            let dec = derive_merson_decomposition(geom, variant)?;
            for (name, placements) in dec.named_regions() {
                for p in &placements {
                    validate_merson_region(geom, variant, *p).map_err(|j| {
                        Error::Infeasible(format!(
                            "region {name} fails at {}-{}",
                            geom.hole_name(j.origin),
                            geom.hole_name(j.target)
                        ))
                    })?;
                }
                o.rec(&[
                    ("region", name),
                    ("placements", placements.len().to_string()),
                    ("holes", names(placements[0])),
                ])?;
            }
            o.rec(&[
                ("regions", dec.region_count().to_string()),
                ("valid", "true".into()),
                ("filled", dec.filled_regions(pos.code()).to_string()),
            ])?;
        }
        Analysis::Resource => return resource(geom, variant, a, pos, o),
    }
    Ok(0)
}

fn resource(geom: &'static Geometry, variant: Variant, a: &AnalyzeArgs, pos: Position, o: &mut Out) -> Result<i32> {
    if let Some(path) = &a.weights {
        let rc = ResourceCount::parse(geom, variant, &std::fs::read_to_string(path)?)?;
        if let Some(j) = rc.violation() {
            o.rec(&[
                ("valid", "false".into()),
                (
                    "witness",
                    format!("{}-{}", geom.hole_name(j.origin), geom.hole_name(j.target)),
                ),
                ("delta", rc.delta(j).to_string()),
            ])?;
            return Ok(1);
        }
        let mut pairs = vec![("valid", "true".to_string()), ("value", rc.value(&pos).to_string())];
        if let Some(f) = &a.finish {
            let finish = geom.parse_position_spec(f)?;
            let v = rc.value(&finish);
            pairs.push(("finish_value", v.to_string()));
            pairs.push(("proves_unreachable", (v > rc.value(&pos)).to_string()));
        }
        o.rec(&pairs)?;
        return Ok(0);
    }
    if a.derive {
        let finish = geom.parse_position_spec(a.finish.as_deref().expect("required by clap"))?;
        let options = DeriveOptions {
            bound: a.bound,
            symmetric: false,
        };
        let constraints = [Constraint::Separates { from: pos, to: finish }];
        if let Some(rc) = derive_resource_count(geom, variant, &constraints, options) {
            o.rec(&[
                ("derived", "true".into()),
                ("start_value", rc.value(&pos).to_string()),
                ("finish_value", rc.value(&finish).to_string()),
            ])?;
            o.text(&rc)?;
            if o.records {
                let weights: Vec<String> = rc.weights().iter().map(i32::to_string).collect();
                o.rec(&[("weights", weights.join(","))])?;
            }
            return Ok(0);
        }
        o.rec(&[("derived", "false".into())])?;
        return Ok(1);
    }
    Err(Error::MalformedWeights("give --weights FILE or --derive --finish POS".into()))
}

fn reach(a: &ReachArgs, o: &mut Out) -> Result<i32> {
    let (geom, variant) = a.board.resolve()?;
    let start = start_of(geom, a.vacancy.as_deref(), a.start.as_deref())?;
    let r = reachable_set(&start, variant, a.classes)?;
    let finishes: Vec<String> = r.finishes.iter().map(|&h| geom.hole_name(h)).collect();
    let mut pairs = vec![("positions", r.count.to_string())];
    if let Some(c) = r.classes {
        pairs.push(("classes", c.to_string()));
    }
    pairs.push(("finishes", finishes.join(",")));
    o.rec(&pairs)?;
    Ok(0)
}

fn fixtures(a: &FixturesArgs, o: &mut Out) -> Result<i32> {
    let lib = FixtureLibrary::builtin()?;
    if let Some(name) = &a.name {
        let f = lib.get(name).ok_or_else(|| Error::Fixture {
            name: name.clone(),
            reason: "no such fixture".into(),
        })?;
        let sol = lib.check(f)?;
        let report = verify_solution(&sol)?;
        o.rec(&[
            ("name", f.name.clone()),
            ("board", f.board.to_string()),
            ("variant", f.variant.to_string()),
            ("moves", report.moves.to_string()),
            ("longest_move", report.longest_move.to_string()),
        ])?;
        o.rec(&[("solution", solution_line(&sol, o.records))])?;
        o.text(sol.start)?;
        o.text("\n")?;
        o.text(report.final_position)?;
        return Ok(0);
    }
    let mut failed = 0;
    for f in lib.iter() {
        let status = match lib.check(f) {
            Ok(_) => "ok".to_string(),
            Err(e) => {
                failed += 1;
                format!("FAIL ({e})")
            }
        };
        o.rec(&[
            ("name", f.name.clone()),
            ("board", f.board.to_string()),
            ("variant", f.variant.to_string()),
            ("start", f.start.clone()),
            ("finish", f.finish.clone()),
            ("moves", f.moves.to_string()),
            ("status", status),
        ])?;
    }
    Ok(if failed == 0 { 0 } else { 2 })
}

fn meet(g: &GlobalArgs, a: &MeetArgs, o: &mut Out) -> Result<i32> {
    let (geom, variant) = a.board.resolve()?;
    let start = geom.parse_position_spec(&a.start)?;
    let finish = geom.parse_position_spec(&a.finish)?;
    let mut cfg = SearchConfig::new(variant)
        .with_heuristic(a.heuristic.explicit(geom, variant)?.unwrap_or_default())
        .with_budget(budget(g));
    cfg.threads = g.threads;
    cfg.spill_dir = g.spill_dir.clone();
    let r = bidirectional_meet(&start, &finish, a.a, a.b, &cfg)?;
    o.rec(&[
        ("a", a.a.to_string()),
        ("b", a.b.to_string()),
        ("forward_nodes", r.forward.nodes().to_string()),
        ("backward_nodes", r.backward.nodes().to_string()),
        ("meet", r.meet.len().to_string()),
    ])?;
    if r.is_empty() {
        o.text(format!("no solution of length <= {}\n", a.a + a.b))?;
        Ok(1)
    } else {
        Ok(0)
    }
}
