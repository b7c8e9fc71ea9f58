//! Reference solutions shipped with the crate.
//!
//! Each entry is a header comment followed by one line of solution text:
//!
//! ```text
//! # name=c9-d1 board=english-33 variant=8 start=C9 finish=d1 moves=3
//! d4-b4-d6-f4-d2, c3-e3, d5-f3-d3-d1
//! ```
//!
//! `start` and `finish` take the short position names (`C9`, `d4'`, `e1`, …)
//! plus `P12` for the waypoint recovered from the entries that start there.

use std::sync::OnceLock;

use crate::board::{BoardName, Geometry, Position, Solution, Variant};
use crate::error::{Error, Result};

const SOURCES: [(&str, &str); 4] = [
    ("c9_to_hole.txt", include_str!("../../fixtures/c9_to_hole.txt")),
    ("p12_to_hole.txt", include_str!("../../fixtures/p12_to_hole.txt")),
    ("minimum.txt", include_str!("../../fixtures/minimum.txt")),
    ("p12_bridge.txt", include_str!("../../fixtures/p12_bridge.txt")),
];

/// Name of the waypoint recovered by undoing its fixtures.
pub const P12: &str = "P12";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub board: BoardName,
    pub variant: Variant,
    pub start: String,
    pub finish: String,
    pub moves: usize,
    pub text: String,
}

impl Fixture {
    pub fn geometry(&self) -> &'static Geometry {
        Geometry::get(self.board)
    }

    fn error(&self, reason: impl Into<String>) -> Error {
        Error::Fixture {
            name: self.name.clone(),
            reason: reason.into(),
        }
    }

    pub fn finish_position(&self) -> Result<Position> {
        self.geometry().parse_position_spec(&self.finish)
    }

    fn starts_at_waypoint(&self) -> bool {
        self.start.trim_end_matches('\'') == P12
    }
}

pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    let mut pending: Option<Fixture> = None;
    for line in text.lines().map(str::trim) {
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let header = header.trim();
            if !header.starts_with("name=") {
                continue;
            }
            if let Some(f) = pending.take() {
                return Err(f.error("header without a solution line"));
            }
            let field = |key: &str| -> Result<String> {
                header
                    .split_whitespace()
                    .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
                    .map(str::to_string)
                    .ok_or_else(|| Error::Fixture {
                        name: header.to_string(),
                        reason: format!("missing `{key}`"),
                    })
            };
            let name = field("name")?;
            let moves = field("moves")?.parse().map_err(|_| Error::Fixture {
                name: name.clone(),
                reason: "`moves` is not a number".into(),
            })?;
            pending = Some(Fixture {
                board: field("board")?.parse()?,
                variant: field("variant")?.parse()?,
                start: field("start")?,
                finish: field("finish")?,
                moves,
                name,
                text: String::new(),
            });
        } else {
            let mut f = pending
                .take()
                .ok_or_else(|| Error::MalformedMove(format!("solution line without header: {line}")))?;
            f.text = line.to_string();
            out.push(f);
        }
    }
    if let Some(f) = pending {
        return Err(f.error("header without a solution line"));
    }
    Ok(out)
}

/// Undoes a solution from its final position to recover where it began.
fn undo(fixture: &Fixture) -> Result<Position> {
    let geom = fixture.geometry();
    let finish = fixture.finish_position()?;
    let moves = Solution::parse(&fixture.text, fixture.variant, finish)?.moves;
    let mut bits = finish.code();
    for j in moves.iter().rev().flat_map(|m| m.jumps().iter().rev()) {
        let ok = bits & j.target.bit() != 0 && bits & (j.origin.bit() | j.over.bit()) == 0;
        if !ok {
            return Err(fixture.error(format!(
                "cannot undo {}-{}",
                geom.hole_name(j.origin),
                geom.hole_name(j.target)
            )));
        }
        bits = j.apply(bits);
    }
    Ok(geom.position(bits))
}

/// Recovers the common start of `fixtures` by undoing each from its final
/// position; all of them must agree.
pub fn reconstruct_waypoint(fixtures: &[&Fixture]) -> Result<Position> {
    let mut found: Option<Position> = None;
    for f in fixtures {
        let start = undo(f)?;
        match found {
            None => found = Some(start),
            Some(p) if p == start => {}
            Some(p) => {
                return Err(f.error(format!("starts from a different position:\n{start}\nversus\n{p}")))
            }
        }
    }
    found.ok_or_else(|| Error::Fixture {
        name: P12.into(),
        reason: "no fixtures to undo".into(),
    })
}

#[derive(Debug)]
pub struct FixtureLibrary {
    fixtures: Vec<Fixture>,
    waypoint: Position,
}

impl FixtureLibrary {
    /// The built-in library, checked on first use.
    pub fn builtin() -> Result<&'static FixtureLibrary> {
        static LIB: OnceLock<std::result::Result<FixtureLibrary, String>> = OnceLock::new();
        LIB.get_or_init(|| FixtureLibrary::load().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Fixture {
                name: "library".into(),
                reason: e.clone(),
            })
    }

    fn load() -> Result<FixtureLibrary> {
        let mut fixtures = Vec::new();
        for (_, text) in SOURCES {
            fixtures.extend(parse_fixtures(text)?);
        }
        let from_waypoint: Vec<&Fixture> = fixtures
            .iter()
            .filter(|f| f.start == P12)
            .collect();
        let waypoint = reconstruct_waypoint(&from_waypoint)?;
        Ok(FixtureLibrary { fixtures, waypoint })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fixture> {
        self.fixtures.iter()
    }

    pub fn get(&self, name: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.name == name)
    }

    /// The 12-peg waypoint on the 33-hole board.
    pub fn waypoint(&self) -> Position {
        self.waypoint
    }

    pub fn start_position(&self, fixture: &Fixture) -> Result<Position> {
        if fixture.starts_at_waypoint() {
            if fixture.board != BoardName::English33 {
                return Err(fixture.error("the waypoint exists on the 33-hole board only"));
            }
            return Ok(if fixture.start.ends_with('\'') {
                self.waypoint.complement()
            } else {
                self.waypoint
            });
        }
        fixture.geometry().parse_position_spec(&fixture.start)
    }

    pub fn solution(&self, fixture: &Fixture) -> Result<Solution> {
        Solution::parse(&fixture.text, fixture.variant, self.start_position(fixture)?)
    }

    pub fn solution_named(&self, name: &str) -> Result<Solution> {
        let f = self.get(name).ok_or_else(|| Error::Fixture {
            name: name.into(),
            reason: "no such fixture".into(),
        })?;
        self.solution(f)
    }

    /// Replays `fixture` and checks its documented length and finish.
    pub fn check(&self, fixture: &Fixture) -> Result<Solution> {
        let sol = self.solution(fixture)?;
        let report = super::verify::verify_solution(&sol)?;
        if report.moves != fixture.moves {
            return Err(fixture.error(format!("{} moves, documented {}", report.moves, fixture.moves)));
        }
        if report.final_position != fixture.finish_position()? {
            return Err(fixture.error(format!("ends at\n{}", report.final_position)));
        }
        Ok(sol)
    }
}

/// Moves `solution` onto `board`, aligning the two centers; every hole it
/// touches must exist there.
pub fn transplant(solution: &Solution, board: BoardName) -> Result<Solution> {
    let from = solution.geometry();
    let to = Geometry::get(board);
    if from.name() == board {
        return Ok(solution.clone());
    }
    let (cx0, cy0) = from.cell(from.center());
    let (cx1, cy1) = to.cell(to.center());
    let (dx, dy) = (cx1 as i32 - cx0 as i32, cy1 as i32 - cy0 as i32);
    let map = |h| {
        let (x, y) = from.cell(h);
        to.hole_at(x as i32 + dx, y as i32 + dy)
    };
    let mut start = 0u64;
    for h in solution.start.occupied() {
        start |= map(h)
            .ok_or_else(|| Error::Unsupported(format!("{} does not fit on {board}", from.name())))?
            .bit();
    }
    let mut moves = Vec::new();
    for m in &solution.moves {
        let mut jumps = Vec::new();
        for j in m.jumps() {
            let (o, t) = (map(j.origin), map(j.target));
            let (Some(o), Some(t)) = (o, t) else {
                return Err(Error::Unsupported(format!("{} does not fit on {board}", from.name())));
            };
            jumps.push(to.jump_between(o, t, solution.variant)?);
        }
        moves.push(crate::board::Move::new(jumps).expect("chain preserved"));
    }
    Ok(Solution::new(solution.variant, to.position(start), moves))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_replays() {
        let lib = FixtureLibrary::builtin().unwrap();
        assert!(lib.iter().count() >= 27);
        for f in lib.iter() {
            lib.check(f).unwrap();
        }
    }

    #[test]
    fn waypoint_is_rotation_symmetric() {
        let lib = FixtureLibrary::builtin().unwrap();
        let p12 = lib.waypoint();
        assert_eq!(p12.pegs(), 12);
        assert_eq!(p12.transform(crate::board::Symmetry(1)), p12);
        assert_ne!(p12.transform(crate::board::Symmetry(4)), p12);
    }

    #[test]
    fn c9_fixtures_share_their_start() {
        let lib = FixtureLibrary::builtin().unwrap();
        let english: Vec<&Fixture> = lib
            .iter()
            .filter(|f| f.start == "C9" && f.board == BoardName::English33)
            .collect();
        let e = Geometry::get(BoardName::English33);
        assert_eq!(reconstruct_waypoint(&english).unwrap(), e.position(e.central_nine()));
        assert_eq!(reconstruct_waypoint(&english[..1]).unwrap(), e.position(e.central_nine()));
    }

    #[test]
    fn english_fixtures_fit_larger_boards() {
        let lib = FixtureLibrary::builtin().unwrap();
        let sol = lib.solution_named("c9-c1").unwrap();
        let moved = transplant(&sol, BoardName::Diamond(5)).unwrap();
        let d5 = moved.geometry();
        assert_eq!(moved.start, d5.position(d5.central_nine()));
        assert_eq!(moved.replay().unwrap(), d5.single(d5.parse_hole("d2").unwrap()));
        assert!(transplant(&sol, BoardName::Diamond(4)).is_err());
    }

    #[test]
    fn malformed_headers_are_reported() {
        assert!(parse_fixtures("# name=x board=english-33 variant=8 start=C9 finish=d1\nd4-d2").is_err());
        assert!(parse_fixtures("# name=x board=english-33 variant=8 start=C9 finish=d1 moves=1").is_err());
        assert!(parse_fixtures("d4-d2").is_err());
    }
}
