//! Solution checking that shares nothing with the search engine: jumps are
//! replayed on a plain occupancy grid and midpoints are recomputed from the
//! endpoint coordinates.

use crate::board::{DiagonalAxis, Geometry, Position, Solution, Variant};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub moves: usize,
    pub jumps: usize,
    pub diagonal_jumps: usize,
    /// Jumps in the longest move.
    pub longest_move: usize,
    pub final_position: Position,
}

impl VerifyReport {
    pub fn is_single_peg(&self) -> bool {
        self.final_position.pegs() == 1
    }
}

/// A move as a list of `(column, row)` cells visited by the moving peg.
type CellPath = Vec<(i32, i32)>;

fn step_allowed(variant: Variant, dx: i32, dy: i32) -> bool {
    let diagonal = dx != 0 && dy != 0;
    match variant {
        Variant::Four => !diagonal,
        Variant::Eight => true,
        Variant::Six(DiagonalAxis::NwSe) => !diagonal || dx == dy,
        Variant::Six(DiagonalAxis::NeSw) => !diagonal || dx == -dy,
    }
}

fn replay(geom: &'static Geometry, variant: Variant, start: Position, moves: &[CellPath]) -> Result<VerifyReport> {
    let side = geom.side() as i32;
    let mut grid: Vec<Option<bool>> = (0..side * side)
        .map(|i| geom.hole_at(i % side, i / side).map(|h| start.is_occupied(h)))
        .collect();
    let idx = |(x, y): (i32, i32)| -> Option<usize> {
        (x >= 0 && y >= 0 && x < side && y < side).then_some((y * side + x) as usize)
    };
    let name = |(x, y): (i32, i32)| format!("{}{}", (b'a' + x as u8) as char, y + 1);

    let mut jumps = 0;
    let mut diagonal_jumps = 0;
    let mut longest_move = 0;
    for (mi, path) in moves.iter().enumerate() {
        longest_move = longest_move.max(path.len().saturating_sub(1));
        for (ji, pair) in path.windows(2).enumerate() {
            let (from, to) = (pair[0], pair[1]);
            let illegal = || Error::IllegalJump {
                move_index: mi + 1,
                jump_index: ji + 1,
                jump: format!("{}-{}", name(from), name(to)),
            };
            let (dx, dy) = (to.0 - from.0, to.1 - from.1);
            if dx.abs() > 2 || dy.abs() > 2 || dx % 2 != 0 || dy % 2 != 0 || (dx == 0 && dy == 0) {
                return Err(illegal());
            }
            let (sx, sy) = (dx / 2, dy / 2);
            if !step_allowed(variant, sx, sy) {
                return Err(illegal());
            }
            let over = (from.0 + sx, from.1 + sy);
            let cell = |c| idx(c).and_then(|i| grid[i]);
            match (cell(from), cell(over), cell(to)) {
                (Some(true), Some(true), Some(false)) => {}
                _ => return Err(illegal()),
            }
            grid[idx(from).expect("on board")] = Some(false);
            grid[idx(over).expect("on board")] = Some(false);
            grid[idx(to).expect("on board")] = Some(true);
            jumps += 1;
            if sx != 0 && sy != 0 {
                diagonal_jumps += 1;
            }
        }
    }
    let mut bits = 0u64;
    for h in geom.holes() {
        let (x, y) = geom.cell(h);
        if grid[idx((x as i32, y as i32)).expect("hole")] == Some(true) {
            bits |= h.bit();
        }
    }
    Ok(VerifyReport {
        moves: moves.len(),
        jumps,
        diagonal_jumps,
        longest_move,
        final_position: geom.position(bits),
    })
}

/// Replays `solution` from its start.
pub fn verify_solution(solution: &Solution) -> Result<VerifyReport> {
    let geom = solution.geometry();
    let moves: Vec<CellPath> = solution
        .moves
        .iter()
        .map(|m| {
            let mut path = vec![geom.cell(m.origin())];
            path.extend(m.jumps().iter().map(|j| geom.cell(j.target)));
            path.into_iter().map(|(x, y)| (x as i32, y as i32)).collect()
        })
        .collect();
    replay(geom, solution.variant, solution.start, &moves)
}

/// Parses solution text on its own terms and replays it from `start`.
pub fn verify_text(start: Position, variant: Variant, text: &str) -> Result<VerifyReport> {
    let geom = start.geometry();
    let body = text.trim().trim_end_matches(['.', ';']);
    let mut moves = Vec::new();
    for mv in body.split(',').map(str::trim).filter(|m| !m.is_empty()) {
        let path = mv
            .split('-')
            .map(|c| {
                let c = c.trim().to_ascii_lowercase();
                let mut chars = c.chars();
                let col = chars.next().filter(char::is_ascii_lowercase);
                let row = chars.as_str().parse::<i32>().ok();
                match (col, row) {
                    (Some(col), Some(row)) if row >= 1 => Ok((col as i32 - 'a' as i32, row - 1)),
                    _ => Err(Error::MalformedCoordinate(c.clone())),
                }
            })
            .collect::<Result<CellPath>>()?;
        if path.len() < 2 {
            return Err(Error::MalformedMove(mv.to_string()));
        }
        moves.push(path);
    }
    replay(geom, variant, start, &moves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn english_fifteen_move_central_game() {
        let e = Geometry::named("english-33").unwrap();
        let text = "d2-d4, b4-d2, a3-c3, f3-d3-b3, e1-c3, g5-e3, d6-b4-d2-f4-d6, c1-e1-e3, \
                    g3-g5-e5, a5-a3-c3, d7-f5-d3-b3, c7-c5-c3, e7-c5, c2-a4-c6-c4, d4-d6-f4-d2-b4-d4";
        let report = verify_text(e.vacancy(e.center()), Variant::Eight, text).unwrap();
        assert_eq!(report.moves, 15);
        assert_eq!(report.final_position, e.single(e.center()));
        let sol = Solution::parse(text, Variant::Eight, e.vacancy(e.center())).unwrap();
        assert_eq!(verify_solution(&sol).unwrap(), report);
    }

    #[test]
    fn illegal_jumps_are_located() {
        let e = Geometry::named("english-33").unwrap();
        let err = verify_text(e.vacancy(e.center()), Variant::Eight, "d2-d4, d2-d4").unwrap_err();
        assert!(matches!(
            err,
            Error::IllegalJump {
                move_index: 2,
                jump_index: 1,
                ..
            }
        ));
        let f = Geometry::named("french-37").unwrap();
        assert!(verify_text(f.vacancy(f.center()), Variant::Eight, "b2-d4").is_ok());
        let err = verify_text(f.vacancy(f.center()), Variant::Four, "b2-d4").unwrap_err();
        assert!(matches!(err, Error::IllegalJump { .. }));
        assert!(verify_text(e.vacancy(e.center()), Variant::Eight, "d2-d9").is_err());
    }
}
