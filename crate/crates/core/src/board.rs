//! Board geometries, positions, jumps and moves.
//!
//! Holes are indexed row-major from the top row, left to right. A position is
//! the occupancy bitset read as an unsigned integer with hole 0 as the least
//! significant bit, so every supported board fits in a single `u64` code.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// The diagonal axis along which six-move play permits jumps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DiagonalAxis {
    /// Up-left / down-right.
    #[default]
    NwSe,
    /// Up-right / down-left.
    NeSw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Four,
    Six(DiagonalAxis),
    Eight,
}

const ORTHOGONAL: [(i8, i8); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const SIX_NWSE: [(i8, i8); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];
const SIX_NESW: [(i8, i8); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
const KING: [(i8, i8); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (-1, -1),
    (1, -1),
    (-1, 1),
];

impl Variant {
    /// Unit steps a jump may take (both senses of every permitted axis).
    pub fn directions(self) -> &'static [(i8, i8)] {
        match self {
            Variant::Four => &ORTHOGONAL,
            Variant::Six(DiagonalAxis::NwSe) => &SIX_NWSE,
            Variant::Six(DiagonalAxis::NeSw) => &SIX_NESW,
            Variant::Eight => &KING,
        }
    }

    pub fn permits(self, step: (i8, i8)) -> bool {
        self.directions().contains(&step)
    }

    /// The symmetries of the square that map this variant's jump directions
    /// onto themselves.
    pub fn symmetry_group(self) -> SymmetryGroup {
        match self {
            Variant::Four | Variant::Eight => SymmetryGroup::FULL,
            Variant::Six(_) => SymmetryGroup::DIAGONAL_PRESERVING,
        }
    }

    fn table_index(self) -> usize {
        match self {
            Variant::Four => 0,
            Variant::Six(DiagonalAxis::NwSe) => 1,
            Variant::Six(DiagonalAxis::NeSw) => 2,
            Variant::Eight => 3,
        }
    }

    const ALL: [Variant; 4] = [
        Variant::Four,
        Variant::Six(DiagonalAxis::NwSe),
        Variant::Six(DiagonalAxis::NeSw),
        Variant::Eight,
    ];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Four => f.write_str("4"),
            Variant::Six(DiagonalAxis::NwSe) => f.write_str("6"),
            Variant::Six(DiagonalAxis::NeSw) => f.write_str("6-nesw"),
            Variant::Eight => f.write_str("8"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "4" | "4-move" => Ok(Variant::Four),
            "6" | "6-move" | "6-nwse" => Ok(Variant::Six(DiagonalAxis::NwSe)),
            "6-nesw" => Ok(Variant::Six(DiagonalAxis::NeSw)),
            "8" | "8-move" => Ok(Variant::Eight),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoardName {
    English33,
    French37,
    /// `Diamond(n)`: `n` holes on a side, `n` in 3..=6.
    Diamond(u8),
}

impl BoardName {
    pub const ALL: [BoardName; 6] = [
        BoardName::English33,
        BoardName::French37,
        BoardName::Diamond(3),
        BoardName::Diamond(4),
        BoardName::Diamond(5),
        BoardName::Diamond(6),
    ];

    fn slot(self) -> usize {
        match self {
            BoardName::English33 => 0,
            BoardName::French37 => 1,
            BoardName::Diamond(n) => n as usize - 1,
        }
    }

    pub fn is_diamond(self) -> bool {
        matches!(self, BoardName::Diamond(_))
    }
}

impl fmt::Display for BoardName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoardName::English33 => f.write_str("english-33"),
            BoardName::French37 => f.write_str("french-37"),
            BoardName::Diamond(n) => write!(f, "diamond-{n}"),
        }
    }
}

impl FromStr for BoardName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let name = match lower.as_str() {
            "english-33" | "english" | "33" => BoardName::English33,
            "french-37" | "french" | "37" => BoardName::French37,
            "diamond-3" => BoardName::Diamond(3),
            "diamond-4" => BoardName::Diamond(4),
            "diamond-5" | "41" => BoardName::Diamond(5),
            "diamond-6" => BoardName::Diamond(6),
            _ => return Err(Error::UnknownBoard(s.to_string())),
        };
        Ok(name)
    }
}

/// A hole index, `0..geometry.hole_count()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hole(pub u8);

impl Hole {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn bit(self) -> u64 {
        1u64 << self.0
    }
}

/// One element of the dihedral group of the square, acting on grid cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry(pub u8);

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry(0);

    pub fn all() -> impl Iterator<Item = Symmetry> {
        (0..8).map(Symmetry)
    }

    /// Image of grid cell `(x, y)` on a `side`-by-`side` grid.
    pub fn apply(self, side: u8, (x, y): (u8, u8)) -> (u8, u8) {
        let n = side - 1;
        match self.0 {
            0 => (x, y),
            1 => (n - y, x),
            2 => (n - x, n - y),
            3 => (y, n - x),
            4 => (n - x, y),
            5 => (x, n - y),
            6 => (y, x),
            7 => (n - y, n - x),
            _ => unreachable!("symmetry index out of range"),
        }
    }

    pub fn inverse(self) -> Symmetry {
        match self.0 {
            1 => Symmetry(3),
            3 => Symmetry(1),
            s => Symmetry(s),
        }
    }

    /// Image of a unit step under this symmetry.
    pub fn apply_step(self, (dx, dy): (i8, i8)) -> (i8, i8) {
        match self.0 {
            0 => (dx, dy),
            1 => (-dy, dx),
            2 => (-dx, -dy),
            3 => (dy, -dx),
            4 => (-dx, dy),
            5 => (dx, -dy),
            6 => (dy, dx),
            7 => (-dy, -dx),
            _ => unreachable!("symmetry index out of range"),
        }
    }
}

/// A subgroup of the square's symmetries, as a bitmask over [`Symmetry`] indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymmetryGroup(pub u8);

impl SymmetryGroup {
    pub const TRIVIAL: SymmetryGroup = SymmetryGroup(0b0000_0001);
    pub const FULL: SymmetryGroup = SymmetryGroup(0b1111_1111);
    /// Identity, half turn and the two diagonal reflections.
    pub const DIAGONAL_PRESERVING: SymmetryGroup = SymmetryGroup(0b1100_0101);

    pub fn contains(self, s: Symmetry) -> bool {
        self.0 & (1 << s.0) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Symmetry> {
        Symmetry::all().filter(move |s| self.contains(*s))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersect(self, other: SymmetryGroup) -> SymmetryGroup {
        SymmetryGroup(self.0 & other.0)
    }
}

/// A single jump: the peg at `origin` hops over `over` into `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Jump {
    pub origin: Hole,
    pub over: Hole,
    pub target: Hole,
}

impl Jump {
    #[inline]
    pub fn is_legal(self, bits: u64) -> bool {
        let need = self.origin.bit() | self.over.bit();
        bits & need == need && bits & self.target.bit() == 0
    }

    #[inline]
    pub fn apply(self, bits: u64) -> u64 {
        bits ^ (self.origin.bit() | self.over.bit() | self.target.bit())
    }
}

/// Jump triples of one variant on one geometry, with per-hole indexes.
#[derive(Debug)]
pub struct JumpTable {
    triples: Vec<Jump>,
    from: Vec<Vec<Jump>>,
    into: Vec<Vec<Jump>>,
    over: Vec<Vec<Jump>>,
}

impl JumpTable {
    pub fn triples(&self) -> &[Jump] {
        &self.triples
    }

    pub fn from(&self, hole: Hole) -> &[Jump] {
        &self.from[hole.index()]
    }

    pub fn into(&self, hole: Hole) -> &[Jump] {
        &self.into[hole.index()]
    }

    pub fn over(&self, hole: Hole) -> &[Jump] {
        &self.over[hole.index()]
    }

    pub fn hole_count(&self) -> usize {
        self.from.len()
    }

    /// Holes no jump can pass over.
    pub fn uncapturable(&self) -> Vec<Hole> {
        (0..self.over.len())
            .filter(|&i| self.over[i].is_empty())
            .map(|i| Hole(i as u8))
            .collect()
    }
}

/// A non-empty chain of jumps by one peg.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    jumps: Vec<Jump>,
}

impl Move {
    /// Builds a move, checking that every jump starts where the previous one landed.
    pub fn new(jumps: Vec<Jump>) -> Option<Move> {
        if jumps.is_empty() {
            return None;
        }
        if jumps.windows(2).any(|w| w[1].origin != w[0].target) {
            return None;
        }
        Some(Move { jumps })
    }

    pub fn single(jump: Jump) -> Move {
        Move { jumps: vec![jump] }
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn origin(&self) -> Hole {
        self.jumps[0].origin
    }

    pub fn destination(&self) -> Hole {
        self.jumps[self.jumps.len() - 1].target
    }

    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn push(&mut self, jump: Jump) {
        debug_assert_eq!(jump.origin, self.destination());
        self.jumps.push(jump);
    }
}

struct SymmetryTables {
    perms: [Vec<Hole>; 8],
    /// `bytes[s][k][b]`: image under symmetry `s` of byte value `b` at byte offset `k`.
    bytes: Box<[[[u64; 256]; 8]; 8]>,
}

pub struct Geometry {
    name: BoardName,
    side: u8,
    cells: Vec<(u8, u8)>,
    grid: Vec<Option<Hole>>,
    center: Hole,
    symmetries: SymmetryTables,
    tables: [JumpTable; 4],
}

impl fmt::Debug for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Geometry")
            .field("name", &self.name)
            .field("holes", &self.cells.len())
            .finish()
    }
}

impl PartialEq for Geometry {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Geometry {}

static GEOMETRIES: [OnceLock<Geometry>; 6] = [const { OnceLock::new() }; 6];

fn is_hole(name: BoardName, x: i32, y: i32) -> bool {
    match name {
        BoardName::English33 => {
            (0..7).contains(&x) && (0..7).contains(&y) && ((2..=4).contains(&x) || (2..=4).contains(&y))
        }
        BoardName::French37 => {
            is_hole(BoardName::English33, x, y) || ((x == 1 || x == 5) && (y == 1 || y == 5))
        }
        BoardName::Diamond(n) => {
            let c = n as i32 - 1;
            let side = 2 * n as i32 - 1;
            (0..side).contains(&x) && (0..side).contains(&y) && (x - c).abs() + (y - c).abs() <= c
        }
    }
}

impl Geometry {
    /// The geometry for `name`, built on first use and shared afterwards.
    pub fn get(name: BoardName) -> &'static Geometry {
        GEOMETRIES[name.slot()].get_or_init(|| Geometry::construct(name))
    }

    /// Looks a board up by its textual name.
    pub fn named(name: &str) -> Result<&'static Geometry> {
        Ok(Geometry::get(name.parse()?))
    }

    fn construct(name: BoardName) -> Geometry {
        let side: u8 = match name {
            BoardName::English33 | BoardName::French37 => 7,
            BoardName::Diamond(n) => 2 * n - 1,
        };
        let mut cells = Vec::new();
        let mut grid = vec![None; side as usize * side as usize];
        for y in 0..side {
            for x in 0..side {
                if is_hole(name, x as i32, y as i32) {
                    grid[y as usize * side as usize + x as usize] = Some(Hole(cells.len() as u8));
                    cells.push((x, y));
                }
            }
        }
        assert!(cells.len() <= 64, "board {name} exceeds 64 holes");
        let mid = side / 2;
        let center = grid[mid as usize * side as usize + mid as usize].expect("center is a hole");

        let lookup = |x: i32, y: i32| -> Option<Hole> {
            if x < 0 || y < 0 || x >= side as i32 || y >= side as i32 {
                None
            } else {
                grid[y as usize * side as usize + x as usize]
            }
        };

        let perms: [Vec<Hole>; 8] = std::array::from_fn(|s| {
            cells
                .iter()
                .map(|&c| {
                    let (x, y) = Symmetry(s as u8).apply(side, c);
                    lookup(x as i32, y as i32).expect("board is square symmetric")
                })
                .collect()
        });
        let mut bytes = Box::new([[[0u64; 256]; 8]; 8]);
        for (s, perm) in perms.iter().enumerate() {
            for k in 0..8 {
                for b in 0..256usize {
                    let mut image = 0u64;
                    for bit in 0..8 {
                        let hole = k * 8 + bit;
                        if b & (1 << bit) != 0 && hole < perm.len() {
                            image |= perm[hole].bit();
                        }
                    }
                    bytes[s][k][b] = image;
                }
            }
        }

        let tables = Variant::ALL.map(|variant| {
            let n = cells.len();
            let mut table = JumpTable {
                triples: Vec::new(),
                from: vec![Vec::new(); n],
                into: vec![Vec::new(); n],
                over: vec![Vec::new(); n],
            };
            for (i, &(x, y)) in cells.iter().enumerate() {
                for &(dx, dy) in variant.directions() {
                    let (x, y) = (x as i32, y as i32);
                    let over = lookup(x + dx as i32, y + dy as i32);
                    let target = lookup(x + 2 * dx as i32, y + 2 * dy as i32);
                    if let (Some(over), Some(target)) = (over, target) {
                        let jump = Jump {
                            origin: Hole(i as u8),
                            over,
                            target,
                        };
                        table.triples.push(jump);
                        table.from[i].push(jump);
                        table.into[target.index()].push(jump);
                        table.over[over.index()].push(jump);
                    }
                }
            }
            table
        });

        Geometry {
            name,
            side,
            cells,
            grid,
            center,
            symmetries: SymmetryTables { perms, bytes },
            tables,
        }
    }

    pub fn name(&self) -> BoardName {
        self.name
    }

    /// Side length of the square grid the board sits in.
    pub fn side(&self) -> u8 {
        self.side
    }

    pub fn hole_count(&self) -> usize {
        self.cells.len()
    }

    pub fn holes(&self) -> impl Iterator<Item = Hole> + '_ {
        (0..self.cells.len()).map(|i| Hole(i as u8))
    }

    pub fn center(&self) -> Hole {
        self.center
    }

    /// Bitmask with every hole set.
    pub fn full_mask(&self) -> u64 {
        if self.cells.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.cells.len()) - 1
        }
    }

    /// Zero-based `(column, row)` of a hole.
    pub fn cell(&self, hole: Hole) -> (u8, u8) {
        self.cells[hole.index()]
    }

    /// Offset of a hole from the board center.
    pub fn offset(&self, hole: Hole) -> (i32, i32) {
        let (x, y) = self.cell(hole);
        let (cx, cy) = self.cell(self.center);
        (x as i32 - cx as i32, y as i32 - cy as i32)
    }

    pub fn hole_at(&self, x: i32, y: i32) -> Option<Hole> {
        if x < 0 || y < 0 || x >= self.side as i32 || y >= self.side as i32 {
            return None;
        }
        self.grid[y as usize * self.side as usize + x as usize]
    }

    /// The hole at `offset` from the center, if any.
    pub fn hole_at_offset(&self, (dx, dy): (i32, i32)) -> Option<Hole> {
        let (cx, cy) = self.cell(self.center);
        self.hole_at(cx as i32 + dx, cy as i32 + dy)
    }

    pub fn jumps(&self, variant: Variant) -> &JumpTable {
        &self.tables[variant.table_index()]
    }

    /// Holes of the central 3×3 block.
    pub fn central_nine(&self) -> u64 {
        let mut mask = 0;
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(h) = self.hole_at_offset((dx, dy)) {
                    mask |= h.bit();
                }
            }
        }
        mask
    }

    // ---- notation ----

    pub fn hole_name(&self, hole: Hole) -> String {
        let (x, y) = self.cell(hole);
        format!("{}{}", (b'a' + x) as char, y + 1)
    }

    pub fn parse_hole(&self, text: &str) -> Result<Hole> {
        let t = text.trim().to_ascii_lowercase();
        let mut chars = t.chars();
        let col = chars
            .next()
            .filter(char::is_ascii_lowercase)
            .ok_or_else(|| Error::MalformedCoordinate(text.to_string()))?;
        let row: u32 = chars
            .as_str()
            .parse()
            .ok()
            .filter(|r| *r >= 1)
            .ok_or_else(|| Error::MalformedCoordinate(text.to_string()))?;
        let x = col as i32 - 'a' as i32;
        self.hole_at(x, row as i32 - 1).ok_or_else(|| Error::NotAHole {
            coord: t.clone(),
            board: self.name.to_string(),
        })
    }

    /// Parses a hyphen-separated chain of coordinates such as `d4-f4-d6-d4`.
    ///
    /// Midpoints are inferred; whether the jumps are legal in a particular
    /// position is only checked when the move is applied.
    pub fn parse_move(&self, text: &str, variant: Variant) -> Result<Move> {
        let holes = text
            .trim()
            .split('-')
            .map(|c| self.parse_hole(c))
            .collect::<Result<Vec<_>>>()?;
        if holes.len() < 2 {
            return Err(Error::MalformedMove(text.to_string()));
        }
        let mut jumps = Vec::with_capacity(holes.len() - 1);
        for pair in holes.windows(2) {
            jumps.push(self.jump_between(pair[0], pair[1], variant)?);
        }
        Ok(Move { jumps })
    }

    /// The jump from `from` to `to`, inferring the hole jumped over.
    pub fn jump_between(&self, from: Hole, to: Hole, variant: Variant) -> Result<Jump> {
        let (x0, y0) = self.cell(from);
        let (x1, y1) = self.cell(to);
        let (dx, dy) = (x1 as i32 - x0 as i32, y1 as i32 - y0 as i32);
        let bad = |reason| Error::BadJump {
            from: self.hole_name(from),
            to: self.hole_name(to),
            reason,
        };
        if dx % 2 != 0 || dy % 2 != 0 || dx.abs() > 2 || dy.abs() > 2 || (dx == 0 && dy == 0) {
            return Err(bad("endpoints are not two cells apart"));
        }
        let step = ((dx / 2) as i8, (dy / 2) as i8);
        if !variant.permits(step) {
            return Err(bad("direction not permitted by the variant"));
        }
        let over = self
            .hole_at(x0 as i32 + step.0 as i32, y0 as i32 + step.1 as i32)
            .ok_or_else(|| bad("midpoint is not a hole"))?;
        Ok(Jump {
            origin: from,
            over,
            target: to,
        })
    }

    pub fn format_move(&self, mv: &Move) -> String {
        let mut out = self.hole_name(mv.origin());
        for j in mv.jumps() {
            out.push('-');
            out.push_str(&self.hole_name(j.target));
        }
        out
    }

    // ---- symmetry ----

    pub fn transform_hole(&self, s: Symmetry, hole: Hole) -> Hole {
        self.symmetries.perms[s.0 as usize][hole.index()]
    }

    #[inline]
    pub fn transform_code(&self, s: Symmetry, code: u64) -> u64 {
        let t = &self.symmetries.bytes[s.0 as usize];
        let mut out = 0;
        let mut rest = code;
        let mut k = 0;
        while rest != 0 {
            out |= t[k][(rest & 0xff) as usize];
            rest >>= 8;
            k += 1;
        }
        out
    }

    pub fn transform_jump(&self, s: Symmetry, j: Jump) -> Jump {
        Jump {
            origin: self.transform_hole(s, j.origin),
            over: self.transform_hole(s, j.over),
            target: self.transform_hole(s, j.target),
        }
    }

    pub fn transform_move(&self, s: Symmetry, mv: &Move) -> Move {
        Move {
            jumps: mv.jumps.iter().map(|&j| self.transform_jump(s, j)).collect(),
        }
    }

    /// Smallest code among the images of `code` under `group`.
    #[inline]
    pub fn canonical_in(&self, group: SymmetryGroup, code: u64) -> u64 {
        if group == SymmetryGroup::TRIVIAL {
            return code;
        }
        let mut best = code;
        for s in 1..8u8 {
            if group.0 & (1 << s) != 0 {
                let img = self.transform_code(Symmetry(s), code);
                if img < best {
                    best = img;
                }
            }
        }
        best
    }

    /// Canonical code under all eight symmetries of the square.
    pub fn canonicalize(&self, code: u64) -> u64 {
        self.canonical_in(SymmetryGroup::FULL, code)
    }

    /// Symmetries in `within` that fix `code`.
    pub fn stabilizer(&self, code: u64, within: SymmetryGroup) -> SymmetryGroup {
        let mut mask = 0u8;
        for s in within.iter() {
            if self.transform_code(s, code) == code {
                mask |= 1 << s.0;
            }
        }
        SymmetryGroup(mask)
    }

    // ---- positions ----

    pub fn position(&'static self, code: u64) -> Position {
        Position {
            geom: self,
            bits: code & self.full_mask(),
        }
    }

    pub fn empty(&'static self) -> Position {
        self.position(0)
    }

    pub fn full(&'static self) -> Position {
        self.position(self.full_mask())
    }

    pub fn single(&'static self, hole: Hole) -> Position {
        self.position(hole.bit())
    }

    /// Full board with one peg missing.
    pub fn vacancy(&'static self, hole: Hole) -> Position {
        self.position(self.full_mask() & !hole.bit())
    }

    /// Parses the grid format: one line per row, `#` off-board, `.` empty, `*` peg.
    pub fn parse_position(&'static self, text: &str) -> Result<Position> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.is_empty())
            .collect();
        if lines.len() != self.side as usize {
            return Err(Error::MalformedPosition(format!(
                "expected {} rows, found {}",
                self.side,
                lines.len()
            )));
        }
        let mut bits = 0u64;
        for (y, line) in lines.iter().enumerate() {
            let row: Vec<char> = line.chars().collect();
            if row.len() != self.side as usize {
                return Err(Error::MalformedPosition(format!(
                    "row {} has {} cells, expected {}",
                    y + 1,
                    row.len(),
                    self.side
                )));
            }
            for (x, ch) in row.into_iter().enumerate() {
                match (self.hole_at(x as i32, y as i32), ch) {
                    (None, '#') => {}
                    (Some(_), '.') => {}
                    (Some(h), '*') => bits |= h.bit(),
                    _ => {
                        return Err(Error::MalformedPosition(format!(
                            "unexpected `{ch}` at row {} column {}",
                            y + 1,
                            x + 1
                        )))
                    }
                }
            }
        }
        Ok(self.position(bits))
    }

    /// Parses either the grid format or a short name: `C9`, `C9'`, `full`,
    /// `empty`, a coordinate (single peg) or a coordinate with `'` (single vacancy).
    pub fn parse_position_spec(&'static self, text: &str) -> Result<Position> {
        let t = text.trim();
        if t.contains('\n') {
            return self.parse_position(t);
        }
        let (body, complemented) = match t.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (t, false),
        };
        let base = match body.to_ascii_lowercase().as_str() {
            "c9" => self.position(self.central_nine()),
            "full" => self.full(),
            "empty" => self.empty(),
            _ => self.single(self.parse_hole(body)?),
        };
        Ok(if complemented { base.complement() } else { base })
    }
}

/// Occupancy of a board's holes.
#[derive(Clone, Copy)]
pub struct Position {
    geom: &'static Geometry,
    bits: u64,
}

impl PartialEq for Position {
    fn eq(&self, other: &Self) -> bool {
        self.geom.name == other.geom.name && self.bits == other.bits
    }
}

impl Eq for Position {}

impl std::hash::Hash for Position {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.geom.name.hash(state);
        self.bits.hash(state);
    }
}

impl Position {
    pub fn geometry(&self) -> &'static Geometry {
        self.geom
    }

    pub fn code(&self) -> u64 {
        self.bits
    }

    pub fn pegs(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_occupied(&self, hole: Hole) -> bool {
        self.bits & hole.bit() != 0
    }

    pub fn occupied(&self) -> impl Iterator<Item = Hole> + '_ {
        self.geom.holes().filter(|h| self.is_occupied(*h))
    }

    /// Number of pegs among the holes in `mask`.
    pub fn count_in(&self, mask: u64) -> u32 {
        (self.bits & mask).count_ones()
    }

    pub fn complement(&self) -> Position {
        self.geom.position(!self.bits)
    }

    pub fn with(&self, hole: Hole, peg: bool) -> Position {
        let bits = if peg {
            self.bits | hole.bit()
        } else {
            self.bits & !hole.bit()
        };
        self.geom.position(bits)
    }

    pub fn transform(&self, s: Symmetry) -> Position {
        self.geom.position(self.geom.transform_code(s, self.bits))
    }

    pub fn canonical_code(&self) -> u64 {
        self.geom.canonicalize(self.bits)
    }

    /// Applies one jump, failing if it is not legal here.
    pub fn apply_jump(&self, jump: Jump) -> Option<Position> {
        jump.is_legal(self.bits)
            .then(|| self.geom.position(jump.apply(self.bits)))
    }

    /// Applies every jump of `mv` in order.
    pub fn apply_move(&self, mv: &Move) -> Result<Position> {
        self.apply_move_at(mv, 0)
    }

    pub(crate) fn apply_move_at(&self, mv: &Move, move_index: usize) -> Result<Position> {
        let mut pos = *self;
        for (k, &j) in mv.jumps().iter().enumerate() {
            pos = pos.apply_jump(j).ok_or_else(|| Error::IllegalJump {
                move_index,
                jump_index: k,
                jump: format!("{}-{}", self.geom.hole_name(j.origin), self.geom.hole_name(j.target)),
            })?;
        }
        Ok(pos)
    }

    /// The hole of the only peg, if exactly one remains.
    pub fn single_peg(&self) -> Option<Hole> {
        (self.pegs() == 1).then(|| Hole(self.bits.trailing_zeros() as u8))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = self.geom.side as i32;
        for y in 0..side {
            for x in 0..side {
                let ch = match self.geom.hole_at(x, y) {
                    None => '#',
                    Some(h) if self.is_occupied(h) => '*',
                    Some(_) => '.',
                };
                write!(f, "{ch}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({}, {:#x})", self.geom.name, self.bits)
    }
}

/// An ordered list of moves from a start position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub variant: Variant,
    pub start: Position,
    pub moves: Vec<Move>,
}

impl Solution {
    pub fn new(variant: Variant, start: Position, moves: Vec<Move>) -> Solution {
        Solution {
            variant,
            start,
            moves,
        }
    }

    /// Parses the `a-b-c, d-e` notation against `start`'s board.
    pub fn parse(text: &str, variant: Variant, start: Position) -> Result<Solution> {
        let geom = start.geometry();
        let body = text.trim().trim_end_matches(['.', ';']);
        let moves = body
            .split(',')
            .map(str::trim)
            .filter(|m| !m.is_empty())
            .map(|m| geom.parse_move(m, variant))
            .collect::<Result<Vec<_>>>()?;
        Ok(Solution::new(variant, start, moves))
    }

    pub fn geometry(&self) -> &'static Geometry {
        self.start.geometry()
    }

    /// Length in moves.
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn jump_count(&self) -> usize {
        self.moves.iter().map(Move::len).sum()
    }

    pub fn jumps(&self) -> impl Iterator<Item = Jump> + '_ {
        self.moves.iter().flat_map(|m| m.jumps().iter().copied())
    }

    /// Replays every move, returning the final position.
    pub fn replay(&self) -> Result<Position> {
        let mut pos = self.start;
        for (i, mv) in self.moves.iter().enumerate() {
            pos = pos.apply_move_at(mv, i)?;
        }
        Ok(pos)
    }

    pub fn transform(&self, s: Symmetry) -> Solution {
        let geom = self.geometry();
        Solution {
            variant: self.variant,
            start: self.start.transform(s),
            moves: self.moves.iter().map(|m| geom.transform_move(s, m)).collect(),
        }
    }

    /// Appends `other`'s moves; `other` must start where this one ends.
    pub fn concat(mut self, other: &Solution) -> Solution {
        self.moves.extend(other.moves.iter().cloned());
        self
    }

    /// The `a-b-c, d-e` text form.
    pub fn to_text(&self) -> String {
        let geom = self.geometry();
        self.moves
            .iter()
            .map(|m| geom.format_move(m))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> &'static Geometry {
        Geometry::named(name).unwrap()
    }

    #[test]
    fn hole_counts_and_centers() {
        let expect = [
            ("english-33", 33, "d4"),
            ("french-37", 37, "d4"),
            ("diamond-3", 13, "c3"),
            ("diamond-4", 25, "d4"),
            ("diamond-5", 41, "e5"),
            ("diamond-6", 61, "f6"),
        ];
        for (name, holes, center) in expect {
            let geom = g(name);
            assert_eq!(geom.hole_count(), holes, "{name}");
            assert_eq!(geom.hole_name(geom.center()), center, "{name}");
        }
    }

    #[test]
    fn unknown_board_is_rejected() {
        assert!(matches!(
            Geometry::named("diamond-7"),
            Err(Error::UnknownBoard(_))
        ));
    }

    #[test]
    fn english_rows_and_french_extras() {
        let e = g("english-33");
        for row in [1, 2, 6, 7] {
            let cols: String = e
                .holes()
                .filter(|&h| e.cell(h).1 + 1 == row)
                .map(|h| (b'a' + e.cell(h).0) as char)
                .collect();
            assert_eq!(cols, "cde");
        }
        let f = g("french-37");
        for c in ["b2", "f2", "b6", "f6"] {
            assert!(f.parse_hole(c).is_ok());
            assert!(e.parse_hole(c).is_err());
        }
    }

    #[test]
    fn coordinates() {
        let e = g("english-33");
        assert_eq!(e.parse_hole("d4").unwrap(), e.center());
        assert_eq!(e.parse_hole("D4").unwrap(), e.center());
        assert!(matches!(e.parse_hole("a1"), Err(Error::NotAHole { .. })));
        assert!(matches!(e.parse_hole("4d"), Err(Error::MalformedCoordinate(_))));
        assert!(matches!(e.parse_hole("d"), Err(Error::MalformedCoordinate(_))));
        let d5 = g("diamond-5");
        assert_eq!(d5.parse_hole("e5").unwrap(), d5.center());
        let d6 = g("diamond-6");
        assert_eq!(d6.hole_name(d6.parse_hole("f11").unwrap()), "f11");
    }

    #[test]
    fn diamond3_diagonal_table() {
        let d3 = g("diamond-3");
        let t = d3.jumps(Variant::Eight);
        let c1 = d3.parse_hole("c1").unwrap();
        let c2 = d3.parse_hole("c2").unwrap();
        let c3 = d3.parse_hole("c3").unwrap();
        assert!(t.triples().contains(&Jump {
            origin: c1,
            over: c2,
            target: c3
        }));
        // Every triple stays on the board.
        for j in t.triples() {
            for h in [j.origin, j.over, j.target] {
                assert!(h.index() < d3.hole_count());
            }
        }
    }

    #[test]
    fn parse_moves() {
        let d4 = g("diamond-4");
        let mv = d4.parse_move("d4-f4-d6-d4", Variant::Eight).unwrap();
        let overs: Vec<String> = mv.jumps().iter().map(|j| d4.hole_name(j.over)).collect();
        assert_eq!(overs, ["e4", "e5", "d5"]);
        assert_eq!(d4.format_move(&mv), "d4-f4-d6-d4");

        let mv = d4.parse_move("d4-f4", Variant::Four).unwrap();
        assert_eq!(d4.hole_name(mv.jumps()[0].over), "e4");

        let e = g("english-33");
        assert!(matches!(
            e.parse_move("b2-d4", Variant::Eight),
            Err(Error::NotAHole { .. })
        ));
        assert!(matches!(
            e.parse_move("c3-e5", Variant::Four),
            Err(Error::BadJump { .. })
        ));
        assert!(matches!(
            e.parse_move("c3-d4", Variant::Eight),
            Err(Error::BadJump { .. })
        ));
        assert!(e.parse_move("c3", Variant::Eight).is_err());
    }

    #[test]
    fn six_move_axis() {
        let e = g("english-33");
        let nwse = Variant::Six(DiagonalAxis::NwSe);
        let nesw = Variant::Six(DiagonalAxis::NeSw);
        assert!(e.parse_move("c3-e5", nwse).is_ok());
        assert!(e.parse_move("e3-c5", nwse).is_err());
        assert!(e.parse_move("e3-c5", nesw).is_ok());
        assert_eq!("6".parse::<Variant>().unwrap(), nwse);
    }

    #[test]
    fn apply_single_jump() {
        let f = g("french-37");
        let start = f.vacancy(f.center());
        let mv = f.parse_move("d2-d4", Variant::Eight).unwrap();
        let after = start.apply_move(&mv).unwrap();
        assert_eq!(after.pegs(), 35);
        for (c, peg) in [("d2", false), ("d3", false), ("d4", true)] {
            assert_eq!(after.is_occupied(f.parse_hole(c).unwrap()), peg);
        }
        let err = after.apply_move(&mv).unwrap_err();
        assert!(matches!(err, Error::IllegalJump { jump_index: 0, .. }));
    }

    #[test]
    fn complement_examples() {
        let d3 = g("diamond-3");
        assert_eq!(d3.empty().complement().pegs(), 13);
        let f = g("french-37");
        let c9 = f.position(f.central_nine());
        let c9c = c9.complement();
        assert_eq!(c9c.pegs(), 28);
        assert_eq!(c9c.code() & f.central_nine(), 0);
    }

    #[test]
    fn canonical_examples() {
        let e = g("english-33");
        let d2 = e.parse_hole("d2").unwrap();
        let codes: Vec<u64> = Symmetry::all()
            .map(|s| e.single(e.transform_hole(s, d2)).canonical_code())
            .collect();
        assert!(codes.windows(2).all(|w| w[0] == w[1]));

        let f = g("french-37");
        let c9 = f.position(f.central_nine());
        assert_eq!(c9.canonical_code(), c9.code());
        assert_eq!(f.stabilizer(c9.code(), SymmetryGroup::FULL), SymmetryGroup::FULL);

        let start = f.vacancy(f.center());
        let a = start.apply_move(&f.parse_move("d2-d4", Variant::Eight).unwrap()).unwrap();
        let b = start.apply_move(&f.parse_move("b2-d4", Variant::Eight).unwrap()).unwrap();
        assert_ne!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn position_grid_round_trip() {
        let e = g("english-33");
        let pos = e.vacancy(e.center());
        let text = pos.to_string();
        assert_eq!(text.lines().next().unwrap(), "##***##");
        assert_eq!(text.lines().nth(3).unwrap(), "***.***");
        assert_eq!(e.parse_position(&text).unwrap(), pos);
        assert!(e.parse_position("##***##\n").is_err());
        let bad = text.replacen('#', "*", 1);
        assert!(matches!(e.parse_position(&bad), Err(Error::MalformedPosition(_))));
    }

    #[test]
    fn position_specs() {
        let f = g("french-37");
        assert_eq!(f.parse_position_spec("C9").unwrap().pegs(), 9);
        assert_eq!(f.parse_position_spec("c9'").unwrap().pegs(), 28);
        assert_eq!(f.parse_position_spec("d4'").unwrap(), f.vacancy(f.center()));
        assert_eq!(f.parse_position_spec("d4").unwrap(), f.single(f.center()));
    }

    #[test]
    fn symmetry_inverse_round_trips() {
        let d5 = g("diamond-5");
        for s in Symmetry::all() {
            for h in d5.holes() {
                assert_eq!(d5.transform_hole(s.inverse(), d5.transform_hole(s, h)), h);
            }
        }
    }
}
