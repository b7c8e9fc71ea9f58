//! Conserved structures of the game: peg categories, four-move position
//! classes, resource counts and the reversal of a play.

use std::fmt;

use crate::board::{Geometry, Hole, Jump, Move, Position, Solution, Symmetry, Variant};
use crate::error::{Error, Result};

/// One of the four peg categories, fixed for a peg for the whole game.
///
/// The label of a hole is `(Δcol mod 2) + 2·(Δrow mod 2)` relative to the
/// board center, so the center is category 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Category(pub u8);

pub fn category_of(geom: &Geometry, hole: Hole) -> Category {
    let (dx, dy) = geom.offset(hole);
    Category((dx.rem_euclid(2) + 2 * dy.rem_euclid(2)) as u8)
}

/// Bitmask of the holes in category `cat`.
pub fn category_mask(geom: &Geometry, cat: Category) -> u64 {
    geom.holes()
        .filter(|&h| category_of(geom, h) == cat)
        .fold(0, |m, h| m | h.bit())
}

/// Peg count per category.
pub fn category_counts(pos: &Position) -> [u32; 4] {
    let geom = pos.geometry();
    let mut counts = [0; 4];
    for h in pos.occupied() {
        counts[category_of(geom, h).0 as usize] += 1;
    }
    counts
}

/// The six diagonal-count parities conserved by four-move jumps.
///
/// Diagonals are labelled 0,1,2 repeating: `(col − row) mod 3` for the family
/// running down-right and `(col + row) mod 3` for the family running up-right,
/// with grid columns and rows counted from the top-left cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionClass {
    /// Parities of n0+n1, n1+n2, n0+n2 along down-right diagonals.
    pub down: [bool; 3],
    /// The same along up-right diagonals.
    pub up: [bool; 3],
}

impl PositionClass {
    fn from_counts(down: [u32; 3], up: [u32; 3]) -> PositionClass {
        let par = |n: [u32; 3]| [(n[0] + n[1]) % 2 == 1, (n[1] + n[2]) % 2 == 1, (n[0] + n[2]) % 2 == 1];
        PositionClass {
            down: par(down),
            up: par(up),
        }
    }
}

impl fmt::Display for PositionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |p: [bool; 3]| p.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "{}/{}", bits(self.down), bits(self.up))
    }
}

pub fn position_class(pos: &Position) -> PositionClass {
    let geom = pos.geometry();
    let mut down = [0u32; 3];
    let mut up = [0u32; 3];
    for h in pos.occupied() {
        let (x, y) = geom.cell(h);
        let (x, y) = (x as i32, y as i32);
        down[(x - y).rem_euclid(3) as usize] += 1;
        up[(x + y).rem_euclid(3) as usize] += 1;
    }
    PositionClass::from_counts(down, up)
}

/// Holes where a lone survivor shares the four-move position class of the
/// single-vacancy start at `vacancy`.
pub fn rule_of_three_targets(geom: &'static Geometry, vacancy: Hole) -> Vec<Hole> {
    let start = position_class(&geom.vacancy(vacancy));
    geom.holes()
        .filter(|&h| position_class(&geom.single(h)) == start)
        .collect()
}

/// An integer weight per hole such that no jump of `variant` increases the
/// total weight of the occupied holes (a pagoda function).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceCount {
    geom: &'static Geometry,
    variant: Variant,
    weights: Vec<i32>,
}

impl ResourceCount {
    pub fn new(geom: &'static Geometry, variant: Variant, weights: Vec<i32>) -> Result<ResourceCount> {
        if weights.len() != geom.hole_count() {
            return Err(Error::MalformedWeights(format!(
                "{} weights for {} holes",
                weights.len(),
                geom.hole_count()
            )));
        }
        Ok(ResourceCount {
            geom,
            variant,
            weights,
        })
    }

    pub fn geometry(&self) -> &'static Geometry {
        self.geom
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn weights(&self) -> &[i32] {
        &self.weights
    }

    pub fn weight(&self, hole: Hole) -> i32 {
        self.weights[hole.index()]
    }

    pub fn value(&self, pos: &Position) -> i32 {
        self.value_of(pos.code())
    }

    #[inline]
    pub fn value_of(&self, mut bits: u64) -> i32 {
        let mut total = 0;
        while bits != 0 {
            total += self.weights[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        total
    }

    /// Change in value caused by playing `jump`.
    pub fn delta(&self, jump: Jump) -> i32 {
        self.weight(jump.target) - self.weight(jump.origin) - self.weight(jump.over)
    }

    /// The first jump (in table order) that would increase the total, if any.
    pub fn violation(&self) -> Option<Jump> {
        self.geom
            .jumps(self.variant)
            .triples()
            .iter()
            .copied()
            .find(|&j| self.delta(j) > 0)
    }

    pub fn is_valid(&self) -> bool {
        self.violation().is_none()
    }

    /// Re-targets the same weights at another variant (validity is not implied).
    pub fn for_variant(&self, variant: Variant) -> ResourceCount {
        ResourceCount {
            variant,
            ..self.clone()
        }
    }

    /// Parses the weight grid: one line per row, `#` for off-board cells and an
    /// integer per hole, separated by whitespace.
    pub fn parse(geom: &'static Geometry, variant: Variant, text: &str) -> Result<ResourceCount> {
        let rows: Vec<Vec<&str>> = text
            .lines()
            .map(|l| l.split_whitespace().collect::<Vec<_>>())
            .filter(|r| !r.is_empty())
            .collect();
        let side = geom.side() as usize;
        if rows.len() != side {
            return Err(Error::MalformedWeights(format!(
                "expected {side} rows, found {}",
                rows.len()
            )));
        }
        let mut weights = vec![0; geom.hole_count()];
        for (y, row) in rows.iter().enumerate() {
            if row.len() != side {
                return Err(Error::MalformedWeights(format!(
                    "row {} has {} cells, expected {side}",
                    y + 1,
                    row.len()
                )));
            }
            for (x, cell) in row.iter().enumerate() {
                match (geom.hole_at(x as i32, y as i32), *cell) {
                    (None, "#") => {}
                    (Some(h), text) => {
                        weights[h.index()] = text.parse().map_err(|_| {
                            Error::MalformedWeights(format!("bad weight `{text}` at row {} column {}", y + 1, x + 1))
                        })?;
                    }
                    (None, other) => {
                        return Err(Error::MalformedWeights(format!(
                            "expected `#` at row {} column {}, found `{other}`",
                            y + 1,
                            x + 1
                        )))
                    }
                }
            }
        }
        ResourceCount::new(geom, variant, weights)
    }
}

impl fmt::Display for ResourceCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = self.geom.side() as i32;
        let cells: Vec<String> = (0..side * side)
            .map(|i| match self.geom.hole_at(i % side, i / side) {
                Some(h) => self.weight(h).to_string(),
                None => "#".to_string(),
            })
            .collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for row in cells.chunks(side as usize) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// A linear condition on the weights of a resource count being derived.
#[derive(Clone, Debug)]
pub enum Constraint {
    /// `weight(hole) rel rhs`.
    Weight { hole: Hole, rel: Relation, rhs: i32 },
    /// `value(position) rel rhs`.
    Value {
        position: Position,
        rel: Relation,
        rhs: i32,
    },
    /// The change in value caused by `jump` satisfies `rel rhs`.
    JumpDelta { jump: Jump, rel: Relation, rhs: i32 },
    /// Some hole's weight satisfies `rel rhs`.
    SomeWeight { rel: Relation, rhs: i32 },
    /// `value(to) > value(from)`: the count certifies that `to` cannot be
    /// reached from `from`.
    Separates { from: Position, to: Position },
}

#[derive(Clone, Copy, Debug)]
pub struct DeriveOptions {
    /// Weights range over `-bound..=bound`.
    pub bound: i32,
    /// Force equal weights on holes related by a symmetry of the variant.
    pub symmetric: bool,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        DeriveOptions {
            bound: 4,
            symmetric: true,
        }
    }
}

struct LinearRow {
    coeffs: Vec<(usize, i64)>,
    rel: Relation,
    rhs: i64,
    /// Per variable position, the largest magnitude the remaining (later) variables can add.
    slack_after: Vec<i64>,
    last_var: usize,
}

/// Searches for a valid resource count satisfying `constraints`.
///
/// Backtracking assigns one weight per symmetry orbit (or per hole), orbits in
/// order of their lowest hole index, trying values 0, 1, −1, 2, −2, … up to
/// the bound. The first assignment meeting every constraint is returned, so
/// the result is deterministic. `None` means no count exists within the bound.
pub fn derive_resource_count(
    geom: &'static Geometry,
    variant: Variant,
    constraints: &[Constraint],
    options: DeriveOptions,
) -> Option<ResourceCount> {
    // Orbits under the symmetries that preserve the variant's jump set.
    let n = geom.hole_count();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<Hole>> = Vec::new();
    for h in geom.holes() {
        if orbit_of[h.index()] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![h];
        orbit_of[h.index()] = id;
        if options.symmetric {
            for s in variant.symmetry_group().iter() {
                let img = geom.transform_hole(s, h);
                if orbit_of[img.index()] == usize::MAX {
                    orbit_of[img.index()] = id;
                    members.push(img);
                }
            }
        }
        orbits.push(members);
    }
    let vars = orbits.len();

    let mut rows: Vec<LinearRow> = Vec::new();
    let mut add_row = |weights: Vec<(Hole, i64)>, rel: Relation, rhs: i64| {
        let mut coeffs = vec![0i64; vars];
        for (h, c) in weights {
            coeffs[orbit_of[h.index()]] += c;
        }
        let coeffs: Vec<(usize, i64)> = coeffs
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .collect();
        let bound = options.bound as i64;
        let mut slack_after = vec![0i64; vars + 1];
        for v in (0..vars).rev() {
            let c = coeffs.iter().find(|&&(i, _)| i == v).map_or(0, |&(_, c)| c);
            slack_after[v] = slack_after[v + 1] + c.abs() * bound;
        }
        let last_var = coeffs.iter().map(|&(i, _)| i).max().unwrap_or(0);
        rows.push(LinearRow {
            coeffs,
            rel,
            rhs,
            slack_after,
            last_var,
        });
    };

    // Validity: w(t) − w(o) − w(m) ≤ 0 for every jump.
    for j in geom.jumps(variant).triples() {
        add_row(vec![(j.target, 1), (j.origin, -1), (j.over, -1)], Relation::Le, 0);
    }
    let mut some_weight = Vec::new();
    for c in constraints {
        match c {
            Constraint::Weight { hole, rel, rhs } => add_row(vec![(*hole, 1)], *rel, *rhs as i64),
            Constraint::Value { position, rel, rhs } => {
                add_row(position.occupied().map(|h| (h, 1)).collect(), *rel, *rhs as i64)
            }
            Constraint::JumpDelta { jump, rel, rhs } => add_row(
                vec![(jump.target, 1), (jump.origin, -1), (jump.over, -1)],
                *rel,
                *rhs as i64,
            ),
            Constraint::SomeWeight { rel, rhs } => some_weight.push((*rel, *rhs as i64)),
            Constraint::Separates { from, to } => add_row(
                to.occupied()
                    .map(|h| (h, 1))
                    .chain(from.occupied().map(|h| (h, -1)))
                    .collect(),
                Relation::Ge,
                1,
            ),
        }
    }

    // Rows checked (for pruning) after assigning each variable.
    let mut rows_at: Vec<Vec<usize>> = vec![Vec::new(); vars];
    for (r, row) in rows.iter().enumerate() {
        if row.coeffs.is_empty() {
            if !row.rel.holds(0, row.rhs) {
                return None;
            }
            continue;
        }
        let first = row.coeffs.iter().map(|&(i, _)| i).min().unwrap();
        for rows in &mut rows_at[first..=row.last_var] {
            rows.push(r);
        }
    }

    let values: Vec<i32> = std::iter::once(0)
        .chain((1..=options.bound).flat_map(|k| [k, -k]))
        .collect();
    let mut assign = vec![0i32; vars];

    fn feasible(row: &LinearRow, assign: &[i32], upto: usize) -> bool {
        let partial: i64 = row
            .coeffs
            .iter()
            .filter(|&&(i, _)| i <= upto)
            .map(|&(i, c)| c * assign[i] as i64)
            .sum();
        let slack = row.slack_after[upto + 1];
        let (lo, hi) = (partial - slack, partial + slack);
        match row.rel {
            Relation::Eq => lo <= row.rhs && row.rhs <= hi,
            Relation::Le => lo <= row.rhs,
            Relation::Ge => hi >= row.rhs,
        }
    }

    fn search(
        v: usize,
        vars: usize,
        values: &[i32],
        assign: &mut Vec<i32>,
        rows: &[LinearRow],
        rows_at: &[Vec<usize>],
        accept: &dyn Fn(&[i32]) -> bool,
    ) -> bool {
        if v == vars {
            return accept(assign);
        }
        for &val in values {
            assign[v] = val;
            if rows_at[v].iter().all(|&r| feasible(&rows[r], assign, v))
                && search(v + 1, vars, values, assign, rows, rows_at, accept)
            {
                return true;
            }
        }
        false
    }

    let accept = |assign: &[i32]| {
        some_weight
            .iter()
            .all(|&(rel, rhs)| assign.iter().any(|&w| rel.holds(w as i64, rhs)))
    };
    if !search(0, vars, &values, &mut assign, &rows, &rows_at, &accept) {
        return None;
    }
    let weights = geom.holes().map(|h| assign[orbit_of[h.index()]]).collect();
    let rc = ResourceCount::new(geom, variant, weights).ok()?;
    debug_assert!(rc.is_valid());
    Some(rc)
}

/// Plays `solution` backwards on complemented positions.
///
/// If the jumps take A to B, the same jumps in reverse order take B′ to A′.
/// Consecutive reversed jumps are grouped into one move when the second
/// starts where the first landed, so the move count can differ from the
/// original.
pub fn reverse_solution(solution: &Solution) -> Result<Solution> {
    let end = solution.replay()?;
    let mut moves: Vec<Move> = Vec::new();
    let jumps: Vec<Jump> = solution.jumps().collect();
    for &j in jumps.iter().rev() {
        match moves.last_mut() {
            Some(last) if last.destination() == j.origin => last.push(j),
            _ => moves.push(Move::single(j)),
        }
    }
    let reversed = Solution::new(solution.variant, end.complement(), moves);
    reversed.replay()?;
    Ok(reversed)
}

/// Images of a resource count under the board's symmetries.
pub fn transform_resource_count(rc: &ResourceCount, s: Symmetry) -> ResourceCount {
    let geom = rc.geometry();
    let mut weights = vec![0; geom.hole_count()];
    for h in geom.holes() {
        weights[geom.transform_hole(s, h).index()] = rc.weight(h);
    }
    ResourceCount {
        geom,
        variant: rc.variant,
        weights,
    }
}
