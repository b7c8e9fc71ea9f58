//! Admissible lower bounds on the number of moves still needed.
//!
//! Corner-constrained boards (the 33- and 37-hole boards) use corner counting;
//! diamond boards use filled Merson regions: hole-sets that, once full, can
//! only lose a peg through a move starting inside them.

use std::fmt;

use crate::board::{BoardName, Geometry, Hole, Jump, Position, Variant};
use crate::error::{Error, Result};
use crate::invariants::{category_mask, category_of, Category};

/// Holes no jump of `variant` can capture.
pub fn find_corners(geom: &Geometry, variant: Variant) -> Vec<Hole> {
    geom.jumps(variant).uncapturable()
}

fn mask_of(holes: impl IntoIterator<Item = Hole>) -> u64 {
    holes.into_iter().fold(0, |m, h| m | h.bit())
}

/// Holes sharing a category with some corner.
pub fn corner_category_mask(geom: &Geometry, variant: Variant) -> u64 {
    let mut cats = [false; 4];
    for c in find_corners(geom, variant) {
        cats[category_of(geom, c).0 as usize] = true;
    }
    (0..4u8)
        .filter(|&c| cats[c as usize])
        .fold(0, |m, c| m | category_mask(geom, Category(c)))
}

/// `c(B) + ⌈(p(B) − f)/4⌉` on the 33- and 37-hole boards, where `c` counts
/// occupied corners and `p` counts corner-category pegs.
///
/// With `f = 0` a corner-category survivor is excluded; with `f = 1` any
/// survivor is allowed and a lone peg scores zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CornerBound {
    corners: u64,
    corner_pegs: u64,
}

impl CornerBound {
    pub fn new(geom: &Geometry) -> Result<CornerBound> {
        if !matches!(geom.name(), BoardName::English33 | BoardName::French37) {
            return Err(Error::Unsupported(format!(
                "corner bound needs at most four corner pegs removed per move; {} does not qualify",
                geom.name()
            )));
        }
        // Corners of the eight-move game; on these boards they are also the
        // four-move corners.
        Ok(CornerBound {
            corners: mask_of(find_corners(geom, Variant::Eight)),
            corner_pegs: corner_category_mask(geom, Variant::Eight),
        })
    }

    pub fn corners(&self) -> u64 {
        self.corners
    }

    pub fn corner_pegs(&self) -> u64 {
        self.corner_pegs
    }

    #[inline]
    pub fn eval(&self, bits: u64, f: u8) -> u32 {
        if f == 1 && bits.count_ones() == 1 {
            return 0;
        }
        let c = (bits & self.corners).count_ones() as i32;
        let p = (bits & self.corner_pegs).count_ones() as i32;
        let rest = (p - f as i32).max(0);
        (c + (rest + 3) / 4) as u32
    }
}

pub fn h1(pos: &Position, f: u8) -> Result<u32> {
    Ok(CornerBound::new(pos.geometry())?.eval(pos.code(), f))
}

/// `c(B) + v(B)` for reaching a filled central waypoint: one move per occupied
/// corner plus one per still-empty waypoint hole that corner moves cannot fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WaypointBound {
    corners: u64,
    interior: u64,
}

impl WaypointBound {
    pub fn new(corners: u64, interior: u64) -> WaypointBound {
        WaypointBound { corners, interior }
    }

    /// Bound for reaching the central 3×3 block: the waypoint holes outside
    /// the corner category each need their own filling move.
    pub fn central_nine(geom: &Geometry, variant: Variant) -> WaypointBound {
        WaypointBound {
            corners: mask_of(find_corners(geom, variant)),
            interior: geom.central_nine() & !corner_category_mask(geom, variant),
        }
    }

    pub fn corners(&self) -> u64 {
        self.corners
    }

    pub fn interior(&self) -> u64 {
        self.interior
    }

    #[inline]
    pub fn eval(&self, bits: u64) -> u32 {
        (bits & self.corners).count_ones() + (self.interior & !bits).count_ones()
    }
}

pub fn h2(pos: &Position, interior: u64, corners: u64) -> u32 {
    WaypointBound::new(corners, interior).eval(pos.code())
}

/// A hole-set such that no jump from outside it can remove one of its pegs
/// while it is full: every triple `(o, m, t)` with `m` inside and `o` outside
/// lands inside. Returns the first offending jump.
pub fn validate_merson_region(geom: &Geometry, variant: Variant, region: u64) -> Result<(), Jump> {
    let table = geom.jumps(variant);
    let mut rest = region;
    while rest != 0 {
        let m = Hole(rest.trailing_zeros() as u8);
        rest &= rest - 1;
        for &j in table.over(m) {
            if region & j.origin.bit() == 0 && region & j.target.bit() == 0 {
                return Err(j);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MersonDecomposition {
    geom: &'static Geometry,
    variant: Variant,
    corners: Vec<Hole>,
    /// Per edge, its slideable two-hole windows.
    edges: Vec<Vec<u64>>,
    /// Placements of the interior region, base placement first.
    interior: Vec<u64>,
    category_masks: [u64; 4],
}

impl MersonDecomposition {
    pub fn geometry(&self) -> &'static Geometry {
        self.geom
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn corners(&self) -> &[Hole] {
        &self.corners
    }

    pub fn edges(&self) -> &[Vec<u64>] {
        &self.edges
    }

    pub fn interior(&self) -> &[u64] {
        &self.interior
    }

    /// Number of regions counted at once: corners, edges and the interior.
    pub fn region_count(&self) -> usize {
        self.corners.len() + self.edges.len() + usize::from(!self.interior.is_empty())
    }

    /// Every region and slide placement, each of which must validate.
    pub fn all_placements(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.corners.iter().map(|h| h.bit()).collect();
        out.extend(self.edges.iter().flatten().copied());
        out.extend(self.interior.iter().copied());
        out
    }

    /// Filled regions, sliding edge windows and interior placements.
    #[inline]
    pub fn filled_regions(&self, bits: u64) -> u32 {
        let mut r = 0;
        for c in &self.corners {
            r += (bits & c.bit() != 0) as u32;
        }
        for windows in &self.edges {
            r += windows.iter().any(|&w| w & !bits == 0) as u32;
        }
        r += self.interior.iter().any(|&p| p & !bits == 0) as u32;
        r
    }

    #[inline]
    pub fn eval(&self, bits: u64) -> u32 {
        if bits.count_ones() == 1 {
            0
        } else {
            self.filled_regions(bits)
        }
    }

    /// `max(r, s)`: before the final move the survivor must be alone in its
    /// category, so `s` is 0 for a lone peg, 1 if some category holds exactly
    /// one peg and 2 otherwise.
    #[inline]
    pub fn eval_final(&self, bits: u64) -> u32 {
        if bits.count_ones() <= 1 {
            return 0;
        }
        let s = if self.category_masks.iter().any(|&m| (bits & m).count_ones() == 1) {
            1
        } else {
            2
        };
        self.filled_regions(bits).max(s)
    }

    /// Region names (A, B, C, …) with their holes; slides follow their base.
    pub fn named_regions(&self) -> Vec<(String, Vec<u64>)> {
        let mut out = Vec::new();
        let mut next = b'A';
        let mut name = || {
            let n = (next as char).to_string();
            next += 1;
            n
        };
        for c in &self.corners {
            out.push((name(), vec![c.bit()]));
        }
        for e in &self.edges {
            out.push((name(), e.clone()));
        }
        if !self.interior.is_empty() {
            out.push(("I".to_string(), self.interior.clone()));
        }
        out
    }
}

impl fmt::Display for MersonDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |mask: u64| {
            self.geom
                .holes()
                .filter(|h| mask & h.bit() != 0)
                .map(|h| self.geom.hole_name(h))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for (name, placements) in self.named_regions() {
            let slides: Vec<String> = placements.iter().map(|&p| names(p)).collect();
            writeln!(f, "{name}: {}", slides.join(" | "))?;
        }
        Ok(())
    }
}

pub fn h3(pos: &Position, decomposition: &MersonDecomposition) -> u32 {
    decomposition.eval(pos.code())
}

pub fn final_level_refinement(pos: &Position, decomposition: &MersonDecomposition) -> u32 {
    decomposition.eval_final(pos.code())
}

/// Largest interior region searched for.
const INTERIOR_MAX_HOLES: u32 = 12;
/// Interior regions stay within this Manhattan distance of the center.
const INTERIOR_RADIUS: i32 = 3;

/// Corners, slideable edge windows and (where one fits) a minimal interior
/// region with its translates, for a diamond board.
pub fn derive_merson_decomposition(
    geom: &'static Geometry,
    variant: Variant,
) -> Result<MersonDecomposition> {
    let BoardName::Diamond(n) = geom.name() else {
        return Err(Error::Unsupported(format!(
            "Merson decomposition is derived for diamond boards only, not {}",
            geom.name()
        )));
    };
    let radius = n as i32 - 1;
    let corners = find_corners(geom, variant);
    let corner_mask = mask_of(corners.iter().copied());
    let dist = |h: Hole| {
        let (dx, dy) = geom.offset(h);
        dx.abs() + dy.abs()
    };

    // Edges run between consecutive tips, ordered by column.
    let quadrants: [(i32, i32); 4] = [(-1, -1), (1, -1), (1, 1), (-1, 1)];
    let mut edges = Vec::new();
    for (sx, sy) in quadrants {
        let mut holes: Vec<Hole> = geom
            .holes()
            .filter(|&h| {
                let (dx, dy) = geom.offset(h);
                dist(h) == radius && dx * sx > 0 && dy * sy > 0 && corner_mask & h.bit() == 0
            })
            .collect();
        holes.sort_by_key(|&h| geom.cell(h).0);
        let windows: Vec<u64> = holes
            .windows(2)
            .map(|w| w[0].bit() | w[1].bit())
            .filter(|&w| validate_merson_region(geom, variant, w).is_ok())
            .collect();
        if !windows.is_empty() {
            edges.push(windows);
        }
    }

    let allowed = geom
        .holes()
        .filter(|&h| dist(h) < radius && dist(h) <= INTERIOR_RADIUS)
        .fold(0u64, |m, h| m | h.bit());
    let interior = interior_placements(geom, variant, allowed);

    Ok(MersonDecomposition {
        geom,
        variant,
        corners,
        edges,
        interior,
        category_masks: std::array::from_fn(|c| category_mask(geom, Category(c as u8))),
    })
}

/// All minimal valid regions inside `allowed`, grouped by translation; the
/// largest family is returned with its top-left placement first.
fn interior_placements(geom: &Geometry, variant: Variant, allowed: u64) -> Vec<u64> {
    let table = geom.jumps(variant);
    let first_violation = |region: u64| -> Option<(Hole, Hole)> {
        let mut rest = region;
        while rest != 0 {
            let m = Hole(rest.trailing_zeros() as u8);
            rest &= rest - 1;
            for j in table.over(m) {
                if region & (j.origin.bit() | j.target.bit()) == 0 {
                    return Some((j.origin, j.target));
                }
            }
        }
        None
    };

    // Grow from each seed, branching on which end of a violated triple to add.
    fn grow(
        region: u64,
        limit: u32,
        allowed: u64,
        first_violation: &dyn Fn(u64) -> Option<(Hole, Hole)>,
        found: &mut Vec<u64>,
    ) {
        if region.count_ones() > limit {
            return;
        }
        match first_violation(region) {
            None => found.push(region),
            Some((a, b)) => {
                for h in [a, b] {
                    if allowed & h.bit() != 0 {
                        grow(region | h.bit(), limit, allowed, first_violation, found);
                    }
                }
            }
        }
    }

    let mut minimal = Vec::new();
    for limit in 1..=INTERIOR_MAX_HOLES {
        let mut found = Vec::new();
        let mut rest = allowed;
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            rest &= rest - 1;
            grow(seed, limit, allowed, &first_violation, &mut found);
        }
        found.retain(|r| r.count_ones() == limit);
        if !found.is_empty() {
            found.sort_unstable();
            found.dedup();
            minimal = found;
            break;
        }
    }
    if minimal.is_empty() {
        return Vec::new();
    }

    // Normalise each region to its top-left anchor to group translates.
    let cells = |r: u64| -> Vec<(i32, i32)> {
        let mut v: Vec<(i32, i32)> = geom
            .holes()
            .filter(|h| r & h.bit() != 0)
            .map(|h| {
                let (x, y) = geom.cell(h);
                (y as i32, x as i32)
            })
            .collect();
        v.sort_unstable();
        v
    };
    let shape = |r: u64| {
        let c = cells(r);
        let (y0, x0) = c[0];
        c.into_iter().map(|(y, x)| (y - y0, x - x0)).collect::<Vec<_>>()
    };
    // Each family is a shape (cell offsets from its first cell) with its placements.
    type Family = (Vec<(i32, i32)>, Vec<u64>);
    let mut families: Vec<Family> = Vec::new();
    for r in minimal {
        let s = shape(r);
        match families.iter_mut().find(|(fs, _)| *fs == s) {
            Some((_, members)) => members.push(r),
            None => families.push((s, vec![r])),
        }
    }
    let (_, mut members) = families
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.1[0].cmp(&a.1[0])))
        .expect("non-empty");
    members.sort_by_key(|&r| cells(r)[0]);
    members
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> &'static Geometry {
        Geometry::named(name).unwrap()
    }

    fn names(geom: &Geometry, mask: u64) -> Vec<String> {
        geom.holes()
            .filter(|h| mask & h.bit() != 0)
            .map(|h| geom.hole_name(h))
            .collect()
    }

    fn mask(geom: &Geometry, holes: &[&str]) -> u64 {
        holes.iter().fold(0, |m, c| m | geom.parse_hole(c).unwrap().bit())
    }

    #[test]
    fn corner_counts() {
        let f = g("french-37");
        let corners: Vec<String> = find_corners(f, Variant::Eight)
            .into_iter()
            .map(|h| f.hole_name(h))
            .collect();
        assert_eq!(corners, ["c1", "e1", "a3", "g3", "a5", "g5", "c7", "e7"]);
        assert_eq!(find_corners(g("english-33"), Variant::Eight).len(), 8);

        let d5 = g("diamond-5");
        let corners: Vec<String> = find_corners(d5, Variant::Eight)
            .into_iter()
            .map(|h| d5.hole_name(h))
            .collect();
        assert_eq!(corners, ["e1", "a5", "i5", "e9"]);
        for n in 3..=6 {
            let d = Geometry::get(BoardName::Diamond(n));
            assert_eq!(find_corners(d, Variant::Eight).len(), 4);
        }
        assert!(find_corners(g("diamond-4"), Variant::Four).len() > 4);
    }

    #[test]
    fn corner_bound_values() {
        let f = g("french-37");
        let start = f.vacancy(f.center());
        assert_eq!(h1(&start, 1).unwrap(), 11);
        assert_eq!(h1(&f.single(f.center()), 1).unwrap(), 0);
        assert_eq!(h1(&f.single(f.parse_hole("c3").unwrap()), 0).unwrap(), 1);
        assert_eq!(h1(&f.single(f.parse_hole("d3").unwrap()), 0).unwrap(), 0);
        let cb = CornerBound::new(f).unwrap();
        assert_eq!(names(f, cb.corner_pegs()).len(), 12);
        assert!(h1(&g("diamond-4").full(), 1).is_err());
    }

    #[test]
    fn waypoint_bound_values() {
        let f = g("french-37");
        let wb = WaypointBound::central_nine(f, Variant::Eight);
        assert_eq!(names(f, wb.interior()), ["d3", "c4", "d4", "e4", "d5"]);
        let c9 = f.position(f.central_nine());
        assert_eq!(wb.eval(c9.complement().code()), 13);
        assert_eq!(wb.eval(c9.code()), 0);

        let d5 = g("diamond-5");
        let wb = WaypointBound::central_nine(d5, Variant::Eight);
        assert_eq!(
            names(d5, wb.interior()),
            ["d4", "e4", "f4", "d5", "f5", "d6", "e6", "f6"]
        );
        let c9 = d5.position(d5.central_nine());
        assert_eq!(h2(&c9.complement(), wb.interior(), wb.corners()), 12);
    }

    #[test]
    fn merson_region_checks() {
        let d4 = g("diamond-4");
        assert!(validate_merson_region(d4, Variant::Eight, mask(d4, &["c2", "b3"])).is_ok());
        assert!(validate_merson_region(d4, Variant::Eight, mask(d4, &["d1"])).is_ok());
        let witness = validate_merson_region(d4, Variant::Eight, mask(d4, &["c2"])).unwrap_err();
        assert_eq!(witness.over, d4.parse_hole("c2").unwrap());
    }

    #[test]
    fn diamond4_has_eight_regions() {
        let d4 = g("diamond-4");
        let dec = derive_merson_decomposition(d4, Variant::Eight).unwrap();
        assert_eq!(dec.region_count(), 8);
        assert!(dec.interior().is_empty());
        assert_eq!(h3(&d4.vacancy(d4.center()), &dec), 8);
        assert_eq!(h3(&d4.single(d4.parse_hole("a4").unwrap()), &dec), 0);
        for p in dec.all_placements() {
            assert!(validate_merson_region(d4, Variant::Eight, p).is_ok());
        }
    }

    #[test]
    fn diamond5_interior_slides() {
        let d5 = g("diamond-5");
        let dec = derive_merson_decomposition(d5, Variant::Eight).unwrap();
        assert_eq!(dec.region_count(), 9);
        assert_eq!(dec.interior().len(), 4);
        assert_eq!(
            names(d5, dec.interior()[0]),
            ["d3", "e3", "c4", "d4", "e4", "f4", "c5", "d5", "e5", "f5", "d6", "e6"]
        );
        // The start has every edge and corner full but the interior broken at e5.
        assert_eq!(h3(&d5.vacancy(d5.center()), &dec), 8);
        assert_eq!(h3(&d5.full(), &dec), 9);
        let placements = dec.all_placements();
        for p in &placements {
            assert!(validate_merson_region(d5, Variant::Eight, *p).is_ok());
        }
    }

    #[test]
    fn final_refinement_cases() {
        let d5 = g("diamond-5");
        let dec = derive_merson_decomposition(d5, Variant::Eight).unwrap();
        let h = |c| d5.parse_hole(c).unwrap();
        assert_eq!(final_level_refinement(&d5.single(h("e5")), &dec), 0);
        // e5 and c5 are both category 0.
        let two = d5.position(h("e5").bit() | h("c5").bit());
        assert_eq!(final_level_refinement(&two, &dec), 2);
        // One category-0 peg among three category-3 pegs.
        let pos = d5.position(h("e5").bit() | h("d4").bit() | h("f4").bit() | h("d6").bit());
        assert_eq!(dec.filled_regions(pos.code()), 0);
        assert_eq!(final_level_refinement(&pos, &dec), 1);
    }

    #[test]
    fn diamond6_regions_validate() {
        let d6 = g("diamond-6");
        let dec = derive_merson_decomposition(d6, Variant::Eight).unwrap();
        assert_eq!(dec.corners().len(), 4);
        assert_eq!(dec.edges().len(), 4);
        for p in dec.all_placements() {
            assert!(validate_merson_region(d6, Variant::Eight, p).is_ok());
        }
        assert!(derive_merson_decomposition(g("english-33"), Variant::Eight).is_err());
    }
}
