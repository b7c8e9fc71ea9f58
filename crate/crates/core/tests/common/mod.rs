//! Helpers shared by the property suite and the acceptance run.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pegsol::heuristics::derive_merson_decomposition;
use pegsol::invariants::{derive_resource_count, Constraint, DeriveOptions, Relation, ResourceCount};
use pegsol::search::{enumerate_moves, search_shortest, DedupPolicy, Heuristic, SearchConfig, SolutionMode, Target};
use pegsol::{BoardName, Geometry, Solution, Variant};

pub const VARIANTS: [&str; 4] = ["4", "6", "6-nesw", "8"];

/// A random play from a random single vacancy until no move remains.
pub fn random_playout(geom: &'static Geometry, variant: Variant, seed: u64) -> Solution {
    let mut rng = StdRng::seed_from_u64(seed);
    let holes: Vec<_> = geom.holes().collect();
    let start = geom.vacancy(holes[rng.gen_range(0..holes.len())]);
    let mut pos = start;
    let mut moves = Vec::new();
    loop {
        let options = enumerate_moves(&pos, variant);
        if options.is_empty() {
            break;
        }
        let (mv, next) = options[rng.gen_range(0..options.len())].clone();
        moves.push(mv);
        pos = next;
    }
    Solution::new(variant, start, moves)
}

/// Resource counts derived for a handful of boards and constraints.
pub fn derived_counts() -> Vec<ResourceCount> {
    let mut out = Vec::new();
    for name in BoardName::ALL {
        let geom = Geometry::get(name);
        for v in VARIANTS {
            let variant: Variant = v.parse().unwrap();
            for hole in [geom.center(), geom.holes().next().unwrap()] {
                for rhs in [1, 2] {
                    let constraints = [Constraint::Weight {
                        hole,
                        rel: Relation::Ge,
                        rhs,
                    }];
                    let options = DeriveOptions {
                        bound: 2,
                        symmetric: true,
                    };
                    if let Some(rc) = derive_resource_count(geom, variant, &constraints, options) {
                        out.push(rc);
                    }
                }
            }
        }
    }
    out
}

pub fn check_dedup_equivalence_diamond4() {
    let d4 = Geometry::get(BoardName::Diamond(4));
    let start = d4.vacancy(d4.center());
    let h3 = Heuristic::h3(d4, Variant::Eight).unwrap();
    let target = Target::SinglePegIn(d4.center().bit());
    let mut finishes = Vec::new();
    for dedup in [DedupPolicy::Full, DedupPolicy::CurrentLevelOnly] {
        let cfg = SearchConfig::new(Variant::Eight)
            .with_heuristic(h3.clone())
            .with_target(target)
            .with_dedup(dedup);
        let r = search_shortest(&start, &cfg, 0, SolutionMode::First).unwrap();
        assert_eq!(r.length, 10);
        let mut f = r.finishes.clone();
        f.sort_unstable();
        finishes.push(f);
    }
    assert_eq!(finishes[0], finishes[1]);
}


/// Exact moves-to-single-peg for every position of Diamond(3), compared
/// with the Merson bound.
pub fn check_merson_admissible_diamond3() {
    let d3 = Geometry::get(BoardName::Diamond(3));
    let dec = derive_merson_decomposition(d3, Variant::Eight).unwrap();
    let n = d3.hole_count();
    const UNSOLVED: u32 = u32::MAX;
    let mut dist = vec![UNSOLVED; 1 << n];
    let mut codes: Vec<u64> = (1..1u64 << n).collect();
    codes.sort_by_key(|c| c.count_ones());
    for code in codes {
        let pos = d3.position(code);
        let d = if code.count_ones() == 1 {
            0
        } else {
            enumerate_moves(&pos, Variant::Eight)
                .iter()
                .map(|(_, next)| dist[next.code() as usize])
                .filter(|&d| d != UNSOLVED)
                .min()
                .map_or(UNSOLVED, |d| d + 1)
        };
        dist[code as usize] = d;
        if d != UNSOLVED {
            assert!(dec.eval(code) <= d, "h3 {} > {d} for\n{pos}", dec.eval(code));
            if d <= 1 {
                assert!(dec.eval_final(code) <= d, "final bound exceeds {d} for\n{pos}");
            }
        }
    }
    let center = d3.vacancy(d3.center()).code() as usize;
    assert_eq!(dist[center], 7);
}
