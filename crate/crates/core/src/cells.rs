//! The 2-cells of the flip complex incident to a tiling: squares formed by
//! two commuting flips, and octagons coming from a projected 4-cube.

use std::sync::{Arc, OnceLock};

use crate::forest::{all_flips, apply_move, FlipMove};
use crate::zonogon::{enumerate_tilings, LatticePoint, Rhombus, Tiling, ZonogonSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    /// Two flips with disjoint supports, performed in either order.
    Square([FlipMove; 2]),
    /// Eight flips around a tiled 4-cube, returning to the start tiling.
    Octagon {
        base: LatticePoint,
        dirs: [usize; 4],
        moves: Vec<FlipMove>,
    },
}

impl Cell {
    /// The boundary of the cell as a closed walk starting at `t`.
    pub fn boundary(&self) -> Vec<FlipMove> {
        match self {
            Cell::Square([a, b]) => vec![*a, *b, a.inverse(), b.inverse()],
            Cell::Octagon { moves, .. } => moves.clone(),
        }
    }
}

/// The eight tilings of the unit octagon in cycle order, with the flip
/// leading from each to the next.
struct OctagonCycle {
    tilings: Vec<Tiling>,
    moves: Vec<FlipMove>,
}

fn octagon_cycle() -> &'static OctagonCycle {
    static CYCLE: OnceLock<OctagonCycle> = OnceLock::new();
    CYCLE.get_or_init(|| {
        let spec = Arc::new(ZonogonSpec::new(&[1, 1, 1, 1]).expect("valid spec"));
        let all = enumerate_tilings(&spec, 16).expect("eight tilings");
        let mut tilings = vec![all[0].clone()];
        let mut moves = Vec::new();
        while moves.len() < all.len() {
            let cur = tilings.last().expect("nonempty").clone();
            let mut options: Vec<(FlipMove, Tiling)> = all_flips(&cur)
                .into_iter()
                .map(|mv| (mv, apply_move(&cur, &mv).expect("fresh move")))
                .collect();
            options.sort_by(|a, b| a.0.cmp(&b.0));
            let prev = tilings.len().checked_sub(2).map(|i| tilings[i].clone());
            let (mv, next) = options
                .into_iter()
                .find(|(_, t)| Some(t) != prev.as_ref())
                .expect("octagon flip graph is a cycle");
            moves.push(mv);
            tilings.push(next);
        }
        assert_eq!(tilings.pop().as_ref(), Some(&tilings[0]));
        OctagonCycle { tilings, moves }
    })
}

fn embed_point(base: &LatticePoint, dirs: &[usize; 4], local: &LatticePoint) -> LatticePoint {
    let mut p = *base;
    for (i, &d) in dirs.iter().enumerate() {
        p = p.with(d, p.get(d) + local.get(i));
    }
    p
}

fn embed_rhombus(base: &LatticePoint, dirs: &[usize; 4], r: &Rhombus) -> Rhombus {
    Rhombus::new(embed_point(base, dirs, &r.base), dirs[r.lo], dirs[r.hi])
}

fn embed_move(base: &LatticePoint, dirs: &[usize; 4], mv: &FlipMove) -> FlipMove {
    FlipMove {
        base: embed_point(base, dirs, &mv.base),
        dirs: mv.dirs.map(|j| dirs[j]),
        direction: mv.direction,
    }
}

/// All square and octagon cells having `t` as a corner.
pub fn cells_2(t: &Tiling) -> Vec<Cell> {
    let spec = t.spec();
    let mut out = Vec::new();

    let flips = all_flips(t);
    for (i, a) in flips.iter().enumerate() {
        for b in &flips[i + 1..] {
            let sa = a.support();
            if b.support().iter().all(|r| !sa.contains(r)) {
                out.push(Cell::Square([*a, *b]));
            }
        }
    }

    let cycle = octagon_cycle();
    let n = spec.n();
    for base in t.vertices() {
        for d0 in 0..n {
            for d1 in d0 + 1..n {
                for d2 in d1 + 1..n {
                    for d3 in d2 + 1..n {
                        let dirs = [d0, d1, d2, d3];
                        if !spec.contains(&base.plus_all(&dirs)) {
                            continue;
                        }
                        let hit = cycle.tilings.iter().position(|local| {
                            local.rhombi().iter().all(|r| t.contains_rhombus(&embed_rhombus(&base, &dirs, r)))
                        });
                        if let Some(start) = hit {
                            let moves = (0..cycle.moves.len())
                                .map(|s| embed_move(&base, &dirs, &cycle.moves[(start + s) % cycle.moves.len()]))
                                .collect();
                            out.push(Cell::Octagon { base, dirs, moves });
                        }
                    }
                }
            }
        }
    }
    out
}
