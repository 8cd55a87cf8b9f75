//! The fundamental forest of a tiling and the flip moves it controls.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::zonogon::{Edge, LatticePoint, Rhombus, Skeleton, Tiling, ZonogonSpec};

/// Internal up-edges `(I, I+e_j)` that are the only up-edge at `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalForest {
    edges: BTreeSet<Edge>,
}

impl FundamentalForest {
    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// Child to parent, orienting every edge upward.
    pub fn parents(&self) -> BTreeMap<LatticePoint, LatticePoint> {
        self.edges.iter().map(|e| (e.base, e.top())).collect()
    }

    pub fn vertices(&self) -> BTreeSet<LatticePoint> {
        self.edges.iter().flat_map(|e| [e.base, e.top()]).collect()
    }

    /// Vertices with no forest edge coming down into them.
    pub fn leaves(&self) -> BTreeSet<LatticePoint> {
        let tops: BTreeSet<LatticePoint> = self.edges.iter().map(Edge::top).collect();
        self.edges.iter().map(|e| e.base).filter(|b| !tops.contains(b)).collect()
    }

    pub fn roots(&self) -> BTreeSet<LatticePoint> {
        let bases: BTreeSet<LatticePoint> = self.edges.iter().map(|e| e.base).collect();
        self.edges.iter().map(Edge::top).filter(|t| !bases.contains(t)).collect()
    }

    /// Forest edges pointing down from `v`.
    pub fn link(&self, v: &LatticePoint) -> BTreeSet<Edge> {
        self.edges.iter().filter(|e| e.top() == *v).copied().collect()
    }
}

pub fn fundamental_forest(t: &Tiling) -> FundamentalForest {
    forest_from_skeleton(t.spec(), &t.skeleton())
}

pub(crate) fn forest_from_skeleton(spec: &ZonogonSpec, sk: &Skeleton) -> FundamentalForest {
    let edges = sk
        .fans
        .iter()
        .filter(|(_, fan)| fan.up.count_ones() == 1)
        .map(|(v, fan)| Edge::new(*v, fan.up.trailing_zeros() as usize))
        .filter(|e| !spec.is_boundary_edge(e))
        .collect();
    FundamentalForest { edges }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlipDirection {
    Up,
    Down,
}

impl FlipDirection {
    pub fn inverse(self) -> Self {
        match self {
            FlipDirection::Up => FlipDirection::Down,
            FlipDirection::Down => FlipDirection::Up,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FlipDirection::Up => "up",
            FlipDirection::Down => "down",
        }
    }
}

/// A flip across the unit cube at `base` in directions `j < k < l`.
///
/// Up removes `base + e_k` and inserts `base + e_j + e_l`; down is the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlipMove {
    pub base: LatticePoint,
    pub dirs: [usize; 3],
    pub direction: FlipDirection,
}

impl FlipMove {
    pub fn bottom_vertex(&self) -> LatticePoint {
        self.base.plus(self.dirs[1])
    }

    pub fn top_vertex(&self) -> LatticePoint {
        self.base.plus(self.dirs[0]).plus(self.dirs[2])
    }

    /// The vertex the flip is performed at.
    pub fn removed(&self) -> LatticePoint {
        match self.direction {
            FlipDirection::Up => self.bottom_vertex(),
            FlipDirection::Down => self.top_vertex(),
        }
    }

    pub fn inserted(&self) -> LatticePoint {
        match self.direction {
            FlipDirection::Up => self.top_vertex(),
            FlipDirection::Down => self.bottom_vertex(),
        }
    }

    pub fn inverse(&self) -> Self {
        FlipMove {
            direction: self.direction.inverse(),
            ..*self
        }
    }

    pub fn bottom_faces(&self) -> [Rhombus; 3] {
        let [j, k, l] = self.dirs;
        [
            Rhombus::new(self.base.plus(k), j, l),
            Rhombus::new(self.base, j, k),
            Rhombus::new(self.base, k, l),
        ]
    }

    pub fn top_faces(&self) -> [Rhombus; 3] {
        let [j, k, l] = self.dirs;
        [
            Rhombus::new(self.base, j, l),
            Rhombus::new(self.base.plus(j), k, l),
            Rhombus::new(self.base.plus(l), j, k),
        ]
    }

    /// Rhombi the flip removes.
    pub fn support(&self) -> [Rhombus; 3] {
        match self.direction {
            FlipDirection::Up => self.bottom_faces(),
            FlipDirection::Down => self.top_faces(),
        }
    }

    pub fn replacement(&self) -> [Rhombus; 3] {
        match self.direction {
            FlipDirection::Up => self.top_faces(),
            FlipDirection::Down => self.bottom_faces(),
        }
    }
}

impl fmt::Display for FlipMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [j, k, l] = self.dirs;
        write!(f, "{} at {} ({},{},{})", self.direction.as_str(), self.removed(), j + 1, k + 1, l + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("not flippable: {vertex} has up-edges {up:?} and down-edges {down:?}{}", if *.internal { "" } else { " (boundary vertex)" })]
    NotFlippable {
        vertex: LatticePoint,
        up: Vec<usize>,
        down: Vec<usize>,
        internal: bool,
    },
    #[error("flip {0} does not apply: its faces are not all in the tiling")]
    MissingFaces(FlipMove),
}

/// Downward- and upward-flippable vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Flippable {
    pub down: BTreeSet<LatticePoint>,
    pub up: BTreeSet<LatticePoint>,
}

/// Internal trivalent vertices, split by which way they flip. The down set is
/// computed from degrees and cross-checked against the forest leaves.
pub fn flippable_vertices(t: &Tiling) -> Flippable {
    let spec = t.spec();
    let sk = t.skeleton();
    let mut out = Flippable::default();
    for (v, fan) in &sk.fans {
        if fan.degree() != 3 || spec.is_boundary_vertex(v) {
            continue;
        }
        match (fan.up.count_ones(), fan.down.count_ones()) {
            (1, 2) => {
                out.down.insert(*v);
            }
            (2, 1) => {
                out.up.insert(*v);
            }
            _ => {}
        }
    }
    debug_assert_eq!(out.down, forest_from_skeleton(spec, &sk).leaves());
    out
}

/// The flip performed at `at`, if `at` is an internal trivalent vertex.
pub fn flip_at(t: &Tiling, at: &LatticePoint) -> Result<FlipMove, FlipError> {
    flip_at_skeleton(t.spec(), &t.skeleton(), at)
}

pub(crate) fn flip_at_skeleton(spec: &ZonogonSpec, sk: &Skeleton, at: &LatticePoint) -> Result<FlipMove, FlipError> {
    let fan = sk.fan(at);
    let internal = !spec.is_boundary_vertex(at);
    let not_flippable = || FlipError::NotFlippable {
        vertex: *at,
        up: fan.up_dirs().iter().map(|j| j + 1).collect(),
        down: fan.down_dirs().iter().map(|j| j + 1).collect(),
        internal,
    };
    if !internal || fan.degree() != 3 {
        return Err(not_flippable());
    }
    let (pair, odd, direction) = match (fan.up.count_ones(), fan.down.count_ones()) {
        (1, 2) => (fan.down_dirs(), fan.up_dirs()[0], FlipDirection::Down),
        (2, 1) => (fan.up_dirs(), fan.down_dirs()[0], FlipDirection::Up),
        _ => return Err(not_flippable()),
    };
    let (j, l) = (pair[0], pair[1]);
    // Around a trivalent vertex the lone edge always sits between the other two.
    assert!(j < odd && odd < l, "trivalent vertex {at} with odd edge outside its pair");
    let base = match direction {
        FlipDirection::Down => at.minus(j).and_then(|p| p.minus(l)),
        FlipDirection::Up => at.minus(odd),
    }
    .expect("flip cube stays in the box");
    let mv = FlipMove {
        base,
        dirs: [j, odd, l],
        direction,
    };
    if mv.support().iter().all(|r| sk.faces(at).contains(r)) {
        Ok(mv)
    } else {
        Err(FlipError::MissingFaces(mv))
    }
}

/// Flips at `at`, returning the new tiling and the move performed.
pub fn apply_flip(t: &Tiling, at: &LatticePoint) -> Result<(Tiling, FlipMove), FlipError> {
    let mv = flip_at(t, at)?;
    Ok((t.replace(&mv.support(), &mv.replacement()), mv))
}

/// Applies a previously recorded move, checking that its faces are present.
pub fn apply_move(t: &Tiling, mv: &FlipMove) -> Result<Tiling, FlipError> {
    if mv.support().iter().all(|r| t.contains_rhombus(r)) {
        Ok(t.replace(&mv.support(), &mv.replacement()))
    } else {
        Err(FlipError::MissingFaces(*mv))
    }
}

/// Every flip available at `t`, up and down.
pub fn all_flips(t: &Tiling) -> Vec<FlipMove> {
    let sk = t.skeleton();
    let f = flippable_vertices(t);
    f.down
        .iter()
        .chain(f.up.iter())
        .map(|v| flip_at_skeleton(t.spec(), &sk, v).expect("flippable vertex"))
        .collect()
}
