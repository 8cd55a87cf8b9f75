use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::lattice::{Edge, LatticePoint, PlanarPoint, Rhombus, ZonogonSpec};

/// A set of unit rhombi in the box, intended to be a section of the
/// projection over the zonogon. Construction does not validate; call
/// [`Tiling::validate`].
///
/// Equality and hashing use the canonical sorted rhombus list.
#[derive(Clone)]
pub struct Tiling {
    spec: Arc<ZonogonSpec>,
    rhombi: BTreeSet<Rhombus>,
}

impl Tiling {
    pub fn new(spec: Arc<ZonogonSpec>, rhombi: impl IntoIterator<Item = Rhombus>) -> Self {
        Tiling {
            spec,
            rhombi: rhombi.into_iter().collect(),
        }
    }

    pub fn spec(&self) -> &ZonogonSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> &Arc<ZonogonSpec> {
        &self.spec
    }

    pub fn rhombi(&self) -> &BTreeSet<Rhombus> {
        &self.rhombi
    }

    pub fn contains_rhombus(&self, r: &Rhombus) -> bool {
        self.rhombi.contains(r)
    }

    pub fn vertices(&self) -> BTreeSet<LatticePoint> {
        self.rhombi.iter().flat_map(|r| r.corners()).collect()
    }

    pub fn contains_vertex(&self, p: &LatticePoint) -> bool {
        self.rhombi.iter().any(|r| r.has_corner(p))
    }

    /// Sum of vertex weights; a downward flip lowers it by exactly one.
    pub fn weight(&self) -> u64 {
        self.vertices().iter().map(|p| p.weight() as u64).sum()
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton::new(self)
    }

    pub(crate) fn replace(&self, remove: &[Rhombus], insert: &[Rhombus]) -> Tiling {
        let mut rhombi = self.rhombi.clone();
        for r in remove {
            rhombi.remove(r);
        }
        rhombi.extend(insert.iter().copied());
        Tiling {
            spec: self.spec.clone(),
            rhombi,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_tiling(self)
    }

    /// Planar images of every vertex.
    pub fn project_vertices(&self) -> BTreeMap<LatticePoint, PlanarPoint> {
        self.vertices()
            .into_iter()
            .map(|p| (p, self.spec.project(&p)))
            .collect()
    }

    /// Planar images of every rhombus, corners in cyclic order.
    pub fn project_rhombi(&self) -> Vec<[PlanarPoint; 4]> {
        self.rhombi
            .iter()
            .map(|r| r.corners().map(|c| self.spec.project(&c)))
            .collect()
    }
}

impl PartialEq for Tiling {
    fn eq(&self, other: &Self) -> bool {
        self.spec.a() == other.spec.a() && self.rhombi == other.rhombi
    }
}

impl Eq for Tiling {}

impl Hash for Tiling {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.spec.a().hash(state);
        self.rhombi.hash(state);
    }
}

impl fmt::Debug for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tiling")
            .field("a", &self.spec.a())
            .field("rhombi", &self.rhombi.iter().map(|r| r.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

/// Up- and down-edges at a vertex, as direction bitmasks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Fan {
    pub up: u32,
    pub down: u32,
}

impl Fan {
    pub fn up_dirs(&self) -> Vec<usize> {
        bits(self.up)
    }

    /// Down directions ordered left to right (increasing direction index).
    pub fn down_dirs(&self) -> Vec<usize> {
        bits(self.down)
    }

    pub fn degree(&self) -> u32 {
        self.up.count_ones() + self.down.count_ones()
    }
}

pub(crate) fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Edge/vertex incidence derived from a tiling.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub edges: HashMap<Edge, u8>,
    pub fans: HashMap<LatticePoint, Fan>,
    pub faces_at: HashMap<LatticePoint, Vec<Rhombus>>,
}

impl Skeleton {
    fn new(t: &Tiling) -> Self {
        let mut edges: HashMap<Edge, u8> = HashMap::new();
        let mut faces_at: HashMap<LatticePoint, Vec<Rhombus>> = HashMap::new();
        for r in t.rhombi() {
            for e in r.edges() {
                *edges.entry(e).or_default() += 1;
            }
            for c in r.corners() {
                faces_at.entry(c).or_default().push(*r);
            }
        }
        let mut fans: HashMap<LatticePoint, Fan> = HashMap::new();
        for e in edges.keys() {
            fans.entry(e.base).or_default().up |= 1 << e.dir;
            fans.entry(e.top()).or_default().down |= 1 << e.dir;
        }
        Skeleton { edges, fans, faces_at }
    }

    pub fn fan(&self, p: &LatticePoint) -> Fan {
        self.fans.get(p).copied().unwrap_or_default()
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.edges.contains_key(e)
    }

    pub fn faces(&self, p: &LatticePoint) -> &[Rhombus] {
        self.faces_at.get(p).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Neighbours of `p` in counterclockwise angular order, starting with the
    /// up-edges (`+e_1` is the rightmost) and continuing with the down-edges.
    pub fn neighbors_ccw(&self, p: &LatticePoint) -> Vec<LatticePoint> {
        let fan = self.fan(p);
        let mut out: Vec<LatticePoint> = fan.up_dirs().into_iter().map(|j| p.plus(j)).collect();
        out.extend(fan.down_dirs().into_iter().map(|j| p.minus(j).expect("down edge below zero")));
        out
    }
}

/// One violated tiling invariant together with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OutsideBox { rhombus: Rhombus },
    RhombusCount { expected: usize, found: usize },
    VertexCount { expected: usize, found: usize },
    MissingBoundaryEdge { edge: Edge },
    EdgeMultiplicity { edge: Edge, boundary: bool, found: usize },
    VertexFan { vertex: LatticePoint },
    Disconnected { rhombus: Rhombus },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutsideBox { rhombus } => write!(f, "rhombus {rhombus} leaves the box"),
            Violation::RhombusCount { expected, found } => {
                write!(f, "rhombus count {found} ≠ {expected}")
            }
            Violation::VertexCount { expected, found } => {
                write!(f, "vertex count {found} ≠ {expected}")
            }
            Violation::MissingBoundaryEdge { edge } => write!(f, "boundary edge {edge} not covered"),
            Violation::EdgeMultiplicity { edge, boundary, found } => write!(
                f,
                "{} edge {edge} lies in {found} rhombi (expected {})",
                if *boundary { "boundary" } else { "internal" },
                if *boundary { 1 } else { 2 }
            ),
            Violation::VertexFan { vertex } => {
                write!(f, "rhombi around vertex {vertex} do not fill its neighbourhood")
            }
            Violation::Disconnected { rhombus } => {
                write!(f, "rhombus {rhombus} is not connected to the rest")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => write!(f, "ok"),
            Some(v) => write!(f, "{v} ({} violation(s))", self.violations.len()),
        }
    }
}

/// Checks the local conditions that characterise a section of the projection:
/// counts, edge multiplicities, a full fan of rhombi around every vertex
/// (exactly one open angle at boundary vertices) and connectedness.
pub fn validate_tiling(t: &Tiling) -> ValidationReport {
    let spec = t.spec();
    let mut violations = Vec::new();

    for r in t.rhombi() {
        if !spec.contains_rhombus(r) {
            violations.push(Violation::OutsideBox { rhombus: *r });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    let expected = spec.rhombus_count();
    if t.rhombi().len() != expected {
        violations.push(Violation::RhombusCount {
            expected,
            found: t.rhombi().len(),
        });
    }
    let vertices = t.vertices();
    if vertices.len() != spec.vertex_count() {
        violations.push(Violation::VertexCount {
            expected: spec.vertex_count(),
            found: vertices.len(),
        });
    }

    let sk = t.skeleton();
    for e in spec.boundary_edges() {
        if !sk.has_edge(&e) {
            violations.push(Violation::MissingBoundaryEdge { edge: e });
        }
    }
    let mut edges: Vec<(&Edge, &u8)> = sk.edges.iter().collect();
    edges.sort();
    for (e, &count) in edges {
        let boundary = spec.is_boundary_edge(e);
        let want = if boundary { 1 } else { 2 };
        if count != want {
            violations.push(Violation::EdgeMultiplicity {
                edge: *e,
                boundary,
                found: count as usize,
            });
        }
    }

    for v in &vertices {
        if !fan_is_filled(spec, &sk, v) {
            violations.push(Violation::VertexFan { vertex: *v });
        }
    }

    if let Some(r) = first_disconnected(t, &sk) {
        violations.push(Violation::Disconnected { rhombus: r });
    }

    ValidationReport { violations }
}

/// Edge vectors at `v` sorted by angle: `+v_1..+v_n` then `-v_1..-v_n`.
fn angular_edges(spec: &ZonogonSpec, sk: &Skeleton, v: &LatticePoint) -> Vec<(usize, bool)> {
    let fan = sk.fan(v);
    let mut out: Vec<(usize, bool)> = fan.up_dirs().into_iter().map(|j| (j, true)).collect();
    out.extend(fan.down_dirs().into_iter().map(|j| (j, false)));
    debug_assert!(out.iter().all(|&(j, _)| j < spec.n()));
    out
}

fn fan_is_filled(spec: &ZonogonSpec, sk: &Skeleton, v: &LatticePoint) -> bool {
    let edges = angular_edges(spec, sk, v);
    let vec_of = |&(j, up): &(usize, bool)| {
        if up {
            spec.direction(j)
        } else {
            -spec.direction(j)
        }
    };
    let mut expected = BTreeSet::new();
    let mut open = 0;
    for i in 0..edges.len() {
        let a = edges[i];
        let b = edges[(i + 1) % edges.len()];
        if vec_of(&a).cross(vec_of(&b)) > 0 {
            let mut base = *v;
            for (j, up) in [a, b] {
                if !up {
                    base = base.minus(j).expect("down edge below zero");
                }
            }
            expected.insert(Rhombus::new(base, a.0, b.0));
        } else {
            open += 1;
        }
    }
    let actual: BTreeSet<Rhombus> = sk.faces(v).iter().copied().collect();
    let want_open = usize::from(spec.is_boundary_vertex(v));
    open == want_open && actual == expected
}

fn first_disconnected(t: &Tiling, sk: &Skeleton) -> Option<Rhombus> {
    let first = *t.rhombi().iter().next()?;
    let mut by_edge: HashMap<Edge, Vec<Rhombus>> = HashMap::with_capacity(sk.edges.len());
    for r in t.rhombi() {
        for e in r.edges() {
            by_edge.entry(e).or_default().push(*r);
        }
    }
    let mut seen = HashSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(r) = queue.pop_front() {
        for e in r.edges() {
            for s in &by_edge[&e] {
                if seen.insert(*s) {
                    queue.push_back(*s);
                }
            }
        }
    }
    t.rhombi().iter().find(|r| !seen.contains(r)).copied()
}
