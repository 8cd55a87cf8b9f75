//! Walls, cutcurves and the propagation of W-inequalities by the tropical
//! cube recurrence.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use rand::Rng;

use crate::engine::{verify_cube_relations, EngineError, Labeling, Tropical};
use crate::zonogon::{Edge, LatticePoint, ZonogonSpec};

/// The slice `i_s = c` of the box. `s` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wall {
    pub s: usize,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TropicalError {
    #[error("direction {0} out of range")]
    BadDirection(usize),
    #[error("wall level {c} must lie in 1..={max}")]
    BadLevel { c: u32, max: i64 },
    #[error("collinear triple at position {0}")]
    Collinear(usize),
    #[error("position {0} is not interior to the cutcurve")]
    BadPosition(usize),
    #[error("edge {0} does not lie in the wall")]
    EdgeOffWall(Edge),
    #[error("the 12 values violate the recurrence")]
    RecurrenceViolated,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl Wall {
    pub fn new(spec: &ZonogonSpec, s: usize, c: u32) -> Result<Self, TropicalError> {
        if s >= spec.n() {
            return Err(TropicalError::BadDirection(s + 1));
        }
        let a = spec.a()[s];
        if c < 1 || c + 1 > a {
            return Err(TropicalError::BadLevel { c, max: a as i64 - 1 });
        }
        Ok(Wall { s, c })
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.get(self.s) == self.c
    }

    /// The two ends every cutcurve must join.
    pub fn endpoints(&self, spec: &ZonogonSpec) -> (LatticePoint, LatticePoint) {
        let n = spec.n();
        let a = spec.a();
        let start: Vec<u32> = (0..n)
            .map(|t| match t.cmp(&self.s) {
                std::cmp::Ordering::Less => a[t],
                std::cmp::Ordering::Equal => self.c,
                std::cmp::Ordering::Greater => 0,
            })
            .collect();
        let end: Vec<u32> = (0..n)
            .map(|t| match t.cmp(&self.s) {
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => self.c,
                std::cmp::Ordering::Greater => a[t],
            })
            .collect();
        (LatticePoint::new(&start), LatticePoint::new(&end))
    }

    /// All edges of the box lying in the wall.
    pub fn edges(&self, spec: &ZonogonSpec) -> Vec<Edge> {
        let mut out = Vec::new();
        for p in spec.points() {
            if !self.contains(&p) {
                continue;
            }
            for i in 0..spec.n() {
                if i != self.s && p.get(i) < spec.a()[i] {
                    out.push(Edge::new(p, i));
                }
            }
        }
        out
    }
}

/// A taxi-cab geodesic inside the wall between its two boundary points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cutcurve {
    pub points: Vec<LatticePoint>,
}

impl Cutcurve {
    pub fn edges(&self) -> Vec<Edge> {
        self.points
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let d = (0..a.n()).find(|&t| a.get(t) != b.get(t)).expect("distinct points");
                if a.get(d) < b.get(d) {
                    Edge::new(a, d)
                } else {
                    Edge::new(b, d)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutcurveViolation {
    Empty,
    Endpoint { expected: LatticePoint, found: LatticePoint },
    OffWall(LatticePoint),
    IllegalStep { at: usize },
}

impl fmt::Display for CutcurveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutcurveViolation::Empty => write!(f, "empty cutcurve"),
            CutcurveViolation::Endpoint { expected, found } => {
                write!(f, "endpoint: expected {expected}, found {found}")
            }
            CutcurveViolation::OffWall(p) => write!(f, "point {p} is off the wall"),
            CutcurveViolation::IllegalStep { at } => write!(f, "illegal step at position {at}"),
        }
    }
}

/// Step index and sign of `b - a` if it is a unit step.
fn step(a: &LatticePoint, b: &LatticePoint) -> Option<(usize, bool)> {
    let diffs: Vec<usize> = (0..a.n()).filter(|&t| a.get(t) != b.get(t)).collect();
    match diffs.as_slice() {
        [d] if a.get(*d).abs_diff(b.get(*d)) == 1 => Some((*d, b.get(*d) > a.get(*d))),
        _ => None,
    }
}

pub fn validate_cutcurve(spec: &ZonogonSpec, w: &Wall, g: &Cutcurve) -> Vec<CutcurveViolation> {
    let mut out = Vec::new();
    let (Some(first), Some(last)) = (g.points.first(), g.points.last()) else {
        return vec![CutcurveViolation::Empty];
    };
    let (start, end) = w.endpoints(spec);
    if *first != start {
        out.push(CutcurveViolation::Endpoint { expected: start, found: *first });
    }
    if *last != end {
        out.push(CutcurveViolation::Endpoint { expected: end, found: *last });
    }
    for p in &g.points {
        if !spec.contains(p) || !w.contains(p) {
            out.push(CutcurveViolation::OffWall(*p));
        }
    }
    for (t, pair) in g.points.windows(2).enumerate() {
        let ok = match step(&pair[0], &pair[1]) {
            Some((d, up)) => (d > w.s && up) || (d < w.s && !up),
            None => false,
        };
        if !ok {
            out.push(CutcurveViolation::IllegalStep { at: t + 1 });
        }
    }
    out
}

/// Swaps the two steps around position `t0`.
pub fn elementary_move(g: &Cutcurve, t0: usize) -> Result<Cutcurve, TropicalError> {
    if t0 == 0 || t0 + 1 >= g.points.len() {
        return Err(TropicalError::BadPosition(t0));
    }
    let (a, m, b) = (g.points[t0 - 1], g.points[t0], g.points[t0 + 1]);
    let first = step(&a, &m).map(|s| s.0);
    let second = step(&m, &b).map(|s| s.0);
    if first == second {
        return Err(TropicalError::Collinear(t0));
    }
    let mut coords = a.to_vec();
    for t in 0..a.n() {
        coords[t] = a.get(t) + b.get(t) - m.get(t);
    }
    let mut points = g.points.clone();
    points[t0] = LatticePoint::new(&coords);
    Ok(Cutcurve { points })
}

/// Every cutcurve of the wall, in lexicographic order of step sequences.
pub fn cutcurves(spec: &ZonogonSpec, w: &Wall) -> Vec<Cutcurve> {
    let (start, _) = w.endpoints(spec);
    // Each step is named by its direction; there are a_d of each.
    let mut remaining: Vec<u32> = (0..spec.n()).map(|d| if d == w.s { 0 } else { spec.a()[d] }).collect();
    let mut out = Vec::new();
    let mut points = vec![start];
    fn go(w: &Wall, remaining: &mut [u32], points: &mut Vec<LatticePoint>, out: &mut Vec<Cutcurve>) {
        if remaining.iter().all(|&r| r == 0) {
            out.push(Cutcurve { points: points.clone() });
            return;
        }
        for d in 0..remaining.len() {
            if remaining[d] == 0 {
                continue;
            }
            let cur = *points.last().expect("nonempty");
            let next = if d > w.s {
                cur.plus(d)
            } else {
                cur.minus(d).expect("positive coordinate")
            };
            remaining[d] -= 1;
            points.push(next);
            go(w, remaining, points, out);
            points.pop();
            remaining[d] += 1;
        }
    }
    go(w, &mut remaining, &mut points, &mut out);
    out
}

/// A random cutcurve, uniform over step orders.
pub fn random_cutcurve(spec: &ZonogonSpec, w: &Wall, rng: &mut impl Rng) -> Cutcurve {
    let mut steps: Vec<usize> = (0..spec.n())
        .filter(|&d| d != w.s)
        .flat_map(|d| std::iter::repeat(d).take(spec.a()[d] as usize))
        .collect();
    use rand::seq::SliceRandom;
    steps.shuffle(rng);
    let (start, _) = w.endpoints(spec);
    let mut points = vec![start];
    for d in steps {
        let cur = *points.last().expect("nonempty");
        points.push(if d > w.s { cur.plus(d) } else { cur.minus(d).expect("in range") });
    }
    Cutcurve { points }
}

/// Number of cutcurves reachable from `g` by elementary moves.
pub fn move_component_size(g: &Cutcurve) -> usize {
    let mut seen: HashSet<Cutcurve> = HashSet::from([g.clone()]);
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(cur) = queue.pop_front() {
        for t0 in 1..cur.points.len().saturating_sub(1) {
            if let Ok(next) = elementary_move(&cur, t0) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.len()
}

fn value<'a>(labeling: &'a Labeling<Tropical>, p: &LatticePoint) -> Option<&'a BigRational> {
    labeling.get(p).map(|t| &t.0)
}

/// Both W-inequalities at the edge `e`. Comparison points outside the box
/// make their inequality hold vacuously; for `1 <= c < a_s` this never
/// happens.
pub fn w_inequalities_hold(labeling: &Labeling<Tropical>, w: &Wall, e: &Edge) -> Result<bool, TropicalError> {
    let spec = labeling.spec();
    let i = e.dir;
    let top = e.top();
    if i == w.s || !w.contains(&e.base) || !spec.contains(&top) {
        return Err(TropicalError::EdgeOffWall(*e));
    }
    let s = w.s;
    let x = |p: Option<LatticePoint>| p.filter(|p| spec.contains(p)).and_then(|p| value(labeling, &p));
    let lhs = match (x(Some(e.base)), x(Some(top))) {
        (Some(a), Some(b)) => a + b,
        _ => return Err(EngineError::Unlabeled(e.base).into()),
    };
    let pairs = [
        (Some(e.base.plus(s)), top.minus(s)),
        (e.base.minus(s), Some(top.plus(s))),
    ];
    Ok(pairs.into_iter().all(|(p, q)| match (x(p), x(q)) {
        (Some(a), Some(b)) => lhs >= a + b,
        _ => true,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationReport {
    /// The labeling fails the tropical recurrence somewhere.
    RecurrenceViolated { cube: String },
    /// Some edge of the cutcurve fails a W-inequality.
    HypothesisNotMet { witness: Edge },
    /// The hypothesis holds; `violations` lists wall edges where the
    /// conclusion fails.
    Checked { edges: usize, violations: Vec<Edge> },
}

impl PropagationReport {
    pub fn hypothesis_met(&self) -> bool {
        matches!(self, PropagationReport::Checked { .. })
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, PropagationReport::Checked { violations, .. } if violations.is_empty())
    }
}

impl fmt::Display for PropagationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropagationReport::RecurrenceViolated { cube } => {
                write!(f, "precondition: recurrence violated at {cube}")
            }
            PropagationReport::HypothesisNotMet { witness } => write!(f, "hypothesis not met at edge {witness}"),
            PropagationReport::Checked { edges, violations } if violations.is_empty() => {
                write!(f, "ok: W-inequalities hold on all {edges} edges of the wall")
            }
            PropagationReport::Checked { edges, violations } => {
                write!(f, "{} of {edges} wall edges violate the W-inequalities", violations.len())
            }
        }
    }
}

/// Checks the hypothesis on `g` and, if it holds, the conclusion on every
/// edge of the wall.
pub fn check_propagation(
    labeling: &Labeling<Tropical>,
    w: &Wall,
    g: &Cutcurve,
) -> Result<PropagationReport, TropicalError> {
    let cubes = verify_cube_relations(labeling)?;
    if let Some(f) = cubes.first() {
        return Ok(PropagationReport::RecurrenceViolated { cube: f.to_string() });
    }
    for e in g.edges() {
        if !w_inequalities_hold(labeling, w, &e)? {
            return Ok(PropagationReport::HypothesisNotMet { witness: e });
        }
    }
    let edges = w.edges(labeling.spec());
    let mut violations = Vec::new();
    for e in &edges {
        if !w_inequalities_hold(labeling, w, e)? {
            violations.push(*e);
        }
    }
    Ok(PropagationReport::Checked {
        edges: edges.len(),
        violations,
    })
}

/// The twelve values around one elementary move, named as in the proof:
/// `a b c d` one level up, `p q r s` in the wall, `v w y z` one level down;
/// `q, b, w` sit at the moved point of the old curve and `s, d, z` at the
/// new one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalValues {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
    pub p: BigRational,
    pub q: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub v: BigRational,
    pub w: BigRational,
    pub y: BigRational,
    pub z: BigRational,
}

fn max3(a: BigRational, b: BigRational, c: BigRational) -> BigRational {
    a.max(b).max(c)
}

impl LocalValues {
    /// Whether `w + s = max(v + r, z + q, y + p)` and
    /// `q + d = max(p + c, s + b, r + a)`.
    pub fn satisfies_recurrence(&self) -> bool {
        let lower = max3(&self.v + &self.r, &self.z + &self.q, &self.y + &self.p);
        let upper = max3(&self.p + &self.c, &self.s + &self.b, &self.r + &self.a);
        &self.w + &self.s == lower && &self.q + &self.d == upper
    }

    /// Inequalities (A)..(D) on the old curve.
    pub fn old_curve(&self) -> [bool; 4] {
        let (pq, qr) = (&self.p + &self.q, &self.q + &self.r);
        [
            pq >= &self.a + &self.w,
            pq >= &self.b + &self.v,
            qr >= &self.c + &self.w,
            qr >= &self.b + &self.y,
        ]
    }

    /// Inequalities (E)..(H) on the new curve.
    pub fn new_curve(&self) -> [bool; 4] {
        let (ps, sr) = (&self.p + &self.s, &self.s + &self.r);
        [
            ps >= &self.a + &self.z,
            ps >= &self.d + &self.v,
            sr >= &self.c + &self.z,
            sr >= &self.d + &self.y,
        ]
    }
}

/// Reads the twelve values around the elementary move of `g` at `t0`.
///
/// The recurrence ties them together in the stated form for only one of the
/// two curves; the pair is swapped when needed, and the flag says so.
pub fn local_values(
    labeling: &Labeling<Tropical>,
    w: &Wall,
    g: &Cutcurve,
    t0: usize,
) -> Result<(LocalValues, bool), TropicalError> {
    let h = elementary_move(g, t0)?;
    let s = w.s;
    let get = |p: LatticePoint| -> Result<BigRational, TropicalError> {
        value(labeling, &p).cloned().ok_or(EngineError::Unlabeled(p).into())
    };
    let up = |p: &LatticePoint| p.plus(s);
    let down = |p: &LatticePoint| p.minus(s).expect("wall above level 0");
    let read = |old: &LatticePoint, new: &LatticePoint| -> Result<LocalValues, TropicalError> {
        let (before, after) = (g.points[t0 - 1], g.points[t0 + 1]);
        Ok(LocalValues {
            a: get(up(&before))?,
            b: get(up(old))?,
            c: get(up(&after))?,
            d: get(up(new))?,
            p: get(before)?,
            q: get(*old)?,
            r: get(after)?,
            s: get(*new)?,
            v: get(down(&before))?,
            w: get(down(old))?,
            y: get(down(&after))?,
            z: get(down(new))?,
        })
    };
    let (old, new) = (g.points[t0], h.points[t0]);
    let vals = read(&old, &new)?;
    if vals.satisfies_recurrence() {
        return Ok((vals, false));
    }
    Ok((read(&new, &old)?, true))
}

/// Whether (A)..(D) imply (E)..(H) for one instance.
pub fn local_step_check(vals: &LocalValues) -> Result<bool, TropicalError> {
    if !vals.satisfies_recurrence() {
        return Err(TropicalError::RecurrenceViolated);
    }
    if !vals.old_curve().iter().all(|&b| b) {
        return Ok(true);
    }
    Ok(vals.new_curve().iter().all(|&b| b))
}

/// Random integer data in `[-spread, spread]` on the vertices of `t0`
/// (keyed by point), for rejection sampling.
pub fn random_tropical_values(
    points: &[LatticePoint],
    spread: i64,
    rng: &mut impl Rng,
) -> Vec<(LatticePoint, Tropical)> {
    points
        .iter()
        .map(|p| (*p, Tropical::from_integer(rng.gen_range(-spread..=spread))))
        .collect()
}

/// Affine data plus small noise: `sum_t c_t i_t + noise`.
pub fn affine_tropical_values(
    points: &[LatticePoint],
    slope_spread: i64,
    noise: i64,
    rng: &mut impl Rng,
) -> Vec<(LatticePoint, Tropical)> {
    let n = points.first().map_or(0, |p| p.n());
    let slopes: Vec<i64> = (0..n).map(|_| rng.gen_range(-slope_spread..=slope_spread)).collect();
    points
        .iter()
        .map(|p| {
            let base: i64 = (0..n).map(|t| slopes[t] * p.get(t) as i64).sum();
            (*p, Tropical::from_integer(base + rng.gen_range(-noise..=noise)))
        })
        .collect()
}
