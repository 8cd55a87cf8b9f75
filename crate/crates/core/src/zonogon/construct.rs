//! Canonical tilings: the minimal tiling (greedy fill and closed form) and
//! tilings dual to generic line arrangements.

use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::lattice::{Edge, LatticePoint, Rhombus, ZonogonSpec};
use super::tiling::Tiling;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("point {0} is not in the box")]
    OutsideBox(LatticePoint),
    #[error("cube at {base} in directions {dirs:?} leaves the box")]
    CubeOutsideBox { base: LatticePoint, dirs: [usize; 3] },
    #[error("cube directions must be strictly increasing, got {0:?}")]
    BadCubeDirections([usize; 3]),
    #[error("retry budget of {0} exceeded (generic arrangement not found)")]
    RetryBudgetExceeded(usize),
}

/// Builds the minimal tiling by filling, from the top down, every angle
/// spanned by two down-edges with a single rhombus.
pub fn t_min(spec: &Arc<ZonogonSpec>) -> Tiling {
    let mut edges: HashSet<Edge> = spec.boundary_edges().into_iter().collect();
    let mut rhombi = BTreeSet::new();
    let mut heap: BinaryHeap<(i64, LatticePoint)> = BinaryHeap::new();
    let mut queued: HashSet<LatticePoint> = HashSet::new();
    for v in spec.boundary_vertices() {
        queued.insert(v);
        heap.push((spec.height(&v), v));
    }
    // Every vertex above `v` is processed before `v`, so by the time `v` is
    // popped all of its down-edges are known.
    while let Some((_, v)) = heap.pop() {
        let down: Vec<usize> = (0..spec.n())
            .filter(|&j| v.minus(j).is_some_and(|w| edges.contains(&Edge::new(w, j))))
            .collect();
        assert!(down.len() <= 2, "greedy fill produced {} down-edges at {v}", down.len());
        if down.len() < 2 {
            continue;
        }
        let (j, k) = (down[0], down[1]);
        let base = v.minus(j).and_then(|w| w.minus(k)).expect("down-edges stay in the box");
        let r = Rhombus::new(base, j, k);
        if rhombi.insert(r) {
            edges.extend(r.edges());
            if queued.insert(base) {
                heap.push((spec.height(&base), base));
            }
        }
    }
    Tiling::new(spec.clone(), rhombi)
}

/// Closed-form vertex set of the minimal tiling: the zero vector, the points
/// `(0,..,0,b,a_{r+1},..,a_{s-1},b',0,..,0)` for `r < s`, and the points
/// `(0,..,0,m,0,..,0)` along each axis.
pub fn t_min_vertices(spec: &ZonogonSpec) -> BTreeSet<LatticePoint> {
    let n = spec.n();
    let a = spec.a();
    let mut out = BTreeSet::from([spec.zero()]);
    for r in 0..n {
        for m in 1..=a[r] {
            out.insert(spec.zero().with(r, m));
        }
        for s in r + 1..n {
            let mut middle = spec.zero();
            for (i, &ai) in a.iter().enumerate().take(s).skip(r + 1) {
                middle = middle.with(i, ai);
            }
            for b in 1..=a[r] {
                for b2 in 1..=a[s] {
                    out.insert(middle.with(r, b).with(s, b2));
                }
            }
        }
    }
    out
}

/// Options for the line-arrangement constructions.
#[derive(Debug, Clone, Copy)]
pub struct ArrangementOptions {
    pub seed: u64,
    pub max_attempts: usize,
}

impl Default for ArrangementOptions {
    fn default() -> Self {
        ArrangementOptions {
            seed: 0,
            max_attempts: 64,
        }
    }
}

/// Offsets `q_{r,m}` of the lines `<x, v_r> = q_{r,m}`, strictly increasing in
/// `m` within each family.
#[derive(Debug, Clone)]
struct Arrangement {
    offsets: Vec<Vec<i128>>,
}

impl Arrangement {
    /// Random offsets whose sign pattern puts the origin region at `target`:
    /// `q_{r,m} < 0` exactly when `m <= target_r`.
    fn random(spec: &ZonogonSpec, target: &LatticePoint, rng: &mut impl Rng, spread: i128) -> Self {
        let offsets = (0..spec.n())
            .map(|r| {
                let below = target.get(r) as usize;
                let above = spec.a()[r] as usize - below;
                let mut neg = Vec::with_capacity(below);
                let mut acc = 0i128;
                for _ in 0..below {
                    acc += rng.gen_range(1..=spread);
                    neg.push(-acc);
                }
                neg.reverse();
                let mut acc = 0i128;
                for _ in 0..above {
                    acc += rng.gen_range(1..=spread);
                    neg.push(acc);
                }
                neg
            })
            .collect();
        Arrangement { offsets }
    }

    /// Dual tiling, or `None` if three lines meet in a point.
    fn dual(&self, spec: &Arc<ZonogonSpec>) -> Option<Tiling> {
        let n = spec.n();
        let mut rhombi = Vec::with_capacity(spec.rhombus_count());
        for r in 0..n {
            for t in r + 1..n {
                let vr = spec.direction(r);
                let vt = spec.direction(t);
                // Cramer's rule, everything scaled by det > 0.
                let det = vr.cross(vt);
                debug_assert!(det > 0);
                for (mr, &q1) in self.offsets[r].iter().enumerate() {
                    for (mt, &q2) in self.offsets[t].iter().enumerate() {
                        let x_num = q1 * vt.y as i128 - vr.y as i128 * q2;
                        let y_num = vr.x as i128 * q2 - vt.x as i128 * q1;
                        let mut base = spec.zero().with(r, mr as u32).with(t, mt as u32);
                        for u in (0..n).filter(|&u| u != r && u != t) {
                            let vu = spec.direction(u);
                            let value = vu.x as i128 * x_num + vu.y as i128 * y_num;
                            let mut below = 0u32;
                            for &q in &self.offsets[u] {
                                let scaled = q * det;
                                if scaled == value {
                                    return None;
                                }
                                if scaled < value {
                                    below += 1;
                                }
                            }
                            base = base.with(u, below);
                        }
                        rhombi.push(Rhombus::new(base, r, t));
                    }
                }
            }
        }
        Some(Tiling::new(spec.clone(), rhombi))
    }
}

/// A tiling containing `target` as a vertex, dual to a random generic line
/// arrangement whose origin region corresponds to `target`.
pub fn tiling_through_vertex(
    spec: &Arc<ZonogonSpec>,
    target: &LatticePoint,
    opts: ArrangementOptions,
) -> Result<Tiling, ConstructError> {
    if !spec.contains(target) {
        return Err(ConstructError::OutsideBox(*target));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.max_attempts {
        let arr = Arrangement::random(spec, target, &mut rng, 1000);
        if let Some(t) = arr.dual(spec) {
            debug_assert!(t.validate().is_ok(), "{}", t.validate());
            return Ok(t);
        }
    }
    Err(ConstructError::RetryBudgetExceeded(opts.max_attempts))
}

/// Which three faces of a unit 3-cube a tiling should contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeSide {
    /// The faces through `I + e_k`.
    Bottom,
    /// The faces through `I + e_j + e_l`.
    Top,
}

/// The three faces of the unit cube at `base` in directions `j < k < l`.
pub fn cube_faces(base: &LatticePoint, [j, k, l]: [usize; 3], side: CubeSide) -> [Rhombus; 3] {
    match side {
        CubeSide::Bottom => [
            Rhombus::new(base.plus(k), j, l),
            Rhombus::new(*base, j, k),
            Rhombus::new(*base, k, l),
        ],
        CubeSide::Top => [
            Rhombus::new(*base, j, l),
            Rhombus::new(base.plus(j), k, l),
            Rhombus::new(base.plus(l), j, k),
        ],
    }
}

pub(crate) fn check_cube(spec: &ZonogonSpec, base: &LatticePoint, dirs: [usize; 3]) -> Result<(), ConstructError> {
    let [j, k, l] = dirs;
    if !(j < k && k < l && l < spec.n()) {
        return Err(ConstructError::BadCubeDirections(dirs));
    }
    if !spec.contains(base) || !spec.contains(&base.plus_all(&dirs)) {
        return Err(ConstructError::CubeOutsideBox { base: *base, dirs });
    }
    Ok(())
}

/// A tiling containing the three bottom (or top) faces of the given cube.
///
/// The three lines adjacent to the origin region in directions `j`, `k`, `l`
/// are pulled towards the origin until they cut out a small triangle there.
pub fn tiling_with_cube_faces(
    spec: &Arc<ZonogonSpec>,
    base: &LatticePoint,
    dirs: [usize; 3],
    side: CubeSide,
    opts: ArrangementOptions,
) -> Result<Tiling, ConstructError> {
    check_cube(spec, base, dirs)?;
    let [j, k, l] = dirs;
    let target = base.plus(k);
    let faces = cube_faces(base, dirs, CubeSide::Bottom);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.max_attempts {
        let arr = Arrangement::random(spec, &target, &mut rng, 1000);
        let special = [
            (j, target.get(j) as usize),
            (k, target.get(k) as usize - 1),
            (l, target.get(l) as usize),
        ];
        let mut scale: i128 = 8;
        while scale < 1 << 40 {
            let mut trial = arr.clone();
            for family in trial.offsets.iter_mut() {
                for q in family.iter_mut() {
                    *q *= scale;
                }
            }
            for &(r, m) in &special {
                let sign = trial.offsets[r][m].signum();
                trial.offsets[r][m] = sign * rng.gen_range(1..=4);
            }
            if let Some(t) = trial.dual(spec) {
                if faces.iter().all(|f| t.contains_rhombus(f)) {
                    return Ok(match side {
                        CubeSide::Bottom => t,
                        CubeSide::Top => {
                            let top = cube_faces(base, dirs, CubeSide::Top);
                            t.replace(&faces, &top)
                        }
                    });
                }
            }
            scale *= 2;
        }
    }
    Err(ConstructError::RetryBudgetExceeded(opts.max_attempts))
}
