//! The cube recurrence over a generic coefficient domain: single flips,
//! evaluation along flip paths, and extension of initial data on a tiling to
//! the whole box.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::forest::FlipMove;
use crate::laurent::{LaurentError, LaurentPoly};
use crate::paths::{connect, FlipPath, PathError};
use crate::zonogon::{tiling_through_vertex, ArrangementOptions, ConstructError, LatticePoint, Tiling, ZonogonSpec};

/// Arithmetic needed to run the recurrence.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    const NAME: &'static str;
    fn mul(&self, other: &Self) -> Self;
    fn add3(a: &Self, b: &Self, c: &Self) -> Self;
    fn div(&self, other: &Self) -> Result<Self, String>;
    /// Whether the value may be used as a divisor.
    fn is_valid(&self) -> bool;
}

impl Coefficient for BigRational {
    const NAME: &'static str = "rational";

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn add3(a: &Self, b: &Self, c: &Self) -> Self {
        a + b + c
    }

    fn div(&self, other: &Self) -> Result<Self, String> {
        if other.is_zero() {
            Err("division by zero".into())
        } else {
            Ok(self / other)
        }
    }

    fn is_valid(&self) -> bool {
        !self.is_zero()
    }
}

impl Coefficient for LaurentPoly {
    const NAME: &'static str = "laurent";

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn add3(a: &Self, b: &Self, c: &Self) -> Self {
        &(a + b) + c
    }

    fn div(&self, other: &Self) -> Result<Self, String> {
        self.exact_div(other).map_err(|e: LaurentError| e.to_string())
    }

    fn is_valid(&self) -> bool {
        !self.is_zero()
    }
}

/// An element of the max-plus semiring over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tropical(pub BigRational);

impl Tropical {
    pub fn from_integer(v: i64) -> Self {
        Tropical(BigRational::from_integer(v.into()))
    }
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coefficient for Tropical {
    const NAME: &'static str = "tropical";

    fn mul(&self, other: &Self) -> Self {
        Tropical(&self.0 + &other.0)
    }

    fn add3(a: &Self, b: &Self, c: &Self) -> Self {
        a.clone().max(b.clone()).max(c.clone())
    }

    fn div(&self, other: &Self) -> Result<Self, String> {
        Ok(Tropical(&self.0 - &other.0))
    }

    fn is_valid(&self) -> bool {
        true
    }
}

/// Values on some lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeling<D> {
    spec: Arc<ZonogonSpec>,
    values: BTreeMap<LatticePoint, D>,
}

impl<D: Coefficient> Labeling<D> {
    pub fn new(spec: Arc<ZonogonSpec>) -> Self {
        Labeling {
            spec,
            values: BTreeMap::new(),
        }
    }

    pub fn from_values(spec: Arc<ZonogonSpec>, values: impl IntoIterator<Item = (LatticePoint, D)>) -> Self {
        Labeling {
            spec,
            values: values.into_iter().collect(),
        }
    }

    /// Labels every vertex of `t` with `f(vertex)`.
    pub fn on_tiling(t: &Tiling, mut f: impl FnMut(&LatticePoint) -> D) -> Self {
        Labeling::from_values(t.spec_arc().clone(), t.vertices().iter().map(|v| (*v, f(v))))
    }

    pub fn spec(&self) -> &Arc<ZonogonSpec> {
        &self.spec
    }

    pub fn get(&self, p: &LatticePoint) -> Option<&D> {
        self.values.get(p)
    }

    pub fn insert(&mut self, p: LatticePoint, value: D) -> Option<D> {
        self.values.insert(p, value)
    }

    pub fn values(&self) -> &BTreeMap<LatticePoint, D> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.values.len() == self.spec.lattice_size()
    }

    /// Keeps only the vertices of `t`.
    pub fn restrict_to(&self, t: &Tiling) -> Result<Self, EngineError> {
        let mut out = Labeling::new(self.spec.clone());
        for v in t.vertices() {
            let x = self.get(&v).ok_or(EngineError::Unlabeled(v))?;
            out.insert(v, x.clone());
        }
        Ok(out)
    }

    pub fn map<E: Coefficient>(&self, mut f: impl FnMut(&LatticePoint, &D) -> E) -> Labeling<E> {
        Labeling {
            spec: self.spec.clone(),
            values: self.values.iter().map(|(p, x)| (*p, f(p, x))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("vertex {0} has no value")]
    Unlabeled(LatticePoint),
    #[error("initial value at {0} is not usable in this domain")]
    InvalidInitial(LatticePoint),
    #[error("invalid divisor in cube {0}")]
    InvalidDivisor(FlipMove),
    #[error("domain error in cube {cube}: {message}")]
    Domain { cube: FlipMove, message: String },
    #[error("inconsistent values at {vertex}: {first} vs {second}")]
    Inconsistent {
        vertex: LatticePoint,
        first: String,
        second: String,
    },
    #[error("labeling and tiling belong to different zonogons")]
    SpecMismatch,
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// The eight corners of the cube of `mv` as
/// `[I, I+j, I+k, I+l, I+jk, I+jl, I+kl, I+jkl]`.
pub fn cube_corners(base: &LatticePoint, [j, k, l]: [usize; 3]) -> [LatticePoint; 8] {
    let i = *base;
    [
        i,
        i.plus(j),
        i.plus(k),
        i.plus(l),
        i.plus(j).plus(k),
        i.plus(j).plus(l),
        i.plus(k).plus(l),
        i.plus(j).plus(k).plus(l),
    ]
}

fn lookup<'a, D>(values: &'a BTreeMap<LatticePoint, D>, p: &LatticePoint) -> Result<&'a D, EngineError> {
    values.get(p).ok_or(EngineError::Unlabeled(*p))
}

/// `x_I x_{I+jkl} + x_{I+jk} x_{I+l} + x_{I+kl} x_{I+j}`, the common side of
/// the cube relation.
fn numerator<D: Coefficient>(values: &BTreeMap<LatticePoint, D>, base: &LatticePoint, dirs: [usize; 3]) -> Result<D, EngineError> {
    let [i, ij, _, il, ijk, _, ikl, ijkl] = cube_corners(base, dirs);
    let g = |p: &LatticePoint| lookup(values, p);
    Ok(D::add3(
        &g(&i)?.mul(g(&ijkl)?),
        &g(&ijk)?.mul(g(&il)?),
        &g(&ikl)?.mul(g(&ij)?),
    ))
}

fn flip_value_in<D: Coefficient>(values: &BTreeMap<LatticePoint, D>, mv: &FlipMove) -> Result<D, EngineError> {
    let num = numerator(values, &mv.base, mv.dirs)?;
    let divisor = lookup(values, &mv.removed())?;
    if !divisor.is_valid() {
        return Err(EngineError::InvalidDivisor(*mv));
    }
    num.div(divisor).map_err(|message| EngineError::Domain { cube: *mv, message })
}

/// The value the flip creates at its new vertex:
/// `x_{I+jl} x_{I+k} = x_I x_{I+jkl} + x_{I+jk} x_{I+l} + x_{I+kl} x_{I+j}`
/// solved for whichever of `x_{I+jl}`, `x_{I+k}` is missing.
pub fn flip_value<D: Coefficient>(labeling: &Labeling<D>, mv: &FlipMove) -> Result<D, EngineError> {
    flip_value_in(&labeling.values, mv)
}

/// Carries the values on the start tiling of `path` along every flip. The
/// result holds exactly the vertices of the end tiling.
pub fn evaluate_path<D: Coefficient>(init: &Labeling<D>, path: &FlipPath) -> Result<Labeling<D>, EngineError> {
    let mut cur = init.restrict_to(&path.start)?;
    for mv in &path.moves {
        let x = flip_value(&cur, mv)?;
        cur.values.remove(&mv.removed());
        cur.values.insert(mv.inserted(), x);
    }
    Ok(cur)
}

/// How [`extend_to_lattice`] builds its paths and how often it re-derives
/// known values as a consistency check.
#[derive(Debug, Clone, Copy)]
pub struct ExtendOptions {
    pub seed: u64,
    /// Fraction of revisited vertices whose value is recomputed and compared
    /// in release builds; debug builds always compare.
    pub check_rate: f64,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions {
            seed: 0,
            check_rate: 0.05,
        }
    }
}

/// Labels all of the box from values on the vertices of `t0`.
///
/// Each missing point `I` is reached by a path from `t0` to a tiling through
/// `I`; every value met on the way is cached, and revisits are compared
/// against the cache.
pub fn extend_to_lattice<D: Coefficient>(
    t0: &Tiling,
    init: &Labeling<D>,
    opts: ExtendOptions,
) -> Result<Labeling<D>, EngineError> {
    if t0.spec().a() != init.spec.a() {
        return Err(EngineError::SpecMismatch);
    }
    let mut total = init.restrict_to(t0)?;
    if let Some((p, _)) = total.values.iter().find(|(_, x)| !x.is_valid()) {
        return Err(EngineError::InvalidInitial(*p));
    }
    let spec = t0.spec_arc().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for target in spec.points() {
        if total.values.contains_key(&target) {
            continue;
        }
        let arrangement = ArrangementOptions {
            seed: opts.seed,
            ..Default::default()
        };
        let through = tiling_through_vertex(&spec, &target, arrangement)?;
        let path = connect(t0, &through)?;
        for mv in &path.moves {
            let new = mv.inserted();
            let check = cfg!(debug_assertions) || rng.gen_bool(opts.check_rate.clamp(0.0, 1.0));
            match total.values.get(&new) {
                Some(known) if check => {
                    let x = flip_value_in(&total.values, mv)?;
                    if &x != known {
                        return Err(EngineError::Inconsistent {
                            vertex: new,
                            first: known.to_string(),
                            second: x.to_string(),
                        });
                    }
                }
                Some(_) => {}
                None => {
                    let x = flip_value_in(&total.values, mv)?;
                    total.values.insert(new, x);
                }
            }
        }
    }
    Ok(total)
}

/// One failed cube relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeFailure {
    pub base: LatticePoint,
    pub dirs: [usize; 3],
}

impl fmt::Display for CubeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [j, k, l] = self.dirs;
        write!(f, "cube at {} in directions ({},{},{})", self.base, j + 1, k + 1, l + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CubeReport {
    pub checked: usize,
    pub failures: Vec<CubeFailure>,
}

impl CubeReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first(&self) -> Option<&CubeFailure> {
        self.failures.first()
    }
}

/// Checks the cube relation on every unit 3-cube of the box.
pub fn verify_cube_relations<D: Coefficient>(labeling: &Labeling<D>) -> Result<CubeReport, EngineError> {
    let spec = labeling.spec.clone();
    let n = spec.n();
    let mut report = CubeReport::default();
    for base in spec.points() {
        for j in 0..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if !spec.contains(&base.plus_all(&[j, k, l])) {
                        continue;
                    }
                    let corners = cube_corners(&base, [j, k, l]);
                    let lhs = lookup(&labeling.values, &corners[5])?.mul(lookup(&labeling.values, &corners[2])?);
                    let rhs = numerator(&labeling.values, &base, [j, k, l])?;
                    report.checked += 1;
                    if lhs != rhs {
                        report.failures.push(CubeFailure { base, dirs: [j, k, l] });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Whether every value is strictly positive.
pub fn all_positive(labeling: &Labeling<BigRational>) -> bool {
    labeling.values.values().all(|x| x.is_positive())
}
