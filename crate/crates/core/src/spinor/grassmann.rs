//! Pure spinors of maximal isotropic subspaces and the spin coordinates of
//! isotropic `(n-1)`-planes.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::engine::Labeling;

use super::clifford::{clifford_act, Spinor, Vector2n, MAX_SPIN_N};
use super::linalg::{kernel, normalize, q, rank, rational_sqrt, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpinorError {
    #[error("at most {MAX_SPIN_N} indices are supported, got {0}")]
    TooLarge(usize),
    #[error("vectors are not pairwise orthogonal")]
    NotIsotropic,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("expected dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("solution space dimension {0} is not 1")]
    NotMaximal(usize),
    #[error("form on the complement is not split over the rationals")]
    NotSplit,
    #[error("zero spinor")]
    ZeroSpinor,
}

/// A subspace of `V` spanned by pairwise orthogonal null vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSubspace {
    n: usize,
    basis: Vec<Vector2n>,
}

impl IsotropicSubspace {
    pub fn new(n: usize, basis: Vec<Vector2n>) -> Result<Self, SpinorError> {
        if n > MAX_SPIN_N {
            return Err(SpinorError::TooLarge(n));
        }
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i..] {
                if !a.inner(b).is_zero() {
                    return Err(SpinorError::NotIsotropic);
                }
            }
        }
        let rows: Vec<Vec<Q>> = basis.iter().map(Vector2n::to_row).collect();
        if rank(&rows) != basis.len() {
            return Err(SpinorError::Dependent);
        }
        Ok(IsotropicSubspace { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector2n] {
        &self.basis
    }

    pub fn contains(&self, v: &Vector2n) -> bool {
        let mut rows: Vec<Vec<Q>> = self.basis.iter().map(Vector2n::to_row).collect();
        rows.push(v.to_row());
        rank(&rows) == self.dim()
    }

    pub fn same_span(&self, other: &IsotropicSubspace) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|v| self.contains(v))
    }

    /// `span(e_1..e_n)` or, with `dual`, `span(e_1^v..e_n^v)`.
    pub fn coordinate(n: usize, dual: bool) -> Self {
        let basis = (0..n)
            .map(|i| if dual { Vector2n::e_dual(n, i) } else { Vector2n::e(n, i) })
            .collect();
        IsotropicSubspace { n, basis }
    }

    /// The orthogonal complement, as a basis.
    pub fn perp(&self) -> Vec<Vector2n> {
        // <x, b> = (x_w . b_wv + x_wv . b_w) / 2, a linear form in x.
        let rows: Vec<Vec<Q>> = self
            .basis
            .iter()
            .map(|b| b.wv.iter().chain(&b.w).cloned().collect())
            .collect();
        kernel(&rows, 2 * self.n).iter().map(|r| Vector2n::from_row(r)).collect()
    }

    /// `self ∩ other`.
    pub fn intersect(&self, other: &IsotropicSubspace) -> Vec<Vector2n> {
        // Solve sum a_i x_i = sum b_j y_j.
        let cols = self.dim() + other.dim();
        let rows: Vec<Vec<Q>> = (0..2 * self.n)
            .map(|c| {
                self.basis
                    .iter()
                    .map(|v| v.to_row()[c].clone())
                    .chain(other.basis.iter().map(|v| -v.to_row()[c].clone()))
                    .collect()
            })
            .collect();
        kernel(&rows, cols)
            .iter()
            .map(|k| {
                self.basis
                    .iter()
                    .zip(k)
                    .fold(Vector2n::zero(self.n), |acc, (v, c)| acc.add(&v.scale(c)))
            })
            .collect()
    }
}

/// Row-stacked matrix of `s |-> (b_1 s, .., b_m s)` acting on spinors.
fn annihilation_matrix(n: usize, vs: &[Vector2n]) -> Vec<Vec<Q>> {
    let size = 1usize << n;
    let images: Vec<Vec<Spinor>> = vs
        .iter()
        .map(|v| (0..size).map(|m| clifford_act(v, &Spinor::basis(n, m))).collect())
        .collect();
    let mut rows = Vec::new();
    for img in &images {
        for r in 0..size {
            let row: Vec<Q> = img.iter().map(|s| s.coords[r].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

/// The spinor killed by every vector of a maximal isotropic subspace,
/// scaled to a primitive integer vector with positive leading entry.
pub fn pure_spinor(l: &IsotropicSubspace) -> Result<Spinor, SpinorError> {
    let n = l.n;
    if l.dim() != n {
        return Err(SpinorError::WrongDimension { expected: n, found: l.dim() });
    }
    let k = kernel(&annihilation_matrix(n, &l.basis), 1 << n);
    if k.len() != 1 {
        return Err(SpinorError::NotMaximal(k.len()));
    }
    Ok(Spinor {
        n,
        coords: normalize(&k[0]),
    })
}

/// The annihilator `{v : v s = 0}` of a spinor.
pub fn annihilator(spinors: &[&Spinor]) -> Result<Vec<Vector2n>, SpinorError> {
    let Some(first) = spinors.first() else {
        return Err(SpinorError::ZeroSpinor);
    };
    let n = first.n;
    if spinors.iter().any(|s| s.is_zero()) {
        return Err(SpinorError::ZeroSpinor);
    }
    // Columns are the 2n basis vectors of V.
    let basis: Vec<Vector2n> = (0..n)
        .map(|i| Vector2n::e(n, i))
        .chain((0..n).map(|i| Vector2n::e_dual(n, i)))
        .collect();
    let mut rows = Vec::new();
    for s in spinors {
        let images: Vec<Spinor> = basis.iter().map(|v| clifford_act(v, s)).collect();
        for r in 0..1 << n {
            let row: Vec<Q> = images.iter().map(|im| im.coords[r].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    Ok(kernel(&rows, 2 * n).iter().map(|r| Vector2n::from_row(r)).collect())
}

/// Purity of `s` and its annihilator, which is isotropic whenever nonzero.
pub fn purity_check(s: &Spinor) -> Result<(bool, IsotropicSubspace), SpinorError> {
    let ann = annihilator(&[s])?;
    let sub = IsotropicSubspace::new(s.n, ann)?;
    Ok((sub.dim() == s.n, sub))
}

/// The two maximal isotropic subspaces through `k`, the one with an even
/// pure spinor first.
pub fn complete_isotropic_pair(
    k: &IsotropicSubspace,
) -> Result<(IsotropicSubspace, IsotropicSubspace), SpinorError> {
    let n = k.n;
    if k.dim() + 1 != n {
        return Err(SpinorError::WrongDimension {
            expected: n - 1,
            found: k.dim(),
        });
    }
    // Two vectors of k-perp independent modulo k.
    let mut extra: Vec<Vector2n> = Vec::new();
    let mut rows: Vec<Vec<Q>> = k.basis.iter().map(Vector2n::to_row).collect();
    for v in k.perp() {
        rows.push(v.to_row());
        if rank(&rows) == k.dim() + extra.len() + 1 {
            extra.push(v);
        } else {
            rows.pop();
        }
    }
    let [u1, u2] = <[Vector2n; 2]>::try_from(extra).map_err(|_| SpinorError::NotSplit)?;
    let (a, b, c) = (u1.inner(&u1), u1.inner(&u2), u2.inner(&u2));
    // a x^2 + 2 b x y + c y^2 = 0.
    let lines: [(Q, Q); 2] = if a.is_zero() {
        [(q(1), q(0)), (c.clone(), -q(2) * &b)]
    } else {
        let root = rational_sqrt(&(&b * &b - &a * &c)).ok_or(SpinorError::NotSplit)?;
        [(-&b + &root, a.clone()), (-&b - &root, a.clone())]
    };
    let mut out = Vec::new();
    for (x, y) in lines {
        let v = u1.scale(&x).add(&u2.scale(&y));
        let mut basis = k.basis.clone();
        basis.push(v);
        out.push(IsotropicSubspace::new(n, basis)?);
    }
    let second = out.pop().expect("two lines");
    let first = out.pop().expect("two lines");
    if pure_spinor(&first)?.parity() == Some(true) {
        Ok((first, second))
    } else {
        Ok((second, first))
    }
}

/// A random isotropic `(n-1)`-plane: the image of `span(e_1..e_{n-1})` under
/// a product of reflections in random small integer vectors.
pub fn random_isotropic(n: usize, rng: &mut impl Rng) -> IsotropicSubspace {
    let mut basis: Vec<Vector2n> = (0..n - 1).map(|i| Vector2n::e(n, i)).collect();
    for _ in 0..2 * n {
        let v = loop {
            let w: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-2..=2))).collect();
            let wv: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-2..=2))).collect();
            let v = Vector2n { w, wv };
            if !v.inner(&v).is_zero() {
                break v;
            }
        };
        basis = basis.iter().map(|b| b.reflect(&v)).collect();
    }
    IsotropicSubspace::new(n, basis).expect("reflections preserve isotropy")
}

/// A point of `P(S+) x P(S-)` in the coordinates `x_I`, `I` in the unit
/// cube; `coords[mask]` is `x_I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinPoint {
    pub n: usize,
    pub coords: Vec<Q>,
}

impl SpinPoint {
    pub fn from_pair(even: &Spinor, odd: &Spinor) -> Self {
        let coords = (0..1usize << even.n)
            .map(|m| {
                if m.count_ones() % 2 == 0 {
                    even.coords[m].clone()
                } else {
                    odd.coords[m].clone()
                }
            })
            .collect();
        SpinPoint { n: even.n, coords }
    }

    pub fn even(&self) -> Spinor {
        self.part(0)
    }

    pub fn odd(&self) -> Spinor {
        self.part(1)
    }

    fn part(&self, parity: u32) -> Spinor {
        let mut s = Spinor::zero(self.n);
        for (m, c) in self.coords.iter().enumerate() {
            if m.count_ones() % 2 == parity {
                s.coords[m] = c.clone();
            }
        }
        s
    }

    pub fn all_nonzero(&self) -> bool {
        self.coords.iter().all(|c| !c.is_zero())
    }
}

impl SpinPoint {
    /// Reads `x_I` off a labeling of the unit cube `A = (1, .., 1)`. `None`
    /// if the box is not a unit cube or some corner is unlabeled.
    pub fn from_labeling(l: &Labeling<Q>) -> Option<Self> {
        let spec = l.spec();
        let n = spec.n();
        if n > MAX_SPIN_N || spec.a().iter().any(|&a| a != 1) {
            return None;
        }
        let coords = (0..1usize << n)
            .map(|m| {
                let c: Vec<u32> = (0..n).map(|i| ((m >> i) & 1) as u32).collect();
                l.get(&spec.point(&c)?).cloned()
            })
            .collect::<Option<Vec<Q>>>()?;
        Some(SpinPoint { n, coords })
    }
}

/// The bit string of a mask, first index first.
pub fn mask_key(n: usize, m: usize) -> String {
    (0..n).map(|i| if m & (1 << i) != 0 { '1' } else { '0' }).collect()
}

pub fn parse_mask_key(s: &str) -> Option<usize> {
    s.chars().enumerate().try_fold(0usize, |acc, (i, ch)| match ch {
        '0' => Some(acc),
        '1' => Some(acc | (1 << i)),
        _ => None,
    })
}

/// `(pure_spinor(L+), pure_spinor(L-))` for the two completions of `k`.
pub fn spin_coordinates(k: &IsotropicSubspace) -> Result<SpinPoint, SpinorError> {
    let (lp, lm) = complete_isotropic_pair(k)?;
    Ok(SpinPoint::from_pair(&pure_spinor(&lp)?, &pure_spinor(&lm)?))
}

/// One instance `(I, j, k, l)` of a three-term relation that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub base: usize,
    pub dirs: [usize; 3],
}

impl fmt::Display for RelationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [j, k, l] = self.dirs;
        write!(f, "I={} ({},{},{})", self.base, j + 1, k + 1, l + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_relations(p: &SpinPoint, holds: impl Fn(&[&Q; 8]) -> bool) -> RelationReport {
    let n = p.n;
    let mut report = RelationReport::default();
    for j in 0..n {
        for k in j + 1..n {
            for l in k + 1..n {
                let sub = (1 << j) | (1 << k) | (1 << l);
                for base in 0..1usize << n {
                    if base & sub != 0 {
                        continue;
                    }
                    let x = |m: usize| &p.coords[base | m];
                    let (ej, ek, el) = (1 << j, 1 << k, 1 << l);
                    let vals = [x(0), x(ej), x(ek), x(el), x(ej | ek), x(ej | el), x(ek | el), x(sub)];
                    report.checked += 1;
                    if !holds(&vals) {
                        report.failures.push(RelationFailure { base, dirs: [j, k, l] });
                    }
                }
            }
        }
    }
    report
}

/// `x_I x_{I+jkl} + x_{I+jl} x_{I+k} = x_{I+jk} x_{I+l} + x_{I+kl} x_{I+j}`.
pub fn verify_trbi(p: &SpinPoint) -> RelationReport {
    check_relations(p, |[x0, xj, xk, xl, xjk, xjl, xkl, xjkl]| {
        *x0 * *xjkl + *xjl * *xk == *xjk * *xl + *xkl * *xj
    })
}

/// `x_{I+jl} x_{I+k} = x_I x_{I+jkl} + x_{I+jk} x_{I+l} + x_{I+kl} x_{I+j}`.
pub fn verify_cube_recurrence(p: &SpinPoint) -> RelationReport {
    check_relations(p, |[x0, xj, xk, xl, xjk, xjl, xkl, xjkl]| {
        *xjl * *xk == *x0 * *xjkl + *xjk * *xl + *xkl * *xj
    })
}

/// Negates `x_I` when `4 | phi(I)`.
pub fn sign_twist(p: &SpinPoint) -> SpinPoint {
    let coords = p
        .coords
        .iter()
        .enumerate()
        .map(|(m, c)| if m.count_ones() % 4 == 0 { -c.clone() } else { c.clone() })
        .collect();
    SpinPoint { n: p.n, coords }
}

/// Random nonzero small rationals, for tests of projective statements.
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> Vector2n {
    // (w, wv) with w . wv = 1.
    loop {
        let w: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-3..=3))).collect();
        let mut wv: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-3..=3))).collect();
        let Some(i) = (0..n).find(|&i| !w[i].is_zero()) else {
            continue;
        };
        let rest: Q = (0..n).filter(|&t| t != i).map(|t| &w[t] * &wv[t]).sum();
        wv[i] = (Q::one() - rest) / &w[i];
        let v = Vector2n { w, wv };
        debug_assert!(v.inner(&v).is_one());
        return v;
    }
}
