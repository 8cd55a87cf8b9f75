//! The Clifford module `S = /\ W` of `V = W + W^v`, its invariant form, and
//! the projections onto three-index subalgebras.

use std::fmt;

use num_traits::{One, Zero};

use super::linalg::{q, Q};

/// Spinors and vectors are limited to this many indices.
pub const MAX_SPIN_N: usize = 8;

/// `w` holds the coefficients of `e_i`, `wv` those of `e_i^v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector2n {
    pub w: Vec<Q>,
    pub wv: Vec<Q>,
}

impl Vector2n {
    pub fn zero(n: usize) -> Self {
        Vector2n {
            w: vec![Q::zero(); n],
            wv: vec![Q::zero(); n],
        }
    }

    pub fn e(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.w[i] = Q::one();
        v
    }

    pub fn e_dual(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.wv[i] = Q::one();
        v
    }

    /// Coordinates `(w, wv)` as one row of length `2n`.
    pub fn from_row(row: &[Q]) -> Self {
        let n = row.len() / 2;
        Vector2n {
            w: row[..n].to_vec(),
            wv: row[n..].to_vec(),
        }
    }

    pub fn to_row(&self) -> Vec<Q> {
        self.w.iter().chain(&self.wv).cloned().collect()
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// `<(w1, v1), (w2, v2)> = (v1(w2) + v2(w1)) / 2`.
    pub fn inner(&self, other: &Vector2n) -> Q {
        let s: Q = self
            .wv
            .iter()
            .zip(&other.w)
            .chain(other.wv.iter().zip(&self.w))
            .map(|(a, b)| a * b)
            .sum();
        s / q(2)
    }

    pub fn add(&self, other: &Vector2n) -> Vector2n {
        Vector2n {
            w: self.w.iter().zip(&other.w).map(|(a, b)| a + b).collect(),
            wv: self.wv.iter().zip(&other.wv).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Vector2n {
        Vector2n {
            w: self.w.iter().map(|a| a * c).collect(),
            wv: self.wv.iter().map(|a| a * c).collect(),
        }
    }

    /// Reflection in the hyperplane orthogonal to a non-null `v`.
    pub fn reflect(&self, v: &Vector2n) -> Vector2n {
        let c = q(2) * self.inner(v) / v.inner(v);
        self.add(&v.scale(&-c))
    }
}

/// An element of `/\ W`, with `coords[J]` the coefficient of `v_J` for the
/// bitmask `J` (bit `i` standing for `e_{i+1}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spinor {
    pub n: usize,
    pub coords: Vec<Q>,
}

/// Number of elements of `mask` below index `i`.
fn below(mask: usize, i: usize) -> u32 {
    (mask & ((1 << i) - 1)).count_ones()
}

fn sign(k: u32) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

impl Spinor {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_SPIN_N, "at most {MAX_SPIN_N} indices");
        Spinor {
            n,
            coords: vec![Q::zero(); 1 << n],
        }
    }

    pub fn basis(n: usize, mask: usize) -> Self {
        let mut s = Self::zero(n);
        s.coords[mask] = Q::one();
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// `Some(true)` for even support, `Some(false)` for odd, `None` if mixed
    /// or zero.
    pub fn parity(&self) -> Option<bool> {
        let even = self.support().all(|m| m.count_ones() % 2 == 0);
        let odd = self.support().all(|m| m.count_ones() % 2 == 1);
        match (self.is_zero(), even, odd) {
            (true, _, _) => None,
            (false, true, _) => Some(true),
            (false, _, true) => Some(false),
            _ => None,
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(m, _)| m)
    }

    pub fn add(&self, other: &Spinor) -> Spinor {
        Spinor {
            n: self.n,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Spinor {
        Spinor {
            n: self.n,
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    /// `e_i ^ s`.
    pub fn wedge(&self, i: usize) -> Spinor {
        let mut out = Spinor::zero(self.n);
        for m in self.support() {
            if m & (1 << i) == 0 {
                out.coords[m | (1 << i)] += sign(below(m, i)) * &self.coords[m];
            }
        }
        out
    }

    /// `e_i^v _| s`.
    pub fn contract(&self, i: usize) -> Spinor {
        let mut out = Spinor::zero(self.n);
        for m in self.support() {
            if m & (1 << i) != 0 {
                out.coords[m ^ (1 << i)] += sign(below(m, i)) * &self.coords[m];
            }
        }
        out
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in self.support() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let bits: String = (0..self.n).map(|i| if m & (1 << i) != 0 { '1' } else { '0' }).collect();
            write!(f, "({})v{bits}", self.coords[m])?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The Clifford action of `v` on `s`: wedge with the `W` part plus
/// contraction with the `W^v` part.
pub fn clifford_act(v: &Vector2n, s: &Spinor) -> Spinor {
    let mut out = Spinor::zero(s.n);
    for i in 0..s.n {
        if !v.w[i].is_zero() {
            out = out.add(&s.wedge(i).scale(&v.w[i]));
        }
        if !v.wv[i].is_zero() {
            out = out.add(&s.contract(i).scale(&v.wv[i]));
        }
    }
    out
}

/// `Vol(v_J ^ v_K)` for complementary masks, else 0.
fn vol(n: usize, j: usize, k: usize) -> Q {
    if j & k != 0 || (j | k) != (1 << n) - 1 {
        return Q::zero();
    }
    // Inversions of the shuffle listing J then K.
    let inv: u32 = (0..n).filter(|&b| k & (1 << b) != 0).map(|b| (j >> (b + 1)).count_ones()).sum();
    sign(inv)
}

/// `B = sum_k (-1)^{k(k-1)/2} <, >_k` with `Vol(e_1 ^ .. ^ e_n) = 1`.
pub fn bilinear_form_b(s1: &Spinor, s2: &Spinor) -> Q {
    let n = s1.n;
    let full = (1usize << n) - 1;
    let mut out = Q::zero();
    for j in s1.support() {
        let k = full ^ j;
        if s2.coords[k].is_zero() {
            continue;
        }
        let deg = j.count_ones();
        let tw = sign(deg * deg.saturating_sub(1) / 2);
        out += tw * vol(n, j, k) * &s1.coords[j] * &s2.coords[k];
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectionError {
    #[error("directions must be distinct, increasing and below {0}")]
    BadDirections(usize),
    #[error("base point must vanish in the three chosen directions")]
    BaseNotZero,
}

/// `p(v_I^v _| s)`: contract by `e_{i_r}^v ^ .. ^ e_{i_1}^v` and keep the
/// part in `/\ span(e_j, e_k, e_l)`, as a spinor on three indices.
pub fn projection_pi(base: usize, dirs: [usize; 3], s: &Spinor) -> Result<Spinor, ProjectionError> {
    let [j, k, l] = dirs;
    if !(j < k && k < l && l < s.n) {
        return Err(ProjectionError::BadDirections(s.n));
    }
    let sub = (1 << j) | (1 << k) | (1 << l);
    if base & sub != 0 {
        return Err(ProjectionError::BaseNotZero);
    }
    let mut cur = s.clone();
    for i in 0..s.n {
        if base & (1 << i) != 0 {
            cur = cur.contract(i);
        }
    }
    let mut out = Spinor::zero(3);
    for m in cur.support() {
        if m & !sub == 0 {
            let local = ((m >> j) & 1) | (((m >> k) & 1) << 1) | (((m >> l) & 1) << 2);
            out.coords[local] = cur.coords[m].clone();
        }
    }
    Ok(out)
}
