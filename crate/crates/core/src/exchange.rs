//! Exchange polynomials attached to tiling vertices and the identities that
//! make the caterpillar argument for Laurentness go through.

use num_traits::One;
use crate::forest::{apply_move, FlipError, FlipMove};
use crate::laurent::{LaurentError, LaurentPoly, Monomial};
use crate::zonogon::{LatticePoint, Tiling};

fn x(v: &LatticePoint) -> LaurentPoly {
    LaurentPoly::var(*v)
}

fn product(vs: impl IntoIterator<Item = LatticePoint>) -> LaurentPoly {
    LaurentPoly::term(1, Monomial::from_pairs(vs.into_iter().map(|v| (v, 1))))
}

/// `p = sum_j x_{b_j} prod_{i != j, j+1} x_{a_i}` over the neighbours
/// `a_1..a_r` of `v` in cyclic order, where `b_j` is the fourth corner of the
/// rhombus on `v, a_j, a_{j+1}`. Where that rhombus is missing (the outside of
/// the zonogon) `x_{b_j}` is replaced by `x_{a_j} x_{a_{j+1}}`.
pub fn exchange_polynomial(t: &Tiling, v: &LatticePoint) -> LaurentPoly {
    let sk = t.skeleton();
    let spec = t.spec();
    let o = spec.project(v);
    let around = sk.neighbors_ccw(v);
    let faces = sk.faces(v);
    let r = around.len();
    let mut out = LaurentPoly::zero();
    for j in 0..r {
        let (a, b) = (around[j], around[(j + 1) % r]);
        // The sector from `a` to `b` holds a rhombus only if it is convex;
        // a reflex sector is the outside of the zonogon.
        let convex = (spec.project(&a) - o).cross(spec.project(&b) - o) > 0;
        let fourth = faces
            .iter()
            .filter(|_| convex)
            .find(|f| f.has_corner(&a) && f.has_corner(&b))
            .and_then(|f| f.opposite(v));
        let head = match fourth {
            Some(w) => x(&w),
            None => &x(&a) * &x(&b),
        };
        let rest = product((0..r).filter(|&i| i != j && i != (j + 1) % r).map(|i| around[i]));
        out = &out + &(&head * &rest);
    }
    out
}

/// How the vertex `i` sits relative to the flipped vertex `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeCase {
    /// No common rhombus: the polynomial at `i` is unchanged.
    Apart,
    /// `i` and `j` share an edge before the flip.
    Edge,
    /// `i` and `j` are opposite corners of a rhombus before the flip.
    Diagonal,
}

/// The outcome of the third caterpillar condition for one vertex: when it
/// holds, `R|_{x_j <- Q0/x_j} = L * Q0^m * P` with `L` a Laurent monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeCheck {
    pub vertex: LatticePoint,
    pub case: ExchangeCase,
    pub factor: Option<(Monomial, u32)>,
}

impl ExchangeCheck {
    pub fn holds(&self) -> bool {
        self.factor.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExchangeError {
    #[error(transparent)]
    Flip(#[from] FlipError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

fn monomial_factor(lhs: &LaurentPoly, q0: &LaurentPoly, p: &LaurentPoly) -> Option<(Monomial, u32)> {
    let mut base = p.clone();
    for m in 0..=2 {
        if let Ok(quot) = lhs.exact_div(&base) {
            if let Some((mono, c)) = quot.as_monomial() {
                if c.is_one() {
                    return Some((mono.clone(), m));
                }
            }
        }
        base = &base * q0;
    }
    None
}

/// For the flip `mv` applied to `t` and every other vertex `i` of `t`, looks
/// for `L` and `m` with `R|_{x_j <- Q0/x_j} = L * Q0^m * P`, where `j` is the
/// removed vertex, `P` and `R` are the exchange polynomials of `i` before and
/// after the flip (the new vertex renamed to `j`), `Q` that of `j`, and
/// `Q0 = Q|_{x_i = 0}`.
///
/// The three cases give `(1, 0)`, `(x_j^-1, 0)` and `(x_j^-1, 1)`; the last
/// one comes from the factor `x_j` in front of `R`.
pub fn check_exchange_identities(t: &Tiling, mv: &FlipMove) -> Result<Vec<ExchangeCheck>, ExchangeError> {
    let after = apply_move(t, mv)?;
    let j = mv.removed();
    let jn = mv.inserted();
    let q = exchange_polynomial(t, &j);
    let xj = x(&j);
    let xj_inv = LaurentPoly::term(1, Monomial::var(j, -1));
    let sk = t.skeleton();
    let mut out = Vec::new();
    for i in t.vertices() {
        if i == j {
            continue;
        }
        let p = exchange_polynomial(t, &i);
        let r = exchange_polynomial(&after, &i).substitute(&jn, &xj)?;
        let case = if sk.neighbors_ccw(&j).contains(&i) {
            ExchangeCase::Edge
        } else if sk.faces(&j).iter().any(|f| f.opposite(&j) == Some(i)) {
            ExchangeCase::Diagonal
        } else {
            ExchangeCase::Apart
        };
        let q0 = q.substitute(&i, &LaurentPoly::zero())?;
        let lhs = r.substitute(&j, &(&q0 * &xj_inv))?;
        let factor = monomial_factor(&lhs, &q0, &p);
        out.push(ExchangeCheck { vertex: i, case, factor });
    }
    Ok(out)
}

/// The exchange polynomial at `v` does not involve `x_v` and has no monomial
/// factor.
pub fn condition_one_holds(t: &Tiling, v: &LatticePoint) -> bool {
    let p = exchange_polynomial(t, v);
    !p.variables().contains(v) && p.min_monomial().is_one() && p.is_polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{all_flips, apply_flip};
    use crate::zonogon::{t_min, ZonogonSpec};
    use std::sync::Arc;

    #[test]
    fn trivalent_vertex_gives_flip_numerator() {
        let s = Arc::new(ZonogonSpec::new(&[1, 1, 1]).unwrap());
        let t = t_min(&s);
        let p = |c: &[u32]| x(&LatticePoint::new(c));
        let got = exchange_polynomial(&t, &LatticePoint::new(&[0, 1, 0]));
        let want = &(&(&p(&[0, 0, 0]) * &p(&[1, 1, 1])) + &(&p(&[1, 1, 0]) * &p(&[0, 0, 1]))) + &(&p(&[0, 1, 1]) * &p(&[1, 0, 0]));
        assert_eq!(got, want);
    }

    #[test]
    fn boundary_vertex_missing_rhombus_term() {
        let s = Arc::new(ZonogonSpec::new(&[1, 1, 1]).unwrap());
        let t = t_min(&s);
        let v = s.zero();
        // Three neighbours, two rhombi and the outside gap from e3 back to e1.
        let p = exchange_polynomial(&t, &v);
        let gap = product([s.unit(0), s.unit(1), s.unit(2)]);
        assert_eq!(p.terms().count(), 3);
        assert!(p.terms().any(|(m, _)| LaurentPoly::term(1, m.clone()) == gap));
        assert!(condition_one_holds(&t, &v));
    }

    #[test]
    fn octagon_identities() {
        let s = Arc::new(ZonogonSpec::new(&[1, 1, 1, 1]).unwrap());
        let t = t_min(&s);
        for mv in all_flips(&t) {
            for c in check_exchange_identities(&t, &mv).unwrap() {
                assert!(c.holds(), "{c:?}");
            }
        }
        let (hi, _) = apply_flip(&t, &all_flips(&t)[0].removed()).unwrap();
        for v in hi.vertices() {
            assert!(condition_one_holds(&hi, &v), "{v}");
        }
    }
}
