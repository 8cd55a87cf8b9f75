//! Flip paths: normalisation to the minimal tiling, connecting two tilings,
//! and connecting them through tilings that all keep a given vertex.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::forest::{all_flips, apply_move, flip_at, flippable_vertices, fundamental_forest, FlipError, FlipMove};
use crate::zonogon::{Edge, LatticePoint, Rhombus, Tiling};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("spec mismatch: {0:?} vs {1:?}")]
    SpecMismatch(Vec<u32>, Vec<u32>),
    #[error("vertex {0} is not in both tilings")]
    MissingVertex(LatticePoint),
    #[error("edge {0} is not in the tiling")]
    EdgeNotInTiling(Edge),
    #[error("transposition at {at} got stuck: {reason}")]
    Stuck { at: LatticePoint, reason: String },
    #[error(transparent)]
    Flip(#[from] FlipError),
}

/// A start tiling and a sequence of flips applicable in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPath {
    pub start: Tiling,
    pub moves: Vec<FlipMove>,
}

impl FlipPath {
    pub fn empty(start: Tiling) -> Self {
        FlipPath { start, moves: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every tiling along the path, the start included.
    pub fn replay(&self) -> Result<Vec<Tiling>, FlipError> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(self.start.clone());
        for mv in &self.moves {
            let next = apply_move(out.last().expect("nonempty"), mv)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<Tiling, FlipError> {
        let mut t = self.start.clone();
        for mv in &self.moves {
            t = apply_move(&t, mv)?;
        }
        Ok(t)
    }

    /// The same path walked backwards from `end`.
    pub fn reversed(&self, end: Tiling) -> FlipPath {
        FlipPath {
            start: end,
            moves: self.moves.iter().rev().map(FlipMove::inverse).collect(),
        }
    }
}

fn lowest(vertices: &BTreeSet<LatticePoint>, t: &Tiling) -> Option<LatticePoint> {
    vertices.iter().min_by_key(|v| (t.spec().height(v), **v)).copied()
}

/// Downward flips at the lowest leaf (ties: smallest coordinates) until the
/// minimal tiling is reached.
pub fn normalize_to_min(t: &Tiling) -> FlipPath {
    let mut cur = t.clone();
    let mut moves = Vec::new();
    while let Some(v) = lowest(&flippable_vertices(&cur).down, &cur) {
        let mv = flip_at(&cur, &v).expect("leaf is down-flippable");
        cur = apply_move(&cur, &mv).expect("fresh move applies");
        moves.push(mv);
    }
    FlipPath { start: t.clone(), moves }
}

fn same_spec(t: &Tiling, t2: &Tiling) -> Result<(), PathError> {
    if t.spec().a() != t2.spec().a() {
        return Err(PathError::SpecMismatch(t.spec().a().to_vec(), t2.spec().a().to_vec()));
    }
    Ok(())
}

/// Down to the minimal tiling from `t`, then up to `t2`.
pub fn connect(t: &Tiling, t2: &Tiling) -> Result<FlipPath, PathError> {
    same_spec(t, t2)?;
    let mut path = normalize_to_min(t);
    let back = normalize_to_min(t2);
    path.moves.extend(back.moves.iter().rev().map(FlipMove::inverse));
    Ok(path)
}

/// The chain of rhombi crossed by the pseudoline through `e`: every rhombus
/// with a side parallel to `e` at the same level, ordered from the right
/// boundary of the zonogon to the left one.
pub fn rhombus_chain(t: &Tiling, e: &Edge) -> Result<Vec<Rhombus>, PathError> {
    let sk = t.skeleton();
    if !sk.has_edge(e) {
        return Err(PathError::EdgeNotInTiling(*e));
    }
    Ok(chain_at_level(t, e.dir, e.base.get(e.dir)))
}

fn chain_at_level(t: &Tiling, d: usize, level: u32) -> Vec<Rhombus> {
    let spec = t.spec();
    let mut by_edge: HashMap<Edge, Vec<Rhombus>> = HashMap::new();
    for r in t.rhombi().iter().filter(|r| (r.lo == d || r.hi == d) && r.base.get(d) == level) {
        let other = if r.lo == d { r.hi } else { r.lo };
        by_edge.entry(Edge::new(r.base, d)).or_default().push(*r);
        by_edge.entry(Edge::new(r.base.plus(other), d)).or_default().push(*r);
    }
    let mut start = spec.zero().with(d, level);
    for i in 0..d {
        start = start.with(i, spec.a()[i]);
    }
    let mut edge = Edge::new(start, d);
    let mut out: Vec<Rhombus> = Vec::new();
    while let Some(r) = by_edge
        .get(&edge)
        .and_then(|rs| rs.iter().find(|r| out.last() != Some(r)))
        .copied()
    {
        out.push(r);
        let other = if r.lo == d { r.hi } else { r.lo };
        edge = if edge.base == r.base {
            Edge::new(r.base.plus(other), d)
        } else {
            Edge::new(r.base, d)
        };
    }
    out
}

/// Downward flips at leaves other than `keep` until none remain.
fn descend_keeping(t: &Tiling, keep: &LatticePoint) -> (Tiling, Vec<FlipMove>) {
    let mut cur = t.clone();
    let mut moves = Vec::new();
    loop {
        let mut leaves = flippable_vertices(&cur).down;
        leaves.remove(keep);
        let Some(v) = lowest(&leaves, &cur) else {
            return (cur, moves);
        };
        let mv = flip_at(&cur, &v).expect("leaf is down-flippable");
        cur = apply_move(&cur, &mv).expect("fresh move applies");
        moves.push(mv);
    }
}

/// Directions of the forest path from `start` to its root, which must be the
/// whole forest.
fn forest_word(t: &Tiling, start: &LatticePoint) -> Vec<usize> {
    let forest = fundamental_forest(t);
    let parents = forest.parents();
    let mut word = Vec::new();
    let mut v = *start;
    while let Some(p) = parents.get(&v) {
        let d = (0..v.n()).find(|&j| p.get(j) != v.get(j)).expect("forest edge is a unit step");
        word.push(d);
        v = *p;
    }
    assert_eq!(word.len(), forest.len(), "forest is not a single path from {start}");
    word
}

fn path_edges(start: &LatticePoint, word: &[usize]) -> BTreeSet<Edge> {
    let mut v = *start;
    let mut out = BTreeSet::new();
    for &d in word {
        out.insert(Edge::new(v, d));
        v = v.plus(d);
    }
    out
}

/// Swaps the forest-path letters at `pos` and `pos + 1` by sliding the
/// crossing rhombus of the two pseudolines across the forest path.
fn transpose(t: &Tiling, start: &LatticePoint, word: &[usize], pos: usize) -> Result<(Tiling, Vec<FlipMove>), PathError> {
    let mut walk = *start;
    for &d in &word[..pos] {
        walk = walk.plus(d);
    }
    let lower = walk;
    let middle = lower.plus(word[pos]);
    let (q, p) = (word[pos], word[pos + 1]);
    let (p_level, q_level) = (middle.get(p), lower.get(q));

    let mut target = word.to_vec();
    target.swap(pos, pos + 1);
    let want = path_edges(start, &target);

    let stuck = |reason: String| PathError::Stuck { at: middle, reason };
    let crossing = |t: &Tiling| -> Result<Rhombus, PathError> {
        t.rhombi()
            .iter()
            .find(|r| r.lo == p.min(q) && r.hi == p.max(q) && r.base.get(p) == p_level && r.base.get(q) == q_level)
            .copied()
            .ok_or_else(|| stuck("pseudolines do not cross".into()))
    };

    let chain = chain_at_level(t, p, p_level);
    let gamma = Edge::new(middle, p);
    let gamma_at = chain
        .iter()
        .position(|r| r.edges().contains(&gamma))
        .ok_or_else(|| stuck("forest edge not on its chain".into()))?;
    let v0 = crossing(t)?;
    let step: isize = if chain.iter().position(|r| *r == v0).expect("crossing lies on chain") <= gamma_at {
        1
    } else {
        -1
    };

    let mut cur = t.clone();
    let mut moves = Vec::new();
    for _ in 0..chain.len() {
        if fundamental_forest(&cur).edges() == &want {
            return Ok((cur, moves));
        }
        let chain = chain_at_level(&cur, p, p_level);
        let v = crossing(&cur)?;
        let at = chain.iter().position(|r| *r == v).expect("crossing lies on chain") as isize;
        let next = chain
            .get((at + step) as usize)
            .filter(|_| at + step >= 0)
            .ok_or_else(|| stuck("ran off the end of the chain".into()))?;
        let shared = v
            .edges()
            .into_iter()
            .find(|e| e.dir == p && next.edges().contains(e))
            .ok_or_else(|| stuck("consecutive chain rhombi share no edge".into()))?;
        let mv = [shared.base, shared.top()]
            .into_iter()
            .filter(|x| x != start)
            .filter_map(|x| flip_at(&cur, &x).ok())
            .find(|mv| mv.support().contains(&v) && mv.support().contains(next))
            .ok_or_else(|| stuck(format!("no flip moves {v} past {next}")))?;
        cur = apply_move(&cur, &mv)?;
        moves.push(mv);
    }
    if fundamental_forest(&cur).edges() == &want {
        Ok((cur, moves))
    } else {
        Err(stuck("forest never reached the swapped path".into()))
    }
}

/// A flip path from `t` to `t2` all of whose tilings contain `keep`.
///
/// Both ends are first lowered until `keep` is the only possible leaf; the
/// forest is then a single path from `keep` to a root that depends only on
/// `keep`, and the two direction words along it are related by adjacent
/// transpositions, each realised by a run of flips.
pub fn connect_through(t: &Tiling, t2: &Tiling, keep: &LatticePoint) -> Result<FlipPath, PathError> {
    same_spec(t, t2)?;
    if !t.contains_vertex(keep) || !t2.contains_vertex(keep) {
        return Err(PathError::MissingVertex(*keep));
    }
    if t == t2 {
        return Ok(FlipPath::empty(t.clone()));
    }
    let (mut cur, mut moves) = descend_keeping(t, keep);
    let (low2, down2) = descend_keeping(t2, keep);
    let mut word = forest_word(&cur, keep);
    let goal = forest_word(&low2, keep);
    debug_assert_eq!(
        {
            let mut w = word.clone();
            w.sort_unstable();
            w
        },
        {
            let mut g = goal.clone();
            g.sort_unstable();
            g
        }
    );

    // Insertion sort from `word` to `goal` by adjacent transpositions.
    for i in 0..goal.len() {
        let m = (i..word.len())
            .find(|&m| word[m] == goal[i])
            .expect("forest words are permutations of each other");
        for pos in (i..m).rev() {
            let (next, run) = transpose(&cur, keep, &word, pos)?;
            word.swap(pos, pos + 1);
            cur = next;
            moves.extend(run);
        }
    }
    debug_assert_eq!(cur, low2);
    moves.extend(down2.iter().rev().map(FlipMove::inverse));
    Ok(FlipPath { start: t.clone(), moves })
}

/// Shortest flip path from `t` to `t2` staying among tilings that contain
/// `keep`, by breadth-first search. Exponential; meant as a cross-check.
pub fn connect_through_bfs(t: &Tiling, t2: &Tiling, keep: &LatticePoint, cap: usize) -> Option<FlipPath> {
    let mut prev: HashMap<Tiling, Option<(Tiling, FlipMove)>> = HashMap::from([(t.clone(), None)]);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(cur) = queue.pop_front() {
        if cur == *t2 {
            let mut moves = Vec::new();
            let mut at = cur;
            while let Some(Some((p, mv))) = prev.get(&at) {
                moves.push(*mv);
                at = p.clone();
            }
            moves.reverse();
            return Some(FlipPath { start: t.clone(), moves });
        }
        for mv in all_flips(&cur) {
            if mv.removed() == *keep {
                continue;
            }
            let next = apply_move(&cur, &mv).expect("fresh move applies");
            if !prev.contains_key(&next) {
                if prev.len() >= cap {
                    return None;
                }
                prev.insert(next.clone(), Some((cur.clone(), mv)));
                queue.push_back(next);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::apply_flip;
    use crate::zonogon::{t_min, ZonogonSpec};
    use std::sync::Arc;

    fn spec(a: &[u32]) -> Arc<ZonogonSpec> {
        Arc::new(ZonogonSpec::new(a).unwrap())
    }

    #[test]
    fn normalizing_the_minimum_is_empty() {
        let s = spec(&[2, 1, 2]);
        assert!(normalize_to_min(&t_min(&s)).is_empty());
    }

    #[test]
    fn hexagon_paths() {
        let s = spec(&[1, 1, 1]);
        let lo = t_min(&s);
        let (hi, _) = apply_flip(&lo, &LatticePoint::new(&[0, 1, 0])).unwrap();
        let p = normalize_to_min(&hi);
        assert_eq!(p.len(), 1);
        assert_eq!(p.end().unwrap(), lo);
        let c = connect(&lo, &hi).unwrap();
        assert!(c.len() <= 2);
        assert_eq!(c.end().unwrap(), hi);
    }

    #[test]
    fn chain_in_hexagon() {
        let s = spec(&[1, 1, 1]);
        let t = t_min(&s);
        let chain = rhombus_chain(&t, &Edge::new(s.zero(), 0)).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain.iter().all(|r| r.lo == 0));
    }

    #[test]
    fn chain_requires_edge_in_tiling() {
        let s = spec(&[1, 1, 1]);
        let t = t_min(&s);
        let e = Edge::new(LatticePoint::new(&[1, 0, 1]), 1);
        assert_eq!(rhombus_chain(&t, &e), Err(PathError::EdgeNotInTiling(e)));
    }

    #[test]
    fn spec_mismatch() {
        let a = t_min(&spec(&[1, 1, 1]));
        let b = t_min(&spec(&[1, 1, 2]));
        assert!(matches!(connect(&a, &b), Err(PathError::SpecMismatch(..))));
    }
}
