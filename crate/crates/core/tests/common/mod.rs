//! Helpers shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use zonorec::engine::{cube_corners, flip_value, Labeling};
use zonorec::forest::{all_flips, apply_move, FlipMove};
use zonorec::laurent::LaurentPoly;
use zonorec::zonogon::{enumerate_tilings, LatticePoint, Tiling, ZonogonSpec};

pub fn spec(a: &[u32]) -> Arc<ZonogonSpec> {
    Arc::new(ZonogonSpec::new(a).unwrap())
}

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn random_positive(rng: &mut impl Rng) -> BigRational {
    BigRational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=5i64).into())
}

pub fn symbolic(t: &Tiling) -> Labeling<LaurentPoly> {
    Labeling::on_tiling(t, |p| LaurentPoly::var(*p))
}

/// Sum of `x_a x_b` over the given pairs.
pub fn pair_sum(vals: &BTreeMap<char, LaurentPoly>, pairs: &[(char, char)]) -> LaurentPoly {
    pairs.iter().fold(LaurentPoly::zero(), |acc, (a, b)| &acc + &(&vals[a] * &vals[b]))
}

/// The three products in the numerator of the cube relation of `mv`.
pub fn numerator_pairs(mv: &FlipMove) -> [BTreeSet<LatticePoint>; 3] {
    let [i, ij, _, il, ijk, _, ikl, ijkl] = cube_corners(&mv.base, mv.dirs);
    [
        BTreeSet::from([i, ijkl]),
        BTreeSet::from([ijk, il]),
        BTreeSet::from([ikl, ij]),
    ]
}

/// Walks the 8-cycle of the octagon from `start`, taking `first` and then
/// never undoing the previous flip.
pub fn octagon_cycle(start: &Tiling, first: usize) -> Vec<FlipMove> {
    let mut moves: Vec<FlipMove> = Vec::new();
    let mut cur = start.clone();
    for step in 0..8 {
        let options = all_flips(&cur);
        assert_eq!(options.len(), 2, "octagon tilings have two flips each");
        let mv = if step == 0 {
            options[first]
        } else {
            let back = moves.last().unwrap().inverse();
            *options.iter().find(|m| **m != back).unwrap()
        };
        cur = apply_move(&cur, &mv).unwrap();
        moves.push(mv);
    }
    assert_eq!(&cur, start, "eight flips close the cycle");
    moves
}

/// Letters a..k of the classical octagon computation attached to the points of
/// a start tiling, with the flip sequence that realises it.
pub struct OctagonLetters {
    pub start: Tiling,
    pub moves: Vec<FlipMove>,
    pub points: BTreeMap<char, LatticePoint>,
}

fn partner(pairs: &[BTreeSet<LatticePoint>; 3], p: &LatticePoint) -> Option<LatticePoint> {
    pairs.iter().find(|s| s.contains(p)).and_then(|s| s.iter().find(|x| *x != p).copied())
}

/// Tries to name the points of the start tiling so that the first three
/// flips have numerators `aj+bk+ch`, `cf+dk+el`, `fa+gl+hm`. Interior
/// vertices must be flipped oldest first.
pub fn name_octagon(start: &Tiling, moves: &[FlipMove]) -> Option<OctagonLetters> {
    let removed: Vec<LatticePoint> = moves.iter().map(|m| m.removed()).collect();
    let inserted: Vec<LatticePoint> = moves.iter().map(|m| m.inserted()).collect();
    for t in 3..8 {
        if removed[t] != inserted[t - 3] {
            return None;
        }
    }
    let mut pt: BTreeMap<char, LatticePoint> = BTreeMap::new();
    for (c, p) in "ijk".chars().zip(&removed) {
        pt.insert(c, *p);
    }
    for (c, p) in "lmnopqrs".chars().zip(&inserted) {
        pt.insert(c, *p);
    }
    let p0 = numerator_pairs(&moves[0]);
    let p1 = numerator_pairs(&moves[1]);
    let p2 = numerator_pairs(&moves[2]);
    let a = partner(&p0, &pt[&'j'])?;
    let b = partner(&p0, &pt[&'k'])?;
    let d = partner(&p1, &pt[&'k'])?;
    let e = partner(&p1, &pt[&'l'])?;
    let g = partner(&p2, &pt[&'l'])?;
    let ch = p0.iter().find(|s| !s.contains(&pt[&'j']) && !s.contains(&pt[&'k']))?;
    let cf = p1.iter().find(|s| !s.contains(&pt[&'k']) && !s.contains(&pt[&'l']))?;
    let c = *ch.intersection(cf).next()?;
    let h = partner(&p0, &c)?;
    let f = partner(&p1, &c)?;
    for (ch_, p) in [('a', a), ('b', b), ('c', c), ('d', d), ('e', e), ('f', f), ('g', g), ('h', h)] {
        pt.insert(ch_, p);
    }
    let named: BTreeSet<LatticePoint> = "abcdefghijk".chars().map(|c| pt[&c]).collect();
    if named != start.vertices() {
        return None;
    }
    Some(OctagonLetters {
        start: start.clone(),
        moves: moves.to_vec(),
        points: pt,
    })
}

/// Every start tiling and direction around the octagon for which the
/// lettering exists.
pub fn octagon_namings() -> Vec<OctagonLetters> {
    let s = spec(&[1, 1, 1, 1]);
    let mut out = Vec::new();
    for t in enumerate_tilings(&s, 100).unwrap() {
        for first in 0..2 {
            let moves = octagon_cycle(&t, first);
            if let Some(n) = name_octagon(&t, &moves) {
                out.push(n);
            }
        }
    }
    out
}

/// Runs the recurrence symbolically around the cycle and returns the values
/// of all nineteen letters, `a..k` being the variables of the start tiling.
pub fn octagon_values(o: &OctagonLetters) -> BTreeMap<char, LaurentPoly> {
    let mut lab = symbolic(&o.start);
    let mut vals: BTreeMap<char, LaurentPoly> = "abcdefghijk".chars().map(|c| (c, LaurentPoly::var(o.points[&c]))).collect();
    for (c, mv) in "lmnopqrs".chars().zip(&o.moves) {
        let x = flip_value(&lab, mv).unwrap();
        lab.insert(mv.inserted(), x.clone());
        vals.insert(c, x);
    }
    vals
}

/// Compares the computed octagon values with their known recurrences and
/// closed forms. Returns the first letter that differs.
pub fn check_octagon_closed_forms(vals: &BTreeMap<char, LaurentPoly>) -> Result<(), String> {
    let v = |c: char| vals[&c].clone();
    let prod = |s: &str| s.chars().fold(LaurentPoly::one(), |acc, c| &acc * &vals[&c]);
    let sum = |terms: &[&str]| terms.iter().fold(LaurentPoly::zero(), |acc, t| &acc + &prod(t));
    let frac = |terms: &[&str], den: &str| sum(terms).exact_div(&prod(den)).unwrap();
    let expected: Vec<(char, LaurentPoly)> = vec![
        ('l', frac(&["aj", "bk", "ch"], "i")),
        ('m', frac(&["cfi", "dki", "eaj", "ebk", "ech"], "ij")),
        ('n', frac(&["faij", "gajj", "gbkj", "gchj", "hcfi", "hdki", "heaj", "hebk", "echh"], "ijk")),
        ('o', frac(&["bek", "dik", "cgj", "cfi", "ceh"], "jk")),
        ('p', frac(&["eh", "fi", "gj"], "k")),
        ('q', v('i')),
        ('r', v('j')),
        ('s', v('k')),
    ];
    // The recurrence of each step in lettered form.
    let steps: Vec<(char, &[(char, char)], char)> = vec![
        ('l', &[('a', 'j'), ('b', 'k'), ('c', 'h')], 'i'),
        ('m', &[('c', 'f'), ('d', 'k'), ('e', 'l')], 'j'),
        ('n', &[('f', 'a'), ('g', 'l'), ('h', 'm')], 'k'),
        ('o', &[('a', 'd'), ('b', 'm'), ('c', 'n')], 'l'),
        ('p', &[('d', 'g'), ('e', 'n'), ('f', 'o')], 'm'),
        ('q', &[('h', 'o'), ('a', 'p'), ('b', 'g')], 'n'),
        ('r', &[('b', 'e'), ('c', 'p'), ('d', 'q')], 'o'),
        ('s', &[('e', 'h'), ('f', 'q'), ('g', 'r')], 'p'),
    ];
    for (c, pairs, den) in steps {
        let rhs = pair_sum(vals, pairs).exact_div(&vals[&den]).map_err(|e| format!("{c}: {e}"))?;
        if rhs != vals[&c] {
            return Err(format!("{c} does not satisfy its lettered recurrence"));
        }
    }
    for (c, e) in expected {
        if vals[&c] != e {
            return Err(format!("{c} = {} differs from the closed form {e}", vals[&c]));
        }
    }
    Ok(())
}

/// Two tilings drawn uniformly from an enumerated list.
pub fn random_pair<'a>(all: &'a [Tiling], rng: &mut impl Rng) -> (&'a Tiling, &'a Tiling) {
    (all.choose(rng).unwrap(), all.choose(rng).unwrap())
}

pub mod spin {
    use num_traits::{One, Zero};
    use rand::Rng;

    use zonorec::spinor::linalg::{q, Q};
    use zonorec::spinor::{projection_pi, Spinor};

    pub fn random_spinor(n: usize, rng: &mut impl Rng) -> Spinor {
        Spinor {
            n,
            coords: (0..1 << n).map(|_| q(rng.gen_range(-4..=4))).collect(),
        }
    }

    pub fn random_skew(n: usize, rng: &mut impl Rng) -> Vec<Vec<Q>> {
        let mut m = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = q(rng.gen_range(-5..=5));
                m[j][i] = -x.clone();
                m[i][j] = x;
            }
        }
        m
    }

    /// Mask of a bit string, first index first.
    pub fn local(bits: &str) -> usize {
        bits.chars().enumerate().map(|(i, c)| if c == '1' { 1 << i } else { 0 }).sum()
    }

    pub fn signed(k: u32) -> Q {
        if k % 2 == 0 {
            Q::one()
        } else {
            -Q::one()
        }
    }

    /// The projection of `v_{I+..}` for a random `(I, j, k, l)` against the
    /// eight signs `(-1)^{b}, ..` with `b, c, d` the parts of `I` strictly
    /// between `j, k`, between `k, l` and above `l`.
    pub fn check_sign_table(n: usize, rng: &mut impl Rng) -> Result<(), String> {
        let mut dirs: Vec<usize> = rand::seq::index::sample(rng, n, 3).into_vec();
        dirs.sort();
        let [j, k, l] = [dirs[0], dirs[1], dirs[2]];
        let sub = (1 << j) | (1 << k) | (1 << l);
        let base = rng.gen_range(0..1usize << n) & !sub;
        let count = |lo: usize, hi: usize| (lo..hi).filter(|&i| base & (1 << i) != 0).count() as u32;
        let (b, c, d) = (count(j + 1, k), count(k + 1, l), count(l + 1, n));
        let (ej, ek, el) = (1 << j, 1 << k, 1 << l);
        let table = [
            (0, "000", 0),
            (ek | el, "011", c),
            (ej | el, "101", b + c),
            (ej | ek, "110", b),
            (sub, "111", b + d),
            (ej, "100", b + c + d),
            (ek, "010", c + d),
            (el, "001", d),
        ];
        for (extra, bits, exp) in table {
            let got = projection_pi(base, [j, k, l], &Spinor::basis(n, base | extra)).map_err(|e| e.to_string())?;
            if got != Spinor::basis(3, local(bits)).scale(&signed(exp)) {
                return Err(format!("n={n} I={base:b} ({j},{k},{l}) {bits}: got {got}"));
            }
        }
        Ok(())
    }
}
