//! The JSON interchange formats. Directions are 1-based on the wire.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::engine::{Coefficient, Labeling, Tropical};
use crate::forest::{FlipDirection, FlipMove};
use crate::laurent::{LaurentPoly, Monomial};
use crate::paths::FlipPath;
use crate::spinor::{mask_key, parse_mask_key, SpinPoint, MAX_SPIN_N};
use crate::tropical::{Cutcurve, PropagationReport, Wall};
use crate::zonogon::{LatticePoint, Rhombus, Tiling, ZonogonSpec};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> JsonError {
    JsonError::Invalid(msg.into())
}

pub type JsonResult<T> = Result<T, JsonError>;

#[derive(Serialize, Deserialize)]
struct RhombusJson {
    base: Vec<u32>,
    dirs: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct TilingJson {
    #[serde(rename = "A")]
    a: Vec<u32>,
    rhombi: Vec<RhombusJson>,
}

#[derive(Serialize, Deserialize)]
struct MoveJson {
    base: Vec<u32>,
    dirs: [usize; 3],
    dir: String,
}

#[derive(Serialize, Deserialize)]
struct PathJson {
    start: Value,
    moves: Vec<MoveJson>,
}

pub fn parse_spec(a: &[u32]) -> JsonResult<Arc<ZonogonSpec>> {
    ZonogonSpec::new(a).map(Arc::new).map_err(|e| invalid(e.to_string()))
}

fn point(spec: &ZonogonSpec, coords: &[u32]) -> JsonResult<LatticePoint> {
    spec.point(coords)
        .ok_or_else(|| invalid(format!("point {coords:?} is not in the box {:?}", spec.a())))
}

/// 1-based to 0-based, checking the range.
fn direction(spec: &ZonogonSpec, d: usize) -> JsonResult<usize> {
    if d == 0 || d > spec.n() {
        return Err(invalid(format!("direction {d} out of range 1..={}", spec.n())));
    }
    Ok(d - 1)
}

pub fn tiling_to_json(t: &Tiling) -> Value {
    let doc = TilingJson {
        a: t.spec().a().to_vec(),
        rhombi: t
            .rhombi()
            .iter()
            .map(|r| RhombusJson {
                base: r.base.to_vec(),
                dirs: [r.lo + 1, r.hi + 1],
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("plain data")
}

/// Parses and validates a tiling.
pub fn tiling_from_json(v: &Value) -> JsonResult<Tiling> {
    let doc: TilingJson = serde_json::from_value(v.clone())?;
    let spec = parse_spec(&doc.a)?;
    let mut rhombi = Vec::with_capacity(doc.rhombi.len());
    for r in &doc.rhombi {
        let (j, k) = (direction(&spec, r.dirs[0])?, direction(&spec, r.dirs[1])?);
        if j == k {
            return Err(invalid("rhombus directions must differ"));
        }
        let rh = Rhombus::new(point(&spec, &r.base)?, j, k);
        if !spec.contains_rhombus(&rh) {
            return Err(invalid(format!("rhombus {rh} leaves the box")));
        }
        rhombi.push(rh);
    }
    let t = Tiling::new(spec, rhombi);
    let report = t.validate();
    if let Some(v) = report.first() {
        return Err(invalid(format!("not a tiling: {v}")));
    }
    Ok(t)
}

pub fn tilings_to_json(ts: &[Tiling]) -> Value {
    Value::Array(ts.iter().map(tiling_to_json).collect())
}

fn move_to_json(m: &FlipMove) -> MoveJson {
    MoveJson {
        base: m.base.to_vec(),
        dirs: m.dirs.map(|d| d + 1),
        dir: m.direction.as_str().to_string(),
    }
}

pub fn path_to_json(p: &FlipPath) -> Value {
    let doc = PathJson {
        start: tiling_to_json(&p.start),
        moves: p.moves.iter().map(move_to_json).collect(),
    };
    serde_json::to_value(doc).expect("plain data")
}

/// Parses a flip path and checks that every move applies in turn.
pub fn path_from_json(v: &Value) -> JsonResult<FlipPath> {
    let doc: PathJson = serde_json::from_value(v.clone())?;
    let start = tiling_from_json(&doc.start)?;
    let spec = start.spec_arc().clone();
    let mut moves = Vec::with_capacity(doc.moves.len());
    for m in &doc.moves {
        let mut dirs = [0; 3];
        for (out, d) in dirs.iter_mut().zip(m.dirs) {
            *out = direction(&spec, d)?;
        }
        if !(dirs[0] < dirs[1] && dirs[1] < dirs[2]) {
            return Err(invalid("move directions must be increasing"));
        }
        let direction = match m.dir.as_str() {
            "up" => FlipDirection::Up,
            "down" => FlipDirection::Down,
            other => return Err(invalid(format!("unknown flip direction {other:?}"))),
        };
        moves.push(FlipMove {
            base: point(&spec, &m.base)?,
            dirs,
            direction,
        });
    }
    let path = FlipPath { start, moves };
    path.replay().map_err(|e| invalid(format!("path does not replay: {e}")))?;
    Ok(path)
}

pub fn laurent_to_json(p: &LaurentPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let exps: BTreeMap<String, i32> = m.exps().iter().map(|(v, e)| (v.key(), *e)).collect();
            json!({ "coeff": c.to_string(), "exps": exps })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn laurent_from_json(v: &Value) -> JsonResult<LaurentPoly> {
    #[derive(Deserialize)]
    struct Term {
        coeff: String,
        exps: BTreeMap<String, i32>,
    }
    #[derive(Deserialize)]
    struct Doc {
        terms: Vec<Term>,
    }
    let doc: Doc = serde_json::from_value(v.clone())?;
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in doc.terms {
        let c = BigInt::from_str(&t.coeff).map_err(|_| invalid(format!("bad coefficient {:?}", t.coeff)))?;
        let mut pairs = Vec::new();
        for (k, e) in t.exps {
            let var = LatticePoint::parse_key(&k).ok_or_else(|| invalid(format!("bad variable key {k:?}")))?;
            pairs.push((var, e));
        }
        terms.push((Monomial::from_pairs(pairs), c));
    }
    Ok(LaurentPoly::from_terms(terms))
}

pub fn rational_to_json(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn rational_from_json(v: &Value) -> JsonResult<BigRational> {
    match v {
        Value::String(s) => BigRational::from_str(s.trim()).map_err(|_| invalid(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| invalid(format!("non-integer number {n}; use a \"p/q\" string"))),
        other => Err(invalid(format!("expected a rational, got {other}"))),
    }
}

/// Values that have a JSON form in labelings.
pub trait JsonValue: Coefficient + Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> JsonResult<Self>;
}

impl JsonValue for BigRational {
    fn to_json(&self) -> Value {
        rational_to_json(self)
    }

    fn from_json(v: &Value) -> JsonResult<Self> {
        rational_from_json(v)
    }
}

impl JsonValue for LaurentPoly {
    fn to_json(&self) -> Value {
        laurent_to_json(self)
    }

    fn from_json(v: &Value) -> JsonResult<Self> {
        laurent_from_json(v)
    }
}

impl JsonValue for Tropical {
    fn to_json(&self) -> Value {
        if self.0.is_integer() {
            if let Ok(i) = i64::try_from(self.0.to_integer()) {
                return json!(i);
            }
        }
        rational_to_json(&self.0)
    }

    fn from_json(v: &Value) -> JsonResult<Self> {
        rational_from_json(v).map(Tropical)
    }
}

pub fn labeling_to_json<D: JsonValue>(l: &Labeling<D>) -> Value {
    let values: Vec<Value> = l
        .values()
        .iter()
        .map(|(p, x)| json!({ "vertex": p.to_vec(), "value": x.to_json() }))
        .collect();
    json!({ "A": l.spec().a(), "domain": D::NAME, "values": values })
}

#[derive(Deserialize)]
struct LabelingDoc {
    #[serde(rename = "A")]
    a: Vec<u32>,
    domain: String,
    values: Vec<LabelEntry>,
}

#[derive(Deserialize)]
struct LabelEntry {
    vertex: Vec<u32>,
    value: Value,
}

pub fn labeling_from_json<D: JsonValue>(v: &Value) -> JsonResult<Labeling<D>> {
    let doc: LabelingDoc = serde_json::from_value(v.clone())?;
    if doc.domain != D::NAME {
        return Err(invalid(format!("expected domain {:?}, got {:?}", D::NAME, doc.domain)));
    }
    labeling_from_doc(doc)
}

fn labeling_from_doc<D: JsonValue>(doc: LabelingDoc) -> JsonResult<Labeling<D>> {
    let spec = parse_spec(&doc.a)?;
    let mut out = Labeling::new(spec.clone());
    for e in doc.values {
        let p = point(&spec, &e.vertex)?;
        if out.insert(p, D::from_json(&e.value)?).is_some() {
            return Err(invalid(format!("vertex {p} is labeled twice")));
        }
    }
    Ok(out)
}

/// A labeling in whichever domain its `domain` field names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyLabeling {
    Rational(Labeling<BigRational>),
    Laurent(Labeling<LaurentPoly>),
    Tropical(Labeling<Tropical>),
}

impl AnyLabeling {
    pub fn from_json(v: &Value) -> JsonResult<Self> {
        let doc: LabelingDoc = serde_json::from_value(v.clone())?;
        match doc.domain.as_str() {
            "rational" => labeling_from_doc(doc).map(AnyLabeling::Rational),
            "laurent" => labeling_from_doc(doc).map(AnyLabeling::Laurent),
            "tropical" => labeling_from_doc(doc).map(AnyLabeling::Tropical),
            other => Err(invalid(format!("unknown domain {other:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyLabeling::Rational(l) => labeling_to_json(l),
            AnyLabeling::Laurent(l) => labeling_to_json(l),
            AnyLabeling::Tropical(l) => labeling_to_json(l),
        }
    }
}

pub fn wall_to_json(w: &Wall, g: &Cutcurve) -> Value {
    let pts: Vec<Vec<u32>> = g.points.iter().map(|p| p.to_vec()).collect();
    json!({ "s": w.s + 1, "c": w.c, "cutcurve": pts })
}

/// Parses a wall with its cutcurve. The cutcurve itself is not validated
/// here; see [`crate::tropical::validate_cutcurve`].
pub fn wall_from_json(spec: &ZonogonSpec, v: &Value) -> JsonResult<(Wall, Cutcurve)> {
    #[derive(Deserialize)]
    struct Doc {
        s: usize,
        c: u32,
        cutcurve: Vec<Vec<u32>>,
    }
    let doc: Doc = serde_json::from_value(v.clone())?;
    let w = Wall::new(spec, direction(spec, doc.s)?, doc.c).map_err(|e| invalid(e.to_string()))?;
    let points = doc
        .cutcurve
        .iter()
        .map(|c| point(spec, c))
        .collect::<JsonResult<Vec<_>>>()?;
    Ok((w, Cutcurve { points }))
}

fn edge_json(e: &crate::zonogon::Edge) -> Value {
    json!({ "base": e.base.to_vec(), "dir": e.dir + 1 })
}

pub fn propagation_report_to_json(r: &PropagationReport) -> Value {
    match r {
        PropagationReport::RecurrenceViolated { cube } => {
            json!({ "hypothesis": "precondition failed", "recurrence_violated": cube })
        }
        PropagationReport::HypothesisNotMet { witness } => {
            json!({ "hypothesis": "not met", "witness": edge_json(witness) })
        }
        PropagationReport::Checked { edges, violations } => json!({
            "hypothesis": "met",
            "edges": edges,
            "violations": violations.iter().map(edge_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn spin_point_to_json(p: &SpinPoint) -> Value {
    let mut even = serde_json::Map::new();
    let mut odd = serde_json::Map::new();
    for (m, c) in p.coords.iter().enumerate() {
        let side = if m.count_ones() % 2 == 0 { &mut even } else { &mut odd };
        side.insert(mask_key(p.n, m), rational_to_json(c));
    }
    json!({ "n": p.n, "even": even, "odd": odd })
}

pub fn spin_point_from_json(v: &Value) -> JsonResult<SpinPoint> {
    #[derive(Deserialize)]
    struct Doc {
        n: usize,
        even: BTreeMap<String, Value>,
        odd: BTreeMap<String, Value>,
    }
    let doc: Doc = serde_json::from_value(v.clone())?;
    if doc.n == 0 || doc.n > MAX_SPIN_N {
        return Err(invalid(format!("n must lie in 1..={MAX_SPIN_N}")));
    }
    let mut coords = vec![BigRational::from_integer(0.into()); 1 << doc.n];
    for (parity, side) in [(0, &doc.even), (1, &doc.odd)] {
        for (k, x) in side {
            let m = parse_mask_key(k)
                .filter(|_| k.len() == doc.n)
                .ok_or_else(|| invalid(format!("bad index key {k:?}")))?;
            if m.count_ones() % 2 != parity {
                return Err(invalid(format!("index {k} has the wrong parity")));
            }
            coords[m] = rational_from_json(x)?;
        }
    }
    Ok(SpinPoint { n: doc.n, coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonogon::t_min;

    #[test]
    fn tiling_example_shape() {
        let s = parse_spec(&[1, 1, 1]).unwrap();
        let v = tiling_to_json(&t_min(&s));
        assert_eq!(v["A"], json!([1, 1, 1]));
        assert_eq!(v["rhombi"].as_array().unwrap().len(), 3);
        assert_eq!(tiling_from_json(&v).unwrap(), t_min(&s));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(tiling_from_json(&json!({"A": [1, 1], "rhombi": []})).is_err());
        assert!(tiling_from_json(&json!({"A": [1, 1, 1], "rhombi": []})).is_err());
        let bad_dir = json!({"A": [1, 1, 1], "rhombi": [{"base": [0, 0, 0], "dirs": [0, 1]}]});
        assert!(tiling_from_json(&bad_dir).is_err());
        assert!(rational_from_json(&json!("1/0")).is_err());
        assert!(rational_from_json(&json!(1.5)).is_err());
    }

    #[test]
    fn rationals_and_tropicals() {
        let x = rational_from_json(&json!("-6/4")).unwrap();
        assert_eq!(rational_to_json(&x), json!("-3/2"));
        assert_eq!(Tropical::from_integer(-2).to_json(), json!(-2));
        assert_eq!(Tropical::from_json(&json!("5")).unwrap(), Tropical::from_integer(5));
    }
}
