//! Recovering a tiling from its planar picture by integrating edge labels.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use super::lattice::{LatticePoint, PlanarPoint, Rhombus, ZonogonSpec};
use super::tiling::Tiling;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("unmatched edge direction {from:?} -> {to:?}")]
    UnmatchedEdgeDirection { from: PlanarPoint, to: PlanarPoint },
    #[error("inconsistent lift at {at:?}: {first} vs {second}")]
    InconsistentLift {
        at: PlanarPoint,
        first: LatticePoint,
        second: LatticePoint,
    },
    #[error("not covering P: {0}")]
    NotCovering(String),
}

/// Labels a planar edge vector by the signed direction it translates.
fn label(spec: &ZonogonSpec, d: PlanarPoint) -> Option<(usize, bool)> {
    spec.directions().iter().enumerate().find_map(|(j, &v)| {
        if d == v {
            Some((j, true))
        } else if d == -v {
            Some((j, false))
        } else {
            None
        }
    })
}

/// Lifts planar rhombi (corners in cyclic order) back to the box.
///
/// Vertices are reached from the origin by walking rhombus edges; each step
/// along `+-v_j` changes coordinate `j` by one. Two walks reaching the same
/// planar point with different coordinates mean the input was not a section.
pub fn lift_decomposition(spec: &Arc<ZonogonSpec>, planar: &[[PlanarPoint; 4]]) -> Result<Tiling, LiftError> {
    let mut adj: HashMap<PlanarPoint, Vec<(PlanarPoint, usize, bool)>> = HashMap::new();
    for quad in planar {
        for i in 0..4 {
            let (p, q) = (quad[i], quad[(i + 1) % 4]);
            let (j, up) = label(spec, q - p).ok_or(LiftError::UnmatchedEdgeDirection { from: p, to: q })?;
            adj.entry(p).or_default().push((q, j, up));
            adj.entry(q).or_default().push((p, j, !up));
        }
    }
    let origin = PlanarPoint::new(0, 0);
    if !adj.contains_key(&origin) {
        return Err(LiftError::NotCovering("no rhombus touches the bottom vertex".into()));
    }

    let mut lift: HashMap<PlanarPoint, LatticePoint> = HashMap::from([(origin, spec.zero())]);
    let mut queue = VecDeque::from([origin]);
    while let Some(p) = queue.pop_front() {
        let here = lift[&p];
        for &(q, j, up) in &adj[&p] {
            let there = if up {
                if here.get(j) >= spec.a()[j] {
                    return Err(LiftError::NotCovering(format!("{here} + e_{} leaves the box", j + 1)));
                }
                here.plus(j)
            } else {
                here.minus(j)
                    .ok_or_else(|| LiftError::NotCovering(format!("{here} - e_{} leaves the box", j + 1)))?
            };
            match lift.get(&q) {
                Some(&prev) if prev != there => {
                    return Err(LiftError::InconsistentLift {
                        at: q,
                        first: prev,
                        second: there,
                    })
                }
                Some(_) => {}
                None => {
                    lift.insert(q, there);
                    queue.push_back(q);
                }
            }
        }
    }

    let mut rhombi = Vec::with_capacity(planar.len());
    for quad in planar {
        let corners: Vec<LatticePoint> = quad
            .iter()
            .map(|p| {
                lift.get(p)
                    .copied()
                    .ok_or_else(|| LiftError::NotCovering(format!("{p:?} is not connected to the bottom vertex")))
            })
            .collect::<Result<_, _>>()?;
        let base = *corners.iter().min_by_key(|c| c.weight()).expect("four corners");
        let top = *corners.iter().max_by_key(|c| c.weight()).expect("four corners");
        let dirs: Vec<usize> = (0..spec.n()).filter(|&j| top.get(j) != base.get(j)).collect();
        if dirs.len() != 2 || top.weight() != base.weight() + 2 {
            return Err(LiftError::InconsistentLift {
                at: quad[0],
                first: base,
                second: top,
            });
        }
        rhombi.push(Rhombus::new(base, dirs[0], dirs[1]));
    }
    let t = Tiling::new(spec.clone(), rhombi);
    if t.rhombi().len() != planar.len() {
        return Err(LiftError::InconsistentLift {
            at: planar[0][0],
            first: spec.zero(),
            second: spec.zero(),
        });
    }
    let report = t.validate();
    match report.first() {
        None => Ok(t),
        Some(v) => Err(LiftError::NotCovering(v.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonogon::construct::t_min;

    fn spec(a: &[u32]) -> Arc<ZonogonSpec> {
        Arc::new(ZonogonSpec::new(a).unwrap())
    }

    #[test]
    fn round_trip_hexagon() {
        let s = spec(&[1, 1, 1]);
        let t = t_min(&s);
        assert_eq!(lift_decomposition(&s, &t.project_rhombi()).unwrap(), t);
    }

    #[test]
    fn translated_input_is_not_covering() {
        let s = spec(&[1, 1, 1]);
        let shift = PlanarPoint::new(1, 1);
        let moved: Vec<_> = t_min(&s).project_rhombi().iter().map(|q| q.map(|p| p + shift)).collect();
        assert!(matches!(lift_decomposition(&s, &moved), Err(LiftError::NotCovering(_))));
    }

    #[test]
    fn bad_edge_vector() {
        let s = spec(&[1, 1, 1]);
        let z = PlanarPoint::new(0, 0);
        let quad = [z, PlanarPoint::new(1, 0), PlanarPoint::new(1, 1), PlanarPoint::new(0, 1)];
        assert!(matches!(
            lift_decomposition(&s, &[quad]),
            Err(LiftError::UnmatchedEdgeDirection { .. })
        ));
    }

    #[test]
    fn overlapping_rhombi_fail() {
        let s = spec(&[1, 1, 1]);
        let t = t_min(&s);
        let mut planar = t.project_rhombi();
        planar[2] = planar[0];
        assert!(lift_decomposition(&s, &planar).is_err());
    }
}
