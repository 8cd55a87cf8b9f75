//! Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
//! Exits nonzero if any criterion fails or runs over its time budget.

mod common;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::spin::*;
use common::*;
use zonorec::engine::{
    evaluate_path, extend_to_lattice, verify_cube_relations, ExtendOptions, Labeling, Tropical,
};
use zonorec::forest::{all_flips, apply_move, fundamental_forest, FlipMove};
use zonorec::paths::{connect, connect_through, FlipPath};
use zonorec::spinor::linalg::{q, Q};
use zonorec::spinor::*;
use zonorec::tropical::{
    affine_tropical_values, check_propagation, random_cutcurve, random_tropical_values, PropagationReport, Wall,
};
use zonorec::zonogon::{
    enumerate_tilings, t_min, t_min_vertices, tiling_through_vertex, ArrangementOptions, EnumerateError,
    LatticePoint, Tiling, ZonogonSpec,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vertex_formula(a: &[u32]) -> usize {
    let mut pairs = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            pairs += a[i] * a[j];
        }
    }
    (pairs + a.iter().sum::<u32>() + 1) as usize
}

/// Vertex-count bookkeeping shared by all criteria.
#[derive(Default)]
struct Census {
    tilings: usize,
    bad: Vec<String>,
}

impl Census {
    fn see(&mut self, t: &Tiling) {
        self.tilings += 1;
        let want = vertex_formula(t.spec().a());
        let got = t.vertices().len();
        if got != want && self.bad.len() < 5 {
            self.bad.push(format!("A={:?}: {got} vertices, expected {want}", t.spec().a()));
        }
    }
}

fn bfs_path(all: &[Tiling], from: &Tiling, to: &Tiling) -> FlipPath {
    let index: HashMap<&Tiling, usize> = all.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let (s, g) = (index[from], index[to]);
    let mut prev: HashMap<usize, (usize, FlipMove)> = HashMap::new();
    let mut seen = vec![false; all.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for mv in all_flips(&all[u]) {
            let v = index[&apply_move(&all[u], &mv).unwrap()];
            if !seen[v] {
                seen[v] = true;
                prev.insert(v, (u, mv));
                queue.push_back(v);
            }
        }
    }
    let mut moves = Vec::new();
    let mut cur = g;
    while cur != s {
        let (u, mv) = prev[&cur];
        moves.push(mv);
        cur = u;
    }
    moves.reverse();
    FlipPath {
        start: from.clone(),
        moves,
    }
}

fn octagon_census(census: &mut Census) -> Outcome {
    let s = spec(&[1, 1, 1, 1]);
    let all = enumerate_tilings(&s, 100).map_err(|e| e.to_string())?;
    all.iter().for_each(|t| census.see(t));
    check(all.len() == 8, || format!("{} tilings", all.len()))?;
    let index: HashMap<&Tiling, usize> = all.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut edges = BTreeSet::new();
    for (i, t) in all.iter().enumerate() {
        let flips = all_flips(t);
        check(flips.len() == 2, || format!("tiling {i} has {} flips", flips.len()))?;
        for mv in flips {
            let j = index[&apply_move(t, &mv).map_err(|e| e.to_string())?];
            edges.insert((i.min(j), i.max(j)));
        }
    }
    // eight vertices of degree two, connected: a single 8-cycle
    let mut seen = BTreeSet::from([0]);
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &(a, b) in &edges {
            let other = if a == u { b } else if b == u { a } else { continue };
            if seen.insert(other) {
                stack.push(other);
            }
        }
    }
    check(edges.len() == 8 && seen.len() == 8, || format!("{} edges, {} reachable", edges.len(), seen.len()))?;
    Ok("8 tilings, flip graph is an 8-cycle".into())
}

fn octagon_identity() -> Outcome {
    let namings = octagon_namings();
    check(!namings.is_empty(), || "no start of the cycle carries the lettering".into())?;
    for o in &namings {
        let vals = octagon_values(o);
        check_octagon_closed_forms(&vals)?;
    }
    Ok(format!(
        "{} lettered starts; l..p match their closed forms, q=i r=j s=k",
        namings.len()
    ))
}

fn confluence(rng: &mut ChaCha8Rng, census: &mut Census) -> Outcome {
    let mut pairs = 0;
    for a in [&[1, 1, 1, 1][..], &[2, 2, 1]] {
        let s = spec(a);
        let all = enumerate_tilings(&s, 1000).map_err(|e| e.to_string())?;
        all.iter().for_each(|t| census.see(t));
        for _ in 0..20 {
            let (t, t2) = random_pair(&all, rng);
            let init = Labeling::on_tiling(t, |_| random_positive(rng));
            let p1 = connect(t, t2).map_err(|e| e.to_string())?;
            let p2 = bfs_path(&all, t, t2);
            let x = evaluate_path(&init, &p1).map_err(|e| e.to_string())?;
            let y = evaluate_path(&init, &p2).map_err(|e| e.to_string())?;
            check(x == y, || format!("A={a:?}: paths of length {} and {} disagree", p1.len(), p2.len()))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs, forest-normalized and shortest paths agree exactly"))
}

fn laurentness(rng: &mut ChaCha8Rng) -> Outcome {
    let mut values = 0;
    for a in [&[1, 1, 1][..], &[2, 1, 1], &[1, 1, 1, 1], &[2, 2, 1]] {
        let s = spec(a);
        let t0 = t_min(&s);
        let sym = extend_to_lattice(&t0, &symbolic(&t0), ExtendOptions { seed: 0, check_rate: 1.0 })
            .map_err(|e| format!("A={a:?}: {e}"))?;
        check(sym.is_total(), || format!("A={a:?}: not total"))?;
        let cubes = verify_cube_relations(&sym).map_err(|e| e.to_string())?;
        check(cubes.is_ok(), || format!("A={a:?}: cube relation fails"))?;
        for (p, x) in sym.values() {
            let m = x.min_monomial();
            let numer = x.scale_monomial(&1.into(), &m.inverse());
            check(numer.is_polynomial(), || format!("A={a:?}: denominator at {p} is not a monomial"))?;
            check(x.variables().iter().all(|v| t0.contains_vertex(v)), || format!("A={a:?}: stray variable at {p}"))?;
            values += 1;
        }
        for _ in 0..5 {
            let point: HashMap<LatticePoint, BigRational> =
                t0.vertices().into_iter().map(|p| (p, random_positive(rng))).collect();
            let rat = extend_to_lattice(&t0, &Labeling::on_tiling(&t0, |p| point[p].clone()), ExtendOptions::default())
                .map_err(|e| e.to_string())?;
            for (p, x) in sym.values() {
                let v = x.evaluate(&point).map_err(|e| e.to_string())?;
                check(Some(&v) == rat.get(p), || format!("A={a:?}: evaluation differs at {p}"))?;
            }
        }
    }
    Ok(format!("{values} values over 4 boxes, exact divisions, monomial denominators, 5 evaluations each"))
}

fn counting(rng: &mut ChaCha8Rng, census: &mut Census) -> Outcome {
    let boxes: [&[u32]; 9] = [
        &[1, 1, 1],
        &[2, 1, 1],
        &[2, 2, 1],
        &[2, 2, 2],
        &[3, 3, 3],
        &[1, 1, 1, 1],
        &[2, 1, 1, 1],
        &[3, 1, 2, 1],
        &[1, 2, 1, 2, 1],
    ];
    for a in boxes {
        let s = spec(a);
        let tm = t_min(&s);
        census.see(&tm);
        check(tm.vertices() == t_min_vertices(&s), || format!("A={a:?}: t_min differs from the closed form"))?;
        let pts = s.points();
        for _ in 0..10 {
            let p = pts.choose(rng).unwrap();
            let opts = ArrangementOptions {
                seed: rng.gen(),
                ..Default::default()
            };
            census.see(&tiling_through_vertex(&s, p, opts).map_err(|e| e.to_string())?);
        }
        if let Ok(all) = enumerate_tilings(&s, 2000) {
            all.iter().for_each(|t| census.see(t));
        }
    }
    check(census.bad.is_empty(), || census.bad.join("; "))?;
    Ok(format!("{} tilings have the predicted vertex count; t_min matches the closed form for 9 boxes", census.tilings))
}

fn forest_uniqueness(census: &mut Census) -> Outcome {
    let candidates: [&[u32]; 12] = [
        &[1, 1, 1],
        &[2, 1, 1],
        &[3, 1, 1],
        &[4, 1, 1],
        &[2, 2, 1],
        &[3, 2, 1],
        &[2, 2, 2],
        &[3, 2, 2],
        &[1, 1, 1, 1],
        &[2, 1, 1, 1],
        &[1, 2, 1, 1],
        &[1, 1, 1, 1, 1],
    ];
    let (mut boxes, mut tilings) = (0, 0);
    for a in candidates {
        let s = spec(a);
        let all = match enumerate_tilings(&s, 64) {
            Ok(all) => all,
            Err(EnumerateError::CapExceeded(_)) => continue,
        };
        all.iter().for_each(|t| census.see(t));
        let forests: HashSet<_> = all.iter().map(|t| fundamental_forest(t).edges().clone()).collect();
        check(forests.len() == all.len(), || format!("A={a:?}: forests repeat"))?;
        let empty: Vec<&Tiling> = all.iter().filter(|t| fundamental_forest(t).is_empty()).collect();
        check(empty.len() == 1 && *empty[0] == t_min(&s), || format!("A={a:?}: {} empty forests", empty.len()))?;
        boxes += 1;
        tilings += all.len();
    }
    check(boxes >= 8, || format!("only {boxes} boxes within the cap"))?;
    Ok(format!("{boxes} boxes, {tilings} tilings, distinct forests, t_min the only empty one"))
}

/// A tiling through `keep`, then random flips that never remove it.
fn tiling_keeping(s: &std::sync::Arc<ZonogonSpec>, keep: &LatticePoint, rng: &mut ChaCha8Rng) -> Result<Tiling, String> {
    let opts = ArrangementOptions {
        seed: rng.gen(),
        ..Default::default()
    };
    let mut t = tiling_through_vertex(s, keep, opts).map_err(|e| e.to_string())?;
    for _ in 0..rng.gen_range(0..10) {
        let options: Vec<FlipMove> = all_flips(&t).into_iter().filter(|m| m.removed() != *keep).collect();
        if let Some(mv) = options.choose(rng) {
            t = apply_move(&t, mv).map_err(|e| e.to_string())?;
        }
    }
    Ok(t)
}

fn qus_paths(rng: &mut ChaCha8Rng, census: &mut Census) -> Outcome {
    let s = spec(&[2, 2, 2]);
    let pts = s.points();
    let mut lengths = Vec::new();
    for _ in 0..10 {
        let keep = *pts.choose(rng).unwrap();
        let (t, t2) = (tiling_keeping(&s, &keep, rng)?, tiling_keeping(&s, &keep, rng)?);
        census.see(&t);
        census.see(&t2);
        let path = connect_through(&t, &t2, &keep).map_err(|e| format!("I0={keep}: {e}"))?;
        let states = path.replay().map_err(|e| e.to_string())?;
        check(states.first() == Some(&t) && states.last() == Some(&t2), || format!("I0={keep}: wrong endpoints"))?;
        check(states.iter().all(|x| x.contains_vertex(&keep)), || format!("I0={keep}: a tiling drops I0"))?;
        lengths.push(path.len());
    }
    Ok(format!("10 triples, path lengths {lengths:?}, I0 kept throughout"))
}

fn tropical_propagation(rng: &mut ChaCha8Rng) -> Outcome {
    let mut summary = Vec::new();
    for a in [&[2, 1, 1][..], &[2, 2, 1], &[3, 1, 1]] {
        let s = spec(a);
        let t0 = t_min(&s);
        let pts: Vec<LatticePoint> = t0.vertices().into_iter().collect();
        let walls: Vec<Wall> = (0..s.n())
            .flat_map(|t| (1..s.a()[t]).map(move |c| (t, c)))
            .map(|(t, c)| Wall::new(&s, t, c).unwrap())
            .collect();
        let (mut met, mut tries, mut edges) = (0, 0, 0);
        while met < 100 {
            tries += 1;
            check(tries <= 20_000, || format!("A={a:?}: only {met} of {tries} samples met the hypothesis"))?;
            let vals = if tries % 2 == 0 {
                random_tropical_values(&pts, 5, rng)
            } else {
                affine_tropical_values(&pts, 4, 1, rng)
            };
            let lab: Labeling<Tropical> = extend_to_lattice(&t0, &Labeling::from_values(s.clone(), vals), ExtendOptions::default())
                .map_err(|e| e.to_string())?;
            let w = *walls.choose(rng).unwrap();
            let g = random_cutcurve(&s, &w, rng);
            match check_propagation(&lab, &w, &g).map_err(|e| e.to_string())? {
                PropagationReport::Checked { edges: n, violations } => {
                    check(violations.is_empty(), || format!("A={a:?}: {} violations", violations.len()))?;
                    met += 1;
                    edges += n;
                }
                PropagationReport::HypothesisNotMet { .. } => {}
                r @ PropagationReport::RecurrenceViolated { .. } => return Err(r.to_string()),
            }
        }
        summary.push(format!("{a:?}: {met}/{tries} ({edges} edges)"));
    }
    Ok(format!("zero violations; {}", summary.join(", ")))
}

fn grassmannian(rng: &mut ChaCha8Rng) -> Outcome {
    let mut instances = 0;
    for n in 3..=5 {
        for _ in 0..50 {
            let p = spin_coordinates(&random_isotropic(n, rng)).map_err(|e| e.to_string())?;
            let r = verify_trbi(&p);
            check(r.is_ok(), || format!("n={n}: fails at {}", r.failures[0]))?;
            instances += r.checked;
        }
        let s = spec(&vec![1; n]);
        let t0 = t_min(&s);
        for _ in 0..10 {
            let init = Labeling::on_tiling(&t0, |_| random_positive(rng));
            let full = extend_to_lattice(&t0, &init, ExtendOptions::default()).map_err(|e| e.to_string())?;
            let p = sign_twist(&SpinPoint::from_labeling(&full).ok_or("not a unit cube")?);
            check(verify_trbi(&p).is_ok(), || format!("n={n}: twisted values fail the relations"))?;
            let (even, odd) = (p.even(), p.odd());
            let pe = purity_check(&even).map_err(|e| e.to_string())?.0;
            let po = purity_check(&odd).map_err(|e| e.to_string())?.0;
            let common = annihilator(&[&even, &odd]).map_err(|e| e.to_string())?.len();
            check(pe && po && common == n - 1, || format!("n={n}: pure {pe}/{po}, common annihilator {common}"))?;
        }
    }
    Ok(format!("150 planes, {instances} relation instances exact; 30 twisted recurrence outputs pure with (n-1)-dim common annihilator"))
}

fn clifford_layer(rng: &mut ChaCha8Rng) -> Outcome {
    let b = |x: &str, y: &str| bilinear_form_b(&Spinor::basis(3, local(x)), &Spinor::basis(3, local(y)));
    let pairing = [b("000", "111"), b("011", "100"), b("101", "010"), b("110", "001")];
    check(pairing == [q(1), q(-1), q(1), q(-1)], || format!("pairing values {pairing:?}"))?;
    for t in 0..100 {
        let n = 3 + t % 4;
        let v = random_unit_vector(n, rng);
        let (s1, s2) = (random_spinor(n, rng), random_spinor(n, rng));
        let (before, after) = (
            bilinear_form_b(&s1, &s2),
            bilinear_form_b(&clifford_act(&v, &s1), &clifford_act(&v, &s2)),
        );
        check(before == after, || format!("n={n}: B changes from {before} to {after}"))?;
    }
    for n in [5, 6] {
        for _ in 0..50 {
            check_sign_table(n, rng)?;
        }
    }
    for size in [6, 8] {
        for _ in 0..5 {
            let m = random_skew(size, rng);
            let pf: Q = pfaffian(&m).map_err(|e| e.to_string())?;
            check(pf.pow(2) == det(&m), || format!("Pf^2 != det at size {size}"))?;
        }
    }
    Ok("pairing values 1,-1,1,-1; B invariant under 100 unit vectors; 100 sign tables; Pf^2 = det".into())
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut census = Census::default();
    let mut failed = 0;
    let mut run = |id: u32, name: &str, budget: Duration, f: &mut dyn FnMut(&mut ChaCha8Rng, &mut Census) -> Outcome| {
        let start = Instant::now();
        let result = f(&mut rng, &mut census);
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} budget", budget)),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {id:>2} {name}: {detail} [{:.2?} / {:?}, exact, tolerance 0]",
            if ok { "PASS" } else { "FAIL" },
            took,
            budget
        );
    };
    let secs = Duration::from_secs;
    run(1, "octagon census", secs(1), &mut |_, c| octagon_census(c));
    run(2, "octagon 8-cycle identity", secs(5), &mut |_, _| octagon_identity());
    run(3, "confluence", secs(30), &mut |r, c| confluence(r, c));
    run(4, "laurentness", secs(180), &mut |r, _| laurentness(r));
    run(6, "forest uniqueness", secs(60), &mut |_, c| forest_uniqueness(c));
    run(7, "paths through a vertex", secs(60), &mut |r, c| qus_paths(r, c));
    run(8, "tropical propagation", secs(120), &mut |r, _| tropical_propagation(r));
    run(9, "isotropic grassmannian", secs(120), &mut |r, _| grassmannian(r));
    run(10, "clifford layer", secs(60), &mut |r, _| clifford_layer(r));
    // last, so that it covers the tilings generated above
    run(5, "vertex counts", secs(60), &mut |r, c| counting(r, c));
    if failed == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
