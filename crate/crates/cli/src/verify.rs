//! The `verify` suites. Each prints one line per check and fails with the
//! first counterexample.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::anyhow;
use clap::Subcommand;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zonorec::engine::{evaluate_path, extend_to_lattice, verify_cube_relations, ExtendOptions, Labeling, Tropical};
use zonorec::forest::{all_flips, apply_move};
use zonorec::json;
use zonorec::laurent::LaurentPoly;
use zonorec::paths::{connect, FlipPath};
use zonorec::spinor::{
    annihilator, purity_check, random_isotropic, sign_twist, spin_coordinates, verify_cube_recurrence, verify_trbi,
    SpinPoint, MAX_SPIN_N,
};
use zonorec::tropical::{
    affine_tropical_values, check_propagation, random_cutcurve, random_tropical_values, validate_cutcurve,
    PropagationReport,
};
use zonorec::zonogon::{t_min, tiling_through_vertex, ArrangementOptions, LatticePoint, Tiling, ZonogonSpec};

use crate::{fail, spec_from, CliResult, BAD_INPUT, DOMAIN_ERROR, VERIFY_FAILED};

#[derive(Subcommand)]
pub enum Suite {
    /// Two different flip paths give the same values.
    Confluence {
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Symbolic values are Laurent polynomials and agree with rational runs.
    Laurent {
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<u32>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// W-inequalities on a cutcurve propagate to the whole wall.
    Tropical {
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<u32>,
        /// Wall direction (1-based).
        #[arg(long)]
        s: usize,
        /// Wall level.
        #[arg(long)]
        c: u32,
        /// Wall/cutcurve JSON to use instead of random cutcurves.
        #[arg(long)]
        cutcurve: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Spin coordinates of isotropic planes and the converse for the cube.
    Grassmann {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
}

pub fn run(suite: Suite, seed: u64) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Confluence { a, trials } => confluence(&spec_from(&a)?, trials, &mut rng),
        Suite::Laurent { a, samples } => laurent(&spec_from(&a)?, samples, &mut rng),
        Suite::Tropical {
            a,
            s,
            c,
            cutcurve,
            samples,
        } => tropical(&spec_from(&a)?, s, c, cutcurve, samples, &mut rng),
        Suite::Grassmann { n, samples } => grassmann(n, samples, &mut rng),
    }
}

fn positive(rng: &mut impl Rng) -> BigRational {
    BigRational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=9i64).into())
}

/// A tiling through a random vertex, then a few random flips.
fn random_tiling(spec: &Arc<ZonogonSpec>, rng: &mut impl Rng) -> CliResult<Tiling> {
    let pts = spec.points();
    let target = pts[rng.gen_range(0..pts.len())];
    let opts = ArrangementOptions {
        seed: rng.gen(),
        ..Default::default()
    };
    let mut t = tiling_through_vertex(spec, &target, opts).map_err(|e| fail(DOMAIN_ERROR, e))?;
    for _ in 0..rng.gen_range(0..8) {
        let options = all_flips(&t);
        if options.is_empty() {
            break;
        }
        t = apply_move(&t, &options[rng.gen_range(0..options.len())]).map_err(|e| fail(DOMAIN_ERROR, e))?;
    }
    Ok(t)
}

fn concat(a: FlipPath, b: FlipPath) -> FlipPath {
    let mut moves = a.moves;
    moves.extend(b.moves);
    FlipPath { start: a.start, moves }
}

fn confluence(spec: &Arc<ZonogonSpec>, trials: usize, rng: &mut ChaCha8Rng) -> CliResult<()> {
    for trial in 1..=trials {
        let (t, t2, u) = (random_tiling(spec, rng)?, random_tiling(spec, rng)?, random_tiling(spec, rng)?);
        let init = Labeling::on_tiling(&t, |_| positive(rng));
        let direct = connect(&t, &t2).map_err(|e| fail(DOMAIN_ERROR, e))?;
        let detour = concat(
            connect(&t, &u).map_err(|e| fail(DOMAIN_ERROR, e))?,
            connect(&u, &t2).map_err(|e| fail(DOMAIN_ERROR, e))?,
        );
        let x = evaluate_path(&init, &direct).map_err(|e| fail(DOMAIN_ERROR, e))?;
        let y = evaluate_path(&init, &detour).map_err(|e| fail(DOMAIN_ERROR, e))?;
        if let Some((p, v)) = x.values().iter().find(|(p, v)| y.get(p) != Some(v)) {
            return Err(fail(
                VERIFY_FAILED,
                anyhow!("trial {trial}: paths of length {} and {} disagree at {p}: {v} vs {:?}", direct.len(), detour.len(), y.get(p).map(|v| v.to_string())),
            ));
        }
        println!("trial {trial}: paths of length {} and {} agree", direct.len(), detour.len());
    }
    println!("PASS confluence A={:?} trials={trials}", spec.a());
    Ok(())
}

fn laurent(spec: &Arc<ZonogonSpec>, samples: usize, rng: &mut ChaCha8Rng) -> CliResult<()> {
    let t0 = t_min(spec);
    let init = Labeling::on_tiling(&t0, |p| LaurentPoly::var(*p));
    let opts = ExtendOptions { seed: rng.gen(), check_rate: 1.0 };
    let sym = extend_to_lattice(&t0, &init, opts).map_err(|e| fail(VERIFY_FAILED, e))?;
    let cubes = verify_cube_relations(&sym).map_err(|e| fail(VERIFY_FAILED, e))?;
    if let Some(f) = cubes.first() {
        return Err(fail(VERIFY_FAILED, anyhow!("cube relation fails: {f}")));
    }
    let max_terms = sym.values().values().map(|x| x.len()).max().unwrap_or(0);
    println!(
        "{} values, every division exact, {} cube relations hold, at most {max_terms} terms",
        sym.len(),
        cubes.checked
    );
    for k in 1..=samples {
        let point: HashMap<LatticePoint, BigRational> = t0.vertices().into_iter().map(|p| (p, positive(rng))).collect();
        let rat = extend_to_lattice(&t0, &Labeling::on_tiling(&t0, |p| point[p].clone()), opts)
            .map_err(|e| fail(DOMAIN_ERROR, e))?;
        for (p, x) in sym.values() {
            let v = x.evaluate(&point).map_err(|e| fail(VERIFY_FAILED, e))?;
            if Some(&v) != rat.get(p) {
                return Err(fail(VERIFY_FAILED, anyhow!("sample {k}: evaluation differs at {p}")));
            }
        }
        println!("sample {k}: evaluation matches the rational run");
    }
    println!("PASS laurent A={:?}", spec.a());
    Ok(())
}

fn tropical(
    spec: &Arc<ZonogonSpec>,
    s: usize,
    c: u32,
    cutcurve: Option<PathBuf>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> CliResult<()> {
    if s == 0 || s > spec.n() {
        return Err(fail(BAD_INPUT, anyhow!("--s must lie in 1..={}", spec.n())));
    }
    let w = zonorec::tropical::Wall::new(spec, s - 1, c).map_err(|e| fail(BAD_INPUT, e))?;
    let fixed = match cutcurve {
        Some(path) => {
            let text = std::fs::read_to_string(&path)?;
            let (w2, g) = json::wall_from_json(spec, &serde_json::from_str(&text)?)?;
            if w2 != w {
                return Err(fail(BAD_INPUT, anyhow!("cutcurve file is for a different wall")));
            }
            if let Some(v) = validate_cutcurve(spec, &w, &g).first() {
                return Err(fail(BAD_INPUT, anyhow!("invalid cutcurve: {v}")));
            }
            Some(g)
        }
        None => None,
    };
    let t0 = t_min(spec);
    let pts: Vec<LatticePoint> = t0.vertices().into_iter().collect();
    let (mut met, mut last_witness) = (0, None);
    for k in 0..samples {
        let vals = if k % 2 == 0 {
            random_tropical_values(&pts, 5, rng)
        } else {
            affine_tropical_values(&pts, 4, 1, rng)
        };
        let init = Labeling::from_values(spec.clone(), vals);
        let lab: Labeling<Tropical> =
            extend_to_lattice(&t0, &init, ExtendOptions::default()).map_err(|e| fail(DOMAIN_ERROR, e))?;
        let g = fixed.clone().unwrap_or_else(|| random_cutcurve(spec, &w, rng));
        let report = check_propagation(&lab, &w, &g).map_err(|e| fail(DOMAIN_ERROR, e))?;
        match &report {
            PropagationReport::RecurrenceViolated { .. } => return Err(fail(VERIFY_FAILED, anyhow!("{report}"))),
            PropagationReport::HypothesisNotMet { .. } => last_witness = Some(report),
            PropagationReport::Checked { violations, .. } => {
                met += 1;
                if !violations.is_empty() {
                    let detail = serde_json::to_string(&json::propagation_report_to_json(&report))?;
                    return Err(fail(VERIFY_FAILED, anyhow!("W-inequalities fail: {detail}")));
                }
            }
        }
    }
    if met == 0 {
        let witness = last_witness.map(|r| r.to_string()).unwrap_or_default();
        println!("{witness}");
        println!("no sample met the hypothesis; nothing to check");
        return Ok(());
    }
    println!("{met} of {samples} labelings met the hypothesis; no violations on the wall");
    println!("PASS tropical A={:?} s={s} c={c}", spec.a());
    Ok(())
}

fn grassmann(n: usize, samples: usize, rng: &mut ChaCha8Rng) -> CliResult<()> {
    if !(3..=MAX_SPIN_N).contains(&n) {
        return Err(fail(BAD_INPUT, anyhow!("--n must lie in 3..={MAX_SPIN_N}")));
    }
    let mut checked = 0;
    for k in 1..=samples {
        let p = spin_coordinates(&random_isotropic(n, rng)).map_err(|e| fail(DOMAIN_ERROR, e))?;
        let r = verify_trbi(&p);
        if let Some(f) = r.failures.first() {
            return Err(fail(VERIFY_FAILED, anyhow!("sample {k}: relation fails at {f}")));
        }
        checked += r.checked;
    }
    let name = if n == 3 { "four-term relation" } else { "three-term relations" };
    println!("{samples} random isotropic planes: {checked} instances of the {name}, all residuals zero");
    let spec = spec_from(&vec![1; n])?;
    let t0 = t_min(&spec);
    for k in 1..=samples {
        let init = Labeling::on_tiling(&t0, |_| positive(rng));
        let full = extend_to_lattice(&t0, &init, ExtendOptions::default()).map_err(|e| fail(DOMAIN_ERROR, e))?;
        let rec = SpinPoint::from_labeling(&full).expect("unit cube labeling");
        if !verify_cube_recurrence(&rec).is_ok() {
            return Err(fail(VERIFY_FAILED, anyhow!("sample {k}: recurrence output fails the cube relation")));
        }
        let p = sign_twist(&rec);
        let (even, odd) = (p.even(), p.odd());
        let pure_even = purity_check(&even).map_err(|e| fail(DOMAIN_ERROR, e))?.0;
        let pure_odd = purity_check(&odd).map_err(|e| fail(DOMAIN_ERROR, e))?.0;
        let common = annihilator(&[&even, &odd]).map_err(|e| fail(DOMAIN_ERROR, e))?.len();
        if !(pure_even && pure_odd && common == n - 1) {
            return Err(fail(
                VERIFY_FAILED,
                anyhow!("sample {k}: twisted values not pure (even {pure_even}, odd {pure_odd}, common annihilator {common})"),
            ));
        }
    }
    println!("{samples} twisted recurrence outputs: both halves pure, common annihilator of dimension {}", n - 1);
    println!("PASS grassmann n={n}");
    Ok(())
}
