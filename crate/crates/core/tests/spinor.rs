mod common;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use common::spin::*;
use zonorec::engine::{extend_to_lattice, ExtendOptions, Labeling};
use zonorec::spinor::linalg::{q, Q};
use zonorec::spinor::*;
use zonorec::zonogon::{t_min, ZonogonSpec};


#[test]
fn clifford_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=6 {
        for _ in 0..5 {
            let s = random_spinor(n, &mut rng);
            let v = Vector2n {
                w: (0..n).map(|_| q(rng.gen_range(-3..=3))).collect(),
                wv: (0..n).map(|_| q(rng.gen_range(-3..=3))).collect(),
            };
            let vv = clifford_act(&v, &clifford_act(&v, &s));
            assert_eq!(vv, s.scale(&v.inner(&v)));
        }
    }
    let s = random_spinor(3, &mut rng);
    let u = Vector2n::e(3, 0).add(&Vector2n::e_dual(3, 0));
    assert_eq!(clifford_act(&u, &clifford_act(&u, &s)), s);
}

#[test]
fn b_is_invariant_under_unit_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=6 {
        for _ in 0..20 {
            let v = random_unit_vector(n, &mut rng);
            let (s1, s2) = (random_spinor(n, &mut rng), random_spinor(n, &mut rng));
            assert_eq!(
                bilinear_form_b(&clifford_act(&v, &s1), &clifford_act(&v, &s2)),
                bilinear_form_b(&s1, &s2),
                "n={n}"
            );
        }
    }
}

#[test]
fn spin_coordinates_satisfy_three_term_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 3..=5 {
        for _ in 0..10 {
            let k = random_isotropic(n, &mut rng);
            let p = spin_coordinates(&k).unwrap();
            let r = verify_trbi(&p);
            assert!(r.is_ok(), "n={n} {:?}", r.failures.first());
            assert_eq!(p.even().parity(), Some(true));
            assert_eq!(p.odd().parity(), Some(false));
        }
    }
}

#[test]
fn twisted_recurrence_outputs_are_pure() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 3..=5 {
        let spec = Arc::new(ZonogonSpec::new(&vec![1; n]).unwrap());
        let t0 = t_min(&spec);
        let init = Labeling::on_tiling(&t0, |_| Q::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=9).into()));
        let full = extend_to_lattice(&t0, &init, ExtendOptions::default()).unwrap();
        let rec = SpinPoint::from_labeling(&full).unwrap();
        assert!(verify_cube_recurrence(&rec).is_ok());
        let p = sign_twist(&rec);
        let r = verify_trbi(&p);
        assert!(r.is_ok(), "n={n} {:?}", r.failures.first());
        let (pe, _) = purity_check(&p.even()).unwrap();
        let (po, _) = purity_check(&p.odd()).unwrap();
        assert!(pe && po, "n={n}");
        assert_eq!(annihilator(&[&p.even(), &p.odd()]).unwrap().len(), n - 1);
    }
}



#[test]
fn projection_sign_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [5usize, 6] {
        for _ in 0..50 {
            check_sign_table(n, &mut rng).unwrap();
        }
    }
}

#[test]
fn pairing3_values() {
    let b = |x: &str, y: &str| bilinear_form_b(&Spinor::basis(3, local(x)), &Spinor::basis(3, local(y)));
    assert_eq!(b("000", "111"), q(1));
    assert_eq!(b("011", "100"), q(-1));
    assert_eq!(b("101", "010"), q(1));
    assert_eq!(b("110", "001"), q(-1));
}


#[test]
fn pfaffian_squares_to_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for size in [2, 4, 6, 8] {
        for _ in 0..5 {
            let m = random_skew(size, &mut rng);
            assert_eq!(pfaffian(&m).unwrap().pow(2), det(&m));
        }
    }
    assert!(pfaffian(&random_skew(3, &mut rng)).unwrap().is_zero());
}

#[test]
fn graph_of_skew_matrix_has_pfaffian_coordinates() {
    // With L the row span of (A | Id), v s = 0 forces s = exp(-A), so the
    // coordinate at J is (-1)^{|J|/2} Pf(A_JJ).
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=5 {
        let a = random_skew(n, &mut rng);
        let basis = (0..n)
            .map(|i| Vector2n {
                w: a[i].clone(),
                wv: (0..n).map(|t| if t == i { q(1) } else { q(0) }).collect(),
            })
            .collect();
        let l = IsotropicSubspace::new(n, basis).unwrap();
        let s = pure_spinor(&l).unwrap();
        assert_eq!(s.parity(), Some(true));
        let scale = s.coords[0].clone();
        assert!(!scale.is_zero());
        for m in 0..1usize << n {
            let idx: Vec<usize> = (0..n).filter(|&i| m & (1 << i) != 0).collect();
            if idx.len() % 2 == 1 {
                assert!(s.coords[m].is_zero());
                continue;
            }
            let sub: Vec<Vec<Q>> = idx.iter().map(|&r| idx.iter().map(|&c| a[r][c].clone()).collect()).collect();
            let want = pfaffian(&sub).unwrap() * signed(idx.len() as u32 / 2) * &scale;
            assert_eq!(s.coords[m], want, "J={m:b}");
        }
    }
}

#[test]
fn purity_examples() {
    let (pure, ann) = purity_check(&Spinor::basis(4, 0)).unwrap();
    assert!(pure);
    assert!(ann.same_span(&IsotropicSubspace::coordinate(4, true)));
    let mixed = Spinor::basis(4, 0).add(&Spinor::basis(4, 0b1111));
    let (pure, ann) = purity_check(&mixed).unwrap();
    assert!(!pure);
    assert!(ann.dim() < 4);
    assert!(purity_check(&Spinor::zero(3)).is_err());
}

#[test]
fn spin_coordinates_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 3..=5 {
        for _ in 0..5 {
            let k = random_isotropic(n, &mut rng);
            let (lp, lm) = complete_isotropic_pair(&k).unwrap();
            let p = spin_coordinates(&k).unwrap();
            let (pe, ae) = purity_check(&p.even()).unwrap();
            let (po, ao) = purity_check(&p.odd()).unwrap();
            assert!(pe && po);
            assert!(ae.same_span(&lp) && ao.same_span(&lm));
            let common = IsotropicSubspace::new(n, ae.intersect(&ao)).unwrap();
            assert!(common.same_span(&k));
        }
    }
}

#[test]
fn three_index_case_and_twist() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let p = spin_coordinates(&random_isotropic(3, &mut rng)).unwrap();
        let x = |s: &str| p.coords[local(s)].clone();
        assert_eq!(
            x("000") * x("111") + x("101") * x("010"),
            x("110") * x("001") + x("011") * x("100")
        );
        if p.all_nonzero() {
            assert!(verify_cube_recurrence(&sign_twist(&p)).is_ok());
        }
    }
}
