mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restricted_digits::geometry::{
    covering_number, curvature_torsion, family_curvature_nonzero_on_grid, generate_instance, pigeonhole_bound,
    spherical_distance, verify_across_deltas, verify_instance, CurveSpec, Theorem, Witnesses, VANISHING,
};

#[test]
fn pigeonhole_on_seeded_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..1_000_000u64);
        let m = rng.gen_range(1..1_000_000u64);
        let c = BigRational::new(
            BigInt::from(rng.gen_range(1..10_000)),
            BigInt::from(rng.gen_range(1..10_000)),
        );
        let delta = BigRational::new(BigInt::from(rng.gen_range(1..1000)), BigInt::from(1000));
        let d = rng.gen_range(2..8);
        let r = pigeonhole_bound(n, m, &c, &delta, d).unwrap();
        assert!(r.holds);
        assert_eq!(&r.lhs * &r.lhs >= r.rhs_squared, r.holds);
    }
}

#[test]
fn instances_respect_their_invariants() {
    for (theorem, seed) in [(Theorem::C1, 1), (Theorem::C2, 2)] {
        let inst = generate_instance(3, 0.2, theorem, seed, None).unwrap();
        for (i, a) in inst.directions.iter().enumerate() {
            assert!((a.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() < 1e-12);
            for b in &inst.directions[i + 1..] {
                assert!(spherical_distance(a, b) >= 0.2);
            }
        }
        match &inst.witnesses {
            Witnesses::Pairs(pairs) => {
                for ((a, b), t) in pairs.iter().zip(&inst.directions) {
                    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    assert!(diff.iter().map(|x| x * x).sum::<f64>().sqrt() > 0.001);
                    let along: f64 = diff.iter().zip(t).map(|(x, y)| x * y).sum();
                    assert!(along.abs() <= inst.plane_tolerance);
                }
            }
            Witnesses::Apex { apex, points } => {
                for (b, t) in points.iter().zip(&inst.directions) {
                    let diff: Vec<f64> = apex.iter().zip(b).map(|(x, y)| x - y).collect();
                    assert!(diff.iter().map(|x| x * x).sum::<f64>().sqrt() > 0.001);
                    let along: f64 = diff.iter().zip(t).map(|(x, y)| x * y).sum();
                    assert!(along.abs() <= inst.plane_tolerance);
                }
            }
        }
        let pts = inst.point_set();
        assert!(pts.iter().flatten().all(|x| (0.0..=1.0).contains(x)));
        let rep = verify_instance(&inst, theorem, 1.0).unwrap();
        assert!(rep.lhs <= pts.len() as u64);
    }
}

#[test]
fn covering_counts_distinct_cells() {
    let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 10.0, 0.05, 0.05]).collect();
    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    assert_eq!(covering_number(&pts, &q(1, 100)).unwrap(), 10);
    assert_eq!(covering_number(&pts, &q(1, 2)).unwrap(), 2);
    assert_eq!(covering_number(&pts, &q(2, 1)).unwrap(), 1);
}

#[test]
fn c1_growth_is_not_slower_than_the_bound() {
    let deltas = [0.125, 0.0625, 0.03125, 0.015625];
    let reps = verify_across_deltas(3, &deltas, Theorem::C1, 7, 1.0, None).unwrap();
    let lhs: Vec<(f64, f64)> = reps.iter().map(|r| (1.0 / r.delta, r.lhs as f64)).collect();
    let bound: Vec<(f64, f64)> = reps.iter().map(|r| (1.0 / r.delta, r.bound)).collect();
    assert!(common::loglog_slope(&lhs) >= common::loglog_slope(&bound) - 0.1);
}

#[test]
fn classical_torsions() {
    let helix = curvature_torsion(&CurveSpec::helix(1.0, 1.0), 0.3).unwrap();
    assert!((helix.tau - 0.5).abs() < 1e-6, "{}", helix.tau);
    assert!((helix.kappa - 0.5).abs() < 1e-6);
    for t in [0.0, 0.7, 2.0] {
        let circle = curvature_torsion(&CurveSpec::great_circle(), t).unwrap();
        assert!(circle.tau.abs() < 1e-9, "{}", circle.tau);
        assert!((circle.kappa - 1.0).abs() < 1e-6);
    }
    // a planar curve in a tilted plane
    let tilted = CurveSpec::sampled("tilted", |t| [t, t * t, t + t * t]);
    assert!(curvature_torsion(&tilted, 0.4).unwrap().tau.abs() < 1e-9);
}

#[test]
fn family_curvature_and_torsion() {
    let fam = CurveSpec::family(1.0, 1.0, 1, 1).unwrap();
    let ct = curvature_torsion(&fam, 0.0).unwrap();
    let k = ct.plane_curvature.unwrap();
    assert!((k - common::plane_curvature_35(0.0)).abs() < 1e-12);
    assert!((k - 0.1221).abs() < 1e-4);
    for (c4, c5, qn, qd) in [(1.0, 1.0, 1, 1), (2.0, -0.5, 3, 2), (-1.0, 3.0, -1, 4)] {
        assert!(family_curvature_nonzero_on_grid(c4, c5, qn, qd, 1e-3).unwrap());
        let curve = CurveSpec::family(c4, c5, qn, qd).unwrap();
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            assert!(curvature_torsion(&curve, t).unwrap().tau.abs() > VANISHING, "t={t}");
        }
    }
}
