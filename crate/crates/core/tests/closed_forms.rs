use std::f64::consts::TAU;

use qcausal::geom::{coords_tcc, coords_tdc, region_of};
use qcausal::oracle::{brute_stat, brute_stat_rotated};
use qcausal::quantum::{
    maximally_mixed_qubit, pauli, state_from_bell_weights, BellWeights, GeneralUnitaryForm, PauliAxis,
};
use qcausal::random;
use qcausal::stats::{
    c33_closed_common, joint_causal, sample_stat, stat_closed_causal, stat_from_joint, stat_general_unitary,
};
use qcausal::{FramePair, LocalRotation, Region, Scenario, StatP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 1000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    if rng.random_bool(0.5) {
        Scenario::common_cause(random::common_cause(rng)).unwrap()
    } else {
        Scenario::direct_cause(random::canonical_unitary(rng).realize()).unwrap()
    }
}

#[test]
fn c33_closed_form_matches_born_rule() {
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..DRAWS {
        let w: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>());
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let phases = std::array::from_fn(|_| rng.random_range(0.0..TAU));
        let bw = BellWeights::new([w[0] / n, w[1] / n, w[2] / n, 0.0], phases).unwrap();
        let v = random::rotation(&mut rng);
        let sys = Scenario::common_cause(state_from_bell_weights(&bw)).unwrap();
        let closed = c33_closed_common(&bw, &v).unwrap();
        worst = worst.max((closed - brute_stat_rotated(&sys, &v).c33).abs());

        let d = rng.random_range(0.0..TAU);
        let shifted = LocalRotation::new(v.psi + d, v.chi - d, v.phi);
        assert!((c33_closed_common(&bw, &shifted).unwrap() - closed).abs() < 1e-9);
    }
    assert!(worst < 1e-9, "max error {worst}");
}

#[test]
fn c33_closed_form_rejects_fourth_weight() {
    let bw = BellWeights::new([0.0, 0.0, 0.0, 1.0], [0.0; 3]).unwrap();
    assert!(c33_closed_common(&bw, &LocalRotation::IDENTITY).is_err());
    let b1 = BellWeights::new([1.0, 0.0, 0.0, 0.0], [0.0; 3]).unwrap();
    assert!((c33_closed_common(&b1, &LocalRotation::IDENTITY).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn conjugated_unitary_statistic_matches_born_rule() {
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..DRAWS {
        let u = random::canonical_unitary(&mut rng);
        let v = random::rotation(&mut rng);
        let sys = Scenario::direct_cause(u.realize()).unwrap();
        let closed = stat_closed_causal(&u, &v);
        worst = worst.max(closed.max_abs_diff(&brute_stat_rotated(&sys, &v)));
        let p0 = u.mixture().p[0];
        assert!((closed.plane_constant() - (4.0 * p0 - 1.0)).abs() < 1e-9);
    }
    assert!(worst < 1e-9, "max error {worst}");
}

#[test]
fn identity_rotation_leaves_unitary_statistic() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let u = random::canonical_unitary(&mut rng);
        let sys = Scenario::direct_cause(u.realize()).unwrap();
        let p = brute_stat(&sys, &FramePair::identity());
        assert!(stat_closed_causal(&u, &LocalRotation::IDENTITY).approx_eq(&p, 1e-12));
    }
}

#[test]
fn general_form_matches_born_rule() {
    let mut rng = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..DRAWS {
        let a: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let g = GeneralUnitaryForm::new(a[0] / n, a[1] / n, a[2] / n, a[3] / n, rng.random_range(0.0..TAU)).unwrap();
        let sys = Scenario::direct_cause(g.realize()).unwrap();
        worst = worst.max(stat_general_unitary(&g).max_abs_diff(&brute_stat(&sys, &FramePair::identity())));
    }
    assert!(worst < 1e-9, "max error {worst}");
}

#[test]
fn general_form_at_identity_and_z() {
    let id = GeneralUnitaryForm::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
    assert!(stat_general_unitary(&id).approx_eq(&StatP::new(1.0, 1.0, 1.0), 1e-12));
    // diag(i, -i) = i σ3
    let z = GeneralUnitaryForm::new(0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
    assert!(stat_general_unitary(&z).approx_eq(&StatP::new(-1.0, -1.0, 1.0), 1e-12));
}

#[test]
fn same_frame_rotations_stay_in_the_plane() {
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..DRAWS {
        let sys = random_scenario(&mut rng);
        let b = sys.exact_stat(&FramePair::identity()).plane_constant();
        let range = if sys.is_common_cause() { -3.0..=1.0 + 1e-9 } else { -1.0 - 1e-9..=3.0 };
        assert!(range.contains(&b), "plane constant {b}");
        for _ in 0..100 {
            let v = random::rotation(&mut rng);
            let pv = sys.exact_stat(&FramePair::identity().then_rotation(&v));
            worst = worst.max((pv.plane_constant() - b).abs());
        }
    }
    assert!(worst < 1e-9, "max drift {worst}");
}

#[test]
fn plane_constants_agree_in_the_overlap() {
    let mut rng = rng(6);
    let mut seen = 0;
    while seen < DRAWS {
        let p = StatP::from_array(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        if region_of(&p, 0.0) != Region::Overlap {
            continue;
        }
        seen += 1;
        let p0 = coords_tdc(&p).coords[0];
        let w4 = coords_tcc(&p).coords[3];
        assert!((4.0 * p0 - 1.0 - (1.0 - 4.0 * w4)).abs() < 1e-9);
    }
}

#[test]
fn causal_statistic_ignores_early_state() {
    let mut rng = rng(7);
    for _ in 0..20 {
        let u = random::canonical_unitary(&mut rng).realize();
        let frames =
            FramePair::new(random::rotation(&mut rng).realize(), random::rotation(&mut rng).realize()).unwrap();
        let reference = stat_from_joint(&joint_causal(&u, &maximally_mixed_qubit(), &frames).unwrap());
        for _ in 0..100 {
            let early = random::pure_qubit(&mut rng);
            let p = stat_from_joint(&joint_causal(&u, &early, &frames).unwrap());
            assert!(p.approx_eq(&reference, 1e-9));
        }
    }
}

#[test]
fn estimator_spread_follows_binomial_law() {
    let mut rng = rng(8);
    let sys = Scenario::direct_cause(random::canonical_unitary(&mut rng).realize()).unwrap();
    let frames = FramePair::identity();
    let exact = sys.exact_stat(&frames);
    let joint = sys.joint(&frames);
    for shots in [200u32, 800] {
        let runs = 2000;
        let mut sq = [0.0; 3];
        for _ in 0..runs {
            let est = sample_stat(&joint, shots, &mut rng).unwrap();
            for (i, s) in sq.iter_mut().enumerate() {
                *s += (est[i] - exact[i]).powi(2);
            }
        }
        for (i, s) in sq.iter().enumerate() {
            let observed = (s / runs as f64).sqrt();
            let predicted = ((1.0 - exact[i].powi(2)) / f64::from(shots)).sqrt();
            if predicted > 1e-3 {
                let ratio = observed / predicted;
                assert!((0.5..=2.0).contains(&ratio), "axis {i} shots {shots}: ratio {ratio}");
            }
        }
    }
}

#[test]
fn estimator_is_consistent_and_deterministic() {
    let sys = Scenario::direct_cause(pauli(PauliAxis::X)).unwrap();
    let mut rng = rng(9);
    let u = random::canonical_unitary(&mut rng);
    let sys2 = Scenario::direct_cause(u.realize()).unwrap();
    for s in [&sys, &sys2] {
        let joint = s.joint(&FramePair::identity());
        let est = sample_stat(&joint, 1_000_000, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
        assert!(est.approx_eq(&s.exact_stat(&FramePair::identity()), 0.01));
        let again = sample_stat(&joint, 1_000_000, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
        assert_eq!(est, again);
    }
    let joint = sys.joint(&FramePair::identity());
    assert!(sample_stat(&joint, 0, &mut rng).is_err());
}
