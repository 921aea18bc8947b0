use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use qcausal::geom::{coords_tcc, coords_tdc, unitary_family, TDC_VERTICES};
use qcausal::linalg::c64;
use qcausal::oracle::brute_stat;
use qcausal::quantum::{state_from_bell_weights, BellWeights, PauliMixture};
use qcausal::stats::stat_closed_causal;
use qcausal::{CanonicalUnitary, FramePair, LocalRotation, Scenario, StatP};

fn unitary() -> impl Strategy<Value = CanonicalUnitary> {
    (0.0..=FRAC_PI_2, 0.0..TAU, 0.0..TAU, 0.0..TAU).prop_map(|(a, b, c, d)| CanonicalUnitary::new(a, b, c, d))
}

fn rotation() -> impl Strategy<Value = LocalRotation> {
    (0.0..TAU, 0.0..TAU, 0.0..PI).prop_map(|(a, b, c)| LocalRotation::new(a, b, c))
}

fn weights() -> impl Strategy<Value = [f64; 4]> {
    proptest::array::uniform4(0.01..1.0f64).prop_map(|w| {
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.map(|x| x / n)
    })
}

fn mixture() -> impl Strategy<Value = PauliMixture> {
    proptest::array::uniform4(0.0..1.0f64).prop_filter("nonzero", |p| p.iter().sum::<f64>() > 1e-3).prop_map(|p| {
        let s: f64 = p.iter().sum();
        PauliMixture { p: p.map(|x| x / s) }
    })
}

fn stat_of(mix: &PauliMixture) -> StatP {
    StatP::from_array(std::array::from_fn(|i| (0..4).map(|j| mix.p[j] * TDC_VERTICES[j][i]).sum()))
}

proptest! {
    #[test]
    fn realized_matrices_are_unitary(u in unitary(), v in rotation()) {
        prop_assert!(u.realize().is_unitary(1e-12));
        prop_assert!(v.realize().is_unitary(1e-12));
    }

    #[test]
    fn pure_states_are_densities(w in weights(), ph in proptest::array::uniform3(0.0..TAU)) {
        let bw = BellWeights::new(w, ph).unwrap();
        prop_assert!(state_from_bell_weights(&bw).is_density(1e-12));
    }

    #[test]
    fn affine_coordinates_reconstruct(c in proptest::array::uniform3(-1.0..=1.0f64)) {
        let p = StatP::from_array(c);
        for a in [coords_tdc(&p), coords_tcc(&p)] {
            prop_assert!((a.coords.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(a.reconstruct().approx_eq(&p, 1e-12));
        }
    }

    #[test]
    fn global_phase_is_invisible(u in unitary(), delta in 0.0..TAU) {
        let m = u.realize();
        let a = brute_stat(&Scenario::direct_cause(m).unwrap(), &FramePair::identity());
        let b = brute_stat(&Scenario::direct_cause(m.scale(c64(delta.cos(), delta.sin()))).unwrap(), &FramePair::identity());
        prop_assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn bell_phases_are_invisible(w in weights(), a in proptest::array::uniform3(0.0..TAU), b in proptest::array::uniform3(0.0..TAU)) {
        let pa = brute_stat(&Scenario::common_cause(state_from_bell_weights(&BellWeights::new(w, a).unwrap())).unwrap(), &FramePair::identity());
        let pb = brute_stat(&Scenario::common_cause(state_from_bell_weights(&BellWeights::new(w, b).unwrap())).unwrap(), &FramePair::identity());
        prop_assert!(pa.approx_eq(&pb, 1e-12));
        let expected: [f64; 4] = w.map(|x| x * x);
        let got = coords_tcc(&pa).coords;
        for (g, want) in got.iter().zip(expected) {
            prop_assert!((g - want).abs() < 1e-9);
        }
    }

    #[test]
    fn every_label_round_trips_its_mixture(mix in mixture()) {
        let p = stat_of(&mix);
        for u in unitary_family(&mix) {
            let q = brute_stat(&Scenario::direct_cause(u.realize()).unwrap(), &FramePair::identity());
            let got = coords_tdc(&q).coords;
            for (g, want) in got.iter().zip(mix.p) {
                prop_assert!((g - want).abs() < 1e-9, "labels {:?}", u.labels);
            }
            prop_assert!(q.approx_eq(&p, 1e-9));
        }
    }

    #[test]
    fn label_involutions(mix in mixture(), v in rotation()) {
        prop_assume!(mix.c1() > 1e-9 && mix.d1() > 1e-9);
        let family = unitary_family(&mix);
        let find = |l| *family.iter().find(|u| u.labels == Some(l)).unwrap();
        for u in &family {
            let l = u.labels.unwrap();
            let neg = find(l.negated()).realize();
            prop_assert!(neg.approx_eq(&-u.realize(), 1e-12));
            let mirror = find(l.mirrored());
            prop_assert!(stat_closed_causal(&mirror, &v).approx_eq(&stat_closed_causal(u, &v), 1e-9));
        }
    }

    #[test]
    fn frames_compose_on_the_right(a in rotation(), b in rotation(), u in unitary()) {
        let sys = Scenario::direct_cause(u.realize()).unwrap();
        let step = FramePair::identity().then_rotation(&a).then_rotation(&b);
        let once = FramePair::same(a.realize() * b.realize()).unwrap();
        prop_assert!(brute_stat(&sys, &step).approx_eq(&brute_stat(&sys, &once), 1e-12));
    }

    #[test]
    fn same_frame_rotation_keeps_the_plane(u in unitary(), w in weights(), ph in proptest::array::uniform3(0.0..TAU), v in rotation()) {
        let causal = Scenario::direct_cause(u.realize()).unwrap();
        let common = Scenario::common_cause(state_from_bell_weights(&BellWeights::new(w, ph).unwrap())).unwrap();
        let f = FramePair::identity().then_rotation(&v);
        for sys in [causal, common] {
            let b = brute_stat(&sys, &FramePair::identity()).plane_constant();
            prop_assert!((brute_stat(&sys, &f).plane_constant() - b).abs() < 1e-9);
        }
    }
}
