use qcausal::geom::{TCC_VERTICES, TDC_VERTICES};
use qcausal::linalg::{c64, tensor, CMat2, CMat4};
use qcausal::oracle::brute_stat;
use qcausal::quantum::{bell_basis, mixed_state, pauli, state_from_bell_weights, BellWeights, PauliAxis};
use qcausal::stats::{FramePair, Scenario};
use qcausal::StatP;

const AXES: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

fn projector(j: usize) -> CMat4 {
    let b = bell_basis().states[j];
    CMat4::outer(&b, &b)
}

#[test]
fn bell_states_hit_common_cause_vertices() {
    for (j, v) in TCC_VERTICES.iter().enumerate() {
        let sys = Scenario::common_cause(projector(j)).unwrap();
        let p = brute_stat(&sys, &FramePair::identity());
        assert!(p.approx_eq(&StatP::from_array(*v), 1e-12), "b{} gave {p}", j + 1);
        assert!(sys.exact_stat(&FramePair::identity()).approx_eq(&p, 1e-12));
    }
}

#[test]
fn paulis_hit_direct_cause_vertices() {
    for (j, v) in TDC_VERTICES.iter().enumerate() {
        let sys = Scenario::direct_cause(pauli(AXES[j])).unwrap();
        let p = brute_stat(&sys, &FramePair::identity());
        assert!(p.approx_eq(&StatP::from_array(*v), 1e-12), "sigma{j} gave {p}");
        assert!(sys.exact_stat(&FramePair::identity()).approx_eq(&p, 1e-12));
    }
}

#[test]
fn bell_labels_are_the_conventional_states() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (z, r, m) = (c64(0.0, 0.0), c64(h, 0.0), c64(-h, 0.0));
    let expected = [[r, z, z, r], [r, z, z, m], [z, r, r, z], [z, r, m, z]];
    let basis = bell_basis();
    for (got, want) in basis.states.iter().zip(expected) {
        for (a, b) in got.iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
    }
    assert!((basis.matrix.adjoint() * basis.matrix).approx_eq(&CMat4::identity(), 1e-12));
}

#[test]
fn pauli_matrices_square_to_identity() {
    assert!(pauli(PauliAxis::I).approx_eq(&CMat2::identity(), 0.0));
    let z = pauli(PauliAxis::Z);
    assert!(z.approx_eq(&CMat2::diag([c64(1.0, 0.0), c64(-1.0, 0.0)]), 0.0));
    for axis in PauliAxis::MEASURED {
        let s = pauli(axis);
        assert!((s * s).approx_eq(&CMat2::identity(), 1e-15));
        assert!(s.trace().norm() < 1e-15);
    }
}

#[test]
fn tensor_of_identities_and_z_eigenspace() {
    assert!(tensor(&CMat2::identity(), &CMat2::identity()).approx_eq(&CMat4::identity(), 0.0));
    let z = pauli(PauliAxis::Z);
    let same = qcausal::quantum::SpectralProjectors::new(PauliAxis::Z).unwrap().same_outcome();
    assert!((tensor(&z, &z) * same).approx_eq(&same, 1e-15));
}

#[test]
fn equal_superposition_of_first_two_bell_states() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bw = BellWeights::new([h, h, 0.0, 0.0], [0.0; 3]).unwrap();
    let sys = Scenario::common_cause(state_from_bell_weights(&bw)).unwrap();
    assert!(brute_stat(&sys, &FramePair::identity()).approx_eq(&StatP::new(0.0, 0.0, 1.0), 1e-12));
}

#[test]
fn mixtures_average_their_vertices() {
    let half = mixed_state(&[(0.5, projector(0)), (0.5, projector(1))]).unwrap();
    let p = brute_stat(&Scenario::common_cause(half).unwrap(), &FramePair::identity());
    assert!(p.approx_eq(&StatP::new(0.0, 0.0, 1.0), 1e-12));

    let all = mixed_state(&(0..4).map(|j| (0.25, projector(j))).collect::<Vec<_>>()).unwrap();
    assert!(all.approx_eq(&CMat4::identity().scale_re(0.25), 1e-12));
    let p = brute_stat(&Scenario::common_cause(all).unwrap(), &FramePair::identity());
    assert!(p.approx_eq(&StatP::new(0.0, 0.0, 0.0), 1e-12));

    assert!(mixed_state(&[(1.5, projector(0)), (-0.5, projector(1))]).is_err());
}
