//! Brute-force reference for the correlation statistic.
//!
//! Projectors come from a numerical eigendecomposition of each Pauli matrix
//! and probabilities from full operator traces on `nalgebra` matrices. Nothing
//! here goes through the closed forms or the joint-distribution code in
//! [`crate::stats`]; the claim registry in [`claims`] compares the two.

pub mod claims;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::linalg::{CMat2, C64};
use crate::quantum::{pauli, LocalRotation, PauliAxis};
use crate::stats::{FramePair, Scenario, StatP};

pub use claims::{registry, verify_claim, Claim, ClaimReport};

type DM = DMatrix<C64>;

/// `[Π₊, Π₋]` of one measured axis, from a numerical eigendecomposition.
pub fn eigen_projectors(axis: PauliAxis) -> [DMatrix<C64>; 2] {
    let eig = SymmetricEigen::new(pauli(axis).to_dmatrix());
    let mut up = DM::zeros(2, 2);
    let mut down = DM::zeros(2, 2);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let proj = v * v.adjoint();
        if lambda > 0.0 {
            up += proj;
        } else {
            down += proj;
        }
    }
    [up, down]
}

fn conjugate(p: &DM, frame: &CMat2) -> DM {
    let f = frame.to_dmatrix();
    &f * p * f.adjoint()
}

fn trace_re(m: &DM) -> f64 {
    m.trace().re
}

/// `p(k, m | ii)` for one axis, ordered `uu, ud, du, dd`.
pub fn brute_axis(scenario: &Scenario, frames: &FramePair, axis: PauliAxis) -> [f64; 4] {
    let base = eigen_projectors(axis);
    let early: Vec<DM> = base.iter().map(|p| conjugate(p, &frames.early)).collect();
    let late: Vec<DM> = base.iter().map(|p| conjugate(p, &frames.late)).collect();
    let mut out = [0.0; 4];
    for (slot, (a, b)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        out[slot] = match scenario {
            Scenario::CommonCause { rho } => {
                let joint = early[a].kronecker(&late[b]);
                trace_re(&(rho.to_dmatrix() * joint))
            }
            Scenario::DirectCause { unitary, early_state } => {
                // Lüders update of the early qubit, then evolve and measure.
                let u = unitary.to_dmatrix();
                let collapsed = &early[a] * early_state.to_dmatrix() * &early[a];
                let evolved = &u * collapsed * u.adjoint();
                trace_re(&(&late[b] * evolved))
            }
        };
    }
    out
}

/// `P` from first principles.
pub fn brute_stat(scenario: &Scenario, frames: &FramePair) -> StatP {
    let c = PauliAxis::MEASURED.map(|axis| {
        let p = brute_axis(scenario, frames, axis);
        (p[0] + p[3] - p[1] - p[2]) / p.iter().sum::<f64>()
    });
    StatP::from_array(c)
}

/// `P_V`: the same rotation applied to both observables.
pub fn brute_stat_rotated(scenario: &Scenario, v: &LocalRotation) -> StatP {
    let m = v.realize();
    brute_stat(scenario, &FramePair { early: m, late: m })
}
