//! The correlation statistic `P = (C₁₁, C₂₂, C₃₃)`.
//!
//! Exact values come from the Born rule under arbitrary early/late observable
//! frames; estimates come from finite shot sampling. The closed forms at the
//! bottom of this module are independent routes to the same numbers and are
//! cross-checked against the [`crate::oracle`].

use std::fmt;
use std::ops::Index;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, tensor_vec, CMat2, CMat4, C64};
use crate::quantum::{
    eigenvectors, maximally_mixed_qubit, BellWeights, CanonicalUnitary, GeneralUnitaryForm, LocalRotation, PauliAxis,
};

/// Tolerance for validating frames and scenario matrices.
pub const STRUCTURE_TOL: f64 = 1e-9;

/// Same-axis correlations `(C₁₁, C₂₂, C₃₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StatP {
    pub c11: f64,
    pub c22: f64,
    pub c33: f64,
}

impl StatP {
    pub const fn new(c11: f64, c22: f64, c33: f64) -> Self {
        Self { c11, c22, c33 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.c11, self.c22, self.c33]
    }

    /// Constant `b` of the plane `c11 + c22 + c33 = b` through this point.
    pub fn plane_constant(&self) -> f64 {
        self.c11 + self.c22 + self.c33
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &StatP) -> f64 {
        self.to_array().iter().zip(other.to_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &StatP, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn in_range(&self, tol: f64) -> bool {
        self.to_array().iter().all(|c| c.abs() <= 1.0 + tol)
    }

    pub fn dot(&self, v: [f64; 3]) -> f64 {
        self.c11 * v[0] + self.c22 * v[1] + self.c33 * v[2]
    }
}

impl Index<usize> for StatP {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.c11,
            1 => &self.c22,
            2 => &self.c33,
            _ => panic!("StatP index {i} out of range"),
        }
    }
}

impl fmt::Display for StatP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.4}, {:+.4}, {:+.4})", self.c11, self.c22, self.c33)
    }
}

/// Cumulative observable frames for the early and late measurement.
///
/// Measuring in frame `F` means measuring `F σᵢ F†`. Applying a further
/// rotation `W` right-composes: `F ← F·W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePair {
    pub early: CMat2,
    pub late: CMat2,
}

impl FramePair {
    pub fn identity() -> Self {
        Self { early: CMat2::identity(), late: CMat2::identity() }
    }

    pub fn new(early: CMat2, late: CMat2) -> Result<Self> {
        let f = Self { early, late };
        f.validate()?;
        Ok(f)
    }

    pub fn same(frame: CMat2) -> Result<Self> {
        Self::new(frame, frame)
    }

    pub fn validate(&self) -> Result<()> {
        if self.early.is_unitary(STRUCTURE_TOL) && self.late.is_unitary(STRUCTURE_TOL) {
            Ok(())
        } else {
            Err(Error::NotUnitary)
        }
    }

    /// Right-compose the same rotation onto both frames.
    pub fn then(&self, w: &CMat2) -> Self {
        self.then_split(w, w)
    }

    /// Right-compose distinct rotations onto the early and late frames.
    pub fn then_split(&self, early: &CMat2, late: &CMat2) -> Self {
        Self { early: self.early * *early, late: self.late * *late }
    }

    pub fn then_rotation(&self, v: &LocalRotation) -> Self {
        self.then(&v.realize())
    }
}

impl Default for FramePair {
    fn default() -> Self {
        Self::identity()
    }
}

/// Outcome index for `(k, m)` with `0 = up`, `1 = down`: `uu, ud, du, dd`.
pub const OUTCOMES: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Joint outcome probabilities `p(k, m | ii)` for the three measured axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    /// `probs[axis][outcome]`, axis 0..3 for X, Y, Z; outcomes as in [`OUTCOMES`].
    pub probs: [[f64; 4]; 3],
}

impl JointDistribution {
    pub fn axis(&self, axis: PauliAxis) -> Result<[f64; 4]> {
        match axis {
            PauliAxis::I => Err(Error::NotMeasurementAxis(0)),
            a => Ok(self.probs[a.index() - 1]),
        }
    }

    /// Each axis sums to one and no entry is below `-tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.probs.iter().all(|row| (row.iter().sum::<f64>() - 1.0).abs() <= tol && row.iter().all(|&p| p >= -tol))
    }

    pub fn uniform() -> Self {
        Self { probs: [[0.25; 4]; 3] }
    }
}

/// Observed correlation of one axis: `p(k=m) − p(k≠m)`.
pub fn correlation(row: &[f64; 4]) -> f64 {
    let total: f64 = row.iter().sum();
    (row[0] + row[3] - row[1] - row[2]) / total
}

/// The two explanations for the observed correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// A two-qubit state shared by both measurements.
    CommonCause { rho: CMat4 },
    /// The late qubit is `U` applied to the (collapsed) early qubit.
    DirectCause { unitary: CMat2, early_state: CMat2 },
}

impl Scenario {
    pub fn common_cause(rho: CMat4) -> Result<Self> {
        if !rho.is_density(STRUCTURE_TOL) {
            return Err(Error::NotDensity);
        }
        Ok(Scenario::CommonCause { rho })
    }

    /// Direct cause with the maximally mixed early state.
    pub fn direct_cause(unitary: CMat2) -> Result<Self> {
        Self::direct_cause_with_state(unitary, maximally_mixed_qubit())
    }

    pub fn direct_cause_with_state(unitary: CMat2, early_state: CMat2) -> Result<Self> {
        if !unitary.is_unitary(STRUCTURE_TOL) {
            return Err(Error::NotUnitary);
        }
        if !early_state.is_density(STRUCTURE_TOL) {
            return Err(Error::NotDensity);
        }
        Ok(Scenario::DirectCause { unitary, early_state })
    }

    pub fn is_common_cause(&self) -> bool {
        matches!(self, Scenario::CommonCause { .. })
    }

    /// Exact joint distribution; assumes the scenario was validated at construction.
    pub fn joint(&self, frames: &FramePair) -> JointDistribution {
        JointDistribution { probs: std::array::from_fn(|i| self.axis_probabilities(frames, PauliAxis::MEASURED[i])) }
    }

    /// Exact `p(k, m | ii)` for one measured axis.
    pub fn axis_probabilities(&self, frames: &FramePair, axis: PauliAxis) -> [f64; 4] {
        let Ok(xi) = eigenvectors(axis) else {
            return [0.25; 4];
        };
        let early = xi.map(|v| frames.early.apply(&v));
        let late = xi.map(|v| frames.late.apply(&v));
        let raw = match self {
            Scenario::CommonCause { rho } => OUTCOMES.map(|(k, m)| {
                let v = tensor_vec(&early[k], &late[m]);
                inner(&v, &rho.apply(&v)).re
            }),
            Scenario::DirectCause { unitary, early_state } => OUTCOMES.map(|(a, b)| {
                let first = inner(&early[a], &early_state.apply(&early[a])).re;
                let transition = inner(&late[b], &unitary.apply(&early[a])).norm_sqr();
                first * transition
            }),
        };
        raw.map(|p| p.clamp(0.0, 1.0))
    }

    pub fn exact_stat(&self, frames: &FramePair) -> StatP {
        stat_from_joint(&self.joint(frames))
    }
}

/// Joint distribution for a shared two-qubit state.
pub fn joint_common(rho: &CMat4, frames: &FramePair) -> Result<JointDistribution> {
    frames.validate()?;
    Ok(Scenario::common_cause(*rho)?.joint(frames))
}

/// Joint distribution for a direct cause `U` acting on the collapsed early qubit.
pub fn joint_causal(unitary: &CMat2, early_state: &CMat2, frames: &FramePair) -> Result<JointDistribution> {
    frames.validate()?;
    Ok(Scenario::direct_cause_with_state(*unitary, *early_state)?.joint(frames))
}

/// `Cᵢᵢ = p(k=m|ii) − p(k≠m|ii)`
pub fn stat_from_joint(j: &JointDistribution) -> StatP {
    StatP::from_array(j.probs.map(|row| correlation(&row)))
}

/// Draw `shots` outcome pairs from a four-point distribution.
pub fn sample_counts<R: Rng + ?Sized>(probs: &[f64; 4], shots: u32, rng: &mut R) -> Result<[u32; 4]> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let total: f64 = probs.iter().sum();
    let mut counts = [0u32; 4];
    for _ in 0..shots {
        let mut u = rng.random::<f64>() * total;
        let mut pick = 3;
        for (i, &p) in probs.iter().enumerate() {
            if u < p {
                pick = i;
                break;
            }
            u -= p;
        }
        counts[pick] += 1;
    }
    Ok(counts)
}

/// Estimate `P` from `shots_per_axis` samples on each axis.
pub fn sample_stat<R: Rng + ?Sized>(j: &JointDistribution, shots_per_axis: u32, rng: &mut R) -> Result<StatP> {
    let mut out = [0.0; 3];
    for (c, row) in out.iter_mut().zip(&j.probs) {
        let counts = sample_counts(row, shots_per_axis, rng)?;
        *c = correlation(&counts.map(f64::from));
    }
    Ok(StatP::from_array(out))
}

/// `C₃₃` under the same-frame rotation `v` for a pure state with `w₄ = 0`,
/// evaluated through the τ-matrix closed form.
pub fn c33_closed_common(bw: &BellWeights, v: &LocalRotation) -> Result<f64> {
    let w4 = bw.weights()[3];
    if w4.abs() > 1e-12 {
        return Err(Error::NonZeroW4(w4));
    }
    let s = v.psi + v.chi;
    let phi = v.phi;
    let sin2 = (2.0 * phi).sin().powi(2);
    let i = C64::new(0.0, 1.0);
    let tau1 = i * 0.5 * sin2 * (2.0 * s).sin();
    let tau2 = i * 0.5 * (4.0 * phi).sin() * s.sin();
    let tau3 = C64::from(-0.5 * (4.0 * phi).sin() * s.cos());
    let tau4 = sin2 * s.sin().powi(2);
    let tau5 = sin2 * s.cos().powi(2);
    let one = C64::from(1.0);
    let zero = C64::from(0.0);
    let m = CMat4::from_rows([
        [one - tau4, -tau1, -tau2, zero],
        [tau1, one - tau5, tau3, zero],
        [tau2, tau3, C64::from(0.5 * (1.0 - (4.0 * phi).cos())), zero],
        [zero, zero, zero, zero],
    ]);
    let a = bw.amplitudes();
    Ok(2.0 * inner(&a, &m.apply(&a)).re - 1.0)
}

/// Coefficients `(a₁, a₂, b₁, b₂)` of `V†UV` for a canonical `U`.
pub fn conjugated_coefficients(u: &CanonicalUnitary, v: &LocalRotation) -> [f64; 4] {
    let (c0, s0) = (u.phi0.cos(), u.phi0.sin());
    let (g1, g2) = (u.gamma1, u.gamma2);
    let (psi, chi, phi) = (v.psi, v.chi, v.phi);
    let (cp2, sp2) = (phi.cos().powi(2), phi.sin().powi(2));
    let s2p = (2.0 * phi).sin();
    let a1 = c0 * g1.cos();
    let a2 = c0 * (2.0 * phi).cos() * g1.sin() - s0 * s2p * (g2 - psi - chi).sin();
    let b1 =
        s0 * cp2 * (g2 - 2.0 * psi).cos() + s0 * sp2 * (g2 - 2.0 * chi).cos() - c0 * s2p * (chi - psi).sin() * g1.sin();
    let b2 = -s0 * sp2 * (g2 - 2.0 * chi).sin()
        + s0 * cp2 * (g2 - 2.0 * psi).sin()
        + c0 * s2p * (chi - psi).cos() * g1.sin();
    [a1, a2, b1, b2]
}

/// `P(V†UV)` through the conjugated coefficients.
pub fn stat_closed_causal(u: &CanonicalUnitary, v: &LocalRotation) -> StatP {
    let [a1, a2, b1, b2] = conjugated_coefficients(u, v);
    StatP::new(2.0 * (a1 * a1 + b2 * b2) - 1.0, 2.0 * (a1 * a1 + b1 * b1) - 1.0, 2.0 * (a1 * a1 + a2 * a2) - 1.0)
}

/// The `c`, `d` auxiliaries of the general-form closed expression.
pub fn general_form_cd(g: &GeneralUnitaryForm) -> (f64, f64) {
    let (sa, ca) = g.alpha.sin_cos();
    let c = 0.5 + g.a1 * g.a2 * sa + 0.5 * ca * (g.a1 * g.a1 - g.a2 * g.a2);
    let d = g.b1 * g.b2 * sa + 0.5 * ca * (g.b1 * g.b1 - g.b2 * g.b2);
    (c, d)
}

/// `P(U)` for an arbitrary U(2) element in `(a₁, a₂, b₁, b₂, α)` form.
///
/// The middle entry is `2(c + d) − 1`; the `+1` variant that sometimes
/// appears in print violates `P(I) = (1, 1, 1)`.
pub fn stat_general_unitary(g: &GeneralUnitaryForm) -> StatP {
    let (c, d) = general_form_cd(g);
    StatP::new(2.0 * (c - d) - 1.0, 2.0 * (c + d) - 1.0, 2.0 * (g.a1 * g.a1 + g.a2 * g.a2) - 1.0)
}
