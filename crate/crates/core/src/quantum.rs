//! Quantum primitives: Pauli matrices, the Bell basis, spectral projectors
//! and the parameterized unitaries that describe direct causes and frame
//! rotations.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, tensor, CMat2, CMat4, CVec, C64};

/// One of σ₀ (identity), σ₁ = X, σ₂ = Y, σ₃ = Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
    /// The three axes that are actually measured.
    pub const MEASURED: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_measurement(self) -> bool {
        self != PauliAxis::I
    }

    pub fn label(self) -> &'static str {
        ["I", "X", "Y", "Z"][self.index()]
    }
}

/// The Pauli matrix for `axis`.
pub fn pauli(axis: PauliAxis) -> CMat2 {
    let (o, z, i) = (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0));
    match axis {
        PauliAxis::I => CMat2::identity(),
        PauliAxis::X => CMat2::from_rows([[z, o], [o, z]]),
        PauliAxis::Y => CMat2::from_rows([[z, -i], [i, z]]),
        PauliAxis::Z => CMat2::from_rows([[o, z], [z, -o]]),
    }
}

/// Eigenvectors `[|ξ↑⟩, |ξ↓⟩]` of a measured Pauli, for eigenvalues +1 and −1.
pub fn eigenvectors(axis: PauliAxis) -> Result<[CVec<2>; 2]> {
    let h = c64(FRAC_1_SQRT_2, 0.0);
    let hi = c64(0.0, FRAC_1_SQRT_2);
    match axis {
        PauliAxis::I => Err(Error::NotMeasurementAxis(0)),
        PauliAxis::X => Ok([[h, h], [h, -h]]),
        PauliAxis::Y => Ok([[h, hi], [h, -hi]]),
        PauliAxis::Z => Ok([[c64(1.0, 0.0), c64(0.0, 0.0)], [c64(0.0, 0.0), c64(1.0, 0.0)]]),
    }
}

/// Spectral projectors of σᵢ and the same-outcome joint projectors of σᵢ⊗σᵢ.
///
/// `xi_uu + xi_dd` is the projector onto the +1 eigenspace of σᵢ⊗σᵢ; each
/// of the two terms is rank one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProjectors {
    pub axis: PauliAxis,
    pub xi_up: CMat2,
    pub xi_down: CMat2,
    pub xi_uu: CMat4,
    pub xi_dd: CMat4,
}

impl SpectralProjectors {
    pub fn new(axis: PauliAxis) -> Result<Self> {
        if !axis.is_measurement() {
            return Err(Error::NotMeasurementAxis(axis.index()));
        }
        let half = c64(0.5, 0.0);
        let s = pauli(axis);
        let id = CMat2::identity();
        let xi_up = (id + s).scale(half);
        let xi_down = (id - s).scale(half);
        Ok(Self { axis, xi_up, xi_down, xi_uu: tensor(&xi_up, &xi_up), xi_dd: tensor(&xi_down, &xi_down) })
    }

    /// `xi_uu + xi_dd`
    pub fn same_outcome(&self) -> CMat4 {
        self.xi_uu + self.xi_dd
    }
}

/// The four Bell states, ordered so that their correlation vectors are
/// (1,−1,1), (−1,1,1), (1,1,−1), (−1,−1,−1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellBasis {
    pub states: [CVec<4>; 4],
    /// Unitary whose columns are the states.
    pub matrix: CMat4,
}

/// `b₁ = Φ⁺, b₂ = Φ⁻, b₃ = Ψ⁺, b₄ = Ψ⁻` in the computational basis |00⟩,|01⟩,|10⟩,|11⟩.
pub fn bell_basis() -> BellBasis {
    let h = c64(FRAC_1_SQRT_2, 0.0);
    let z = c64(0.0, 0.0);
    let states = [[h, z, z, h], [h, z, z, -h], [z, h, h, z], [z, h, -h, z]];
    let mut matrix = CMat4::zeros();
    for (j, s) in states.iter().enumerate() {
        for (i, &a) in s.iter().enumerate() {
            matrix.0[i][j] = a;
        }
    }
    BellBasis { states, matrix }
}

/// Weights `p₀..p₃` of the four Pauli vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliMixture {
    pub p: [f64; 4],
}

impl PauliMixture {
    pub fn new(p: [f64; 4], tol: f64) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(&neg) = p.iter().find(|&&x| x < -tol) {
            return Err(Error::NegativeWeight(neg));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::WeightsNotNormalized(sum));
        }
        Ok(Self { p })
    }

    /// `p₀ + p₃`
    pub fn c1(&self) -> f64 {
        self.p[0] + self.p[3]
    }

    /// `p₀ − p₃`
    pub fn c2(&self) -> f64 {
        self.p[0] - self.p[3]
    }

    /// `p₁ + p₂`
    pub fn d1(&self) -> f64 {
        self.p[1] + self.p[2]
    }

    /// `p₂ − p₁`
    pub fn d2(&self) -> f64 {
        self.p[2] - self.p[1]
    }
}

/// Discrete branch labels `(n₁, n₂, k₁, k₂)` selecting one member of a
/// candidate unitary family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchLabels {
    pub n1: u8,
    pub n2: u8,
    pub k1: u8,
    pub k2: u8,
}

impl BranchLabels {
    /// All sixteen label tuples in lexicographic order.
    pub fn all() -> impl Iterator<Item = BranchLabels> {
        (0u8..16).map(|b| BranchLabels { n1: (b >> 3) & 1, n2: (b >> 2) & 1, k1: (b >> 1) & 1, k2: b & 1 })
    }

    /// `(1−n₁, n₂, 1−k₁, k₂)`: flips the sign of the identity component only.
    pub fn mirrored(self) -> Self {
        Self { n1: 1 - self.n1, k1: 1 - self.k1, ..self }
    }

    /// `(n₁, n₂, 1−k₁, 1−k₂)`: the same matrix up to an overall sign.
    pub fn negated(self) -> Self {
        Self { k1: 1 - self.k1, k2: 1 - self.k2, ..self }
    }
}

/// A direct cause in canonical form
///
/// ```text
/// U = e^{iθ/2} [  e^{iγ₁} cos φ₀    e^{iγ₂} sin φ₀ ]
///              [ −e^{−iγ₂} sin φ₀   e^{−iγ₁} cos φ₀ ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalUnitary {
    pub phi0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Global phase angle; `θ/2 ∈ [0, π)`.
    pub theta: f64,
    /// Labels that produced this member when it came from a candidate family.
    pub labels: Option<BranchLabels>,
}

impl CanonicalUnitary {
    pub fn new(phi0: f64, gamma1: f64, gamma2: f64, theta: f64) -> Self {
        Self { phi0, gamma1, gamma2, theta, labels: None }
    }

    pub fn realize(&self) -> CMat2 {
        let (c, s) = (self.phi0.cos(), self.phi0.sin());
        let g1 = C64::from_polar(1.0, self.gamma1);
        let g2 = C64::from_polar(1.0, self.gamma2);
        let m = CMat2::from_rows([[g1 * c, g2 * s], [-g2.conj() * s, g1.conj() * c]]);
        m.scale(C64::from_polar(1.0, self.theta / 2.0))
    }

    /// `cos²φ₀ = p₀ + p₃`
    pub fn c1(&self) -> f64 {
        self.phi0.cos().powi(2)
    }

    pub fn c2(&self) -> f64 {
        self.c1() * (2.0 * self.gamma1).cos()
    }

    /// `sin²φ₀ = p₁ + p₂`
    pub fn d1(&self) -> f64 {
        self.phi0.sin().powi(2)
    }

    pub fn d2(&self) -> f64 {
        self.d1() * (2.0 * self.gamma2).cos()
    }

    /// The Pauli-vertex weights of this unitary's correlation vector.
    pub fn mixture(&self) -> PauliMixture {
        let (c1, d1) = (self.c1(), self.d1());
        let (g1c, g1s) = (self.gamma1.cos().powi(2), self.gamma1.sin().powi(2));
        let (g2c, g2s) = (self.gamma2.cos().powi(2), self.gamma2.sin().powi(2));
        PauliMixture { p: [c1 * g1c, d1 * g2s, d1 * g2c, c1 * g1s] }
    }
}

/// Frame rotation
///
/// ```text
/// V = [  e^{iψ} cos φ    e^{iχ} sin φ ]
///     [ −e^{−iχ} sin φ   e^{−iψ} cos φ ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalRotation {
    pub psi: f64,
    pub chi: f64,
    pub phi: f64,
}

impl LocalRotation {
    pub const IDENTITY: LocalRotation = LocalRotation { psi: 0.0, chi: 0.0, phi: 0.0 };

    pub fn new(psi: f64, chi: f64, phi: f64) -> Self {
        Self { psi, chi, phi }
    }

    pub fn realize(&self) -> CMat2 {
        let (c, s) = (self.phi.cos(), self.phi.sin());
        let ep = C64::from_polar(1.0, self.psi);
        let ec = C64::from_polar(1.0, self.chi);
        CMat2::from_rows([[ep * c, ec * s], [-ec.conj() * s, ep.conj() * c]])
    }
}

/// Bell-basis amplitudes `w_j e^{iθ_j}` of a pure two-qubit state; `θ₁ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellWeights {
    w: [f64; 4],
    theta: [f64; 4],
}

impl BellWeights {
    /// `phases` are `θ₂, θ₃, θ₄`.
    pub fn new(w: [f64; 4], phases: [f64; 3]) -> Result<Self> {
        if w.iter().chain(&phases).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = w.iter().map(|x| x * x).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { w, theta: [0.0, phases[0], phases[1], phases[2]] })
    }

    pub fn weights(&self) -> [f64; 4] {
        self.w
    }

    pub fn phases(&self) -> [f64; 4] {
        self.theta
    }

    /// `w_j e^{iθ_j}`
    pub fn amplitudes(&self) -> [C64; 4] {
        std::array::from_fn(|j| C64::from_polar(self.w[j], self.theta[j]))
    }

    /// `Σ_j w_j e^{iθ_j} |b_j⟩` in the computational basis.
    pub fn state_vector(&self) -> CVec<4> {
        bell_basis().matrix.apply(&self.amplitudes())
    }
}

/// Rank-one density `|φ⟩⟨φ|` for `|φ⟩ = Σ w_j e^{iθ_j} |b_j⟩`.
pub fn state_from_bell_weights(bw: &BellWeights) -> CMat4 {
    let v = bw.state_vector();
    CMat4::outer(&v, &v)
}

/// Convex combination of two-qubit densities.
pub fn mixed_state(components: &[(f64, CMat4)]) -> Result<CMat4> {
    if components.is_empty() {
        return Err(Error::EmptyMixture);
    }
    if let Some(&(neg, _)) = components.iter().find(|(w, _)| *w < 0.0) {
        return Err(Error::NegativeWeight(neg));
    }
    let total: f64 = components.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::WeightsNotNormalized(total));
    }
    let rho = components.iter().fold(CMat4::zeros(), |acc, (w, m)| acc + m.scale_re(*w));
    if !rho.is_density(1e-10) {
        return Err(Error::NotDensity);
    }
    Ok(rho)
}

/// Arbitrary U(2) element
///
/// ```text
/// U = [ a₁ + i a₂              b₁ + i b₂          ]
///     [ −e^{iα}(b₁ − i b₂)     e^{iα}(a₁ − i a₂)  ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralUnitaryForm {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub alpha: f64,
}

impl GeneralUnitaryForm {
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64, alpha: f64) -> Result<Self> {
        let norm = a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { a1, a2, b1, b2, alpha })
    }

    pub fn realize(&self) -> CMat2 {
        let e = C64::from_polar(1.0, self.alpha);
        CMat2::from_rows([
            [c64(self.a1, self.a2), c64(self.b1, self.b2)],
            [-e * c64(self.b1, -self.b2), e * c64(self.a1, -self.a2)],
        ])
    }
}

/// Maximally mixed single-qubit state.
pub fn maximally_mixed_qubit() -> CMat2 {
    CMat2::identity().scale_re(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

    #[test]
    fn pauli_squares_to_identity() {
        for a in PauliAxis::ALL {
            let s = pauli(a);
            assert!((s * s).approx_eq(&CMat2::identity(), 1e-15));
            if a.is_measurement() {
                assert!(s.trace().norm() < 1e-15);
            }
        }
        assert_eq!(pauli(PauliAxis::I), CMat2::identity());
        assert_eq!(pauli(PauliAxis::Z), CMat2::diag([c64(1.0, 0.0), c64(-1.0, 0.0)]));
    }

    #[test]
    fn eigenvectors_match_eigenvalues() {
        for a in PauliAxis::MEASURED {
            let [up, down] = eigenvectors(a).unwrap();
            let s = pauli(a);
            let su = s.apply(&up);
            let sd = s.apply(&down);
            for i in 0..2 {
                assert!((su[i] - up[i]).norm() < 1e-15);
                assert!((sd[i] + down[i]).norm() < 1e-15);
            }
        }
        assert!(eigenvectors(PauliAxis::I).is_err());
    }

    #[test]
    fn projectors_resolve_identity() {
        for a in PauliAxis::MEASURED {
            let p = SpectralProjectors::new(a).unwrap();
            assert!((p.xi_up + p.xi_down).approx_eq(&CMat2::identity(), 1e-12));
            assert!((p.xi_up * p.xi_down).max_abs() < 1e-12);
            assert!(p.xi_up.is_idempotent(1e-12) && p.xi_down.is_idempotent(1e-12));
            assert!(p.xi_uu.is_idempotent(1e-12) && p.xi_dd.is_idempotent(1e-12));
            let ss = tensor(&pauli(a), &pauli(a));
            assert!((ss * p.same_outcome()).approx_eq(&p.same_outcome(), 1e-12));
            assert!((p.xi_uu.trace().re - 1.0).abs() < 1e-12);
        }
        assert_eq!(SpectralProjectors::new(PauliAxis::I), Err(Error::NotMeasurementAxis(0)));
    }

    #[test]
    fn bell_basis_is_unitary() {
        let b = bell_basis();
        assert!((b.matrix.adjoint() * b.matrix).approx_eq(&CMat4::identity(), 1e-12));
    }

    #[test]
    fn canonical_identity() {
        let u = CanonicalUnitary::new(0.0, 0.0, 0.0, 0.0).realize();
        assert!(u.approx_eq(&CMat2::identity(), 1e-15));
    }

    #[test]
    fn canonical_mixture_matches_c_d() {
        let u = CanonicalUnitary::new(0.7, 1.1, -2.3, 0.4);
        let m = u.mixture();
        assert!((m.c1() - u.c1()).abs() < 1e-12);
        assert!((m.c2() - u.c2()).abs() < 1e-12);
        assert!((m.d1() - u.d1()).abs() < 1e-12);
        assert!((m.d2() - u.d2()).abs() < 1e-12);
        assert!((m.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(u.realize().is_unitary(1e-12));
    }

    #[test]
    fn rotation_examples() {
        assert!(LocalRotation::IDENTITY.realize().approx_eq(&CMat2::identity(), 1e-15));
        let flip = LocalRotation::new(0.0, 0.0, FRAC_PI_2).realize();
        let expect = CMat2::from_rows([[c64(0.0, 0.0), c64(1.0, 0.0)], [c64(-1.0, 0.0), c64(0.0, 0.0)]]);
        assert!(flip.approx_eq(&expect, 1e-15));
        let v0 = LocalRotation::new(0.3, -0.3, FRAC_PI_8).realize();
        assert!((v0.adjoint() * v0).approx_eq(&CMat2::identity(), 1e-12));
        let det = v0.0[0][0] * v0.0[1][1] - v0.0[0][1] * v0.0[1][0];
        assert!((det.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_weights_validation() {
        assert_eq!(BellWeights::new([1.0, 1.0, 0.0, 0.0], [0.0; 3]), Err(Error::NotNormalized(2.0)));
        assert_eq!(BellWeights::new([f64::NAN, 0.0, 0.0, 0.0], [0.0; 3]), Err(Error::NonFinite));
        let bw = BellWeights::new([1.0, 0.0, 0.0, 0.0], [1.0, 2.0, 3.0]).unwrap();
        let rho = state_from_bell_weights(&bw);
        let b1 = bell_basis().states[0];
        assert!(rho.approx_eq(&CMat4::outer(&b1, &b1), 1e-15));
        assert!(rho.is_density(1e-12));
    }

    #[test]
    fn mixed_state_checks() {
        let b = bell_basis();
        let projs: Vec<CMat4> = b.states.iter().map(|s| CMat4::outer(s, s)).collect();
        let single = mixed_state(&[(1.0, projs[2])]).unwrap();
        assert!(single.approx_eq(&projs[2], 1e-15));
        let all: Vec<(f64, CMat4)> = projs.iter().map(|&p| (0.25, p)).collect();
        let mm = mixed_state(&all).unwrap();
        assert!(mm.approx_eq(&CMat4::identity().scale_re(0.25), 1e-15));
        assert_eq!(mixed_state(&[(-0.5, projs[0]), (1.5, projs[1])]), Err(Error::NegativeWeight(-0.5)));
        assert_eq!(mixed_state(&[]), Err(Error::EmptyMixture));
        assert!(matches!(mixed_state(&[(0.5, projs[0])]), Err(Error::WeightsNotNormalized(_))));
    }

    #[test]
    fn general_form_is_unitary() {
        let s = 0.5f64;
        let g = GeneralUnitaryForm::new(s, s, s, -s, 0.9).unwrap();
        assert!(g.realize().is_unitary(1e-12));
        assert!(GeneralUnitaryForm::new(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn label_involutions() {
        let all: Vec<_> = BranchLabels::all().collect();
        assert_eq!(all.len(), 16);
        for l in all {
            assert_eq!(l.mirrored().mirrored(), l);
            assert_eq!(l.negated().negated(), l);
            assert_ne!(l.mirrored(), l.negated());
        }
    }
}
