//! Random scenario generators.
//!
//! Parameters are drawn uniformly over their legal intervals rather than from
//! the Haar measure:
//!
//! - direct causes: `φ₀ ∈ [0, π/2]`, `γ₁, γ₂, θ ∈ [0, 2π)`;
//! - pure common causes: Bell magnitudes from a normalized uniform 4-vector,
//!   phases uniform in `[0, 2π)`;
//! - common causes: pure with probability ½, otherwise a mixture of 2 to 4
//!   pure states with normalized uniform weights;
//! - frame rotations: `ψ, χ ∈ [0, 2π)`, `φ ∈ [0, π)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;

use crate::linalg::{c64, CMat2, CMat4};
use crate::quantum::{
    mixed_state, state_from_bell_weights, BellWeights, CanonicalUnitary, LocalRotation, PauliMixture,
};

pub fn canonical_unitary<R: Rng + ?Sized>(rng: &mut R) -> CanonicalUnitary {
    CanonicalUnitary::new(
        rng.random_range(0.0..=FRAC_PI_2),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    )
}

pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> LocalRotation {
    LocalRotation::new(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU), rng.random_range(0.0..PI))
}

/// Magnitudes from a normalized uniform 4-vector, phases uniform.
pub fn bell_weights<R: Rng + ?Sized>(rng: &mut R) -> BellWeights {
    loop {
        let w: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let phases = std::array::from_fn(|_| rng.random_range(0.0..TAU));
        return BellWeights::new(w.map(|x| x / norm), phases).expect("normalized by construction");
    }
}

/// Bell weights with `w₄² ≥ min_w4_sq`, by rejection.
pub fn bell_weights_off_plane<R: Rng + ?Sized>(rng: &mut R, min_w4_sq: f64) -> BellWeights {
    loop {
        let bw = bell_weights(rng);
        if bw.weights()[3].powi(2) >= min_w4_sq {
            return bw;
        }
    }
}

pub fn pure_common_cause<R: Rng + ?Sized>(rng: &mut R) -> CMat4 {
    state_from_bell_weights(&bell_weights(rng))
}

pub fn common_cause<R: Rng + ?Sized>(rng: &mut R) -> CMat4 {
    if rng.random_bool(0.5) {
        return pure_common_cause(rng);
    }
    let n = rng.random_range(2..=4usize);
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>().max(1e-9)).collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(f64, CMat4)> = raw.iter().map(|w| (w / total, pure_common_cause(rng))).collect();
    mixed_state(&parts).expect("convex combination of pure states")
}

/// Uniform point of the probability simplex.
pub fn pauli_mixture<R: Rng + ?Sized>(rng: &mut R) -> PauliMixture {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = e.iter().sum();
    PauliMixture { p: e.map(|x| x / total) }
}

/// Pure qubit state `|ψ⟩⟨ψ|` with uniform Bloch angles.
pub fn pure_qubit<R: Rng + ?Sized>(rng: &mut R) -> CMat2 {
    let t = rng.random_range(0.0..=PI);
    let f = rng.random_range(0.0..TAU);
    let v = [c64((t / 2.0).cos(), 0.0), c64((t / 2.0).sin() * f.cos(), (t / 2.0).sin() * f.sin())];
    CMat2::outer(&v, &v)
}
