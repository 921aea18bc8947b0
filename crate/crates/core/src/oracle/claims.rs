//! Registry of statements checked numerically against [`brute_stat`].
//!
//! Each claim draws random instances from its domain, evaluates both sides
//! and reports the worst absolute discrepancy.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{brute_axis, brute_stat, brute_stat_rotated, eigen_projectors};
use crate::error::{Error, Result};
use crate::geom::{
    candidate_states, candidate_unitaries, coords_tcc, coords_tdc, CornerStateForm, TCC_VERTICES, TDC_VERTICES,
};
use crate::linalg::{inner, tensor, CMat2, CMat4};
use crate::quantum::{
    bell_basis, maximally_mixed_qubit, state_from_bell_weights, BellWeights, GeneralUnitaryForm, LocalRotation,
    PauliAxis, SpectralProjectors,
};
use crate::random;
use crate::scheme::{apply_transfer, v0, VDesign, DEFAULT_GAP};
use crate::stats::{
    c33_closed_common, general_form_cd, stat_closed_causal, stat_general_unitary, FramePair, Scenario, StatP,
};

/// Outcome of one random instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub error: f64,
    /// Error of a deliberately wrong variant, when the claim carries one.
    pub contrast: Option<f64>,
    pub inputs: String,
}

impl Trial {
    fn new(error: f64, inputs: String) -> Self {
        Self { error, contrast: None, inputs }
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<Trial>;

pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub tolerance: f64,
    /// What the `contrast` error of a trial measures.
    pub contrast: Option<&'static str>,
    check: Check,
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim").field("id", &self.id).field("tolerance", &self.tolerance).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub samples: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Inputs of the worst instance, kept only when the claim fails.
    pub counterexample: Option<String>,
    pub note: Option<String>,
}

impl std::fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "claim={} samples={} max_abs_error={:.3e} tolerance={:.0e} passed={}",
            self.claim, self.samples, self.max_abs_error, self.tolerance, self.passed
        )?;
        if let Some(note) = &self.note {
            write!(f, " note=\"{note}\"")?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, " counterexample=\"{c}\"")?;
        }
        Ok(())
    }
}

static CLAIMS: [Claim; 16] = [
    Claim {
        id: "born-rule-agreement",
        statement: "joint distributions from the simulator match the brute-force Born rule under arbitrary frames",
        tolerance: 1e-9,
        contrast: None,
        check: born_rule_agreement,
    },
    Claim {
        id: "projector-agreement",
        statement: "eigendecomposition projectors equal the (I ± σ)/2 projectors",
        tolerance: 1e-12,
        contrast: None,
        check: projector_agreement,
    },
    Claim {
        id: "bell-phase-invariance",
        statement: "P of a pure state depends only on its Bell magnitudes: P = Σ w_j² P(b_j) for any phases",
        tolerance: 1e-9,
        contrast: None,
        check: bell_phase_invariance,
    },
    Claim {
        id: "mixture-round-trip",
        statement: "every member of the canonical family for a Pauli mixture p has P = Σ p_j P(σ_j)",
        tolerance: 1e-9,
        contrast: None,
        check: mixture_round_trip,
    },
    Claim {
        id: "projector-trace-form",
        statement:
            "p_V(k=m) = Tr((V⊗V)(ξ_uu + ξ_dd)(V⊗V)† ρ), and for pure states the Bell-basis form with amplitude vector w",
        tolerance: 1e-9,
        contrast: None,
        check: projector_trace_form,
    },
    Claim {
        id: "c33-closed-form",
        statement: "for w₄ = 0 the τ-matrix form gives C₃₃ under V, which depends on ψ, χ only through ψ + χ",
        tolerance: 1e-9,
        contrast: None,
        check: c33_closed_form,
    },
    Claim {
        id: "plane-invariance",
        statement: "a same-frame rotation keeps P in its plane: Σ entries of P_V equals Σ entries of P",
        tolerance: 1e-9,
        contrast: None,
        check: plane_invariance,
    },
    Claim {
        id: "plane-constant-agreement",
        statement:
            "for P in the overlap, Σ entries = 4p₀ − 1 = 1 − 4w₄², and the reconstructed pure state reproduces P",
        tolerance: 1e-9,
        contrast: None,
        check: plane_constant_agreement,
    },
    Claim {
        id: "conjugated-unitary-coefficients",
        statement: "P_V(U) = P(V†UV) through the closed (a₁, a₂, b₁, b₂) coefficients",
        tolerance: 1e-9,
        contrast: None,
        check: conjugated_unitary_coefficients,
    },
    Claim {
        id: "four-classes",
        statement: "the canonical family takes at most four values of P_V, constant on each label class",
        tolerance: 1e-9,
        contrast: None,
        check: four_classes,
    },
    Claim {
        id: "target-vertex",
        statement: "the designed V for class k sends every member of that class to (2p₀ − 1, 2p₀ − 1, 1)",
        tolerance: 1e-9,
        contrast: None,
        check: target_vertex,
    },
    Claim {
        id: "exclusion-off-apex-plane",
        statement: "for any common cause and any V, every entry of P_V is at most 1 − 2⟨b₄|ρ|b₄⟩",
        tolerance: 1e-9,
        contrast: None,
        check: exclusion_off_apex_plane,
    },
    Claim {
        id: "corner-c33-identity",
        statement:
            "for a |00⟩,|11⟩-supported state, C₃₃ under V is cos²2φ + 2 sin²2φ (f₂ cos 2s − f₃ sin 2s) with s = ψ + χ",
        tolerance: 1e-9,
        contrast: None,
        check: corner_c33_identity,
    },
    Claim {
        id: "v0-apex-shift",
        statement: "V₀ moves C₃₃ from 1 to ½ for every cause with P = (0, 0, 1)",
        tolerance: 1e-9,
        contrast: None,
        check: v0_apex_shift,
    },
    Claim {
        id: "transfer-to-minus-plane",
        statement:
            "the bit-flip transfer sends the diagonal corner states and every U with P = (0, 0, 1) to (0, 0, −1)",
        tolerance: 1e-9,
        contrast: None,
        check: transfer_to_minus_plane,
    },
    Claim {
        id: "general-form-sign",
        statement: "P(U) for a general U(2) element has middle entry 2(c + d) − 1",
        tolerance: 1e-9,
        contrast: Some("printed 2(c + d) + 1 variant"),
        check: general_form_sign,
    },
];

pub fn registry() -> &'static [Claim] {
    &CLAIMS
}

pub fn find_claim(id: &str) -> Result<&'static Claim> {
    CLAIMS.iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

/// Run `samples` random instances of the claim `id`.
pub fn verify_claim(id: &str, samples: usize, rng: &mut ChaCha8Rng) -> Result<ClaimReport> {
    let claim = find_claim(id)?;
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let mut worst: Option<Trial> = None;
    let mut contrast = f64::NEG_INFINITY;
    for _ in 0..samples {
        let mut t = (claim.check)(rng)?;
        if t.error.is_nan() {
            t.error = f64::INFINITY;
        }
        if let Some(c) = t.contrast {
            contrast = contrast.max(if c.is_nan() { f64::INFINITY } else { c });
        }
        if worst.as_ref().is_none_or(|w| t.error > w.error) {
            worst = Some(t);
        }
    }
    let worst = worst.expect("at least one sample");
    let passed = worst.error <= claim.tolerance;
    let note = claim.contrast.map(|label| format!("{label}: max_abs_error={contrast:.3e}"));
    Ok(ClaimReport {
        claim: claim.id.to_string(),
        samples,
        max_abs_error: worst.error,
        tolerance: claim.tolerance,
        passed,
        counterexample: (!passed).then_some(worst.inputs),
        note,
    })
}

fn same_frames(v: &LocalRotation) -> FramePair {
    let m = v.realize();
    FramePair { early: m, late: m }
}

fn vertex_mix(weights: &[f64; 4], vertices: &[[f64; 3]; 4]) -> StatP {
    let mut out = [0.0; 3];
    for (w, v) in weights.iter().zip(vertices) {
        for i in 0..3 {
            out[i] += w * v[i];
        }
    }
    StatP::from_array(out)
}

fn random_unitary(rng: &mut ChaCha8Rng) -> CMat2 {
    random::canonical_unitary(rng).realize()
}

fn random_scenario(rng: &mut ChaCha8Rng) -> Result<Scenario> {
    if rng.random_bool(0.5) {
        Scenario::common_cause(random::common_cause(rng))
    } else {
        let early = if rng.random_bool(0.5) { maximally_mixed_qubit() } else { random::pure_qubit(rng) };
        Scenario::direct_cause_with_state(random_unitary(rng), early)
    }
}

fn random_general_form(rng: &mut ChaCha8Rng) -> Result<GeneralUnitaryForm> {
    loop {
        let x: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-3 {
            return GeneralUnitaryForm::new(x[0] / n, x[1] / n, x[2] / n, x[3] / n, rng.random_range(0.0..TAU));
        }
    }
}

fn random_corner(rng: &mut ChaCha8Rng) -> Result<CornerStateForm> {
    let f1: f64 = rng.random();
    let r = (f1 * (1.0 - f1)).sqrt() * rng.random::<f64>();
    let a = rng.random_range(0.0..TAU);
    CornerStateForm::new(f1, r * a.cos(), r * a.sin())
}

/// A cause with `P = (0, 0, 1)`: a diagonal corner state, a pure
/// `(|b₁⟩ + e^{iθ}|b₂⟩)/√2`, or a member of the matching unitary family.
fn random_apex_cause(rng: &mut ChaCha8Rng) -> Result<Scenario> {
    match rng.random_range(0..3) {
        0 => Scenario::common_cause(CornerStateForm::new(rng.random(), 0.0, 0.0)?.realize()),
        1 => {
            let bw =
                BellWeights::new([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0], [rng.random_range(0.0..TAU), 0.0, 0.0])?;
            Scenario::common_cause(state_from_bell_weights(&bw))
        }
        _ => {
            let cands = candidate_unitaries(&StatP::new(0.0, 0.0, 1.0), 1e-12)?;
            let members: Vec<_> = cands.members().copied().collect();
            let mut u = members[rng.random_range(0..members.len())];
            u.theta = rng.random_range(0.0..TAU);
            Scenario::direct_cause(u.realize())
        }
    }
}

fn born_rule_agreement(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let sys = random_scenario(rng)?;
    let frames = FramePair::new(random_unitary(rng), random_unitary(rng))?;
    let joint = sys.joint(&frames);
    let mut err: f64 = 0.0;
    for (i, axis) in PauliAxis::MEASURED.into_iter().enumerate() {
        let brute = brute_axis(&sys, &frames, axis);
        for (a, b) in joint.probs[i].iter().zip(brute) {
            err = err.max((a - b).abs());
        }
    }
    err = err.max(sys.exact_stat(&frames).max_abs_diff(&brute_stat(&sys, &frames)));
    Ok(Trial::new(err, format!("{sys:?} {frames:?}")))
}

fn projector_agreement(_: &mut ChaCha8Rng) -> Result<Trial> {
    let mut err: f64 = 0.0;
    for axis in PauliAxis::MEASURED {
        let [up, down] = eigen_projectors(axis);
        let f = SpectralProjectors::new(axis)?;
        err = err.max((up - f.xi_up.to_dmatrix()).norm()).max((down - f.xi_down.to_dmatrix()).norm());
    }
    Ok(Trial::new(err, String::new()))
}

fn bell_phase_invariance(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let bw = random::bell_weights(rng);
    let other = BellWeights::new(bw.weights(), std::array::from_fn(|_| rng.random_range(0.0..TAU)))?;
    let expected = vertex_mix(&bw.weights().map(|w| w * w), &TCC_VERTICES);
    let id = FramePair::identity();
    let p1 = brute_stat(&Scenario::common_cause(state_from_bell_weights(&bw))?, &id);
    let p2 = brute_stat(&Scenario::common_cause(state_from_bell_weights(&other))?, &id);
    Ok(Trial::new(p1.max_abs_diff(&expected).max(p2.max_abs_diff(&expected)), format!("{bw:?} {other:?}")))
}

fn mixture_round_trip(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let m = random::pauli_mixture(rng);
    let target = vertex_mix(&m.p, &TDC_VERTICES);
    let cands = candidate_unitaries(&target, 1e-9)?;
    let mut err: f64 = 0.0;
    for u in cands.members() {
        let mut u = *u;
        u.theta = rng.random_range(0.0..TAU);
        let p = brute_stat(&Scenario::direct_cause(u.realize())?, &FramePair::identity());
        err = err.max(p.max_abs_diff(&target));
    }
    Ok(Trial::new(err, format!("{m:?}")))
}

fn projector_trace_form(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let bw = random::bell_weights(rng);
    let pure = state_from_bell_weights(&bw);
    let rho = if rng.random_bool(0.5) { pure } else { random::common_cause(rng) };
    let v = random::rotation(rng);
    let vv = tensor(&v.realize(), &v.realize());
    let sys = Scenario::common_cause(rho)?;
    let pure_sys = Scenario::common_cause(pure)?;
    let frames = same_frames(&v);
    let b = bell_basis().matrix;
    let amp = bw.amplitudes();
    let ww = CMat4::outer(&amp, &amp);
    let mut err: f64 = 0.0;
    for axis in PauliAxis::MEASURED {
        let xi = SpectralProjectors::new(axis)?.same_outcome();
        let rotated = vv * xi * vv.adjoint();
        let trace_form = rotated.trace_product(&rho).re;
        let brute = brute_axis(&sys, &frames, axis);
        err = err.max((trace_form - brute[0] - brute[3]).abs());
        let bell_form = (b.adjoint() * rotated * b * ww).trace().re;
        let brute_pure = brute_axis(&pure_sys, &frames, axis);
        err = err.max((bell_form - brute_pure[0] - brute_pure[3]).abs());
    }
    Ok(Trial::new(err, format!("{bw:?} {v:?}")))
}

fn c33_closed_form(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let mut w: [f64; 4] = [rng.random(), rng.random(), rng.random(), 0.0];
    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-9);
    w = w.map(|x| x / n);
    let bw = BellWeights::new(w, std::array::from_fn(|_| rng.random_range(0.0..TAU)))?;
    let v = random::rotation(rng);
    let sys = Scenario::common_cause(state_from_bell_weights(&bw))?;
    let brute = brute_stat_rotated(&sys, &v).c33;
    let closed = c33_closed_common(&bw, &v)?;
    let shift = rng.random_range(0.0..TAU);
    let shifted = LocalRotation::new(v.psi + shift, v.chi - shift, v.phi);
    let brute_shifted = brute_stat_rotated(&sys, &shifted).c33;
    let err = (closed - brute).abs().max((brute_shifted - brute).abs());
    Ok(Trial::new(err, format!("{bw:?} {v:?} shift={shift}")))
}

fn plane_invariance(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let sys = random_scenario(rng)?;
    let v = random::rotation(rng);
    let before = brute_stat(&sys, &FramePair::identity()).plane_constant();
    let after = brute_stat_rotated(&sys, &v).plane_constant();
    Ok(Trial::new((after - before).abs(), format!("{sys:?} {v:?}")))
}

fn plane_constant_agreement(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (u, p) = loop {
        let u = random_unitary(rng);
        let p = brute_stat(&Scenario::direct_cause(u)?, &FramePair::identity());
        if coords_tcc(&p).min() >= 0.0 && coords_tdc(&p).min() >= 0.0 {
            break (u, p);
        }
    };
    let p0 = coords_tdc(&p).coords[0];
    let w4_sq = coords_tcc(&p).coords[3];
    let state = candidate_states(&p, 1e-12, rng, 1)?.remove(0);
    let back = brute_stat(&Scenario::common_cause(state_from_bell_weights(&state))?, &FramePair::identity());
    let b = p.plane_constant();
    let err = (b - (4.0 * p0 - 1.0)).abs().max((b - (1.0 - 4.0 * w4_sq)).abs()).max(back.max_abs_diff(&p));
    Ok(Trial::new(err, format!("{u:?}")))
}

fn conjugated_unitary_coefficients(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let u = random::canonical_unitary(rng);
    let v = random::rotation(rng);
    let brute = brute_stat_rotated(&Scenario::direct_cause(u.realize())?, &v);
    Ok(Trial::new(stat_closed_causal(&u, &v).max_abs_diff(&brute), format!("{u:?} {v:?}")))
}

fn four_classes(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let m = random::pauli_mixture(rng);
    let cands = candidate_unitaries(&vertex_mix(&m.p, &TDC_VERTICES), 1e-9)?;
    let v = random::rotation(rng);
    let mut err: f64 = 0.0;
    let mut distinct: Vec<StatP> = Vec::new();
    for class in &cands.classes {
        let stats: Vec<StatP> = class
            .iter()
            .map(|u| Scenario::direct_cause(u.realize()).map(|s| brute_stat_rotated(&s, &v)))
            .collect::<Result<_>>()?;
        for s in &stats {
            err = err.max(s.max_abs_diff(&stats[0]));
            if !distinct.iter().any(|d| d.approx_eq(s, 1e-7)) {
                distinct.push(*s);
            }
        }
    }
    if distinct.len() > 4 {
        err = err.max(1.0);
    }
    Ok(Trial::new(err, format!("{m:?} {v:?}")))
}

fn target_vertex(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let m = random::pauli_mixture(rng);
    let cands = candidate_unitaries(&vertex_mix(&m.p, &TDC_VERTICES), 1e-9)?;
    let design = VDesign::new(&cands, DEFAULT_GAP)?;
    let target = design.target();
    let mut err: f64 = 0.0;
    for (class, d) in cands.classes.iter().zip(&design.designs) {
        for u in class {
            let mut u = *u;
            u.theta = rng.random_range(0.0..TAU);
            let p = brute_stat_rotated(&Scenario::direct_cause(u.realize())?, &d.rotation);
            err = err.max(p.max_abs_diff(&target));
        }
    }
    Ok(Trial::new(err, format!("{m:?}")))
}

fn exclusion_off_apex_plane(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let rho = random::common_cause(rng);
    let b4 = bell_basis().states[3];
    let w4_sq = inner(&b4, &rho.apply(&b4)).re;
    let v = random::rotation(rng);
    let p = brute_stat_rotated(&Scenario::common_cause(rho)?, &v);
    let bound = 1.0 - 2.0 * w4_sq;
    let excess = p.to_array().iter().fold(0.0f64, |acc, &c| acc.max(c - bound));
    Ok(Trial::new(excess, format!("{rho:?} {v:?}")))
}

fn corner_c33_identity(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let c = random_corner(rng)?;
    let v = random::rotation(rng);
    let s = v.psi + v.chi;
    let sin2 = (2.0 * v.phi).sin().powi(2);
    let predicted = (2.0 * v.phi).cos().powi(2) + 2.0 * sin2 * (c.f2 * (2.0 * s).cos() - c.f3 * (2.0 * s).sin());
    let brute = brute_stat_rotated(&Scenario::common_cause(c.realize())?, &v).c33;
    Ok(Trial::new((predicted - brute).abs(), format!("{c:?} {v:?}")))
}

fn v0_apex_shift(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let sys = random_apex_cause(rng)?;
    let before = brute_stat(&sys, &FramePair::identity());
    let after = brute_stat_rotated(&sys, &v0());
    let err = before.max_abs_diff(&StatP::new(0.0, 0.0, 1.0)).max((after.c33 - 0.5).abs());
    Ok(Trial::new(err, format!("{sys:?}")))
}

fn transfer_to_minus_plane(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let transferred = apply_transfer(&FramePair::identity());
    let minus = StatP::new(0.0, 0.0, -1.0);
    let sys = random_apex_cause(rng)?;
    let mut err = brute_stat(&sys, &transferred).max_abs_diff(&minus);
    // Off-diagonal corner terms move the first two entries but never the third.
    let c = random_corner(rng)?;
    let p = brute_stat(&Scenario::common_cause(c.realize())?, &transferred);
    err = err.max((p.c33 + 1.0).abs());
    Ok(Trial::new(err, format!("{sys:?} {c:?}")))
}

fn general_form_sign(rng: &mut ChaCha8Rng) -> Result<Trial> {
    let g = random_general_form(rng)?;
    let brute = brute_stat(&Scenario::direct_cause(g.realize())?, &FramePair::identity());
    let corrected = stat_general_unitary(&g);
    let (c, d) = general_form_cd(&g);
    let printed = StatP::new(corrected.c11, 2.0 * (c + d) + 1.0, corrected.c33);
    let mut t = Trial::new(corrected.max_abs_diff(&brute), format!("{g:?}"));
    t.contrast = Some(printed.max_abs_diff(&brute));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = registry().iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), registry().len());
    }

    #[test]
    fn unknown_claim() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(verify_claim("bogus", 10, &mut rng), Err(Error::UnknownClaim("bogus".into())));
    }

    #[test]
    fn every_claim_passes_briefly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for c in registry() {
            let r = verify_claim(c.id, 20, &mut rng).unwrap();
            assert!(r.passed, "{r}");
        }
    }
}
