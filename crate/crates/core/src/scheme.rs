//! Frame-rotation design and the discrimination procedure.
//!
//! The procedure only sees outcome counts returned by a [`MeasurementDevice`];
//! the hidden [`Scenario`] stays sealed inside [`BlackBoxSystem`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{candidate_unitaries, resolve_region, CandidateUnitaries, Region};
use crate::linalg::CMat2;
use crate::quantum::{pauli, CanonicalUnitary, LocalRotation, PauliAxis, PauliMixture};
use crate::stats::{correlation, sample_counts, stat_closed_causal, FramePair, Scenario, StatP};

/// Default split `χ − ψ` of the designed rotations.
pub const DEFAULT_GAP: f64 = FRAC_PI_4;

/// Default equality tolerance when statistics are estimated from shots.
pub const SAMPLED_TOL: f64 = 0.1;

/// Default equality tolerance when statistics are exact.
pub const EXACT_TOL: f64 = 1e-9;

/// Allowed miss of a designed rotation against its own target.
const DESIGN_CHECK_TOL: f64 = 1e-9;

/// `(0, 0, 1)`: the common point of both tetrahedra on the `b = 1` plane.
pub const APEX: StatP = StatP::new(0.0, 0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shots {
    /// Return exact Born probabilities instead of counts.
    Exact,
    /// Sample this many outcome pairs on every axis.
    PerAxis(u32),
}

impl Shots {
    pub fn per_axis(&self) -> Option<u32> {
        match self {
            Shots::Exact => None,
            Shots::PerAxis(n) => Some(*n),
        }
    }
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => write!(f, "exact"),
            Shots::PerAxis(n) => write!(f, "{n}"),
        }
    }
}

/// Outcome record for one axis, ordered `uu, ud, du, dd`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AxisOutcomes {
    Counts([u32; 4]),
    Probabilities([f64; 4]),
}

impl AxisOutcomes {
    pub fn correlation(&self) -> f64 {
        match self {
            AxisOutcomes::Counts(c) => correlation(&c.map(f64::from)),
            AxisOutcomes::Probabilities(p) => correlation(p),
        }
    }
}

/// Anything that can be asked for same-axis outcome statistics.
pub trait MeasurementDevice {
    fn measure(&mut self, frames: &FramePair, axis: PauliAxis, shots: Shots) -> Result<AxisOutcomes>;
}

/// A simulated system whose cause is hidden from its callers.
pub struct BlackBoxSystem {
    scenario: Scenario,
    rng: ChaCha8Rng,
    calls: usize,
}

impl BlackBoxSystem {
    pub fn new(scenario: Scenario, rng: ChaCha8Rng) -> Self {
        Self { scenario, rng, calls: 0 }
    }

    /// Number of `measure` calls served so far.
    pub fn calls(&self) -> usize {
        self.calls
    }
}

impl fmt::Debug for BlackBoxSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxSystem").field("calls", &self.calls).finish_non_exhaustive()
    }
}

impl MeasurementDevice for BlackBoxSystem {
    fn measure(&mut self, frames: &FramePair, axis: PauliAxis, shots: Shots) -> Result<AxisOutcomes> {
        if !axis.is_measurement() {
            return Err(Error::NotMeasurementAxis(axis.index()));
        }
        frames.validate()?;
        self.calls += 1;
        let probs = self.scenario.axis_probabilities(frames, axis);
        match shots {
            Shots::Exact => Ok(AxisOutcomes::Probabilities(probs)),
            Shots::PerAxis(n) => Ok(AxisOutcomes::Counts(sample_counts(&probs, n, &mut self.rng)?)),
        }
    }
}

/// A rotation designed to send one class of candidate unitaries to a
/// statistic with third entry 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationDesign {
    pub rotation: LocalRotation,
    /// Amplitude of the `a₂` oscillation; zero only for the identity channel.
    pub r: f64,
    pub omega: f64,
    pub k1: u8,
    pub k2: u8,
    /// `χ − ψ`
    pub gap: f64,
}

impl RotationDesign {
    /// `ψ + χ`
    pub fn sum(&self) -> f64 {
        self.rotation.psi + self.rotation.chi
    }
}

/// Design `V` with `P_V(u) = (2p₀ − 1, 2p₀ − 1, 1)`.
///
/// `ψ + χ = γ₂ − π/2` makes `sin(γ₂ − ψ − χ) = 1`, which maximizes `r`;
/// `φ = (π − ω)/2` then puts `a₂ = r cos(2φ + ω)` at its extreme.
pub fn design_v(u: &CanonicalUnitary, gap: f64) -> Result<RotationDesign> {
    if !(gap > 0.0 && gap < FRAC_PI_2) {
        return Err(Error::InvalidGap(gap));
    }
    let k1 = 1u8;
    let sum = u.gamma2 - f64::from(k1) * FRAC_PI_2;
    let sin_gap = (u.gamma2 - sum).sin();
    let (c0, s0) = (u.phi0.cos(), u.phi0.sin());
    let r = ((c0 * u.gamma1.sin()).powi(2) + (s0 * sin_gap).powi(2)).sqrt();
    if r < 1e-12 {
        return Ok(RotationDesign { rotation: LocalRotation::IDENTITY, r, omega: 0.0, k1, k2: 0, gap: 0.0 });
    }
    let omega = (s0 * sin_gap / r).atan2(c0 * u.gamma1.sin() / r);
    let k2 = 1u8;
    let phi = (f64::from(k2) * PI - omega) / 2.0;
    let psi = (sum - gap) / 2.0;
    let design = RotationDesign { rotation: LocalRotation::new(psi, psi + gap, phi), r, omega, k1, k2, gap };
    let got = stat_closed_causal(u, &design.rotation);
    let p0 = u.mixture().p[0];
    let miss = got.max_abs_diff(&StatP::new(2.0 * p0 - 1.0, 2.0 * p0 - 1.0, 1.0));
    if miss > DESIGN_CHECK_TOL {
        return Err(Error::DesignCheck(miss));
    }
    Ok(design)
}

/// One designed rotation per candidate class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VDesign {
    pub mixture: PauliMixture,
    pub classes: [CanonicalUnitary; 4],
    pub designs: [RotationDesign; 4],
}

impl VDesign {
    pub fn new(candidates: &CandidateUnitaries, gap: f64) -> Result<Self> {
        let classes = candidates.representatives();
        let designs = [
            design_v(&classes[0], gap)?,
            design_v(&classes[1], gap)?,
            design_v(&classes[2], gap)?,
            design_v(&classes[3], gap)?,
        ];
        Ok(Self { mixture: candidates.mixture, classes, designs })
    }

    /// `(2p₀ − 1, 2p₀ − 1, 1)`
    pub fn target(&self) -> StatP {
        let c = 2.0 * self.mixture.p[0] - 1.0;
        StatP::new(c, c, 1.0)
    }
}

/// Rotation that moves the apex statistic off `(0, 0, 1)`.
pub fn v0() -> LocalRotation {
    LocalRotation::new(0.0, 0.0, FRAC_PI_8)
}

/// `(V₋, V₊)`: bit flip on the early frame, identity on the late one.
pub fn transfer_pair() -> (CMat2, CMat2) {
    (pauli(PauliAxis::X), CMat2::identity())
}

/// Apply the transfer pair to the current frames.
pub fn apply_transfer(frames: &FramePair) -> FramePair {
    let (minus, plus) = transfer_pair();
    frames.then_split(&minus, &plus)
}

/// Per-comparison tolerances of the procedure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Affine-coordinate slack for tetrahedron membership.
    pub region: f64,
    /// Entrywise test against `(0, 0, 1)`.
    pub apex: f64,
    /// `|C₃₃ − 1|`
    pub third_entry: f64,
    /// `|C₁₁ − C₂₂|`
    pub entry_equality: f64,
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self { region: tol, apex: tol, third_entry: tol, entry_equality: tol }
    }

    fn validate(&self) -> Result<()> {
        for t in [self.region, self.apex, self.third_entry, self.entry_equality] {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminatorConfig {
    pub shots: Shots,
    pub tol: Tolerances,
    pub gap: f64,
}

impl DiscriminatorConfig {
    pub fn exact() -> Self {
        Self { shots: Shots::Exact, tol: Tolerances::uniform(EXACT_TOL), gap: DEFAULT_GAP }
    }

    pub fn sampled(shots_per_axis: u32) -> Self {
        Self { shots: Shots::PerAxis(shots_per_axis), tol: Tolerances::uniform(SAMPLED_TOL), gap: DEFAULT_GAP }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == Shots::PerAxis(0) {
            return Err(Error::ZeroShots);
        }
        self.tol.validate()?;
        if !(self.gap > 0.0 && self.gap < FRAC_PI_2) {
            return Err(Error::InvalidGap(self.gap));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    Causality,
    CommonCause,
}

impl VerdictKind {
    pub fn label(self) -> &'static str {
        match self {
            VerdictKind::Causality => "CAUSALITY",
            VerdictKind::CommonCause => "COMMON_CAUSE",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Nodes of the flowchart that leave a record in the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FlowNode {
    /// Measure `P` in the identity frames.
    Measure,
    /// Overlap test; `projected` when `P` fell outside both tetrahedra.
    RegionCheck { region: Region, projected: bool },
    /// `P` was at the apex; `V₀` applied and `P` re-measured.
    ApplyV0,
    /// Candidate classes reconstructed; `clamped` when `P` had to be forced into TDC.
    Candidates { round: u8, mixture: PauliMixture, clamped: bool },
    /// Re-measurement under the designed rotation of class `class` (1-based).
    Probe { round: u8, class: u8, rotation: LocalRotation },
    /// Apex hit by a probe; transfer pair applied and `P` re-measured.
    Transfer { class: u8 },
    /// Final decision.
    Decide { rule: DecisionRule, verdict: VerdictKind },
}

/// Which comparison produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecisionRule {
    /// `P` outside the overlap; verdict by TDC membership.
    Region,
    /// Third entry 1 and first two entries equal.
    ThirdAndEqual,
    /// Third entry 1 after the transfer.
    ThirdAfterTransfer,
}

impl DecisionRule {
    pub fn label(self) -> &'static str {
        match self {
            DecisionRule::Region => "region",
            DecisionRule::ThirdAndEqual => "third+equal",
            DecisionRule::ThirdAfterTransfer => "third-after-transfer",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub node: FlowNode,
    /// Cumulative frames in force when the estimate was taken.
    pub frames: Option<FramePair>,
    pub shots: Shots,
    /// Per-axis records behind `estimate`, in X, Y, Z order.
    pub outcomes: Vec<AxisOutcomes>,
    pub estimate: Option<StatP>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub rule: DecisionRule,
    pub trace: Vec<TraceEntry>,
}

impl Verdict {
    /// Compact description of the path taken, e.g. `overlap>v0>probe>transfer>probe`.
    pub fn branch_signature(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for e in &self.trace {
            let part = match e.node {
                FlowNode::RegionCheck { region, projected } => {
                    Some(if projected { format!("{}*", region.label()) } else { region.label().to_string() })
                }
                FlowNode::ApplyV0 => Some("v0".into()),
                FlowNode::Candidates { clamped: true, .. } => Some("clamp".into()),
                FlowNode::Probe { class: 1, .. } => Some("probe".into()),
                FlowNode::Transfer { .. } => Some("transfer".into()),
                FlowNode::Decide { rule, .. } => Some(rule.label().to_string()),
                _ => None,
            };
            parts.extend(part);
        }
        parts.join(">")
    }

    /// Every statistic estimated during the run, in order.
    pub fn estimates(&self) -> Vec<StatP> {
        self.trace.iter().filter_map(|e| e.estimate).collect()
    }

    /// True when the transfer pair was applied.
    pub fn transferred(&self) -> bool {
        self.trace.iter().any(|e| matches!(e.node, FlowNode::Transfer { .. }))
    }

    /// True when `V₀` was applied.
    pub fn used_v0(&self) -> bool {
        self.trace.iter().any(|e| matches!(e.node, FlowNode::ApplyV0))
    }

    /// Frames and estimate recorded immediately after the transfer, if any.
    pub fn transfer_estimate(&self) -> Option<(FramePair, StatP)> {
        self.trace
            .iter()
            .find(|e| matches!(e.node, FlowNode::Transfer { .. }))
            .and_then(|e| Some((e.frames?, e.estimate?)))
    }
}

struct Run<'a, D: MeasurementDevice + ?Sized> {
    device: &'a mut D,
    cfg: &'a DiscriminatorConfig,
    trace: Vec<TraceEntry>,
}

impl<D: MeasurementDevice + ?Sized> Run<'_, D> {
    fn estimate(&mut self, frames: FramePair, node: FlowNode) -> Result<StatP> {
        let mut outcomes = Vec::with_capacity(3);
        for axis in PauliAxis::MEASURED {
            outcomes.push(self.device.measure(&frames, axis, self.cfg.shots)?);
        }
        let p = StatP::new(outcomes[0].correlation(), outcomes[1].correlation(), outcomes[2].correlation());
        self.trace.push(TraceEntry { node, frames: Some(frames), shots: self.cfg.shots, outcomes, estimate: Some(p) });
        Ok(p)
    }

    fn note(&mut self, node: FlowNode) {
        self.trace.push(TraceEntry { node, frames: None, shots: self.cfg.shots, outcomes: Vec::new(), estimate: None });
    }

    /// Reconstruct the candidate classes of `p`, design one rotation per
    /// class and measure under each.
    fn probe_round(&mut self, p: &StatP, frames: &FramePair, round: u8) -> Result<Vec<(RotationDesign, StatP)>> {
        let (candidates, clamped) = match candidate_unitaries(p, self.cfg.tol.region) {
            Ok(c) => (c, false),
            // Sampling noise can push a re-measured P slightly out of TDC.
            Err(Error::OutsideTetrahedron { .. }) => (candidate_unitaries(p, f64::INFINITY)?, true),
            Err(e) => return Err(e),
        };
        self.note(FlowNode::Candidates { round, mixture: candidates.mixture, clamped });
        let design = VDesign::new(&candidates, self.cfg.gap)?;
        let mut out = Vec::with_capacity(4);
        for (k, d) in design.designs.iter().enumerate() {
            let node = FlowNode::Probe { round, class: k as u8 + 1, rotation: d.rotation };
            let pk = self.estimate(frames.then_rotation(&d.rotation), node)?;
            out.push((*d, pk));
        }
        Ok(out)
    }

    fn finish(mut self, kind: VerdictKind, rule: DecisionRule) -> Verdict {
        self.note(FlowNode::Decide { rule, verdict: kind });
        Verdict { kind, rule, trace: self.trace }
    }
}

/// Decide between a common cause and a direct cause from measurements only.
pub fn discriminate<D: MeasurementDevice + ?Sized>(device: &mut D, cfg: &DiscriminatorConfig) -> Result<Verdict> {
    cfg.validate()?;
    let tol = cfg.tol;
    let mut run = Run { device, cfg, trace: Vec::new() };

    let mut frames = FramePair::identity();
    let mut p = run.estimate(frames, FlowNode::Measure)?;

    let resolved = resolve_region(&p, tol.region);
    run.note(FlowNode::RegionCheck { region: resolved.region, projected: resolved.projected });
    match resolved.region {
        Region::TdcOnly => return Ok(run.finish(VerdictKind::Causality, DecisionRule::Region)),
        Region::TccOnly => return Ok(run.finish(VerdictKind::CommonCause, DecisionRule::Region)),
        Region::Overlap | Region::Neither => {}
    }

    if p.approx_eq(&APEX, tol.apex) {
        frames = frames.then_rotation(&v0());
        p = run.estimate(frames, FlowNode::ApplyV0)?;
    }

    let probes = run.probe_round(&p, &frames, 1)?;
    let apex_hit = probes.iter().position(|(_, pk)| pk.approx_eq(&APEX, tol.apex));

    let Some(k) = apex_hit else {
        let causal = probes
            .iter()
            .any(|(_, pk)| (pk.c33 - 1.0).abs() <= tol.third_entry && (pk.c11 - pk.c22).abs() <= tol.entry_equality);
        let kind = if causal { VerdictKind::Causality } else { VerdictKind::CommonCause };
        return Ok(run.finish(kind, DecisionRule::ThirdAndEqual));
    };

    frames = apply_transfer(&frames.then_rotation(&probes[k].0.rotation));
    p = run.estimate(frames, FlowNode::Transfer { class: k as u8 + 1 })?;
    let probes = run.probe_round(&p, &frames, 2)?;
    let causal = probes.iter().any(|(_, pk)| (pk.c33 - 1.0).abs() <= tol.third_entry);
    let kind = if causal { VerdictKind::Causality } else { VerdictKind::CommonCause };
    Ok(run.finish(kind, DecisionRule::ThirdAfterTransfer))
}
