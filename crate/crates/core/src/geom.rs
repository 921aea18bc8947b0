//! Geometry of correlation vectors.
//!
//! Common causes produce `P` inside the tetrahedron spanned by the four Bell
//! vertices (TCC); direct causes produce `P` inside the tetrahedron spanned by
//! the four Pauli vertices (TDC). The two intersect in an octahedron where `P`
//! alone cannot tell the explanations apart.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat4;
use crate::quantum::{BellWeights, BranchLabels, CanonicalUnitary, PauliMixture};
use crate::stats::StatP;

/// Vertices `P(σ₀..σ₃)`.
pub const TDC_VERTICES: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

/// Vertices `P(|b₁⟩..|b₄⟩)`.
pub const TCC_VERTICES: [[f64; 3]; 4] = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tetrahedron {
    /// Common-cause tetrahedron (Bell vertices).
    Tcc,
    /// Direct-cause tetrahedron (Pauli vertices).
    Tdc,
}

impl Tetrahedron {
    pub fn vertices(self) -> &'static [[f64; 3]; 4] {
        match self {
            Tetrahedron::Tcc => &TCC_VERTICES,
            Tetrahedron::Tdc => &TDC_VERTICES,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tetrahedron::Tcc => "TCC",
            Tetrahedron::Tdc => "TDC",
        }
    }
}

/// Barycentric coordinates of `P` with respect to one tetrahedron.
///
/// Coordinates always sum to one; a negative entry means `P` lies outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineCoords {
    pub coords: [f64; 4],
    pub basis: Tetrahedron,
}

impl AffineCoords {
    pub fn of(p: &StatP, basis: Tetrahedron) -> Self {
        // The vertices are mutually orthogonal up to the constant offset, so
        // each coordinate is a single inner product.
        let coords = basis.vertices().map(|v| (1.0 + p.dot(v)) / 4.0);
        Self { coords, basis }
    }

    pub fn min(&self) -> f64 {
        self.coords.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, tol: f64) -> bool {
        self.min() >= -tol
    }

    /// `Σ coords_j · vertex_j`
    pub fn reconstruct(&self) -> StatP {
        let mut out = [0.0; 3];
        for (c, v) in self.coords.iter().zip(self.basis.vertices()) {
            for i in 0..3 {
                out[i] += c * v[i];
            }
        }
        StatP::from_array(out)
    }

    /// Zero any coordinate in `[−tol, 0)` and renormalize; fails if a
    /// coordinate is below `−tol`.
    pub fn clamped(&self, tol: f64) -> Result<AffineCoords> {
        if !self.contains(tol) {
            return Err(Error::OutsideTetrahedron { basis: self.basis.name(), coords: self.coords, tol });
        }
        let mut c = self.coords.map(|x| x.max(0.0));
        let sum: f64 = c.iter().sum();
        c.iter_mut().for_each(|x| *x /= sum);
        Ok(AffineCoords { coords: c, basis: self.basis })
    }
}

pub fn coords_tdc(p: &StatP) -> AffineCoords {
    AffineCoords::of(p, Tetrahedron::Tdc)
}

pub fn coords_tcc(p: &StatP) -> AffineCoords {
    AffineCoords::of(p, Tetrahedron::Tcc)
}

/// The plane `c11 + c22 + c33 = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneL {
    pub b: f64,
}

impl PlaneL {
    pub fn through(p: &StatP) -> Self {
        Self { b: p.plane_constant() }
    }

    pub fn contains(&self, p: &StatP, tol: f64) -> bool {
        (p.plane_constant() - self.b).abs() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Overlap,
    TdcOnly,
    TccOnly,
    Neither,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Overlap => "overlap",
            Region::TdcOnly => "tdc-only",
            Region::TccOnly => "tcc-only",
            Region::Neither => "neither",
        }
    }
}

/// Membership in both tetrahedra, each coordinate allowed to dip to `−tol`.
pub fn region_of(p: &StatP, tol: f64) -> Region {
    let tdc = coords_tdc(p).contains(tol);
    let tcc = coords_tcc(p).contains(tol);
    match (tdc, tcc) {
        (true, true) => Region::Overlap,
        (true, false) => Region::TdcOnly,
        (false, true) => Region::TccOnly,
        (false, false) => Region::Neither,
    }
}

/// Region with `Neither` replaced by the nearer tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedRegion {
    pub region: Region,
    /// Set when the raw classification was `Neither`.
    pub projected: bool,
}

/// Like [`region_of`], but a point outside both tetrahedra is assigned to
/// the one at smaller Euclidean distance, and equal distances to `Overlap`.
pub fn resolve_region(p: &StatP, tol: f64) -> ResolvedRegion {
    let region = region_of(p, tol);
    if region != Region::Neither {
        return ResolvedRegion { region, projected: false };
    }
    let d_tdc = distance_to_tetrahedron(p, Tetrahedron::Tdc);
    let d_tcc = distance_to_tetrahedron(p, Tetrahedron::Tcc);
    let region = if (d_tdc - d_tcc).abs() <= 1e-12 {
        Region::Overlap
    } else if d_tdc < d_tcc {
        Region::TdcOnly
    } else {
        Region::TccOnly
    };
    ResolvedRegion { region, projected: true }
}

/// Euclidean distance from `p` to the solid tetrahedron.
pub fn distance_to_tetrahedron(p: &StatP, basis: Tetrahedron) -> f64 {
    if AffineCoords::of(p, basis).contains(0.0) {
        return 0.0;
    }
    let v = basis.vertices();
    let x = p.to_array();
    const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
    FACES
        .iter()
        .map(|f| {
            let q = closest_point_on_triangle(x, v[f[0]], v[f[1]], v[f[2]]);
            norm(sub(x, q))
        })
        .fold(f64::INFINITY, f64::min)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn lerp(a: [f64; 3], d: [f64; 3], t: f64) -> [f64; 3] {
    [a[0] + t * d[0], a[1] + t * d[1], a[2] + t * d[2]]
}

// Voronoi-region walk over vertices, edges and the face interior.
fn closest_point_on_triangle(p: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> [f64; 3] {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(ab, ap);
    let d2 = dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = sub(p, b);
    let d3 = dot(ab, bp);
    let d4 = dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return lerp(a, ab, d1 / (d1 - d3));
    }
    let cp = sub(p, c);
    let d5 = dot(ab, cp);
    let d6 = dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return lerp(a, ac, d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return lerp(b, sub(c, b), (d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    [a[0] + ab[0] * v + ac[0] * w, a[1] + ab[1] * v + ac[1] * w, a[2] + ab[2] * v + ac[2] * w]
}

/// All canonical unitaries reproducing one `P`, grouped into the four classes
/// whose members give identical statistics under every frame rotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateUnitaries {
    pub mixture: PauliMixture,
    pub classes: [Vec<CanonicalUnitary>; 4],
}

impl CandidateUnitaries {
    /// First member of each class.
    pub fn representatives(&self) -> [CanonicalUnitary; 4] {
        std::array::from_fn(|k| self.classes[k][0])
    }

    pub fn members(&self) -> impl Iterator<Item = &CanonicalUnitary> {
        self.classes.iter().flatten()
    }
}

/// Half-angle used by the γ branches; zero when the ratio is undefined.
fn half_arccos(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        0.0
    } else {
        (num / den).clamp(-1.0, 1.0).acos() / 2.0
    }
}

/// Canonical family for a Pauli mixture, enumerated over all branch labels.
pub fn unitary_family(mixture: &PauliMixture) -> Vec<CanonicalUnitary> {
    let (c1, c2, d1, d2) = (mixture.c1(), mixture.c2(), mixture.d1(), mixture.d2());
    let phi0 = d1.max(0.0).sqrt().atan2(c1.max(0.0).sqrt());
    let g1 = half_arccos(c2, c1);
    let g2 = half_arccos(d2, d1);
    BranchLabels::all()
        .map(|l| {
            let sign = |n: u8| if n == 0 { 1.0 } else { -1.0 };
            let gamma1 = if c1 <= 0.0 { 0.0 } else { sign(l.n1) * g1 + f64::from(l.k1) * PI };
            let gamma2 = if d1 <= 0.0 { 0.0 } else { sign(l.n2) * g2 + f64::from(l.k2) * PI };
            CanonicalUnitary { phi0, gamma1, gamma2, theta: 0.0, labels: Some(l) }
        })
        .collect()
}

/// Partition the sixteen label tuples into orbits of the mirror/negate involutions.
pub fn label_classes() -> [[BranchLabels; 4]; 4] {
    let mut classes: Vec<[BranchLabels; 4]> = Vec::with_capacity(4);
    for l in BranchLabels::all() {
        if classes.iter().any(|c| c.contains(&l)) {
            continue;
        }
        let mut orbit = [l, l.mirrored(), l.negated(), l.mirrored().negated()];
        orbit.sort();
        classes.push(orbit);
    }
    classes.try_into().expect("sixteen labels split into four orbits of four")
}

/// Reconstruct the direct-cause family behind an observed `P`.
///
/// `P` must lie in TDC up to `tol`; small negative coordinates are clamped.
pub fn candidate_unitaries(p: &StatP, tol: f64) -> Result<CandidateUnitaries> {
    let coords = coords_tdc(p).clamped(tol)?;
    let mixture = PauliMixture { p: coords.coords };
    let family = unitary_family(&mixture);
    let classes = label_classes().map(|orbit| {
        orbit.iter().map(|l| *family.iter().find(|u| u.labels == Some(*l)).expect("every label enumerated")).collect()
    });
    Ok(CandidateUnitaries { mixture, classes })
}

/// Pure common causes reproducing `P`, with Bell phases drawn uniformly.
pub fn candidate_states<R: Rng + ?Sized>(p: &StatP, tol: f64, rng: &mut R, count: usize) -> Result<Vec<BellWeights>> {
    let coords = coords_tcc(p).clamped(tol)?;
    let w = coords.coords.map(f64::sqrt);
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let w = w.map(|x| x / norm);
    (0..count)
        .map(|_| {
            let phases = std::array::from_fn(|_| rng.random_range(0.0..2.0 * PI));
            BellWeights::new(w, phases)
        })
        .collect()
}

/// Density supported on `|00⟩, |11⟩` only:
///
/// ```text
/// [ f₁          0 0   f₂ − i f₃ ]
/// [ 0           0 0   0         ]
/// [ 0           0 0   0         ]
/// [ f₂ + i f₃   0 0   1 − f₁    ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerStateForm {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl CornerStateForm {
    pub fn new(f1: f64, f2: f64, f3: f64) -> Result<Self> {
        let form = Self { f1, f2, f3 };
        if !(0.0..=1.0).contains(&f1) || !form.is_valid(1e-12) {
            return Err(Error::NotDensity);
        }
        Ok(form)
    }

    /// Positivity: `f₁(1 − f₁) ≥ f₂² + f₃²`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.f1 * (1.0 - self.f1) >= self.f2 * self.f2 + self.f3 * self.f3 - tol
    }

    pub fn realize(&self) -> CMat4 {
        use crate::linalg::c64;
        let mut m = CMat4::zeros();
        m.0[0][0] = c64(self.f1, 0.0);
        m.0[3][3] = c64(1.0 - self.f1, 0.0);
        m.0[0][3] = c64(self.f2, -self.f3);
        m.0[3][0] = c64(self.f2, self.f3);
        m
    }
}

/// Extract `(f₁, f₂, f₃)` if every entry outside the four corners is below `tol`.
pub fn corner_form_of(rho: &CMat4, tol: f64) -> Option<CornerStateForm> {
    for i in 0..4 {
        for j in 0..4 {
            let corner = (i == 0 || i == 3) && (j == 0 || j == 3);
            if !corner && rho.0[i][j].norm() > tol {
                return None;
            }
        }
    }
    let off = (rho.0[3][0] + rho.0[0][3].conj()) * 0.5;
    Some(CornerStateForm { f1: rho.0[0][0].re, f2: off.re, f3: off.im })
}
