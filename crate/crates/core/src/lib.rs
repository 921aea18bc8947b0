//! Simulation and discrimination of quantum common causes versus direct
//! causes between two qubits.
//!
//! Both explanations produce a correlation vector `P = (C₁₁, C₂₂, C₃₃)` of
//! same-axis Pauli measurements. [`geom`] locates `P` relative to the two
//! tetrahedra of attainable values, [`scheme`] rotates the measurement frames
//! until the explanations separate, and [`oracle`] recomputes everything from
//! the Born rule for verification.

pub mod error;
pub mod geom;
pub mod linalg;
pub mod oracle;
pub mod quantum;
pub mod random;
pub mod scheme;
pub mod stats;

pub use error::{Error, Result};
pub use geom::{Region, Tetrahedron};
pub use quantum::{CanonicalUnitary, LocalRotation, PauliAxis};
pub use scheme::{discriminate, BlackBoxSystem, DiscriminatorConfig, Shots, Verdict, VerdictKind};
pub use stats::{FramePair, Scenario, StatP};
