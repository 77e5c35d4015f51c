//! Floating-point side: critical values, fiber loops, loop integrals, the
//! first Melnikov function and sampled period determinants.

pub(crate) mod critical;
mod integral;
mod loops;
mod melnikov;
mod roots;
mod wronskian;

pub use critical::{critical_values, CriticalData, CriticalPoint, CriticalValue};
pub use integral::{loop_integral, LoopIntegral};
pub use loops::{circle_loop, lifted_circle, transport_loop, vanishing_loop, FiberLoop, LoopKind};
pub use melnikov::melnikov1;
pub use roots::{poly_roots, poly_roots_complex};
pub use wronskian::{period_matrix, wronskian_samples, PeriodSample};

use serde::{Deserialize, Serialize};

/// Every numeric tolerance used by this module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// On-fiber residual `|f − t|` (relative to `max(1, |t|)`) at each loop node.
    pub fiber: f64,
    /// Absolute tolerance for integrals that must vanish.
    pub integral: f64,
    /// Relative tolerance for the Melnikov vanishing test.
    pub melnikov: f64,
    /// Newton polishing target for critical points.
    pub newton: f64,
    /// Relative distance below which two critical values are merged.
    pub merge: f64,
    /// Ceiling on continuation steps per loop.
    pub max_steps: usize,
    /// Quadrature nodes per loop.
    pub nodes: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { fiber: 1e-10, integral: 1e-8, melnikov: 1e-6, newton: 1e-12, merge: 1e-8, max_steps: 1 << 12, nodes: 256 }
    }
}
