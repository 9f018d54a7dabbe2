//! Stationary states of the one-dimensional nonlinear Schrödinger
//! (Gross–Pitaevskii) equation
//!
//! ```text
//! (−½ d²/dx² + V(x) + g|ψ|²) ψ = μ ψ,      ħ = m = 1,
//! ```
//!
//! for a single delta potential `V = λδ(x)` and for a delta-shell
//! `V = λδ(x − a)` behind a hard wall at `x = 0`.
//!
//! * [`elliptic`]: K(p) and the Jacobi functions in the `cn(u|p)` convention.
//! * [`delta_well`]: bound states (sech, cosech, linear, critical), the periodic
//!   scattering continuation above λ_c and the transition diagnostics.
//! * [`shell_linear`]: the linear shell's phase shift, S-matrix and poles.
//! * [`shell_nonlinear`]: matched cn/sn solutions at the shell, the effective
//!   nonlinearity and amplitude-ratio resonance scans.
//! * [`oracle`]: independent checks (finite-difference residuals, RK4
//!   shooting, adaptive quadrature, argument-principle root counting).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod delta_well;
pub mod elliptic;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod roots;
pub mod shell_linear;
pub mod shell_nonlinear;
pub mod wave;

pub use delta_well::{BoundStateOutcome, SolitonFamily, SolitonState};
pub use elliptic::{complete_k, jacobi, EllipticModulus, JacobiTriple};
pub use error::{Error, Result};
pub use shell_linear::{Pole, ResonancePole, ShellConfig};
pub use shell_nonlinear::{MatchedShellSolution, Resonance, ResonanceScan};
pub use num_complex::Complex64;
pub use wave::{PeriodicWave, WaveKind};
