//! Numerics for spin-S qudits driven by elliptically modulated magnetic fields.
//!
//! The driving field is
//! `h(t) = (h1 cn(ωt|k), h2 sn(ωt|k), H dn(ωt|k))`,
//! which sweeps the whole family from circularly polarized (`k = 0`) to
//! exponential-impulse (`k = 1`) drives. On top of the unitary dynamics this
//! crate computes:
//!
//! * quantum-speed-limit bounds of Mandelstam–Tamm type ([`qsl`]),
//! * the geometry of the Bloch-vector hodograph and of the standard-deviation
//!   curve: speed, curvature, torsion, arc length, circulation ([`geometry`]),
//! * spin covariance matrices, the variance-sum conservation law, and
//!   mutual/conditional uncertainty measures ([`uncertainty`]).
//!
//! Every closed-form result has an independent numerical route next to it
//! (a structurally unitary propagator, adaptive quadrature, finite
//! differences) so the two can be cross-validated; the `validate` suites and
//! the scenario runner in [`scenario`] expose those cross-checks as data.
//!
//! ```
//! use spinqsl::dynamics::{analytic_resonance_spin, propagate_numeric, FieldParams};
//! use spinqsl::elliptic::EllipticModulus;
//! use spinqsl::qsl::{pole_distance, tau_qsl};
//! use spinqsl::spin::{make_spin_system, QuantumState, Spin};
//!
//! // a qutrit in the consistent resonant drive with modulus k = 0.5
//! let sys = make_spin_system(1.0)?;
//! let drive = FieldParams::consistent_drive(2.0, 1.0, 1.0, EllipticModulus::new(0.5)?)?;
//! let rho0 = QuantumState::highest_weight(sys.dim());
//! let traj = propagate_numeric(&rho0, &drive, &sys, 0.7, 20_000)?;
//!
//! // the propagated coherence vector lands on the closed form
//! let closed = analytic_resonance_spin(0.7, &drive, sys.spin())?;
//! let numeric = traj.coherence().last().unwrap();
//! assert!((numeric.r[2] - closed.r[2]).abs() < 1e-7);
//!
//! // pole-to-pole distance stays above pi * r_B, and the pole-to-pole
//! // time pi/h stays above its bound for the qubit
//! let s = pole_distance(2.0, 1.0, drive.modulus, sys.spin())?;
//! assert!(s > std::f64::consts::PI * sys.spin().bloch_radius());
//! let half = Spin::new(0.5)?;
//! assert!(std::f64::consts::PI / 2.0 > tau_qsl(half, 2.0, 1.0));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod config;
pub mod dynamics;
pub mod elliptic;
pub mod geometry;
pub mod matrix;
pub mod numdiff;
pub mod qsl;
pub mod quadrature;
pub mod scenario;
pub mod spin;
pub mod uncertainty;
pub mod validate;

pub use config::{Format, OutputKind, ScenarioConfig};
pub use dynamics::{AlphaPropagator, FieldParams, Trajectory, Validity};
pub use elliptic::{EllipticModulus, EllipticParameter};
pub use geometry::{Curve3D, FrenetData, SphericalAngles};
pub use matrix::CMatrix;
pub use qsl::QslReport;
pub use scenario::{run_scenario, ResultManifest};
pub use spin::{CoherenceVector, QuantumState, Spin, SpinSystem};
pub use uncertainty::{CovarianceReport, UncertaintyReport};
