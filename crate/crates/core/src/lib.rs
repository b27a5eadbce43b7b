//! Simulator for Bell tests run through operationally local transformations
//! (OLTs).
//!
//! Each party holds one system qubit and one ancilla qubit and applies a
//! two-qubit unitary `U(θ) = C·(I ⊗ R(θ))` parameterized only by its local
//! measurement angle. Measurements are fixed to σ³ on every system qubit. The
//! crate simulates this end to end, evaluates full-correlator Bell
//! functionals on the result, and checks that every correlator factorizes
//! into a system constant times the correlator of the locally rotated
//! ancilla.
//!
//! ```
//! use olt_core::{correlator_table, make_bell_state, make_chsh, make_classical_correlated};
//! use olt_core::{evaluate, AngleSetting, BellKind, Route};
//! use std::f64::consts::PI;
//!
//! let system = make_classical_correlated(2).unwrap();
//! let ancilla = make_bell_state(BellKind::PhiPlus);
//! let settings = vec![
//!     vec![AngleSetting::so2(0.0), AngleSetting::so2(PI / 2.0)],
//!     vec![AngleSetting::so2(PI / 4.0), AngleSetting::so2(-PI / 4.0)],
//! ];
//! let table = correlator_table(&system, &ancilla, &settings, Route::Direct).unwrap();
//! let value = evaluate(&make_chsh(), &table).unwrap();
//! assert!((value - 2.0 * 2f64.sqrt()).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod error;
pub mod expr;
pub mod functional;
pub mod gates;
pub mod linalg;
pub mod protocol;
pub mod scenario;
pub mod states;

pub use analysis::{
    check_final_state_form, optimize_angles, optimize_angles_with, persistency_scan, ppt_separable,
    verify_factorization, FactorizationReport, OptimizationResult, OptimizerConfig, PersistencyReport, PptReport,
};
pub use error::{OltError, Result};
pub use functional::{
    classical_bound, evaluate, make_chsh, make_mermin3, violation_report, BellFunctional, CorrelatorTable,
    FunctionalSpec, ViolationReport,
};
pub use gates::{cnot, embed, olt_unitary, pauli, rotation_so2, rotation_su2, AngleSetting, RotationMode};
pub use linalg::{expectation, herm_eigenvalues, kron, partial_trace, partial_transpose, Operator, StateVector};
pub use protocol::{
    apply_olts, assemble, correlation_direct, correlation_factorized, correlator_table, reduced_system,
    stabilizer_eigenvalue, ProtocolState, Route, SettingsVector, StabilizerInfo,
};
pub use scenario::Scenario;
pub use states::{
    make_basis_state, make_bell_state, make_classical_correlated, make_ghz, make_maximally_mixed, make_werner,
    validate_density, BellKind, DensityMatrix, StateSpec,
};
