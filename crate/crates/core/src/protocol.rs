//! The N-party OLT protocol.
//!
//! The 2N-qubit register holds the system qubits at indices `0..N` and the
//! ancilla qubits at `N..2N`; party `i` owns qubits `i` and `N + i`.
//! Correlators are computed two ways: [`correlation_direct`] simulates the
//! whole register and traces out the ancilla, [`correlation_factorized`]
//! multiplies the system's σ³-string expectation with the σ³-string
//! expectation of the locally rotated ancilla and never builds the full
//! register.

use std::ops::Deref;

use crate::error::{OltError, Result};
use crate::functional::{setting_combinations, CorrelatorTable};
use crate::gates::{olt_unitary, AngleSetting};
use crate::linalg::{conjugate_local, kron, partial_trace, parity_sign, z_string_expectation, STRUCTURAL_TOL};
use crate::states::DensityMatrix;

/// Full system ⊗ ancilla state on 2N qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolState {
    n_parties: usize,
    full_state: DensityMatrix,
}

impl ProtocolState {
    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn full_state(&self) -> &DensityMatrix {
        &self.full_state
    }

    pub fn system_qubits(&self) -> Vec<usize> {
        (0..self.n_parties).collect()
    }

    pub fn ancilla_qubits(&self) -> Vec<usize> {
        (self.n_parties..2 * self.n_parties).collect()
    }
}

/// One chosen setting per party.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingsVector(Vec<AngleSetting>);

impl SettingsVector {
    pub fn new(settings: Vec<AngleSetting>) -> Self {
        Self(settings)
    }
}

impl Deref for SettingsVector {
    type Target = [AngleSetting];

    fn deref(&self) -> &[AngleSetting] {
        &self.0
    }
}

impl From<Vec<AngleSetting>> for SettingsVector {
    fn from(v: Vec<AngleSetting>) -> Self {
        Self(v)
    }
}

fn check_parties(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(OltError::PartyMismatch { what, expected, got });
    }
    Ok(())
}

/// `ρ ⊗ χ` in the protocol layout.
pub fn assemble(system: &DensityMatrix, ancilla: &DensityMatrix) -> Result<ProtocolState> {
    let n = system.n_qubits();
    check_parties("ancilla", n, ancilla.n_qubits())?;
    Ok(ProtocolState {
        n_parties: n,
        full_state: DensityMatrix::from_trusted(kron(system.matrix(), ancilla.matrix())),
    })
}

/// Conjugates the register by `⊗ᵢ U(settingᵢ)` acting on qubits `(i, N+i)`.
pub fn apply_olts(state: &ProtocolState, settings: &SettingsVector) -> Result<ProtocolState> {
    let n = state.n_parties;
    check_parties("settings", n, settings.len())?;
    let mut rho = state.full_state.matrix().clone();
    for (party, setting) in settings.iter().enumerate() {
        rho = conjugate_local(&rho, &olt_unitary(setting), &[party, n + party], 2 * n)?;
    }
    Ok(ProtocolState {
        n_parties: n,
        full_state: DensityMatrix::from_trusted(rho),
    })
}

/// Traces out the ancilla qubits.
pub fn reduced_system(state: &ProtocolState) -> DensityMatrix {
    let rho = partial_trace(state.full_state.matrix(), &state.system_qubits(), 2 * state.n_parties)
        .expect("system qubits are always in range");
    DensityMatrix::from_trusted(rho)
}

/// Reduced system state after the OLTs have been applied.
pub fn evolve_reduced(system: &DensityMatrix, ancilla: &DensityMatrix, settings: &SettingsVector) -> Result<DensityMatrix> {
    let state = apply_olts(&assemble(system, ancilla)?, settings)?;
    Ok(reduced_system(&state))
}

/// Correlator by full simulation of the 2N-qubit register.
pub fn correlation_direct(system: &DensityMatrix, ancilla: &DensityMatrix, settings: &SettingsVector) -> Result<f64> {
    let reduced = evolve_reduced(system, ancilla, settings)?;
    crate::linalg::expectation(&crate::linalg::z_string(reduced.n_qubits()), reduced.matrix())
}

/// σ³-string expectation of the ancilla after each party's local rotation.
pub fn ancilla_correlator(ancilla: &DensityMatrix, settings: &[AngleSetting]) -> Result<f64> {
    let n = ancilla.n_qubits();
    check_parties("settings", n, settings.len())?;
    let mut chi = ancilla.matrix().clone();
    for (party, setting) in settings.iter().enumerate() {
        chi = conjugate_local(&chi, &setting.rotation(), &[party], n)?;
    }
    Ok(z_string_expectation(&chi))
}

/// Correlator as the product of the system constant and the rotated-ancilla
/// correlator.
pub fn correlation_factorized(system: &DensityMatrix, ancilla: &DensityMatrix, settings: &SettingsVector) -> Result<f64> {
    check_parties("ancilla", system.n_qubits(), ancilla.n_qubits())?;
    Ok(z_string_expectation(system.matrix()) * ancilla_correlator(ancilla, settings)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Factorized,
}

/// Correlator for every combination of per-party settings; `settings[i]`
/// lists party `i`'s settings.
pub fn correlator_table(
    system: &DensityMatrix,
    ancilla: &DensityMatrix,
    settings: &[Vec<AngleSetting>],
    route: Route,
) -> Result<CorrelatorTable> {
    check_parties("settings", system.n_qubits(), settings.len())?;
    let shape: Vec<usize> = settings.iter().map(Vec::len).collect();
    let values = setting_combinations(&shape)
        .map(|combo| {
            let chosen: SettingsVector = combo.iter().enumerate().map(|(p, &s)| settings[p][s]).collect::<Vec<_>>().into();
            match route {
                Route::Direct => correlation_direct(system, ancilla, &chosen),
                Route::Factorized => correlation_factorized(system, ancilla, &chosen),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    CorrelatorTable::new(shape, values)
}

/// Whether the system state is a ±1 eigenstate of `σ³ ⊗ … ⊗ σ³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizerInfo {
    /// `Some(±1)` when the state is an eigenstate, otherwise `None`.
    pub eigenvalue: Option<i8>,
    /// `tr[σ³⊗…⊗σ³ ρ]`, the constant multiplying every ancilla correlator.
    pub expectation: f64,
}

pub fn stabilizer_eigenvalue(system: &DensityMatrix) -> StabilizerInfo {
    let m = system.matrix();
    let d = m.dim();
    let expectation = z_string_expectation(m);
    // [Z…Z, ρ]_ij = (z_i − z_j) ρ_ij
    let mut commutator = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if parity_sign(i) != parity_sign(j) {
                commutator = commutator.max(2.0 * m.get(i, j).norm());
            }
        }
    }
    let eigenvalue = if commutator > STRUCTURAL_TOL {
        None
    } else if (expectation - 1.0).abs() <= STRUCTURAL_TOL {
        Some(1)
    } else if (expectation + 1.0).abs() <= STRUCTURAL_TOL {
        Some(-1)
    } else {
        None
    };
    StabilizerInfo { eigenvalue, expectation }
}
