use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;

use super::ppt::{ppt_separable, PptReport};
use crate::error::Result;
use crate::gates::AngleSetting;
use crate::linalg::{c, StateVector, ZERO};
use crate::protocol::{apply_olts, assemble, reduced_system, ProtocolState};
use crate::states::{make_basis_state, make_bell_state, make_classical_correlated, BellKind, DensityMatrix};

/// Closed-form final state of the two-party protocol started from
/// `|00⟩⟨00| ⊗ |Φ⁺⟩⟨Φ⁺|`, qubit order (a, b, a', b'):
/// `cos(Δ/2)(|0000⟩+|1111⟩)/√2 + sin(Δ/2)(|1010⟩−|0101⟩)/√2`, Δ = θ_a − θ_b.
pub fn final_state_ket(theta_a: f64, theta_b: f64) -> StateVector {
    let (s, co) = ((theta_a - theta_b) / 2.0).sin_cos();
    let mut amps = vec![ZERO; 16];
    amps[0b0000] = c(co * FRAC_1_SQRT_2, 0.0);
    amps[0b1111] = c(co * FRAC_1_SQRT_2, 0.0);
    amps[0b1010] = c(s * FRAC_1_SQRT_2, 0.0);
    amps[0b0101] = c(-s * FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps).expect("closed-form ket is normalized")
}

fn two_party_final(system: &DensityMatrix, theta_a: f64, theta_b: f64) -> Result<ProtocolState> {
    let state = assemble(system, &make_bell_state(BellKind::PhiPlus))?;
    apply_olts(&state, &vec![AngleSetting::so2(theta_a), AngleSetting::so2(theta_b)].into())
}

/// Fidelity between the simulated final state and [`final_state_ket`].
pub fn check_final_state_form(theta_a: f64, theta_b: f64) -> Result<f64> {
    let state = two_party_final(&make_basis_state("00")?, theta_a, theta_b)?;
    Ok(final_state_ket(theta_a, theta_b).overlap_with(state.full_state().matrix()))
}

/// `g` equally spaced angles `2πk/g` covering one period.
pub fn grid_angles(g: usize) -> Vec<f64> {
    (0..g).map(|k| 2.0 * PI * k as f64 / g as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencyPoint {
    pub theta_a: f64,
    pub theta_b: f64,
    /// PPT test of the reduced two-qubit system state (conclusive).
    pub reduced: PptReport,
    /// PPT test of the full four-qubit state across (ab | a'b').
    pub full_cut: PptReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistencyReport {
    pub points: Vec<PersistencyPoint>,
}

impl PersistencyReport {
    pub fn all_reduced_separable(&self) -> bool {
        self.points.iter().all(|p| p.reduced.separable() == Some(true))
    }

    /// Points whose angle difference is within `1e-12` of `delta` (mod 2π).
    pub fn at_difference(&self, delta: f64) -> impl Iterator<Item = &PersistencyPoint> {
        self.points.iter().filter(move |p| {
            let d = (p.theta_a - p.theta_b - delta).rem_euclid(2.0 * PI);
            d < 1e-12 || 2.0 * PI - d < 1e-12
        })
    }
}

/// Scans a `grid × grid` lattice of angles for the classically correlated
/// system with a Φ⁺ ancilla, testing the reduced state and the full state.
pub fn persistency_scan(grid: usize) -> Result<PersistencyReport> {
    if grid < 2 {
        return Err(crate::OltError::InvalidParameter(format!("grid must be at least 2, got {grid}")));
    }
    let system = make_classical_correlated(2)?;
    let angles = grid_angles(grid);
    let pairs: Vec<(f64, f64)> = angles
        .iter()
        .flat_map(|&a| angles.iter().map(move |&b| (a, b)))
        .collect();
    let points = pairs
        .into_par_iter()
        .map(|(theta_a, theta_b)| {
            let state = two_party_final(&system, theta_a, theta_b)?;
            Ok(PersistencyPoint {
                theta_a,
                theta_b,
                reduced: ppt_separable(&reduced_system(&state), &[1])?,
                full_cut: ppt_separable(state.full_state(), &[2, 3])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PersistencyReport { points })
}
