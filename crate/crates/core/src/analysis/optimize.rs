//! Seeded multi-restart coordinate ascent over measurement angles.
//!
//! Every correlator is a trigonometric polynomial of period 2π in each
//! angle. A coordinate step scans one period on a coarse grid, then refines
//! the best cell with a golden-section search.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{OltError, Result};
use crate::functional::{evaluate, BellFunctional};
use crate::gates::{AngleSetting, RotationMode};
use crate::protocol::{correlator_table, Route};
use crate::states::DensityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// A sweep improving the objective by less than this ends a restart.
    pub tolerance: f64,
    /// Coarse samples per period before golden-section refinement.
    pub scan_points: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_sweeps: 200,
            tolerance: 1e-12,
            scan_points: 12,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// Best `|functional value|` found.
    pub best_value: f64,
    /// `best_settings[party][setting]`.
    pub best_settings: Vec<Vec<AngleSetting>>,
    pub restarts_used: usize,
    /// The winning restart stopped on the tolerance rather than the sweep cap.
    pub converged: bool,
}

struct Objective<'a> {
    system: &'a DensityMatrix,
    ancilla: &'a DensityMatrix,
    functional: &'a BellFunctional,
    mode: RotationMode,
}

impl Objective<'_> {
    fn settings(&self, params: &[f64]) -> Vec<Vec<AngleSetting>> {
        let k = self.mode.arity();
        let mut chunks = params.chunks(k);
        self.functional
            .shape()
            .iter()
            .map(|&m| {
                (0..m)
                    .map(|_| AngleSetting::from_params(self.mode, chunks.next().expect("param count")))
                    .collect()
            })
            .collect()
    }

    fn value_of(&self, settings: &[Vec<AngleSetting>]) -> Result<f64> {
        let table = correlator_table(self.system, self.ancilla, settings, Route::Factorized)?;
        Ok(evaluate(self.functional, &table)?.abs())
    }

    fn value(&self, params: &[f64]) -> Result<f64> {
        self.value_of(&self.settings(params))
    }

    fn n_params(&self) -> usize {
        self.mode.arity() * self.functional.shape().iter().sum::<usize>()
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes along coordinate `j`; returns the new value (never lower).
fn line_search(obj: &Objective, params: &mut [f64], j: usize, current: f64, scan_points: usize) -> Result<f64> {
    let origin = params[j];
    let step = 2.0 * PI / scan_points as f64;
    let at = |x: f64, params: &mut [f64]| -> Result<f64> {
        params[j] = x;
        obj.value(params)
    };

    let mut best_x = origin;
    let mut best_v = current;
    for k in 1..scan_points {
        let x = origin + step * k as f64;
        let v = at(x, params)?;
        if v > best_v {
            best_x = x;
            best_v = v;
        }
    }

    let (mut lo, mut hi) = (best_x - step, best_x + step);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut v1 = at(x1, params)?;
    let mut v2 = at(x2, params)?;
    while hi - lo > 1e-10 {
        if v1 < v2 {
            lo = x1;
            x1 = x2;
            v1 = v2;
            x2 = lo + INV_PHI * (hi - lo);
            v2 = at(x2, params)?;
        } else {
            hi = x2;
            x2 = x1;
            v2 = v1;
            x1 = hi - INV_PHI * (hi - lo);
            v1 = at(x1, params)?;
        }
    }
    for (x, v) in [(x1, v1), (x2, v2)] {
        if v > best_v {
            best_x = x;
            best_v = v;
        }
    }
    // keep parameters inside one period
    params[j] = (best_x + PI).rem_euclid(2.0 * PI) - PI;
    obj.value(params)
}

struct RestartOutcome {
    value: f64,
    params: Vec<f64>,
    converged: bool,
}

fn run_restart(obj: &Objective, config: &OptimizerConfig, restart: usize) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let mut params: Vec<f64> = (0..obj.n_params()).map(|_| rng.random_range(-PI..PI)).collect();
    let mut value = obj.value(&params)?;
    let mut converged = false;
    for _ in 0..config.max_sweeps {
        let start = value;
        for j in 0..params.len() {
            value = line_search(obj, &mut params, j, value, config.scan_points)?;
        }
        if value - start < config.tolerance {
            converged = true;
            break;
        }
    }
    Ok(RestartOutcome { value, params, converged })
}

/// Maximizes `|f|` over all measurement angles with default settings and
/// `restarts` random starts.
pub fn optimize_angles(
    system: &DensityMatrix,
    ancilla: &DensityMatrix,
    f: &BellFunctional,
    mode: RotationMode,
    restarts: usize,
) -> Result<OptimizationResult> {
    let config = OptimizerConfig {
        restarts,
        ..OptimizerConfig::default()
    };
    optimize_angles_with(system, ancilla, f, mode, &config)
}

pub fn optimize_angles_with(
    system: &DensityMatrix,
    ancilla: &DensityMatrix,
    f: &BellFunctional,
    mode: RotationMode,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if config.restarts == 0 {
        return Err(OltError::InvalidParameter("restart budget must be at least 1".into()));
    }
    if config.scan_points < 3 {
        return Err(OltError::InvalidParameter("need at least 3 scan points".into()));
    }
    for (what, got) in [("system", system.n_qubits()), ("ancilla", ancilla.n_qubits())] {
        if got != f.n_parties() {
            return Err(OltError::PartyMismatch {
                what,
                expected: f.n_parties(),
                got,
            });
        }
    }
    let obj = Objective {
        system,
        ancilla,
        functional: f,
        mode,
    };
    let outcomes = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(&obj, config, r))
        .collect::<Result<Vec<_>>>()?;
    // first restart wins ties, so the result is independent of scheduling
    let best = outcomes
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one restart");
    let best_settings = obj.settings(&best.params);
    let best_value = obj.value_of(&best_settings)?;
    Ok(OptimizationResult {
        best_value,
        best_settings,
        restarts_used: config.restarts,
        converged: best.converged,
    })
}
