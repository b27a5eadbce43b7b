use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::random::{random_density, random_diagonal_mixture, random_setting};
use crate::error::{OltError, Result};
use crate::gates::RotationMode;
use crate::protocol::{correlation_direct, correlation_factorized, SettingsVector};

/// Agreement threshold between the two correlator routes.
pub const FACTORIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationReport {
    pub max_deviation: f64,
    pub trials: usize,
    pub pass: bool,
}

/// Randomized comparison of [`correlation_direct`] and
/// [`correlation_factorized`].
///
/// Even trials draw the system state as a mixture of computational basis
/// projectors (a σ³-string eigenstate mixture), odd trials draw a fully
/// random state. Ancillas are always fully random; each trial picks SO(2)
/// or SU(2) settings at random. Trial `t` uses ChaCha stream `t` of `seed`,
/// so the outcome does not depend on thread scheduling.
pub fn verify_factorization(trials: usize, parties: usize, seed: u64) -> Result<FactorizationReport> {
    if !(2..=4).contains(&parties) {
        return Err(OltError::InvalidParameter(format!(
            "factorization campaign supports 2 to 4 parties, got {parties}"
        )));
    }
    if trials == 0 {
        return Err(OltError::InvalidParameter("need at least one trial".into()));
    }
    let deviations = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let system = if t % 2 == 0 {
                random_diagonal_mixture(parties, &mut rng)
            } else {
                random_density(parties, &mut rng)
            };
            let ancilla = random_density(parties, &mut rng);
            let mode = if rng.random::<bool>() { RotationMode::So2 } else { RotationMode::Su2 };
            let settings: SettingsVector = (0..parties)
                .map(|_| random_setting(mode, &mut rng))
                .collect::<Vec<_>>()
                .into();
            let direct = correlation_direct(&system, &ancilla, &settings)?;
            let factorized = correlation_factorized(&system, &ancilla, &settings)?;
            Ok((direct - factorized).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = deviations.into_iter().fold(0.0, f64::max);
    Ok(FactorizationReport {
        max_deviation,
        trials,
        pass: max_deviation < FACTORIZATION_TOL,
    })
}
