//! Seeded random states and settings for verification campaigns.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use std::f64::consts::PI;

use crate::gates::{AngleSetting, RotationMode};
use crate::linalg::{c, Operator, StateVector};
use crate::states::DensityMatrix;

fn normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// `G G† / tr(G G†)` for a complex Ginibre matrix `G`; full rank almost surely.
pub fn random_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let d = 1usize << n;
    let entries: Vec<Complex64> = (0..d * d).map(|_| c(normal(rng), normal(rng))).collect();
    let g = Operator::new(d, entries).expect("power-of-two dimension");
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    // symmetrize away rounding so the result is Hermitian to machine precision
    let herm = (&gg + &gg.adjoint()).scale(c(0.5 / tr, 0.0));
    DensityMatrix::from_trusted(herm)
}

/// Random convex mixture of computational-basis projectors (flat Dirichlet
/// weights). Always commutes with `σ³ ⊗ … ⊗ σ³`.
pub fn random_diagonal_mixture(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let d = 1usize << n;
    let weights: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    DensityMatrix::from_trusted(Operator::diag_from_fn(d, |i| c(weights[i] / total, 0.0)))
}

/// Uniform angles in `[-π, π)`.
pub fn random_setting(mode: RotationMode, rng: &mut impl Rng) -> AngleSetting {
    let params: Vec<f64> = (0..mode.arity()).map(|_| rng.random_range(-PI..PI)).collect();
    AngleSetting::from_params(mode, &params)
}

/// Product of `n` random single-qubit pure states.
pub fn random_product_pure(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let factors: Vec<Operator> = (0..n)
        .map(|_| {
            let amps = vec![c(normal(rng), normal(rng)), c(normal(rng), normal(rng))];
            StateVector::normalized(amps).expect("nonzero vector").projector()
        })
        .collect();
    let m = factors[1..].iter().fold(factors[0].clone(), |acc, f| acc.kron(f));
    DensityMatrix::from_trusted(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::validate_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3 {
            validate_density(random_density(n, &mut rng).into_operator()).unwrap();
            validate_density(random_diagonal_mixture(n, &mut rng).into_operator()).unwrap();
            validate_density(random_product_pure(n, &mut rng).into_operator()).unwrap();
        }
    }
}
