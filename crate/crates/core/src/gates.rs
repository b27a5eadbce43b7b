//! Paulis, single-qubit rotations, CNOT and the two-qubit OLT unitary.
//!
//! Two-qubit gates here use the fixed ordering (system, ancilla): the system
//! qubit is the first tensor factor.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{OltError, Result};
use crate::expr::parse_real;
use crate::linalg::{c, kron, Operator, I, ONE, ZERO};

pub use crate::linalg::embed;

/// Which rotation group a setting lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationMode {
    /// Single angle, rotation in the xz plane of the Bloch sphere.
    So2,
    /// ZYZ Euler triple covering all of SU(2).
    Su2,
}

impl RotationMode {
    /// Free angles per setting.
    pub fn arity(self) -> usize {
        match self {
            RotationMode::So2 => 1,
            RotationMode::Su2 => 3,
        }
    }
}

impl fmt::Display for RotationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RotationMode::So2 => "so2",
            RotationMode::Su2 => "su2",
        })
    }
}

/// One party's local rotation parameters, in radians.
///
/// Angles are reduced into `(-2π, 2π]` on construction. The rotation has
/// period 4π, so the reduction leaves the unitary unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleSetting {
    Planar { theta: f64 },
    Euler { phi: f64, theta: f64, lambda: f64 },
}

fn reduce_angle(x: f64) -> f64 {
    assert!(x.is_finite(), "angle must be finite, got {x}");
    if x > -2.0 * PI && x <= 2.0 * PI {
        return x;
    }
    let r = x.rem_euclid(4.0 * PI);
    if r > 2.0 * PI {
        r - 4.0 * PI
    } else {
        r
    }
}

impl AngleSetting {
    /// Planar setting. Panics on a non-finite angle.
    pub fn so2(theta: f64) -> Self {
        AngleSetting::Planar {
            theta: reduce_angle(theta),
        }
    }

    /// Euler setting `Rz(phi)·Ry(theta)·Rz(lambda)`. Panics on non-finite angles.
    pub fn su2(phi: f64, theta: f64, lambda: f64) -> Self {
        AngleSetting::Euler {
            phi: reduce_angle(phi),
            theta: reduce_angle(theta),
            lambda: reduce_angle(lambda),
        }
    }

    /// Builds a setting of `mode` from a flat parameter slice of length `mode.arity()`.
    pub fn from_params(mode: RotationMode, params: &[f64]) -> Self {
        match mode {
            RotationMode::So2 => Self::so2(params[0]),
            RotationMode::Su2 => Self::su2(params[0], params[1], params[2]),
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            AngleSetting::Planar { theta } => vec![theta],
            AngleSetting::Euler { phi, theta, lambda } => vec![phi, theta, lambda],
        }
    }

    pub fn mode(&self) -> RotationMode {
        match self {
            AngleSetting::Planar { .. } => RotationMode::So2,
            AngleSetting::Euler { .. } => RotationMode::Su2,
        }
    }

    /// The single-qubit rotation this setting applies to the ancilla qubit.
    pub fn rotation(&self) -> Operator {
        match *self {
            AngleSetting::Planar { theta } => rotation_so2(theta),
            AngleSetting::Euler { phi, theta, lambda } => euler_zyz(phi, theta, lambda),
        }
    }

    /// `R†σ³R`: the effective dichotomic observable measured with this setting.
    pub fn observable(&self) -> Operator {
        let r = self.rotation();
        &(&r.adjoint() * &pauli_z()) * &r
    }

    /// Setting whose rotation conjugates σ³ to σ¹.
    pub fn to_sigma_x() -> Self {
        Self::su2(0.0, -FRAC_PI_2, 0.0)
    }

    /// Setting whose rotation conjugates σ³ to σ².
    pub fn to_sigma_y() -> Self {
        Self::su2(0.0, -FRAC_PI_2, -FRAC_PI_2)
    }
}

impl fmt::Display for AngleSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleSetting::Planar { theta } => write!(f, "so2:{theta}"),
            AngleSetting::Euler { phi, theta, lambda } => write!(f, "su2:{phi},{theta},{lambda}"),
        }
    }
}

impl FromStr for AngleSetting {
    type Err = String;

    /// `so2:<θ>` or `su2:<φ>,<ϑ>,<λ>`, radians, `pi` literals allowed.
    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        let (tag, args) = text
            .split_once(':')
            .ok_or_else(|| format!("setting `{text}` must be so2:<θ> or su2:<φ>,<ϑ>,<λ>"))?;
        let values = args
            .split(',')
            .map(parse_real)
            .collect::<std::result::Result<Vec<f64>, _>>()?;
        match (tag.trim(), values.as_slice()) {
            ("so2", [theta]) => Ok(Self::so2(*theta)),
            ("su2", [phi, theta, lambda]) => Ok(Self::su2(*phi, *theta, *lambda)),
            ("so2", _) => Err(format!("so2 setting takes one angle, got {}", values.len())),
            ("su2", _) => Err(format!("su2 setting takes three angles, got {}", values.len())),
            (other, _) => Err(format!("unknown setting kind `{other}` (so2, su2)")),
        }
    }
}

impl FromStr for RotationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "so2" => Ok(RotationMode::So2),
            "su2" => Ok(RotationMode::Su2),
            other => Err(format!("unknown rotation mode `{other}` (so2, su2)")),
        }
    }
}

/// Pauli matrix σ^(k) for k ∈ {1, 2, 3} (x, y, z).
pub fn pauli(k: u8) -> Result<Operator> {
    match k {
        1 => Ok(Operator::from_rows(&[[ZERO, ONE], [ONE, ZERO]])),
        2 => Ok(Operator::from_rows(&[[ZERO, -I], [I, ZERO]])),
        3 => Ok(pauli_z()),
        _ => Err(OltError::InvalidParameter(format!(
            "pauli index must be 1, 2 or 3, got {k}"
        ))),
    }
}

pub(crate) fn pauli_z() -> Operator {
    Operator::from_rows(&[[ONE, ZERO], [ZERO, -ONE]])
}

/// Rotation in the xz plane: `[[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn rotation_so2(theta: f64) -> Operator {
    let (s, co) = (theta / 2.0).sin_cos();
    Operator::from_real_rows(&[[co, -s], [s, co]])
}

fn rotation_z(alpha: f64) -> Operator {
    let half = alpha / 2.0;
    Operator::diag(&[Complex64::from_polar(1.0, -half), Complex64::from_polar(1.0, half)])
}

fn euler_zyz(phi: f64, theta: f64, lambda: f64) -> Operator {
    let zy = &rotation_z(phi) * &rotation_so2(theta);
    &zy * &rotation_z(lambda)
}

/// Full SU(2) rotation of an Euler setting.
pub fn rotation_su2(setting: &AngleSetting) -> Result<Operator> {
    match *setting {
        AngleSetting::Euler { phi, theta, lambda } => Ok(euler_zyz(phi, theta, lambda)),
        AngleSetting::Planar { .. } => Err(OltError::ModeMismatch("su2")),
    }
}

/// CNOT with control on the ancilla (second) qubit and target on the system
/// (first) qubit: |00⟩→|00⟩, |01⟩→|11⟩, |10⟩→|10⟩, |11⟩→|01⟩.
pub fn cnot() -> Operator {
    let one = c(1.0, 0.0);
    let mut rows = [[ZERO; 4]; 4];
    for (from, to) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
        rows[to][from] = one;
    }
    Operator::from_rows(&rows)
}

/// The operationally local unitary `C·(I ⊗ R)` on (system, ancilla).
pub fn olt_unitary(setting: &AngleSetting) -> Operator {
    &cnot() * &kron(&Operator::identity(2), &setting.rotation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    const TOL: f64 = 1e-12;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (pauli(1).unwrap(), pauli(2).unwrap(), pauli(3).unwrap());
        assert_eq!(z, Operator::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]));
        assert_eq!(&x * &x, Operator::identity(2));
        assert!((&x * &y).max_abs_diff(&z.scale(I)) < TOL);
        assert!(pauli(0).is_err());
        assert!(pauli(4).is_err());
    }

    #[test]
    fn so2_rotation_values() {
        assert!(rotation_so2(0.0).max_abs_diff(&Operator::identity(2)) < TOL);
        let r = rotation_so2(PI);
        assert!(r.max_abs_diff(&Operator::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]])) < TOL);
    }

    #[test]
    fn so2_conjugation_of_sigma_z() {
        let (x, z) = (pauli(1).unwrap(), pauli(3).unwrap());
        for k in 0..16 {
            let theta = -3.0 + 0.4 * k as f64;
            // R†σ³R = cos θ σ³ − sin θ σ¹, and R σ³ R† flips the sine term
            let obs = AngleSetting::so2(theta).observable();
            let expected = &z.scale(c(theta.cos(), 0.0)) - &x.scale(c(theta.sin(), 0.0));
            assert!(obs.max_abs_diff(&expected) < TOL, "theta = {theta}");
            let r = rotation_so2(theta);
            let flipped = &z.scale(c(theta.cos(), 0.0)) + &x.scale(c(theta.sin(), 0.0));
            assert!(r.conjugate(&z).max_abs_diff(&flipped) < TOL);
        }
    }

    #[test]
    fn su2_embeds_planar_slice() {
        for theta in [0.0, 0.3, FRAC_PI_2, 2.5, -1.1] {
            let r = rotation_su2(&AngleSetting::su2(0.0, theta, 0.0)).unwrap();
            assert!(r.max_abs_diff(&rotation_so2(theta)) < TOL);
        }
        assert_eq!(
            rotation_su2(&AngleSetting::so2(0.1)),
            Err(OltError::ModeMismatch("su2"))
        );
    }

    #[test]
    fn named_settings_reach_x_and_y() {
        let obs_x = AngleSetting::to_sigma_x().observable();
        let obs_y = AngleSetting::to_sigma_y().observable();
        assert!(obs_x.max_abs_diff(&pauli(1).unwrap()) < TOL);
        assert!(obs_y.max_abs_diff(&pauli(2).unwrap()) < TOL);
    }

    #[test]
    fn residual_phi_freedom_keeps_observable() {
        for phi in [0.0, 0.7, -2.0, PI] {
            let ox = AngleSetting::su2(phi, -FRAC_PI_2, 0.0).observable();
            let oy = AngleSetting::su2(phi, -FRAC_PI_2, -FRAC_PI_2).observable();
            assert!(ox.max_abs_diff(&pauli(1).unwrap()) < TOL);
            assert!(oy.max_abs_diff(&pauli(2).unwrap()) < TOL);
        }
    }

    #[test]
    fn cnot_mapping() {
        let g = cnot();
        let ket01 = [ZERO, ONE, ZERO, ZERO];
        assert_eq!(g.apply(&ket01), vec![ZERO, ZERO, ZERO, ONE]);
        assert_eq!(&g * &g, Operator::identity(4));
        let zi = kron(&pauli_z(), &Operator::identity(2));
        let zz = kron(&pauli_z(), &pauli_z());
        assert_eq!(&(&g * &zi) * &g, zz);
    }

    #[test]
    fn olt_at_zero_is_cnot() {
        assert!(olt_unitary(&AngleSetting::so2(0.0)).max_abs_diff(&cnot()) < TOL);
    }

    #[test]
    fn olt_at_quarter_turn_has_equal_entries() {
        let u = olt_unitary(&AngleSetting::so2(FRAC_PI_2));
        let h = FRAC_PI_4.cos();
        let expected = Operator::from_real_rows(&[
            [h, -h, 0.0, 0.0],
            [0.0, 0.0, h, h],
            [0.0, 0.0, h, -h],
            [h, h, 0.0, 0.0],
        ]);
        assert!(u.max_abs_diff(&expected) < TOL);
    }

    #[test]
    fn embed_examples() {
        let z = pauli_z();
        let zi = kron(&z, &Operator::identity(2));
        assert_eq!(embed(&z, &[0], 2).unwrap(), zi);
        assert_eq!(embed(&cnot(), &[0, 1], 2).unwrap(), cnot());
        // control moves to qubit 0, target to qubit 1
        let swapped = embed(&cnot(), &[1, 0], 2).unwrap();
        assert_eq!(swapped.apply(&[ZERO, ZERO, ONE, ZERO]), vec![ZERO, ZERO, ZERO, ONE]);
    }

    #[test]
    fn embed_rejects_bad_targets() {
        assert!(matches!(embed(&cnot(), &[0], 2), Err(OltError::DimensionMismatch { .. })));
        assert_eq!(embed(&cnot(), &[1, 1], 2), Err(OltError::DuplicateQubit(1)));
        assert!(matches!(embed(&cnot(), &[0, 3], 2), Err(OltError::QubitOutOfRange { .. })));
    }

    #[test]
    fn setting_grammar() {
        assert_eq!("so2:pi/4".parse::<AngleSetting>().unwrap(), AngleSetting::so2(FRAC_PI_4));
        assert_eq!(
            "su2: 0, -pi/2, -pi/2".parse::<AngleSetting>().unwrap(),
            AngleSetting::to_sigma_y()
        );
        assert!("so2:1,2".parse::<AngleSetting>().is_err());
        assert!("su2:1".parse::<AngleSetting>().is_err());
        assert!("xy:1".parse::<AngleSetting>().is_err());
        assert!("so2".parse::<AngleSetting>().is_err());
        for s in [AngleSetting::so2(-FRAC_PI_4), AngleSetting::su2(0.1, -2.0, 6.0)] {
            assert_eq!(s.to_string().parse::<AngleSetting>().unwrap(), s);
        }
    }

    #[test]
    fn angle_reduction() {
        let AngleSetting::Planar { theta } = AngleSetting::so2(5.0 * PI) else {
            unreachable!()
        };
        assert!((theta - PI).abs() < 1e-12);
        let AngleSetting::Planar { theta } = AngleSetting::so2(-2.0 * PI) else {
            unreachable!()
        };
        assert!((theta - 2.0 * PI).abs() < 1e-12);
        let u1 = olt_unitary(&AngleSetting::so2(0.3));
        let u2 = olt_unitary(&AngleSetting::so2(0.3 + 4.0 * PI));
        assert!(u1.max_abs_diff(&u2) < 1e-12);
    }
}
