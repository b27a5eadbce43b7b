//! Named system and ancilla states, and density-matrix validation.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{OltError, Result};
use crate::expr::parse_real;
use crate::linalg::{c, herm_eigenvalues, qubits_for_dim, Operator, StateVector, STRUCTURAL_TOL, ONE, ZERO};

/// Hermitian, unit-trace, positive semidefinite operator on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: Operator,
}

impl DensityMatrix {
    /// Skips validation. Only for results of trace-preserving, positivity
    /// preserving maps applied to already validated states.
    pub(crate) fn from_trusted(matrix: Operator) -> Self {
        Self {
            n_qubits: matrix.n_qubits(),
            matrix,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    pub fn into_operator(self) -> Operator {
        self.matrix
    }

    /// `tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let d = m.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (m.get(i, j) * m.get(j, i)).re;
            }
        }
        acc
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigenvalues(&self.matrix).expect("validated density matrices are Hermitian")
    }
}

/// Validates `m` as a density matrix. Checks run in the order hermiticity,
/// positivity, trace; the first failure is reported.
pub fn validate_density(m: Operator) -> Result<DensityMatrix> {
    qubits_for_dim(m.dim())?;
    let herm = m.hermiticity_error();
    if herm > STRUCTURAL_TOL {
        return Err(OltError::NotHermitian(herm));
    }
    let min = herm_eigenvalues(&m)?[0];
    if min < -STRUCTURAL_TOL {
        return Err(OltError::NegativeEigenvalue(min));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
        return Err(OltError::TraceViolation(tr.re));
    }
    Ok(DensityMatrix::from_trusted(m))
}

/// `|ψ⟩⟨ψ|`.
pub fn make_pure(psi: &StateVector) -> DensityMatrix {
    DensityMatrix::from_trusted(psi.projector())
}

/// Projector onto the computational basis ket labelled by a string of `0`/`1`.
pub fn make_basis_state(bits: &str) -> Result<DensityMatrix> {
    if bits.is_empty() {
        return Err(OltError::InvalidParameter("empty bit string".into()));
    }
    let mut index = 0usize;
    for ch in bits.chars() {
        index = (index << 1)
            | match ch {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(OltError::InvalidParameter(format!(
                        "bit string may contain only 0 and 1, found `{other}`"
                    )))
                }
            };
    }
    Ok(make_pure(&StateVector::basis(bits.len(), index)))
}

/// `½(|0…0⟩⟨0…0| + |1…1⟩⟨1…1|)` on `n` qubits.
pub fn make_classical_correlated(n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(OltError::InvalidParameter(format!(
            "classically correlated state needs at least 2 parties, got {n}"
        )));
    }
    let d = 1usize << n;
    let m = Operator::diag_from_fn(d, |i| if i == 0 || i == d - 1 { c(0.5, 0.0) } else { ZERO });
    Ok(DensityMatrix::from_trusted(m))
}

/// `I/2^n`.
pub fn make_maximally_mixed(n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(OltError::InvalidParameter("need at least one qubit".into()));
    }
    let d = 1usize << n;
    Ok(DensityMatrix::from_trusted(
        Operator::identity(d).scale(c(1.0 / d as f64, 0.0)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub fn ket(self) -> StateVector {
        let h = c(FRAC_1_SQRT_2, 0.0);
        let amps = match self {
            BellKind::PhiPlus => [h, ZERO, ZERO, h],
            BellKind::PhiMinus => [h, ZERO, ZERO, -h],
            BellKind::PsiPlus => [ZERO, h, h, ZERO],
            BellKind::PsiMinus => [ZERO, h, -h, ZERO],
        };
        StateVector::new(amps.to_vec()).expect("Bell kets are normalized")
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        })
    }
}

impl FromStr for BellKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" => Ok(BellKind::PhiPlus),
            "phi-" => Ok(BellKind::PhiMinus),
            "psi+" => Ok(BellKind::PsiPlus),
            "psi-" => Ok(BellKind::PsiMinus),
            other => Err(format!("unknown Bell state `{other}` (phi+, phi-, psi+, psi-)")),
        }
    }
}

pub fn make_bell_state(kind: BellKind) -> DensityMatrix {
    make_pure(&kind.ket())
}

/// `(1-p)·I/4 + p·|Ψ⁻⟩⟨Ψ⁻|`.
pub fn make_werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(OltError::InvalidParameter(format!(
            "Werner parameter must lie in [0, 1], got {p}"
        )));
    }
    let noise = Operator::identity(4).scale(c((1.0 - p) / 4.0, 0.0));
    let singlet = make_bell_state(BellKind::PsiMinus).into_operator().scale(c(p, 0.0));
    Ok(DensityMatrix::from_trusted(&noise + &singlet))
}

/// Projector onto `(|0…0⟩ + phase·|1…1⟩)/√2`.
pub fn make_ghz(n: usize, phase: Complex64) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(OltError::InvalidParameter(format!(
            "GHZ state needs at least 2 parties, got {n}"
        )));
    }
    if (phase.norm() - 1.0).abs() > STRUCTURAL_TOL {
        return Err(OltError::InvalidParameter(format!(
            "GHZ phase must have unit modulus, got |{phase}| = {}",
            phase.norm()
        )));
    }
    let d = 1usize << n;
    let mut amps = vec![ZERO; d];
    amps[0] = c(FRAC_1_SQRT_2, 0.0);
    amps[d - 1] = phase * FRAC_1_SQRT_2;
    Ok(make_pure(&StateVector::normalized(amps)?))
}

/// Textual state description as written in scenario files.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Basis(String),
    ClassicalCorrelated(usize),
    Bell(BellKind),
    Werner(f64),
    /// GHZ state with relative phase `exp(i·phase_arg)`.
    Ghz { n: usize, phase_arg: f64 },
    MaximallyMixed(usize),
}

impl StateSpec {
    pub fn n_qubits(&self) -> usize {
        match self {
            StateSpec::Basis(bits) => bits.len(),
            StateSpec::ClassicalCorrelated(n) | StateSpec::MaximallyMixed(n) => *n,
            StateSpec::Bell(_) | StateSpec::Werner(_) => 2,
            StateSpec::Ghz { n, .. } => *n,
        }
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Basis(bits) => make_basis_state(bits),
            StateSpec::ClassicalCorrelated(n) => make_classical_correlated(*n),
            StateSpec::Bell(kind) => Ok(make_bell_state(*kind)),
            StateSpec::Werner(p) => make_werner(*p),
            StateSpec::Ghz { n, phase_arg } => make_ghz(*n, phase_from_arg(*phase_arg)),
            StateSpec::MaximallyMixed(n) => make_maximally_mixed(*n),
        }
    }
}

fn phase_from_arg(arg: f64) -> Complex64 {
    // exact values for the common quarter turns
    if arg == 0.0 {
        ONE
    } else if arg == FRAC_PI_2 {
        c(0.0, 1.0)
    } else if arg == -FRAC_PI_2 {
        c(0.0, -1.0)
    } else if arg == PI {
        -ONE
    } else {
        Complex64::from_polar(1.0, arg)
    }
}

fn parse_phase_arg(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    match s {
        "i" | "+i" => return Ok(FRAC_PI_2),
        "-i" => return Ok(-FRAC_PI_2),
        _ => {}
    }
    if let Some(inner) = s.strip_prefix("exp(i*").and_then(|r| r.strip_suffix(')')) {
        return parse_real(inner);
    }
    let v = parse_real(s).map_err(|e| {
        format!("GHZ phase must be i, -i, a real unit or exp(i*<angle>): {e}")
    })?;
    if v == 1.0 {
        Ok(0.0)
    } else if v == -1.0 {
        Ok(PI)
    } else {
        Err(format!("GHZ phase must have unit modulus, got {v}"))
    }
}

fn parse_count(s: &str, what: &str) -> std::result::Result<usize, String> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| format!("{what} must be a non-negative integer, got `{}`", s.trim()))
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        let (tag, arg) = text
            .split_once(':')
            .ok_or_else(|| format!("state `{text}` must have the form <kind>:<argument>"))?;
        let spec = match tag.trim() {
            "basis" => Ok(StateSpec::Basis(arg.trim().to_string())),
            "classical_correlated" => Ok(StateSpec::ClassicalCorrelated(parse_count(arg, "party count")?)),
            "bell" => Ok(StateSpec::Bell(arg.parse()?)),
            "werner" => Ok(StateSpec::Werner(parse_real(arg)?)),
            "ghz" => {
                let (n, phase) = arg.split_once(',').unwrap_or((arg, "1"));
                Ok(StateSpec::Ghz {
                    n: parse_count(n, "party count")?,
                    phase_arg: parse_phase_arg(phase)?,
                })
            }
            "maximally_mixed" => Ok(StateSpec::MaximallyMixed(parse_count(arg, "qubit count")?)),
            other => Err(format!(
                "unknown state kind `{other}` (basis, classical_correlated, bell, werner, ghz, maximally_mixed)"
            )),
        }?;
        // reject specs that name no valid state (p out of range, n < 2, ...)
        spec.build().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Basis(bits) => write!(f, "basis:{bits}"),
            StateSpec::ClassicalCorrelated(n) => write!(f, "classical_correlated:{n}"),
            StateSpec::Bell(kind) => write!(f, "bell:{kind}"),
            StateSpec::Werner(p) => write!(f, "werner:{p}"),
            StateSpec::Ghz { n, phase_arg } => {
                if *phase_arg == FRAC_PI_2 {
                    write!(f, "ghz:{n},i")
                } else if *phase_arg == -FRAC_PI_2 {
                    write!(f, "ghz:{n},-i")
                } else if *phase_arg == 0.0 {
                    write!(f, "ghz:{n},1")
                } else if *phase_arg == PI {
                    write!(f, "ghz:{n},-1")
                } else {
                    write!(f, "ghz:{n},exp(i*{phase_arg})")
                }
            }
            StateSpec::MaximallyMixed(n) => write!(f, "maximally_mixed:{n}"),
        }
    }
}
