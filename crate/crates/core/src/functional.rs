//! Full-correlator Bell functionals with dichotomic outcomes, their exact
//! classical bounds, and violation reports.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{OltError, Result};
use crate::expr::parse_real;

/// Tolerance on correlator magnitudes and on the violation verdict.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Largest total number of settings (summed over parties) whose
/// deterministic strategies are enumerated.
pub const STRATEGY_BITS_CAP: usize = 24;

/// Row-major enumeration of setting combinations; the last party varies fastest.
pub fn setting_combinations(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = shape.iter().product();
    (0..total).map(move |mut flat| {
        let mut combo = vec![0; shape.len()];
        for (slot, &m) in combo.iter_mut().zip(shape).rev() {
            *slot = flat % m;
            flat /= m;
        }
        combo
    })
}

fn flat_index(shape: &[usize], combo: &[usize]) -> usize {
    combo.iter().zip(shape).fold(0, |acc, (&s, &m)| acc * m + s)
}

/// Linear combination of full correlators `Σ c[α,β,…] ⟨A^α B^β …⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellFunctional {
    label: String,
    shape: Vec<usize>,
    coefficients: Vec<f64>,
}

impl BellFunctional {
    pub fn new(label: impl Into<String>, shape: Vec<usize>, coefficients: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(OltError::InvalidParameter(format!(
                "functional shape {shape:?} needs at least one party and one setting per party"
            )));
        }
        let expected: usize = shape.iter().product();
        if coefficients.len() != expected {
            return Err(OltError::InvalidParameter(format!(
                "shape {shape:?} needs {expected} coefficients, got {}",
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(OltError::InvalidParameter("coefficients must be finite".into()));
        }
        if coefficients.iter().all(|&c| c == 0.0) {
            return Err(OltError::InvalidParameter(
                "functional needs at least one nonzero coefficient".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            shape,
            coefficients,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_parties(&self) -> usize {
        self.shape.len()
    }

    /// Settings per party.
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, combo: &[usize]) -> f64 {
        self.coefficients[flat_index(&self.shape, combo)]
    }
}

/// `⟨A¹B¹⟩ + ⟨A¹B²⟩ + ⟨A²B¹⟩ − ⟨A²B²⟩`.
pub fn make_chsh() -> BellFunctional {
    BellFunctional::new("CHSH", vec![2, 2], vec![1.0, 1.0, 1.0, -1.0]).expect("valid CHSH")
}

/// Three-party Mermin functional. Setting 0 of each party stands for the
/// σ¹ measurement and setting 1 for σ²:
/// `⟨XXY⟩ + ⟨XYX⟩ + ⟨YXX⟩ − ⟨YYY⟩`.
pub fn make_mermin3() -> BellFunctional {
    let mut coefficients = vec![0.0; 8];
    coefficients[0b001] = 1.0;
    coefficients[0b010] = 1.0;
    coefficients[0b100] = 1.0;
    coefficients[0b111] = -1.0;
    BellFunctional::new("Mermin-3", vec![2, 2, 2], coefficients).expect("valid Mermin functional")
}

/// Correlator values `⟨A^α B^β …⟩`, one per setting combination, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl CorrelatorTable {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let expected: usize = shape.iter().product();
        if values.len() != expected {
            return Err(OltError::InvalidParameter(format!(
                "table shape {shape:?} needs {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.is_nan() || v.abs() > 1.0 + 1e-10) {
            return Err(OltError::InvalidParameter(format!(
                "correlator {v} lies outside [-1, 1]"
            )));
        }
        Ok(Self { shape, values })
    }

    /// Table of a deterministic local strategy: `outcomes[i][s]` is party
    /// `i`'s ±1 answer to setting `s`.
    pub fn deterministic(outcomes: &[Vec<i8>]) -> Self {
        let shape: Vec<usize> = outcomes.iter().map(Vec::len).collect();
        let values = setting_combinations(&shape)
            .map(|combo| {
                combo
                    .iter()
                    .enumerate()
                    .map(|(party, &s)| f64::from(outcomes[party][s]))
                    .product()
            })
            .collect();
        Self { shape, values }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, combo: &[usize]) -> f64 {
        self.values[flat_index(&self.shape, combo)]
    }
}

/// Signed value `Σ coefficient × correlator`.
pub fn evaluate(f: &BellFunctional, t: &CorrelatorTable) -> Result<f64> {
    if f.shape != t.shape {
        return Err(OltError::ShapeMismatch {
            expected: f.shape.clone(),
            got: t.shape.clone(),
        });
    }
    Ok(f.coefficients.iter().zip(&t.values).map(|(c, v)| c * v).sum())
}

/// Maximum of `|value|` over all deterministic local strategies, found by
/// exhaustive enumeration.
pub fn classical_bound(f: &BellFunctional) -> Result<f64> {
    let bits: usize = f.shape.iter().sum();
    if bits > STRATEGY_BITS_CAP {
        return Err(OltError::EnumerationCap {
            bits,
            cap: STRATEGY_BITS_CAP,
        });
    }
    let offsets: Vec<usize> = f
        .shape
        .iter()
        .scan(0, |acc, &m| {
            let start = *acc;
            *acc += m;
            Some(start)
        })
        .collect();
    // (coefficient, bit mask of the outcomes multiplied together)
    let terms: Vec<(f64, u32)> = setting_combinations(&f.shape)
        .zip(&f.coefficients)
        .filter(|(_, &c)| c != 0.0)
        .map(|(combo, &c)| {
            let mask = combo
                .iter()
                .zip(&offsets)
                .fold(0u32, |m, (&s, &off)| m | (1 << (off + s)));
            (c, mask)
        })
        .collect();
    let best = (0u32..1 << bits)
        .into_par_iter()
        .map(|strategy| {
            // bit set = outcome -1; the product's sign is the parity of set bits
            let v: f64 = terms
                .iter()
                .map(|&(c, mask)| if (strategy & mask).count_ones() % 2 == 0 { c } else { -c })
                .sum();
            v.abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationReport {
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
    /// `|value| − bound`.
    pub margin: f64,
}

pub fn violation_report(f: &BellFunctional, t: &CorrelatorTable) -> Result<ViolationReport> {
    let value = evaluate(f, t)?;
    let bound = classical_bound(f)?;
    Ok(ViolationReport {
        value,
        bound,
        violated: value.abs() > bound + VIOLATION_TOL,
        margin: value.abs() - bound,
    })
}

/// Functional as written in scenario files: `chsh`, `mermin3`, or
/// `custom:<M1>x<M2>x…:<c1>,<c2>,…` (coefficients row-major).
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionalSpec {
    Chsh,
    Mermin3,
    Custom { shape: Vec<usize>, coefficients: Vec<f64> },
}

impl FunctionalSpec {
    pub fn build(&self) -> Result<BellFunctional> {
        match self {
            FunctionalSpec::Chsh => Ok(make_chsh()),
            FunctionalSpec::Mermin3 => Ok(make_mermin3()),
            FunctionalSpec::Custom { shape, coefficients } => {
                BellFunctional::new("custom", shape.clone(), coefficients.clone())
            }
        }
    }

    pub fn n_parties(&self) -> usize {
        match self {
            FunctionalSpec::Chsh => 2,
            FunctionalSpec::Mermin3 => 3,
            FunctionalSpec::Custom { shape, .. } => shape.len(),
        }
    }
}

impl FromStr for FunctionalSpec {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        match text {
            "chsh" => return Ok(FunctionalSpec::Chsh),
            "mermin3" => return Ok(FunctionalSpec::Mermin3),
            _ => {}
        }
        let rest = text
            .strip_prefix("custom:")
            .ok_or_else(|| format!("unknown functional `{text}` (chsh, mermin3, custom:<shape>:<coefficients>)"))?;
        let (shape_text, coef_text) = rest
            .split_once(':')
            .ok_or("custom functional needs `<shape>:<coefficients>`")?;
        let shape = shape_text
            .split('x')
            .map(|m| {
                m.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad setting count `{}` in shape", m.trim()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let coefficients = coef_text
            .split(',')
            .map(parse_real)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        BellFunctional::new("custom", shape.clone(), coefficients.clone()).map_err(|e| e.to_string())?;
        Ok(FunctionalSpec::Custom { shape, coefficients })
    }
}

impl fmt::Display for FunctionalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalSpec::Chsh => f.write_str("chsh"),
            FunctionalSpec::Mermin3 => f.write_str("mermin3"),
            FunctionalSpec::Custom { shape, coefficients } => {
                let shape: Vec<String> = shape.iter().map(usize::to_string).collect();
                let coefs: Vec<String> = coefficients.iter().map(f64::to_string).collect();
                write!(f, "custom:{}:{}", shape.join("x"), coefs.join(","))
            }
        }
    }
}
