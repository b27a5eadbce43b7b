//! Dense complex linear algebra on small qubit registers.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
//! the computational-basis label. Every other module inherits this ordering.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{OltError, Result};

/// Tolerance used for structural validation (hermiticity, trace, norm).
pub const STRUCTURAL_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Number of qubits for a power-of-two dimension.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(OltError::BadDimension(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Bit mask selecting qubit `q` of an `n`-qubit basis label.
#[inline]
pub(crate) fn qubit_mask(q: usize, n: usize) -> usize {
    1 << (n - 1 - q)
}

pub(crate) fn check_qubits(indices: &[usize], n: usize) -> Result<()> {
    let mut seen = 0usize;
    for &q in indices {
        if q >= n {
            return Err(OltError::QubitOutOfRange { index: q, n });
        }
        if seen & (1 << q) != 0 {
            return Err(OltError::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Dense square complex matrix over a qubit register, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(OltError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds an operator from rows; panics on ragged or non-power-of-two input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.as_ref().len(), dim, "ragged operator rows");
            entries.extend_from_slice(row.as_ref());
        }
        Self::new(dim, entries).expect("operator rows must form a 2^k square")
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(dim, vec![ZERO; dim * dim]).expect("power-of-two dimension")
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![ONE; dim])
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * dim + i] = v;
        }
        m
    }

    /// Diagonal operator with entry `i` given by `f(i)`.
    pub fn diag_from_fn(dim: usize, f: impl Fn(usize) -> Complex64) -> Self {
        let values: Vec<Complex64> = (0..dim).map(f).collect();
        Self::diag(&values)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for col in 0..d {
                out.entries[col * d + r] = self.entries[r * d + col].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn kron(&self, other: &Operator) -> Self {
        kron(self, other)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dims");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for r in 0..d {
            for col in r..d {
                let dev = (self.get(r, col) - self.get(col, r).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim)) <= tol
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "apply on mismatched dims");
        (0..self.dim)
            .map(|r| {
                self.entries[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `self * other * self†`.
    pub fn conjugate(&self, other: &Operator) -> Self {
        &(self * other) * &self.adjoint()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|col| {
                    let z = self.get(r, col);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn mul(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator product on mismatched dims");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            let out_row = &mut out[r * d..(r + 1) * d];
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.entries[k * d..(k + 1) * d];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Operator { dim: d, entries: out }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn add(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator sum on mismatched dims");
        Operator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn sub(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator difference on mismatched dims");
        Operator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Pure state of a qubit register with unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(OltError::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the input first; fails only on a zero vector or bad length.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(OltError::NotNormalized(0.0));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    /// Computational basis ket `|index⟩` on `n` qubits.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Self { amplitudes: amps }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> Operator {
        let d = self.dim();
        let mut entries = Vec::with_capacity(d * d);
        for a in &self.amplitudes {
            for b in &self.amplitudes {
                entries.push(a * b.conj());
            }
        }
        Operator { dim: d, entries }
    }

    /// `⟨ψ|ρ|ψ⟩`, the fidelity of a density operator with this pure state.
    pub fn overlap_with(&self, rho: &Operator) -> f64 {
        let applied = rho.apply(&self.amplitudes);
        self.amplitudes
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re
    }
}

/// Tensor product `a ⊗ b`.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    let (da, db) = (a.dim, b.dim);
    let d = da * db;
    let mut entries = vec![ZERO; d * d];
    for i in 0..da {
        for j in 0..da {
            let x = a.get(i, j);
            if x == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    entries[(i * db + k) * d + (j * db + l)] = x * b.get(k, l);
                }
            }
        }
    }
    Operator { dim: d, entries }
}

/// Basis labels with the listed qubits' bits taken from `j` (first listed
/// qubit = most significant bit of `j`) and all other bits zero.
fn scatter_table(qubits: &[usize], n: usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|j| {
            qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
                if j & (1 << (k - 1 - pos)) != 0 {
                    acc | qubit_mask(q, n)
                } else {
                    acc
                }
            })
        })
        .collect()
}

fn check_register(rho: &Operator, n: usize) -> Result<()> {
    if rho.dim != 1 << n {
        return Err(OltError::DimensionMismatch {
            expected: 1 << n,
            got: rho.dim,
        });
    }
    Ok(())
}

/// Traces out every qubit not in `keep`. Kept qubits appear in ascending
/// index order in the result.
pub fn partial_trace(rho: &Operator, keep: &[usize], n: usize) -> Result<Operator> {
    check_register(rho, n)?;
    check_qubits(keep, n)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    if kept.len() == n {
        return Ok(rho.clone());
    }
    if kept.is_empty() {
        return Err(OltError::InvalidParameter(
            "partial trace must keep at least one qubit".into(),
        ));
    }
    let discarded: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let keep_tab = scatter_table(&kept, n);
    let disc_tab = scatter_table(&discarded, n);
    let dk = keep_tab.len();
    let mut out = Operator::zeros(dk);
    for (i, &ki) in keep_tab.iter().enumerate() {
        for (j, &kj) in keep_tab.iter().enumerate() {
            let s: Complex64 = disc_tab.iter().map(|&d| rho.get(ki | d, kj | d)).sum();
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// Transposes the tensor factors listed in `subset`.
pub fn partial_transpose(rho: &Operator, subset: &[usize], n: usize) -> Result<Operator> {
    check_register(rho, n)?;
    check_qubits(subset, n)?;
    let mask = subset.iter().fold(0, |acc, &q| acc | qubit_mask(q, n));
    let d = rho.dim;
    let mut out = Operator::zeros(d);
    for r in 0..d {
        for col in 0..d {
            let r2 = (r & !mask) | (col & mask);
            let c2 = (col & !mask) | (r & mask);
            out.set(r2, c2, rho.get(r, col));
        }
    }
    Ok(out)
}

/// Real expectation value `tr[obs·ρ]`.
pub fn expectation(obs: &Operator, rho: &Operator) -> Result<f64> {
    if obs.dim != rho.dim {
        return Err(OltError::DimensionMismatch {
            expected: obs.dim,
            got: rho.dim,
        });
    }
    let d = obs.dim;
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += obs.get(i, j) * rho.get(j, i);
        }
    }
    if acc.im.abs() >= STRUCTURAL_TOL {
        return Err(OltError::ImaginaryResidue(acc.im.abs()));
    }
    Ok(acc.re)
}

/// Spectrum of a Hermitian operator, ascending.
pub fn herm_eigenvalues(m: &Operator) -> Result<Vec<f64>> {
    let err = m.hermiticity_error();
    if err > STRUCTURAL_TOL {
        return Err(OltError::NotHermitian(err));
    }
    let mut eig: Vec<f64> = m.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// `G ρ G†` where `gate` acts on `targets` (in listed order) of an `n`-qubit
/// register and as identity elsewhere. Never forms the full embedded gate.
pub fn conjugate_local(rho: &Operator, gate: &Operator, targets: &[usize], n: usize) -> Result<Operator> {
    check_register(rho, n)?;
    check_qubits(targets, n)?;
    if gate.dim != 1 << targets.len() {
        return Err(OltError::DimensionMismatch {
            expected: 1 << targets.len(),
            got: gate.dim,
        });
    }
    let d = rho.dim;
    let k = gate.dim;
    let tab = scatter_table(targets, n);
    let tmask = tab[k - 1];
    let rests: Vec<usize> = (0..d).filter(|i| i & tmask == 0).collect();

    let mut left = rho.clone();
    let mut buf = vec![ZERO; k];
    // G ρ: mixes rows inside each target group.
    for col in 0..d {
        for &rest in &rests {
            for (i, b) in buf.iter_mut().enumerate() {
                *b = (0..k).map(|j| gate.get(i, j) * rho.get(rest | tab[j], col)).sum();
            }
            for (i, &b) in buf.iter().enumerate() {
                left.set(rest | tab[i], col, b);
            }
        }
    }
    // (G ρ) G†: mixes columns.
    let mut out = left.clone();
    for row in 0..d {
        for &rest in &rests {
            for (i, b) in buf.iter_mut().enumerate() {
                *b = (0..k)
                    .map(|j| left.get(row, rest | tab[j]) * gate.get(i, j).conj())
                    .sum();
            }
            for (i, &b) in buf.iter().enumerate() {
                out.set(row, rest | tab[i], b);
            }
        }
    }
    Ok(out)
}

/// Full `2^n`-dimensional operator acting as `op` on `targets` (in listed
/// order) and identity elsewhere.
pub fn embed(op: &Operator, targets: &[usize], n: usize) -> Result<Operator> {
    check_qubits(targets, n)?;
    if op.dim != 1 << targets.len() {
        return Err(OltError::DimensionMismatch {
            expected: 1 << targets.len(),
            got: op.dim,
        });
    }
    let d = 1usize << n;
    let tab = scatter_table(targets, n);
    let tmask = tab[op.dim - 1];
    let mut out = Operator::zeros(d);
    for rest in (0..d).filter(|i| i & tmask == 0) {
        for (i, &ti) in tab.iter().enumerate() {
            for (j, &tj) in tab.iter().enumerate() {
                out.set(rest | ti, rest | tj, op.get(i, j));
            }
        }
    }
    Ok(out)
}

/// `σ³ ⊗ … ⊗ σ³` on `n` qubits: the parity of the basis label.
pub fn z_string(n: usize) -> Operator {
    Operator::diag_from_fn(1 << n, |i| c(parity_sign(i), 0.0))
}

/// `+1` for an even number of set bits, `-1` for odd.
#[inline]
pub fn parity_sign(label: usize) -> f64 {
    if label.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `tr[σ³⊗…⊗σ³ ρ]` read straight off the diagonal.
pub fn z_string_expectation(rho: &Operator) -> f64 {
    (0..rho.dim).map(|i| parity_sign(i) * rho.get(i, i).re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx() -> Operator {
        Operator::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
    }

    fn sz() -> Operator {
        Operator::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
    }

    #[test]
    fn kron_identities() {
        let i2 = Operator::identity(2);
        assert_eq!(kron(&i2, &i2), Operator::identity(4));
        let zz = kron(&sz(), &sz());
        assert_eq!(zz, Operator::from_real_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]));
    }

    #[test]
    fn kron_x_z_block_structure() {
        // [[0, Z], [Z, 0]] written out by hand
        let expected = Operator::from_real_rows(&[
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]);
        assert_eq!(kron(&sx(), &sz()), expected);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = Operator::identity(4).scale(c(0.25, 0.0));
        assert_eq!(
            partial_trace(&rho, &[2], 2),
            Err(OltError::QubitOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(partial_trace(&rho, &[0, 0], 2), Err(OltError::DuplicateQubit(0)));
        assert!(partial_trace(&rho, &[0], 3).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = Operator::from_real_rows(&[[0.7, 0.1], [0.1, 0.3]]);
        let b = Operator::from_real_rows(&[[0.4, 0.0], [0.0, 0.6]]);
        let ab = kron(&a, &b);
        assert!(partial_trace(&ab, &[0], 2).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, &[1], 2).unwrap().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn expectation_flags_imaginary_residue() {
        let rho = Operator::from_rows(&[[c(0.5, 0.0), c(0.0, 0.5)], [c(0.0, 0.5), c(0.5, 0.0)]]);
        assert!(matches!(expectation(&sx(), &rho), Err(OltError::ImaginaryResidue(_))));
    }

    #[test]
    fn eigenvalues_of_paulis() {
        assert_eq!(herm_eigenvalues(&sz()).unwrap(), vec![-1.0, 1.0]);
        let half = Operator::identity(2).scale(c(0.5, 0.0));
        assert_eq!(herm_eigenvalues(&half).unwrap(), vec![0.5, 0.5]);
        let sy = Operator::from_rows(&[[ZERO, -I], [I, ZERO]]);
        let e = herm_eigenvalues(&sy).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let m = Operator::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(herm_eigenvalues(&m), Err(OltError::NotHermitian(_))));
    }

    #[test]
    fn embed_and_local_conjugation_agree() {
        let g = kron(&sx(), &sz());
        let rho = Operator::from_real_rows(&[
            [0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.05],
            [0.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.1, 0.02, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.02, 0.1, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0],
            [0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1],
        ]);
        let full = embed(&g, &[2, 0], 3).unwrap();
        let local = conjugate_local(&rho, &g, &[2, 0], 3).unwrap();
        assert!(full.conjugate(&rho).max_abs_diff(&local) < 1e-15);
    }

    #[test]
    fn z_string_is_parity() {
        assert_eq!(z_string(2), kron(&sz(), &sz()));
        let zzz = kron(&kron(&sz(), &sz()), &sz());
        assert_eq!(z_string(3), zzz);
    }
}
