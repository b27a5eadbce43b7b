use crate::error::{OltError, Result};
use crate::linalg::{check_qubits, herm_eigenvalues, partial_transpose, STRUCTURAL_TOL};
use crate::states::DensityMatrix;

/// Outcome of the positive-partial-transpose test across one bipartition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptReport {
    pub min_eigenvalue: f64,
    /// Partial transpose is positive within tolerance.
    pub ppt: bool,
    /// PPT is equivalent to separability here (two-qubit states only).
    pub conclusive: bool,
}

impl PptReport {
    /// `Some(true)` only when PPT decides separability.
    pub fn separable(&self) -> Option<bool> {
        self.conclusive.then_some(self.ppt)
    }

    pub fn verdict(&self) -> &'static str {
        match (self.conclusive, self.ppt) {
            (true, true) => "separable",
            (true, false) => "entangled",
            (false, true) => "PPT",
            (false, false) => "NPT",
        }
    }
}

/// Peres–Horodecki test: transposes the qubits in `partition` and inspects
/// the smallest eigenvalue.
pub fn ppt_separable(rho: &DensityMatrix, partition: &[usize]) -> Result<PptReport> {
    let n = rho.n_qubits();
    check_qubits(partition, n)?;
    if partition.is_empty() || partition.len() == n {
        return Err(OltError::InvalidParameter(format!(
            "partition {partition:?} is not a proper bipartition of {n} qubits"
        )));
    }
    let pt = partial_transpose(rho.matrix(), partition, n)?;
    let min_eigenvalue = herm_eigenvalues(&pt)?[0];
    Ok(PptReport {
        min_eigenvalue,
        ppt: min_eigenvalue >= -STRUCTURAL_TOL,
        conclusive: n == 2,
    })
}
