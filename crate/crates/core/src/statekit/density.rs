use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{qubit_bit, StateVector};
use crate::error::{Error, Result};
use crate::tolerances;

/// Reduced state over `k` kept qubits: a `2^k x 2^k` Hermitian, unit-trace,
/// positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    k: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates `matrix` as a density matrix on `log2(dim)` qubits.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || !dim.is_power_of_two() || matrix.ncols() != dim {
            return Err(Error::Density(format!(
                "shape {}x{} is not a square power of two",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_err = (&matrix - matrix.adjoint()).camax();
        if herm_err > tolerances::DENSITY {
            return Err(Error::Density(format!(
                "not Hermitian (deviation {herm_err:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tolerances::DENSITY {
            return Err(Error::Density(format!("trace {trace} != 1")));
        }
        let min_eig = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < tolerances::PSD_FLOOR {
            return Err(Error::Density(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self {
            k: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn qubits(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.clone().determinant().re
    }
}

fn check_positions(n: usize, qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::Positions("empty qubit set".into()));
    }
    let mut seen = vec![false; n];
    for &q in qubits {
        if q == 0 || q > n {
            return Err(Error::Positions(format!("qubit {q} not in 1..={n}")));
        }
        if seen[q - 1] {
            return Err(Error::Positions(format!("qubit {q} listed twice")));
        }
        seen[q - 1] = true;
    }
    Ok(())
}

/// Reshapes `s` into a matrix whose rows are indexed by the qubits in
/// `part` (in the given order, first listed = most significant) and whose
/// columns are indexed by the remaining qubits in ascending order.
fn bipartition_matrix(s: &StateVector, part: &[usize]) -> DMatrix<Complex64> {
    let n = s.n();
    let k = part.len();
    let mut in_part = vec![false; n + 1];
    for &q in part {
        in_part[q] = true;
    }
    let rest: Vec<usize> = (1..=n).filter(|q| !in_part[*q]).collect();
    let mut m = DMatrix::zeros(1 << k, 1 << (n - k));
    for (i, a) in s.amplitudes().iter().enumerate() {
        let gather = |qs: &[usize]| {
            qs.iter()
                .fold(0usize, |acc, &q| acc << 1 | (i >> qubit_bit(n, q) & 1))
        };
        m[(gather(part), gather(&rest))] = *a;
    }
    m
}

/// Reduced density matrix over `keep`, traced over every other qubit.
///
/// The kept qubits are ordered as listed: `keep[0]` is the most significant
/// bit of the row/column index. Unnormalized inputs are normalized first.
pub fn partial_trace(s: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    check_positions(s.n(), keep)?;
    let norm = s.norm_sqr();
    if norm == 0.0 {
        return Err(Error::Density("zero state has no reduced state".into()));
    }
    let m = bipartition_matrix(s, keep);
    let rho = (&m * m.adjoint()).unscale(norm);
    // Exact Hermitian symmetrization removes the rounding asymmetry of the product.
    let rho = (&rho + rho.adjoint()).unscale(2.0);
    DensityMatrix::new(rho)
}

/// Whether `s` factors as a product across the cut `part | rest`, judged by
/// the numerical rank of the reshaped amplitude matrix.
pub fn is_product_across(s: &StateVector, part: &[usize]) -> Result<bool> {
    let n = s.n();
    check_positions(n, part)?;
    if part.len() == n {
        return Err(Error::Positions(
            "cut must leave at least one qubit on each side".into(),
        ));
    }
    product_across_unchecked(s, part)
}

fn product_across_unchecked(s: &StateVector, part: &[usize]) -> Result<bool> {
    let m = bipartition_matrix(s, part);
    let m = if m.nrows() > m.ncols() {
        m.transpose()
    } else {
        m
    };
    let mut sv: Vec<f64> = m.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv[0] == 0.0 {
        return Err(Error::Format(
            "zero state has no bipartite structure".into(),
        ));
    }
    Ok(sv
        .iter()
        .skip(1)
        .all(|&x| x <= tolerances::RANK_ONE * sv[0]))
}

/// True when `s` is not a product state across any of its `2^{n-1} - 1`
/// bipartitions. Limited to [`tolerances::MAX_EXHAUSTIVE_QUBITS`] qubits.
pub fn is_genuinely_entangled(s: &StateVector) -> Result<bool> {
    let n = s.n();
    if n > tolerances::MAX_EXHAUSTIVE_QUBITS {
        return Err(Error::QubitCount {
            n,
            min: super::MIN_QUBITS,
            max: tolerances::MAX_EXHAUSTIVE_QUBITS,
        });
    }
    // Each cut is enumerated once as the side containing qubit 1; smaller
    // sides come first since they are cheaper and most likely to factor.
    let mut cuts: Vec<u32> = (0..(1u32 << (n - 1)) - 1).collect();
    cuts.sort_by_key(|m| (m.count_ones(), *m));
    for mask in cuts {
        let part: Vec<usize> = std::iter::once(1)
            .chain((2..=n).filter(|q| mask >> (q - 2) & 1 == 1))
            .collect();
        if product_across_unchecked(s, &part)? {
            return Ok(false);
        }
    }
    Ok(true)
}
