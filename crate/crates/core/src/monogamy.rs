//! Pairwise and one-versus-rest concurrence of Dicke states and the CKW
//! monogamy gap `χ = C²_{1(2..n)} - Σ_j C²_{1j}`.
//!
//! Every closed form has a numeric twin built from the partial-trace
//! pipeline so the two can be checked against each other.

use nalgebra::{linalg::SymmetricEigen, DMatrix, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statekit::{dicke_state, partial_trace, DensityMatrix, DickeSpec};
use crate::tolerances;

fn spin_flip_operator() -> Matrix4<Complex64> {
    // σ_y ⊗ σ_y in the computational basis.
    let (o, p, m) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    );
    Matrix4::new(o, o, o, m, o, o, p, o, o, p, o, o, m, o, o, o)
}

fn two_qubit(rho: &DensityMatrix) -> Result<Matrix4<Complex64>> {
    if rho.qubits() != 2 {
        return Err(Error::Density(format!(
            "concurrence needs a two-qubit state, got {} qubits",
            rho.qubits()
        )));
    }
    Ok(Matrix4::from_iterator(rho.matrix().iter().cloned()))
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    let m = two_qubit(rho)?;
    let y = spin_flip_operator();
    let flipped = y * m.conjugate() * y;
    Ok(DMatrix::from_iterator(4, 4, flipped.iter().cloned()))
}

/// Square roots of the eigenvalues of `ρ ρ̃`, in decreasing order.
///
/// With `ρ = W W†` built from the eigenvectors of `ρ` that carry weight,
/// these are the singular values of the symmetric matrix `Wᵀ (σ_y ⊗ σ_y) W`,
/// which keeps zero eigenvalues at zero instead of turning rounding noise
/// into `O(sqrt(eps))` errors.
fn spin_flip_singular_values(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let m = two_qubit(rho)?;
    let eig = SymmetricEigen::new(m);
    if let Some(min) = eig.eigenvalues.iter().cloned().reduce(f64::min) {
        if min < tolerances::PSD_FLOOR {
            return Err(Error::Density(format!("negative eigenvalue {min:e}")));
        }
    }
    let columns: Vec<_> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .filter(|(mu, _)| **mu > tolerances::SUPPORT_CUTOFF)
        .map(|(mu, v)| nalgebra::DVector::from_iterator(4, v.iter().map(|z| z * mu.sqrt())))
        .collect();
    let mut out = [0.0; 4];
    if columns.is_empty() {
        return Ok(out);
    }
    let w = DMatrix::from_columns(&columns);
    let y = DMatrix::from_iterator(4, 4, spin_flip_operator().iter().cloned());
    let tau = w.transpose() * y * &w;
    let mut sv: Vec<f64> = tau.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    out[..sv.len()].copy_from_slice(&sv);
    Ok(out)
}

/// Eigenvalues `λ_1 >= ... >= λ_4 >= 0` of `ρ ρ̃`.
pub fn spin_flip_eigenvalues(rho: &DensityMatrix) -> Result<[f64; 4]> {
    Ok(spin_flip_singular_values(rho)?.map(|s| s * s))
}

/// `max(0, sqrt(λ_1) - sqrt(λ_2) - sqrt(λ_3) - sqrt(λ_4))`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let s = spin_flip_singular_values(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

fn check_nl(n: usize, l: usize) -> Result<(f64, f64)> {
    if n < 2 || l == 0 || l >= n {
        return Err(Error::Excitation { n, l });
    }
    Ok((n as f64, l as f64))
}

/// `l(n-l)` and `(l-1)(n-l-1)`, the two radicands shared by every formula.
fn radicands(n: f64, l: f64) -> (f64, f64) {
    (l * (n - l), (l - 1.0) * (n - l - 1.0))
}

/// Pairwise concurrence of `|l,n>`:
/// `2 sqrt(l(n-l)) (sqrt(l(n-l)) - sqrt((l-1)(n-l-1))) / (n(n-1))`.
pub fn c12_closed_form(n: usize, l: usize) -> Result<f64> {
    let (nf, lf) = check_nl(n, l)?;
    let (a, b) = radicands(nf, lf);
    // sqrt(A)(sqrt(A) - sqrt(B)) = A - sqrt(AB): exact at l = 1 where B = 0.
    Ok(2.0 * (a - (a * b).sqrt()) / (nf * (nf - 1.0)))
}

/// `C²_{1(2..n)} = 4 det ρ_1 = 4 l(n-l) / n²`.
pub fn c1_rest_squared(n: usize, l: usize) -> Result<f64> {
    let (nf, lf) = check_nl(n, l)?;
    Ok(4.0 * lf * (nf - lf) / (nf * nf))
}

/// Closed form `8 l(n-l) sqrt(B) (sqrt(A) - sqrt(B)) / (n²(n-1))` with
/// `A = l(n-l)`, `B = (l-1)(n-l-1)`.
pub fn chi_closed_form(n: usize, l: usize) -> Result<f64> {
    let (nf, lf) = check_nl(n, l)?;
    let (a, b) = radicands(nf, lf);
    Ok(8.0 * a * ((a * b).sqrt() - b) / (nf * nf * (nf - 1.0)))
}

/// Both routes to the monogamy gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Chi {
    /// `C²_{1(2..n)} - (n-1) C_12²`.
    pub by_definition: f64,
    pub closed_form: f64,
}

/// Monogamy gap of `|l,n>`. Fails with [`Error::Consistency`] when the two
/// routes disagree beyond [`tolerances::CHI_ROUTES`].
pub fn chi(n: usize, l: usize) -> Result<Chi> {
    let c12 = c12_closed_form(n, l)?;
    let by_definition = c1_rest_squared(n, l)? - (n as f64 - 1.0) * c12 * c12;
    let closed_form = chi_closed_form(n, l)?;
    if (by_definition - closed_form).abs() > tolerances::CHI_ROUTES {
        return Err(Error::Consistency(format!(
            "chi({n},{l}): definition {by_definition} vs closed form {closed_form}"
        )));
    }
    Ok(Chi {
        by_definition,
        closed_form,
    })
}

/// Largest gap over `l` for fixed `n`: `(n-2)/(n-1)` for even `n`,
/// `(n+1)(n-1) sqrt(n-3) (sqrt(n+1) - sqrt(n-3)) / (2n²)` for odd `n`.
pub fn chi_row_maximum(n: usize) -> f64 {
    let nf = n as f64;
    if n.is_multiple_of(2) {
        (nf - 2.0) / (nf - 1.0)
    } else {
        (nf + 1.0) * (nf - 1.0) * (nf - 3.0).sqrt() * ((nf + 1.0).sqrt() - (nf - 3.0).sqrt())
            / (2.0 * nf * nf)
    }
}

/// Smallest pairwise concurrence over `l` for fixed `n`: `1/(n-1)` for even
/// `n`, `((n+1) - sqrt((n+1)(n-3))) / (2n)` for odd `n`.
pub fn c12_row_minimum(n: usize) -> f64 {
    let nf = n as f64;
    if n.is_multiple_of(2) {
        1.0 / (nf - 1.0)
    } else {
        ((nf + 1.0) - ((nf + 1.0) * (nf - 3.0)).sqrt()) / (2.0 * nf)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub n: usize,
    pub l: usize,
    pub c12: f64,
    /// Concurrence of `tr_{3..n} |l,n><l,n|` through the Wootters pipeline;
    /// absent when `n` exceeds the numeric cap.
    pub c12_numeric: Option<f64>,
    pub c1_rest_sq: f64,
    /// `4 det(tr_{2..n} |l,n><l,n|)`; absent when `n` exceeds the numeric cap.
    pub c1_rest_sq_numeric: Option<f64>,
    /// Closed-form monogamy gap.
    pub chi: f64,
    /// `c1_rest_sq - (n-1) c12²`; agrees with `chi` to [`tolerances::CHI_ROUTES`].
    pub chi_by_definition: f64,
    /// `l = n/2`: the even-n maximiser of χ.
    pub is_even_max: bool,
    /// χ attains its maximum over `l` for this `n`.
    pub is_max: bool,
    pub notes: Vec<String>,
}

/// Closed-form quantities for `|l,n>`, plus the numeric pipeline when
/// `n <= numeric_max_n`.
pub fn monogamy_report(n: usize, l: usize, numeric_max_n: usize) -> Result<MonogamyReport> {
    let c12 = c12_closed_form(n, l)?;
    let c1_rest_sq = c1_rest_squared(n, l)?;
    let gap = chi(n, l)?;
    let (c12_numeric, c1_rest_sq_numeric) = if n <= numeric_max_n {
        let state = dicke_state(DickeSpec::with_cap(n, l, numeric_max_n.max(n))?);
        let pair = wootters_concurrence(&partial_trace(&state, &[1, 2])?)?;
        let single = 4.0 * partial_trace(&state, &[1])?.determinant();
        (Some(pair), Some(single))
    } else {
        (None, None)
    };
    let is_max = (gap.closed_form - chi_row_maximum(n)).abs() <= 1e-12;
    let mut notes = Vec::new();
    if l == 1 || l == n - 1 {
        notes.push("W-type: chi = 0".to_string());
        if l == 1 {
            notes.push(format!(
                "maximal pairwise concurrence 2/n = {}",
                2.0 / n as f64
            ));
        }
    }
    if is_max {
        notes.push(if n.is_multiple_of(2) {
            "row maximum (n-2)/(n-1)".to_string()
        } else {
            "row maximum (odd n, l = (n-1)/2 or (n+1)/2)".to_string()
        });
    }
    if (c12 - c12_row_minimum(n)).abs() <= 1e-12 {
        notes.push("minimal pairwise concurrence".to_string());
    }
    Ok(MonogamyReport {
        n,
        l,
        c12,
        c12_numeric,
        c1_rest_sq,
        c1_rest_sq_numeric,
        chi: gap.closed_form,
        chi_by_definition: gap.by_definition,
        is_even_max: n.is_multiple_of(2) && 2 * l == n,
        is_max,
        notes,
    })
}

/// Per-`n` checks of the extremal and monotonic claims.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowSummary {
    pub n: usize,
    pub argmax: Vec<usize>,
    pub max_chi: f64,
    pub expected_max: f64,
    pub max_matches: bool,
    /// χ strictly increasing on `1..=floor(n/2)`.
    pub increasing_below_half: bool,
    /// χ strictly decreasing on `ceil(n/2)..=n-1`.
    pub decreasing_above_half: bool,
    /// `χ(n,l) == χ(n,n-l)` for every `l`.
    pub symmetric: bool,
    /// `0 < χ < 1` for every `2 <= l <= n-2`.
    pub strictly_inside_unit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonogamySweep {
    pub rows: Vec<MonogamyReport>,
    pub summaries: Vec<RowSummary>,
}

/// Every `(n, l)` with `n_min <= n <= n_max`, `1 <= l <= n-1`.
pub fn monogamy_sweep(n_min: usize, n_max: usize, numeric_max_n: usize) -> Result<MonogamySweep> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::OutOfRange {
            what: "sweep lower bound",
            value: n_min,
            lo: 2,
            hi: n_max,
        });
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for n in n_min..=n_max {
        let row: Vec<MonogamyReport> = (1..n)
            .map(|l| monogamy_report(n, l, numeric_max_n))
            .collect::<Result<_>>()?;
        let chis: Vec<f64> = row.iter().map(|r| r.chi).collect();
        let max_chi = chis.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let expected_max = chi_row_maximum(n);
        let at = |l: usize| chis[l - 1];
        summaries.push(RowSummary {
            n,
            argmax: (1..n)
                .filter(|&l| (at(l) - max_chi).abs() <= 1e-12)
                .collect(),
            max_chi,
            expected_max,
            max_matches: (max_chi - expected_max).abs() <= 1e-12,
            increasing_below_half: (1..n / 2).all(|l| at(l) < at(l + 1)),
            decreasing_above_half: (n.div_ceil(2)..n - 1).all(|l| at(l) > at(l + 1)),
            symmetric: (1..n).all(|l| at(l) == at(n - l)),
            strictly_inside_unit: (2..=n.saturating_sub(2)).all(|l| at(l) > 0.0 && at(l) < 1.0),
        });
        rows.extend(row);
    }
    Ok(MonogamySweep { rows, summaries })
}
