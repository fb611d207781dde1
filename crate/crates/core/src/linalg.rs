//! Small dense complex linear algebra helpers.
//!
//! Everything here works on `nalgebra` dynamic matrices of `Complex64`. The
//! matrices in this crate are M×M with M the number of sensors, so there is
//! no attempt at blocking or reuse of factorizations across calls.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance on the imaginary residue of a Hermitian quadratic form.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Relative tolerance on `max |A - A^H|` for a matrix treated as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Pivot magnitude, relative to the largest pivot, below which a
/// factorization is declared singular.
const PIVOT_RATIO_TOL: f64 = 1e-13;

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |A - A^H|` over all entries.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Fails with [`Error::NotHermitian`] unless `m` is Hermitian to a relative
/// tolerance of [`HERMITIAN_TOL`].
pub fn ensure_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let residual = hermitian_residual(m);
    if residual > HERMITIAN_TOL * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// `(A + A^H) / 2`. The result is exactly Hermitian in floating point.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// `A A^H`, symmetrized.
pub fn gram(a: &CMatrix) -> CMatrix {
    hermitian_part(&(a * a.adjoint()))
}

/// `x^H y`.
pub fn inner(x: &CVector, y: &CVector) -> Complex64 {
    x.dotc(y)
}

/// `w^H A w` for Hermitian `A`, returned as a real number after checking
/// that the imaginary residue is negligible.
pub fn hermitian_form(w: &CVector, a: &CMatrix) -> Result<f64> {
    real_part_checked(w.dotc(&(a * w)))
}

/// Real part of a value that is mathematically real.
pub fn real_part_checked(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_RESIDUE_TOL * z.re.abs().max(1.0) {
        return Err(Error::ComplexQuadraticForm {
            real: z.re,
            imag: z.im,
        });
    }
    Ok(z.re)
}

/// Solves `A x = b` for a Hermitian `A`.
///
/// Tries a Cholesky factorization `A = L L^H` first. Hermitian matrices that are not
/// positive definite fall back to LU with partial pivoting. In both cases a
/// pivot ratio below `1e-13` is reported as [`Error::Singular`].
pub fn solve_hermitian(a: &CMatrix, b: &CVector) -> Result<CVector> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    ensure_hermitian(a)?;

    if let Some(l) = cholesky(a) {
        let diag: Vec<f64> = (0..n).map(|i| l[(i, i)].re).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        // Pivots of the LDL^H form are the squared Cholesky diagonal.
        if max > 0.0 && (min / max).powi(2) >= PIVOT_RATIO_TOL {
            return Ok(cholesky_solve(&l, b));
        }
        return Err(Error::Singular { iteration: None });
    }

    let lu = a.clone().lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..n).map(|i| u[(i, i)].norm()).collect();
    let max = pivots.iter().cloned().fold(0.0, f64::max);
    let min = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || min / max < PIVOT_RATIO_TOL {
        return Err(Error::Singular { iteration: None });
    }
    lu.solve(b).ok_or(Error::Singular { iteration: None })
}

/// Lower-triangular `L` with `A = L L^H`, or `None` when a pivot is not
/// strictly positive (the matrix is not positive definite).
fn cholesky(a: &CMatrix) -> Option<CMatrix> {
    let n = a.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= 0.0 {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Forward then backward substitution with `L` and `L^H`.
fn cholesky_solve(l: &CMatrix, b: &CVector) -> CVector {
    let n = l.nrows();
    let mut y = b.clone();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)].conj() * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}
