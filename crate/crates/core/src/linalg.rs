//! Dense helpers on top of nalgebra: sorted symmetric eigendecompositions,
//! thresholded numerical rank, kernels and minimum-norm solves.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

const EIGEN_MAX_ITER: usize = 10_000;
const SVD_MAX_ITER: usize = 10_000;

/// Eigenvalues in ascending order with matching eigenvector columns.
pub(crate) fn sym_eigen(mat: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = mat.nrows();
    if n == 0 {
        return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
    }
    let eig =
        SymmetricEigen::try_new(mat.clone(), f64::EPSILON, EIGEN_MAX_ITER).ok_or_else(|| {
            Error::Numeric(format!(
                "symmetric eigensolver did not converge (n = {n}, max |a_ij| = {:.3e})",
                mat.amax()
            ))
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

pub(crate) fn sym_eigenvalues(mat: &DMatrix<f64>) -> Result<DVector<f64>> {
    Ok(sym_eigen(mat)?.0)
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub(crate) fn spectral_norm_sym(mat: &DMatrix<f64>) -> Result<f64> {
    Ok(sym_eigenvalues(mat)?
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs())))
}

struct FullSvd {
    singular_values: Vec<f64>,
    /// Right singular vectors as rows; always `ncols × ncols`.
    v_t: DMatrix<f64>,
}

fn full_svd(mat: &DMatrix<f64>) -> Result<FullSvd> {
    let (r, c) = mat.shape();
    // Zero-pad to at least `c` rows so that nalgebra returns the full right basis.
    let padded = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(mat);
        p
    } else {
        mat.clone()
    };
    let svd = SVD::try_new(padded, false, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numeric(format!("SVD did not converge on a {r}x{c} matrix")))?;
    let v_t = svd.v_t.expect("v_t requested");
    Ok(FullSvd {
        singular_values: svd.singular_values.iter().copied().collect(),
        v_t,
    })
}

pub(crate) fn singular_values(mat: &DMatrix<f64>) -> Result<Vec<f64>> {
    if mat.nrows() == 0 || mat.ncols() == 0 {
        return Ok(Vec::new());
    }
    let svd = SVD::try_new(mat.clone(), false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// Count of singular values strictly above `rel_tol · σ_max`; zero for a zero matrix.
pub(crate) fn numerical_rank(mat: &DMatrix<f64>, rel_tol: f64) -> Result<usize> {
    let sv = singular_values(mat)?;
    let smax = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > rel_tol * smax).count())
}

/// Orthonormal basis (as columns) of the null space of `mat`.
pub(crate) fn kernel_basis(mat: &DMatrix<f64>, rel_tol: f64) -> Result<DMatrix<f64>> {
    let c = mat.ncols();
    if mat.nrows() == 0 || mat.amax() == 0.0 {
        return Ok(DMatrix::identity(c, c));
    }
    let svd = full_svd(mat)?;
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let cols: Vec<DVector<f64>> = (0..c)
        .filter(|&i| svd.singular_values.get(i).copied().unwrap_or(0.0) <= rel_tol * smax)
        .map(|i| svd.v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        return Ok(DMatrix::zeros(c, 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Orthonormal basis of the column space of `mat`.
pub(crate) fn range_basis(mat: &DMatrix<f64>, rel_tol: f64) -> Result<DMatrix<f64>> {
    let n = mat.nrows();
    if mat.ncols() == 0 || mat.amax() == 0.0 {
        return Ok(DMatrix::zeros(n, 0));
    }
    let svd = SVD::try_new(mat.clone(), true, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rel_tol * smax)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    Ok(DMatrix::from_columns(&cols))
}

/// Minimum-norm least-squares solution of `a x = b`, plus the numerical rank of `a`.
pub(crate) fn min_norm_solve(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    rel_tol: f64,
) -> Result<(DVector<f64>, usize)> {
    let (r, c) = a.shape();
    if r == 0 || c == 0 || a.amax() == 0.0 {
        return Ok((DVector::zeros(c), 0));
    }
    let svd = SVD::try_new(a.clone(), true, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numeric(format!("SVD did not converge on a {r}x{c} system")))?;
    let smax = svd.singular_values.max();
    let eps = rel_tol * smax;
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let x = svd
        .solve(b, eps)
        .map_err(|e| Error::Numeric(format!("pseudo-inverse solve failed: {e}")))?;
    Ok((x, rank))
}

/// `σ_min / σ_max` over the `min(rows, cols)` singular values.
pub(crate) fn inverse_condition(mat: &DMatrix<f64>) -> Result<f64> {
    let sv = singular_values(mat)?;
    let smax = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return Ok(0.0);
    }
    let smin = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    Ok(smin / smax)
}

pub(crate) fn gaussian_vector(n: usize, rng: &mut impl Rng) -> DVector<f64> {
    DVector::<f64>::from_fn(n, |_, _| StandardNormal.sample(rng))
}

/// Uniform point on the unit sphere of `ℝⁿ`, `n ≥ 1`.
pub(crate) fn random_unit(n: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let c = gaussian_vector(n, rng);
        let norm = c.norm();
        if norm > 1e-12 {
            return c / norm;
        }
    }
}

/// Sine of the angle between the lines spanned by `u` and `v` (0 when either is zero).
pub(crate) fn line_sine(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let uh = u / nu;
    let vh = v / nv;
    let proj = uh.dot(&vh);
    (&vh - &uh * proj).norm().min(1.0)
}
