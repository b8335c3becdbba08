//! The tuple map `θ(v₀, v₁, …, vₙ) = (w(v₀, v₀), w(v₀, v₁), …, w(v₀, vₙ))`,
//! its Jacobian, tangent lifts and tangent spaces of the nonsingular zero locus.
//!
//! Tuples are slices with the distinguished vector `v₀` first.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::forms::{self, FormSpace, DEFAULT_RANK_TOL, DEFAULT_RES_TOL};
use crate::linalg;

fn check_tuple(space: &FormSpace, tuple: &[DVector<f64>]) -> Result<()> {
    if tuple.is_empty() {
        return Err(Error::Input("a tuple needs at least v0".into()));
    }
    for (i, v) in tuple.iter().enumerate() {
        space.check_vector(&format!("tuple vector {i}"), v)?;
    }
    Ok(())
}

/// `(n + 1) × k` array with entry `(i, j) = w_j(v₀, v_i)`.
pub fn theta_eval(space: &FormSpace, tuple: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    check_tuple(space, tuple)?;
    let v0 = &tuple[0];
    Ok(DMatrix::from_fn(tuple.len(), space.dim_w(), |i, j| {
        space.form(j).pair(v0, &tuple[i])
    }))
}

/// Partial Jacobian of `θ` (flattened row-major) in the `v₀` slot:
/// rows `2·v₀ᵀA_j`, then `v_iᵀA_j` for `i ≥ 1`.
pub fn theta_jacobian_u0(space: &FormSpace, tuple: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    check_tuple(space, tuple)?;
    let mut jac = forms::phi_unchecked(space, tuple);
    let k = space.dim_w();
    jac.rows_mut(0, k).scale_mut(2.0);
    Ok(jac)
}

/// Full Jacobian of the flattened `θ` with respect to `(v₀, v₁, …, vₙ)`;
/// columns are grouped by slot.
pub fn theta_jacobian(space: &FormSpace, tuple: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let mut jac = DMatrix::zeros(tuple.len() * space.dim_w(), tuple.len() * space.dim_v());
    let n_v = space.dim_v();
    let k = space.dim_w();
    jac.view_mut((0, 0), (tuple.len() * k, n_v))
        .copy_from(&theta_jacobian_u0(space, tuple)?);
    let v0_rows = forms::phi_unchecked(space, std::slice::from_ref(&tuple[0]));
    for i in 1..tuple.len() {
        jac.view_mut((i * k, i * n_v), (k, n_v)).copy_from(&v0_rows);
    }
    Ok(jac)
}

/// Minimum-norm `u₀` with `w_j(u₀, v₀) = 0` and `w_j(u₀, v_i) = −w_j(v₀, u_i)`.
pub fn lift_tangent(
    space: &FormSpace,
    tuple: &[DVector<f64>],
    us: &[DVector<f64>],
) -> Result<DVector<f64>> {
    check_tuple(space, tuple)?;
    check_dim("number of tangent vectors", us.len(), tuple.len() - 1)?;
    for (i, u) in us.iter().enumerate() {
        space.check_vector(&format!("tangent vector {}", i + 1), u)?;
    }
    let k = space.dim_w();
    let want = tuple.len() * k;
    if want > space.dim_v() || forms::phi_rank(space, tuple, DEFAULT_RANK_TOL)? < want {
        return Err(Error::Precondition(
            "tuple is not W-independent; the lift system is rank deficient".into(),
        ));
    }
    let a = forms::phi_unchecked(space, tuple);
    let mut rhs = DVector::zeros(want);
    for (i, u) in us.iter().enumerate() {
        for j in 0..k {
            rhs[(i + 1) * k + j] = -space.form(j).pair(&tuple[0], u);
        }
    }
    Ok(linalg::min_norm_solve(&a, &rhs, DEFAULT_RANK_TOL)?.0)
}

/// Largest absolute residual of the lift system at `(u₀, u₁, …, uₙ)`.
pub fn lift_residual(
    space: &FormSpace,
    tuple: &[DVector<f64>],
    u0: &DVector<f64>,
    us: &[DVector<f64>],
) -> Result<f64> {
    check_tuple(space, tuple)?;
    check_dim("number of tangent vectors", us.len(), tuple.len() - 1)?;
    let mut worst = 0.0_f64;
    for j in 0..space.dim_w() {
        let w = space.form(j);
        worst = worst.max(w.pair(u0, &tuple[0]).abs());
        for (i, u) in us.iter().enumerate() {
            worst = worst.max((w.pair(u0, &tuple[i + 1]) + w.pair(&tuple[0], u)).abs());
        }
    }
    Ok(worst)
}

/// Orthonormal basis of `ker(2·phi([v]))`, the tangent space at `v` of the
/// fibre of `E` through `v`; exactly `n − k` columns.
pub fn tangent_basis(space: &FormSpace, v: &DVector<f64>) -> Result<DMatrix<f64>> {
    space.check_vector("v", v)?;
    let tuple = std::slice::from_ref(v);
    if !forms::is_w_independent(space, tuple, DEFAULT_RANK_TOL)? {
        return Err(Error::Precondition("v is not W-independent".into()));
    }
    let basis = forms::w_orthogonal_complement(space, tuple, DEFAULT_RANK_TOL)?;
    let want = space.dim_v() - space.dim_w();
    if basis.ncols() != want {
        return Err(Error::Numeric(format!(
            "tangent space has dimension {} instead of {want}",
            basis.ncols()
        )));
    }
    Ok(basis)
}

/// `v₀` is a nonsingular zero and adding it raises the rank of
/// `phi(v₁, …, vₙ)` by the full `k`.
pub fn check_zn_membership(space: &FormSpace, tuple: &[DVector<f64>]) -> Result<bool> {
    check_tuple(space, tuple)?;
    if !forms::is_nonsingular_point(space, &tuple[0], DEFAULT_RES_TOL, DEFAULT_RANK_TOL)? {
        return Ok(false);
    }
    let rest = &tuple[1..];
    let base = if rest.is_empty() {
        0
    } else {
        forms::phi_rank(space, rest, DEFAULT_RANK_TOL)?
    };
    Ok(forms::phi_rank(space, tuple, DEFAULT_RANK_TOL)? == base + space.dim_w())
}
