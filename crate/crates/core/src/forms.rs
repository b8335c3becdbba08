//! Symmetric bilinear forms, spaces of forms and the evaluation map.
//!
//! A [`FormSpace`] `W` is stored through an ordered basis `w_1..w_k` of
//! symmetric `n × n` matrices. Points of the dual `W*` are represented by
//! their coordinates against that basis ([`EvalVector`]).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg;

/// Relative symmetry tolerance accepted by [`SymmetricForm::new`].
pub const DEFAULT_SYM_TOL: f64 = 1e-10;
/// Zero-eigenvalue threshold, relative to the spectral scale of the form.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
/// Singular values at or below `rank_tol · σ_max` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Relative residual target for points on the zero locus.
pub const DEFAULT_RES_TOL: f64 = 1e-10;

/// A real symmetric `n × n` matrix, read as a bilinear or quadratic form.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricForm {
    mat: DMatrix<f64>,
}

impl SymmetricForm {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(mat, DEFAULT_SYM_TOL)
    }

    /// Accepts `mat` when `max |a_ij − a_ji| ≤ sym_tol · (1 + max |a_ij|)` and stores
    /// its exact symmetrization.
    pub fn with_tolerance(mat: DMatrix<f64>, sym_tol: f64) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::Input(format!(
                "form must be a non-empty square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("form has non-finite entries".into()));
        }
        let asym = (&mat - mat.transpose()).amax();
        if asym > sym_tol * (1.0 + mat.amax()) {
            return Err(Error::Input(format!(
                "form is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        Ok(Self::symmetrized(mat))
    }

    pub(crate) fn symmetrized(mat: DMatrix<f64>) -> Self {
        let sym = (&mat + mat.transpose()) * 0.5;
        Self { mat: sym }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        Self {
            mat: DMatrix::from_diagonal(&DVector::from_column_slice(entries)),
        }
    }

    pub fn from_row_slice(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Input(format!(
                "expected {} entries for a {n}x{n} form, got {}",
                n * n,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// `uᵀ A v` without dimension checks.
    pub(crate) fn pair(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(&(&self.mat * v))
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> Vec<f64> {
        self.mat.transpose().iter().copied().collect()
    }

    /// `Bᵀ A B` for an `n × d` matrix `B`.
    pub fn congruent(&self, b: &DMatrix<f64>) -> SymmetricForm {
        Self::symmetrized(b.transpose() * &self.mat * b)
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        linalg::spectral_norm_sym(&self.mat)
    }
}

/// Ordered basis of a `k`-dimensional space `W` of forms on `V ≅ ℝⁿ`.
#[derive(Clone, Debug)]
pub struct FormSpace {
    dim_v: usize,
    basis: Vec<SymmetricForm>,
    norms: Vec<f64>,
}

impl FormSpace {
    /// Builds a space from linearly independent forms of a common dimension.
    pub fn new(basis: Vec<SymmetricForm>) -> Result<Self> {
        let space = Self::from_forms_unchecked(basis)?;
        let rank = linalg::numerical_rank(&space.vectorized(), DEFAULT_RANK_TOL)?;
        if rank < space.dim_w() {
            return Err(Error::Input(format!(
                "basis forms are linearly dependent (rank {rank} < k = {})",
                space.dim_w()
            )));
        }
        Ok(space)
    }

    pub(crate) fn from_forms_unchecked(basis: Vec<SymmetricForm>) -> Result<Self> {
        let first = basis
            .first()
            .ok_or_else(|| Error::Input("a form space needs at least one basis form".into()))?;
        let dim_v = first.dim();
        for (j, w) in basis.iter().enumerate() {
            check_dim(&format!("basis form {j}"), w.dim(), dim_v)?;
        }
        let norms = basis
            .iter()
            .map(SymmetricForm::spectral_norm)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim_v,
            basis,
            norms,
        })
    }

    pub fn from_matrices(mats: Vec<DMatrix<f64>>) -> Result<Self> {
        Self::new(
            mats.into_iter()
                .map(SymmetricForm::new)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn from_diagonals(diags: &[&[f64]]) -> Result<Self> {
        Self::new(diags.iter().map(|d| SymmetricForm::diagonal(d)).collect())
    }

    /// `n`, the dimension of `V`.
    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    /// `k`, the dimension of `W`.
    pub fn dim_w(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SymmetricForm] {
        &self.basis
    }

    pub fn form(&self, j: usize) -> &SymmetricForm {
        &self.basis[j]
    }

    /// Spectral norms `‖A_j‖₂` of the basis forms.
    pub fn basis_norms(&self) -> &[f64] {
        &self.norms
    }

    /// `max_j ‖A_j‖₂`, the scale used by relative tolerances.
    pub fn max_scale(&self) -> f64 {
        self.norms.iter().fold(0.0_f64, |a, &b| a.max(b))
    }

    /// `Σ c_j A_j`.
    pub fn combination(&self, c: &DVector<f64>) -> Result<SymmetricForm> {
        check_dim("coefficient vector", c.len(), self.dim_w())?;
        let mut acc = DMatrix::zeros(self.dim_v, self.dim_v);
        for (cj, w) in c.iter().zip(&self.basis) {
            acc += w.matrix() * *cj;
        }
        Ok(SymmetricForm::symmetrized(acc))
    }

    /// Basis forms flattened to the rows of a `k × n²` matrix.
    fn vectorized(&self) -> DMatrix<f64> {
        let n2 = self.dim_v * self.dim_v;
        DMatrix::from_fn(self.dim_w(), n2, |j, idx| self.basis[j].mat[idx])
    }

    pub(crate) fn check_vector(&self, what: &str, v: &DVector<f64>) -> Result<()> {
        check_dim(what, v.len(), self.dim_v)
    }
}

/// Inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    pub fn witt_index(&self) -> usize {
        self.n_plus.min(self.n_minus)
    }
}

/// Coordinates `(w_1(v,v), …, w_k(v,v))` of a point of `W*` in the dual basis.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalVector {
    pub coords: DVector<f64>,
}

impl EvalVector {
    pub fn new(coords: DVector<f64>) -> Self {
        Self { coords }
    }

    pub fn zeros(k: usize) -> Self {
        Self::new(DVector::zeros(k))
    }

    pub fn from_slice(c: &[f64]) -> Self {
        Self::new(DVector::from_column_slice(c))
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }
}

pub fn evaluate_form(w: &SymmetricForm, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    check_dim("u", u.len(), w.dim())?;
    check_dim("v", v.len(), w.dim())?;
    Ok(w.pair(u, v))
}

/// The evaluation map `v ↦ (w ↦ w(v, v))`.
pub fn eval_map(space: &FormSpace, v: &DVector<f64>) -> Result<EvalVector> {
    space.check_vector("v", v)?;
    Ok(eval_unchecked(space, v))
}

pub(crate) fn eval_unchecked(space: &FormSpace, v: &DVector<f64>) -> EvalVector {
    EvalVector::new(DVector::from_iterator(
        space.dim_w(),
        space.basis.iter().map(|w| w.pair(v, v)),
    ))
}

/// Counts eigenvalues above, within and below `±zero_tol · s`, where `s` is the
/// largest eigenvalue magnitude (1 for the zero form).
pub fn signature(w: &SymmetricForm, zero_tol: f64) -> Result<Signature> {
    let vals = linalg::sym_eigenvalues(w.matrix())?;
    Ok(signature_from_eigenvalues(vals.as_slice(), zero_tol))
}

pub(crate) fn signature_from_eigenvalues(vals: &[f64], zero_tol: f64) -> Signature {
    let mut scale = vals.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    if scale == 0.0 {
        scale = 1.0;
    }
    let thr = zero_tol * scale;
    let n_plus = vals.iter().filter(|&&x| x > thr).count();
    let n_minus = vals.iter().filter(|&&x| x < -thr).count();
    Signature {
        n_plus,
        n_zero: vals.len() - n_plus - n_minus,
        n_minus,
    }
}

/// Number of mutually orthogonal hyperbolic planes, `min(n₊, n₋)`.
pub fn witt_index(w: &SymmetricForm, zero_tol: f64) -> Result<usize> {
    Ok(signature(w, zero_tol)?.witt_index())
}

/// Rows `v_iᵀ A_j` in `(i, j)` lexicographic order: one block of `k` rows per vector.
pub fn phi_matrix(space: &FormSpace, vs: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    for (i, v) in vs.iter().enumerate() {
        space.check_vector(&format!("vector {i}"), v)?;
    }
    Ok(phi_unchecked(space, vs))
}

pub(crate) fn phi_unchecked(space: &FormSpace, vs: &[DVector<f64>]) -> DMatrix<f64> {
    let k = space.dim_w();
    let mut out = DMatrix::zeros(vs.len() * k, space.dim_v());
    for (i, v) in vs.iter().enumerate() {
        for (j, w) in space.basis.iter().enumerate() {
            let row = (w.matrix() * v).transpose();
            out.set_row(i * k + j, &row);
        }
    }
    out
}

/// Rank of `phi` after scaling every nonzero vector to unit length.
/// Scaling a vector does not change the span of its block, so the rank is
/// unaffected while the relative threshold stops depending on vector norms.
pub(crate) fn phi_rank(space: &FormSpace, vs: &[DVector<f64>], rank_tol: f64) -> Result<usize> {
    let normalized = normalize_all(vs);
    linalg::numerical_rank(&phi_unchecked(space, &normalized), rank_tol)
}

fn normalize_all(vs: &[DVector<f64>]) -> Vec<DVector<f64>> {
    vs.iter()
        .map(|v| {
            let n = v.norm();
            if n > 0.0 {
                v / n
            } else {
                v.clone()
            }
        })
        .collect()
}

/// Whether the covectors `w_j(v_i, −)` span a space of the full dimension `n_t · k`.
pub fn is_w_independent(space: &FormSpace, vs: &[DVector<f64>], rank_tol: f64) -> Result<bool> {
    for (i, v) in vs.iter().enumerate() {
        space.check_vector(&format!("vector {i}"), v)?;
    }
    let want = vs.len() * space.dim_w();
    if want > space.dim_v() {
        return Ok(false);
    }
    if vs.is_empty() {
        return Ok(true);
    }
    Ok(phi_rank(space, vs, rank_tol)? == want)
}

/// Orthonormal basis (columns) of `{u : w(u, v_i) = 0 for all w ∈ W and all i}`.
pub fn w_orthogonal_complement(
    space: &FormSpace,
    vs: &[DVector<f64>],
    rank_tol: f64,
) -> Result<DMatrix<f64>> {
    for (i, v) in vs.iter().enumerate() {
        space.check_vector(&format!("vector {i}"), v)?;
    }
    if vs.is_empty() {
        return Ok(DMatrix::identity(space.dim_v(), space.dim_v()));
    }
    let normalized = normalize_all(vs);
    linalg::kernel_basis(&phi_unchecked(space, &normalized), rank_tol)
}

/// Result of restricting every basis form to a subspace.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub forms: Vec<SymmetricForm>,
    /// True when the restricted forms are still linearly independent, i.e. the
    /// restriction map on `W` is an isomorphism onto its image.
    pub injective: bool,
}

impl Restriction {
    pub fn into_space(self) -> Result<FormSpace> {
        if !self.injective {
            return Err(Error::Precondition(
                "restriction is not injective on W; restricted basis is dependent".into(),
            ));
        }
        FormSpace::from_forms_unchecked(self.forms)
    }
}

/// Restricts `W` to the column span of the `n × d` matrix `b` via `Bᵀ A_j B`.
pub fn restrict_forms(space: &FormSpace, b: &DMatrix<f64>) -> Result<Restriction> {
    check_dim("restriction basis rows", b.nrows(), space.dim_v())?;
    let d = b.ncols();
    if d == 0 {
        return Err(Error::Input("restriction to the zero subspace".into()));
    }
    let rank = linalg::numerical_rank(b, DEFAULT_RANK_TOL)?;
    if rank < d {
        return Err(Error::Input(format!(
            "restriction basis has rank {rank} < {d} columns"
        )));
    }
    let forms: Vec<SymmetricForm> = space.basis.iter().map(|w| w.congruent(b)).collect();
    let flat = DMatrix::from_fn(forms.len(), d * d, |j, idx| forms[j].mat[idx]);
    // Rounding-level restrictions must not count as independent, so the
    // threshold also scales with ‖A_j‖ and ‖B‖².
    let b_norm = linalg::singular_values(b)?
        .into_iter()
        .fold(0.0_f64, f64::max);
    let sv = linalg::singular_values(&flat)?;
    let floor = space.max_scale() * b_norm * b_norm;
    let thr = DEFAULT_RANK_TOL * sv.iter().copied().fold(floor, f64::max);
    let injective = sv.iter().filter(|&&s| s > thr).count() == space.dim_w();
    Ok(Restriction { forms, injective })
}

/// Relative size of `E(v)`: `‖E(v)‖ / (1 + ‖v‖² · max_j ‖A_j‖₂)`.
pub fn null_residual(space: &FormSpace, v: &DVector<f64>) -> Result<f64> {
    let e = eval_map(space, v)?;
    Ok(e.norm() / (1.0 + v.norm_squared() * space.max_scale()))
}

/// Membership in the nonsingular zero locus: `E(v) ≈ 0` and `(v)` is W-independent.
pub fn is_nonsingular_point(
    space: &FormSpace,
    v: &DVector<f64>,
    res_tol: f64,
    rank_tol: f64,
) -> Result<bool> {
    if null_residual(space, v)? > res_tol {
        return Ok(false);
    }
    is_w_independent(space, std::slice::from_ref(v), rank_tol)
}

/// Largest `|w_j(u, v)|`, the W-orthogonality defect of a pair.
pub fn orthogonality_defect(space: &FormSpace, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    space.check_vector("u", u)?;
    space.check_vector("v", v)?;
    Ok(space
        .basis
        .iter()
        .map(|w| w.pair(u, v).abs())
        .fold(0.0_f64, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    /// Exact rank of an integer matrix by fraction-free elimination.
    fn exact_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let (nr, nc) = (m.len(), m.first().map_or(0, |r| r.len()));
        let mut rank = 0;
        for col in 0..nc {
            let Some(piv) = (rank..nr).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            for r in 0..nr {
                if r != rank && m[r][col] != 0 {
                    let (a, b) = (m[rank][col], m[r][col]);
                    for c in 0..nc {
                        m[r][c] = m[r][c] * a - m[rank][c] * b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn evaluate_form_examples() {
        let hyp = SymmetricForm::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            evaluate_form(&hyp, &v(&[1.0, 1.0]), &v(&[1.0, 1.0])).unwrap(),
            2.0
        );
        let d = SymmetricForm::diagonal(&[1.0, -1.0]);
        assert_eq!(
            evaluate_form(&d, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(),
            0.0
        );
        assert_eq!(
            evaluate_form(&d, &v(&[1.0, 1.0]), &v(&[1.0, 1.0])).unwrap(),
            0.0
        );
        assert!(matches!(
            evaluate_form(&d, &v(&[1.0]), &v(&[1.0, 0.0])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(SymmetricForm::new(m), Err(Error::Input(_))));
    }

    #[test]
    fn eval_map_examples() {
        let w = FormSpace::new(vec![
            SymmetricForm::diagonal(&[1.0, -1.0]),
            SymmetricForm::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            eval_map(&w, &v(&[1.0, 1.0])).unwrap().coords,
            v(&[0.0, 2.0])
        );
        assert_eq!(
            eval_map(&w, &v(&[0.0, 0.0])).unwrap().coords,
            v(&[0.0, 0.0])
        );
        let single = FormSpace::from_diagonals(&[&[1.0, -1.0]]).unwrap();
        assert_eq!(
            eval_map(&single, &v(&[2.0, 1.0])).unwrap().coords,
            v(&[3.0])
        );
    }

    #[test]
    fn dependent_basis_rejected() {
        let r = FormSpace::from_diagonals(&[&[1.0, -1.0], &[2.0, -2.0]]);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn signature_examples() {
        let tol = DEFAULT_ZERO_TOL;
        let s = |d: &[f64]| signature(&SymmetricForm::diagonal(d), tol).unwrap();
        assert_eq!(
            s(&[1.0, 1.0, -1.0]),
            Signature {
                n_plus: 2,
                n_zero: 0,
                n_minus: 1
            }
        );
        let hyp = SymmetricForm::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            signature(&hyp, tol).unwrap(),
            Signature {
                n_plus: 1,
                n_zero: 0,
                n_minus: 1
            }
        );
        assert_eq!(
            s(&[0.0, 0.0, 0.0]),
            Signature {
                n_plus: 0,
                n_zero: 3,
                n_minus: 0
            }
        );
        // x_0² + … + x_{m−1}² − x_m² − … − x_n² on ℝ^{n+1}
        for n in 1..8usize {
            for m in 0..=n + 1 {
                let d: Vec<f64> = (0..=n).map(|i| if i < m { 1.0 } else { -1.0 }).collect();
                assert_eq!(
                    s(&d),
                    Signature {
                        n_plus: m,
                        n_zero: 0,
                        n_minus: n + 1 - m
                    }
                );
            }
        }
    }

    #[test]
    fn witt_index_examples() {
        let wi = |d: &[f64]| witt_index(&SymmetricForm::diagonal(d), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(wi(&[1.0, 1.0, -1.0]), 1);
        assert_eq!(wi(&[1.0, 1.0, -1.0, -1.0]), 2);
        assert_eq!(wi(&[1.0, 1.0, 1.0]), 0);
    }

    #[test]
    fn phi_matrix_examples() {
        let w1 = FormSpace::from_diagonals(&[&[1.0, -1.0]]).unwrap();
        assert_eq!(
            phi_matrix(&w1, &[v(&[1.0, 0.0])]).unwrap(),
            DMatrix::from_row_slice(1, 2, &[1.0, 0.0])
        );
        let w2 = FormSpace::new(vec![
            SymmetricForm::diagonal(&[1.0, -1.0]),
            SymmetricForm::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            phi_matrix(&w2, &[v(&[1.0, 0.0])]).unwrap(),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0])
        );
        let w3 = FormSpace::from_diagonals(&[&[1.0, 0.0]]).unwrap();
        assert_eq!(
            phi_matrix(&w3, &[v(&[0.0, 1.0])]).unwrap(),
            DMatrix::from_row_slice(1, 2, &[0.0, 0.0])
        );
    }

    #[test]
    fn w_independence_examples() {
        let w1 = FormSpace::from_diagonals(&[&[1.0, -1.0]]).unwrap();
        assert!(is_w_independent(&w1, &[v(&[1.0, 0.0])], DEFAULT_RANK_TOL).unwrap());
        assert!(!is_w_independent(&w1, &[v(&[0.0, 0.0])], DEFAULT_RANK_TOL).unwrap());

        // Exact oracle: the rows of phi are e1ᵀA_j and e4ᵀA_j, two pairs of parallel rows.
        let diag_a = [1i64, -1, 1, -1];
        let diag_b = [1i64, 1, -1, -1];
        let e = |i: usize, d: &[i64; 4]| -> Vec<i64> {
            (0..4).map(|c| if c == i { d[i] } else { 0 }).collect()
        };
        let oracle_rank = exact_rank(&[e(0, &diag_a), e(0, &diag_b), e(3, &diag_a), e(3, &diag_b)]);
        assert_eq!(oracle_rank, 2);
        let w =
            FormSpace::from_diagonals(&[&[1.0, -1.0, 1.0, -1.0], &[1.0, 1.0, -1.0, -1.0]]).unwrap();
        let vs = [v(&[1.0, 0.0, 0.0, 0.0]), v(&[0.0, 0.0, 0.0, 1.0])];
        assert_eq!(phi_rank(&w, &vs, DEFAULT_RANK_TOL).unwrap(), oracle_rank);
        assert_eq!(
            is_w_independent(&w, &vs, DEFAULT_RANK_TOL).unwrap(),
            oracle_rank == 4
        );
        // A generic pair on the same space is W-independent.
        let generic = [v(&[1.0, 2.0, 0.5, -1.0]), v(&[0.3, -1.0, 2.0, 1.5])];
        let ints = |x: &[f64; 4], d: &[i64; 4]| -> Vec<i64> {
            (0..4)
                .map(|c| (x[c] * 10.0).round() as i64 * d[c])
                .collect()
        };
        let a = [1.0, 2.0, 0.5, -1.0];
        let b = [0.3, -1.0, 2.0, 1.5];
        let r = exact_rank(&[
            ints(&a, &diag_a),
            ints(&a, &diag_b),
            ints(&b, &diag_a),
            ints(&b, &diag_b),
        ]);
        assert_eq!(
            is_w_independent(&w, &generic, DEFAULT_RANK_TOL).unwrap(),
            r == 4
        );
    }

    #[test]
    fn too_many_vectors_never_independent() {
        let w = FormSpace::from_diagonals(&[&[1.0, -1.0]]).unwrap();
        assert!(!is_w_independent(
            &w,
            &[v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])],
            DEFAULT_RANK_TOL
        )
        .unwrap());
    }

    #[test]
    fn complement_examples() {
        let w1 = FormSpace::from_diagonals(&[&[1.0, -1.0]]).unwrap();
        let c = w_orthogonal_complement(&w1, &[v(&[1.0, 0.0])], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(c.ncols(), 1);
        assert!((c[(0, 0)]).abs() < 1e-15 && (c[(1, 0)].abs() - 1.0).abs() < 1e-15);

        let full = w_orthogonal_complement(&w1, &[], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(full, DMatrix::identity(2, 2));

        // kernel of [1, 0, −1, 0]: span{e2, e4, (e1 + e3)/√2}
        let w = FormSpace::from_diagonals(&[&[1.0, 1.0, -1.0, -1.0]]).unwrap();
        let c = w_orthogonal_complement(&w, &[v(&[1.0, 0.0, 1.0, 0.0])], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(c.ncols(), 3);
        let expected = DMatrix::from_columns(&[
            v(&[0.0, 1.0, 0.0, 0.0]),
            v(&[0.0, 0.0, 0.0, 1.0]),
            v(&[1.0, 0.0, 1.0, 0.0]) / 2f64.sqrt(),
        ]);
        // Same subspace: projectors agree.
        let p1 = &c * c.transpose();
        let p2 = &expected * expected.transpose();
        assert!((p1 - p2).amax() < 1e-14);
    }

    #[test]
    fn restriction_examples() {
        let w = FormSpace::from_diagonals(&[&[1.0, -1.0, 1.0]]).unwrap();
        let b = DMatrix::from_columns(&[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]);
        let r = restrict_forms(&w, &b).unwrap();
        assert!(r.injective);
        assert_eq!(r.forms[0], SymmetricForm::diagonal(&[1.0, -1.0]));

        let w = FormSpace::from_diagonals(&[&[1.0, 0.0]]).unwrap();
        let r = restrict_forms(&w, &DMatrix::from_column_slice(2, 1, &[0.0, 1.0])).unwrap();
        assert!(!r.injective);
        assert_eq!(r.forms[0].matrix()[(0, 0)], 0.0);
        assert!(r.into_space().is_err());

        let w = FormSpace::from_diagonals(&[&[2.0, -3.0, 5.0]]).unwrap();
        let r = restrict_forms(&w, &DMatrix::from_column_slice(3, 1, &[1.0, 1.0, 1.0])).unwrap();
        assert!(r.injective);
        assert_eq!(r.forms[0].matrix()[(0, 0)], 4.0);

        let bad = DMatrix::from_columns(&[v(&[1.0, 0.0, 0.0]), v(&[2.0, 0.0, 0.0])]);
        assert!(matches!(restrict_forms(&w, &bad), Err(Error::Input(_))));
    }

    #[test]
    fn nonsingular_point_examples() {
        let (r, k) = (DEFAULT_RES_TOL, DEFAULT_RANK_TOL);
        let w = FormSpace::from_diagonals(&[&[1.0, -1.0]]).unwrap();
        assert!(is_nonsingular_point(&w, &v(&[1.0, 1.0]), r, k).unwrap());
        assert!(!is_nonsingular_point(&w, &v(&[1.0, 0.0]), r, k).unwrap());
        let w = FormSpace::from_diagonals(&[&[1.0, 0.0, -1.0]]).unwrap();
        assert!(!is_nonsingular_point(&w, &v(&[0.0, 1.0, 0.0]), r, k).unwrap());
        assert!(is_nonsingular_point(&w, &v(&[1.0, 0.0, 1.0]), r, k).unwrap());
    }
}
