//! Constructive solution of `E(v) = t`.
//!
//! The recursive construction draws a random `v₁`, restricts the problem to
//! the W-orthogonal complement of `v₁` and to the `k − 1` forms annihilating
//! `E(v₁)`, solves that smaller problem for `u`, and finishes with
//! `v = √(−c)·v₁ + u` where `E(u) − t = c·E(v₁)`. A positive `c` triggers a
//! restart. Every accepted point is polished by Gauss–Newton, checked and,
//! when an avoid set is given, moved along its fibre until it clears the set.
//! If the restart budget runs out, a homotopy from the best iterate is tried.

mod avoid;
mod newton;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use avoid::AvoidSet;
pub use newton::{clear_avoid, continuation_solve, residual};

use crate::error::{check_dim, Error, Result};
use crate::forms::{
    self, EvalVector, FormSpace, SymmetricForm, DEFAULT_RANK_TOL, DEFAULT_RES_TOL, DEFAULT_ZERO_TOL,
};
use crate::linalg;
use newton::{clear_with, continuation_with, polish, residual_unchecked};

/// Restart budget of every level below the top one.
const INNER_RESTARTS: usize = 8;
/// Targets below this norm are treated as zero inside the recursion.
const TINY_TARGET: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub res_tol: f64,
    pub max_restarts: usize,
    pub max_depth: usize,
    pub seed: u64,
    pub avoid: AvoidSet,
    pub fallback_enabled: bool,
    pub rank_tol: f64,
    pub zero_tol: f64,
    /// Fibre moves tried by the avoid-set clearing step.
    pub clear_tries: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            res_tol: DEFAULT_RES_TOL,
            max_restarts: 64,
            max_depth: 64,
            seed: 0,
            avoid: AvoidSet::empty(),
            fallback_enabled: true,
            rank_tol: DEFAULT_RANK_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
            clear_tries: 48,
        }
    }
}

impl SolveOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathTaken {
    /// The recursion finished with `c = 0` (no ray correction needed).
    Recursive,
    /// The recursion finished with a ray correction `√(−c)·v₁`.
    Combined,
    Continuation,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub v: DVector<f64>,
    /// `‖E(v) − t‖ / (1 + ‖t‖)`.
    pub residual: f64,
    pub restarts_used: usize,
    pub path_taken: PathTaken,
}

/// A vector with `w(v, v) = t`, built from extreme eigenvectors.
///
/// Fails with `Infeasible` when `t > 0` and `w ≤ 0`, when `t < 0` and `w ≥ 0`,
/// and when `t = 0` for a definite `w`. For `t = 0` and an indefinite `w` the
/// result is isotropic and nonzero.
pub fn solve_form_value(w: &SymmetricForm, t: f64, tol: f64) -> Result<DVector<f64>> {
    if !t.is_finite() {
        return Err(Error::Input(format!("target value {t} is not finite")));
    }
    let (vals, vecs) = linalg::sym_eigen(w.matrix())?;
    let n = vals.len();
    let scale = vals.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let thr = DEFAULT_ZERO_TOL * scale;
    let top = (n > 0 && vals[n - 1] > thr).then(|| n - 1);
    let bottom = (n > 0 && vals[0] < -thr).then_some(0);
    let col = |i: usize| vecs.column(i).into_owned();
    let v = if t > 0.0 {
        let i = top.ok_or_else(|| {
            Error::Infeasible(format!("w has no positive direction, cannot reach {t}"))
        })?;
        col(i) * (t / vals[i]).sqrt()
    } else if t < 0.0 {
        let i = bottom.ok_or_else(|| {
            Error::Infeasible(format!("w has no negative direction, cannot reach {t}"))
        })?;
        col(i) * (t / vals[i]).sqrt()
    } else {
        match (top, bottom) {
            (Some(p), Some(q)) => col(p) / vals[p].sqrt() + col(q) / (-vals[q]).sqrt(),
            _ if scale > 0.0 && vals.iter().any(|x| x.abs() <= thr) => {
                let i = vals
                    .iter()
                    .position(|x| x.abs() <= thr)
                    .expect("zero eigenvalue present");
                col(i)
            }
            _ => {
                return Err(Error::Infeasible(
                    "w is definite, so w(v, v) = 0 forces v = 0".into(),
                ))
            }
        }
    };
    let got = w.pair(&v, &v);
    if (got - t).abs() > tol * (1.0 + t.abs()) {
        return Err(Error::Numeric(format!(
            "form value {got:.17e} misses target {t:.17e}"
        )));
    }
    Ok(v)
}

fn default_ortho_tol(space: &FormSpace, v1: &DVector<f64>, v3: &DVector<f64>) -> f64 {
    1e-10 * (1.0 + v1.norm() * v3.norm()) * space.max_scale().max(1.0)
}

/// `v = a·v₁ + b·v₃` for a W-orthogonal pair, together with
/// `E(v) = a²·E(v₁) + b²·E(v₃)`.
pub fn orthogonal_combine(
    space: &FormSpace,
    v1: &DVector<f64>,
    v3: &DVector<f64>,
    a: f64,
    b: f64,
) -> Result<(DVector<f64>, EvalVector)> {
    let defect = forms::orthogonality_defect(space, v1, v3)?;
    let tol = default_ortho_tol(space, v1, v3);
    if defect > tol {
        return Err(Error::Precondition(format!(
            "pair is not W-orthogonal (defect {defect:.3e} > {tol:.3e})"
        )));
    }
    let v = v1 * a + v3 * b;
    let e = forms::eval_unchecked(space, v1).coords * (a * a)
        + forms::eval_unchecked(space, v3).coords * (b * b);
    Ok((v, EvalVector::new(e)))
}

/// Given `u ⊥_W v₁` with `E(u) = c·E(v₁)` and `c ≤ 0`, returns the null
/// vector `√(−c)·v₁ + u`.
pub fn cancel_on_ray(
    space: &FormSpace,
    v1: &DVector<f64>,
    u: &DVector<f64>,
    c: f64,
) -> Result<DVector<f64>> {
    if c > 0.0 {
        return Err(Error::Infeasible(format!(
            "ray coefficient c = {c} is positive; restart"
        )));
    }
    let defect = forms::orthogonality_defect(space, v1, u)?;
    let tol = default_ortho_tol(space, v1, u);
    if defect > tol {
        return Err(Error::Precondition(format!(
            "u is not W-orthogonal to v1 (defect {defect:.3e})"
        )));
    }
    let e1 = forms::eval_unchecked(space, v1).coords;
    let eu = forms::eval_unchecked(space, u).coords;
    let off = (&eu - &e1 * c).norm();
    let scale =
        1e-10 * (1.0 + u.norm_squared() + c.abs() * v1.norm_squared()) * space.max_scale().max(1.0);
    if off > scale {
        return Err(Error::Precondition(format!(
            "E(u) is not c·E(v1) (mismatch {off:.3e})"
        )));
    }
    Ok(v1 * (-c).sqrt() + u)
}

enum Attempt {
    Solved {
        v: DVector<f64>,
        corrected: bool,
    },
    /// `c > 0`: `u` solves the reduced problem but the ray correction is unavailable.
    Positive {
        u: DVector<f64>,
        residual: f64,
    },
    Failed,
}

struct Level<'a> {
    opts: &'a SolveOptions,
    rng: ChaCha8Rng,
}

/// Random `v` with `w(v, v) = t`: a mix of positive, negative and zero
/// eigenspace components of a Gaussian vector. `None` if `t` is unreachable.
fn sample_form_value(w: &DMatrix<f64>, t: f64, lvl: &mut Level) -> Result<Option<DVector<f64>>> {
    let (vals, vecs) = linalg::sym_eigen(w)?;
    let n = vals.len();
    let scale = vals.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let thr = lvl.opts.zero_tol * scale;
    let x = linalg::gaussian_vector(n, &mut lvl.rng);
    let coef = vecs.transpose() * &x;
    let (mut p, mut q, mut z) = (DVector::zeros(n), DVector::zeros(n), DVector::zeros(n));
    let (mut a, mut b) = (0.0, 0.0);
    let (mut has_p, mut has_q, mut has_z) = (false, false, false);
    for i in 0..n {
        let part = vecs.column(i) * coef[i];
        if vals[i] > thr {
            p += part;
            a += vals[i] * coef[i] * coef[i];
            has_p = true;
        } else if vals[i] < -thr {
            q += part;
            b -= vals[i] * coef[i] * coef[i];
            has_q = true;
        } else {
            z += part;
            has_z = true;
        }
    }
    let v = if t == 0.0 {
        if has_p && has_q {
            p * (b / a).sqrt() + q + z
        } else if has_z {
            z
        } else {
            return Ok(None);
        }
    } else if t > 0.0 {
        if !has_p {
            return Ok(None);
        }
        if has_q {
            (p * (2.0 * b / a).sqrt() + q + z) * (t / b).sqrt()
        } else {
            (p + z) * (t / a).sqrt()
        }
    } else {
        if !has_q {
            return Ok(None);
        }
        if has_p {
            (p + q * (2.0 * a / b).sqrt() + z) * (-t / a).sqrt()
        } else {
            (q + z) * (-t / b).sqrt()
        }
    };
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Ok(None);
    }
    Ok(Some(if t == 0.0 { v / norm } else { v }))
}

/// One draw at a level; `t` has unit norm or is zero.
fn attempt(space: &FormSpace, t: &DVector<f64>, lvl: &mut Level, depth: usize) -> Result<Attempt> {
    let k = space.dim_w();
    let n = space.dim_v();
    if k == 1 {
        return Ok(
            match sample_form_value(space.form(0).matrix(), t[0], lvl)? {
                Some(v) => Attempt::Solved {
                    v,
                    corrected: false,
                },
                None => Attempt::Failed,
            },
        );
    }
    if depth >= lvl.opts.max_depth {
        return Err(Error::Numeric(format!(
            "recursion depth limit {} reached",
            lvl.opts.max_depth
        )));
    }
    let v1 = linalg::random_unit(n, &mut lvl.rng);
    let e1 = forms::eval_unchecked(space, &v1).coords;
    let e1_sq = e1.norm_squared();
    if e1_sq.sqrt() <= 1e-8 * space.max_scale() {
        return Ok(Attempt::Failed);
    }
    let tuple = std::slice::from_ref(&v1);
    if !forms::is_w_independent(space, tuple, lvl.opts.rank_tol)? {
        return Ok(Attempt::Failed);
    }
    let q = forms::w_orthogonal_complement(space, tuple, lvl.opts.rank_tol)?;
    if q.ncols() == 0 {
        return Ok(Attempt::Failed);
    }
    let c = linalg::kernel_basis(
        &DMatrix::from_row_slice(1, k, e1.as_slice()),
        lvl.opts.rank_tol,
    )?;
    let sub_forms: Vec<SymmetricForm> = c
        .column_iter()
        .map(|col| {
            let mut acc = DMatrix::zeros(n, n);
            for (cj, w) in col.iter().zip(space.basis()) {
                acc += w.matrix() * *cj;
            }
            SymmetricForm::symmetrized(q.transpose() * acc * &q)
        })
        .collect();
    let sub = match FormSpace::new(sub_forms) {
        Ok(s) => s,
        Err(_) => return Ok(Attempt::Failed),
    };
    let sub_t = c.transpose() * t;
    let y = match solve_level(&sub, &sub_t, lvl, depth + 1)? {
        Some(y) => y,
        None => return Ok(Attempt::Failed),
    };
    let u = &q * y;
    let gap = forms::eval_unchecked(space, &u).coords - t;
    let coef = e1.dot(&gap) / e1_sq;
    if coef > 1e-12 * (1.0 + t.norm()) {
        let residual = residual_unchecked(space, &u, t);
        return Ok(Attempt::Positive { u, residual });
    }
    let corrected = coef < -1e-12 * (1.0 + t.norm());
    Ok(Attempt::Solved {
        v: v1 * (-coef).max(0.0).sqrt() + u,
        corrected,
    })
}

/// Solves `E(v) = t` with the inner restart budget; `None` when all draws fail.
fn solve_level(
    space: &FormSpace,
    t: &DVector<f64>,
    lvl: &mut Level,
    depth: usize,
) -> Result<Option<DVector<f64>>> {
    let tn = t.norm();
    let homogeneous = tn <= TINY_TARGET;
    let t_hat = if homogeneous {
        DVector::zeros(t.len())
    } else {
        t / tn
    };
    for _ in 0..INNER_RESTARTS {
        if let Attempt::Solved { v, .. } = attempt(space, &t_hat, lvl, depth)? {
            let (v, r) = polish(space, v, &t_hat, homogeneous)?;
            if r <= lvl.opts.res_tol {
                return Ok(Some(if homogeneous { v } else { v * tn.sqrt() }));
            }
        }
    }
    Ok(None)
}

fn validate(space: &FormSpace, t: &EvalVector, opts: &SolveOptions) -> Result<()> {
    check_dim("target", t.len(), space.dim_w())?;
    if t.coords.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("target has non-finite entries".into()));
    }
    opts.avoid.check_dim(space.dim_v())?;
    if !(opts.res_tol > 0.0) {
        return Err(Error::Input("res_tol must be positive".into()));
    }
    Ok(())
}

/// Post-processing shared by every path: rescale, polish, nonsingularity and avoid checks.
fn finish(
    space: &FormSpace,
    v: DVector<f64>,
    t: &DVector<f64>,
    nonsingular: bool,
    lvl: &mut Level,
) -> Result<std::result::Result<(DVector<f64>, f64), Error>> {
    let homogeneous = t.norm() == 0.0;
    let (v, r) = polish(space, v, t, homogeneous)?;
    if r > lvl.opts.res_tol {
        return Ok(Err(Error::Numeric(format!(
            "residual {r:.3e} after polishing"
        ))));
    }
    let independent = forms::is_w_independent(space, std::slice::from_ref(&v), lvl.opts.rank_tol)?;
    if nonsingular && !independent {
        return Ok(Err(Error::Numeric("solution is a singular point".into())));
    }
    let v = match clear_with(space, &v, t, &lvl.opts.avoid, lvl.opts, &mut lvl.rng) {
        Ok(v) => v,
        Err(e @ Error::Clearance(_)) => return Ok(Err(e)),
        Err(e) => return Err(e),
    };
    let r = residual_unchecked(space, &v, t);
    Ok(Ok((v, r)))
}

fn solve_top(
    space: &FormSpace,
    t: &EvalVector,
    opts: &SolveOptions,
    nonsingular: bool,
) -> Result<SolveResult> {
    validate(space, t, opts)?;
    let t = &t.coords;
    let tn = t.norm();
    let homogeneous = tn == 0.0;
    let t_hat = if homogeneous { t.clone() } else { t / tn };
    let mut lvl = Level {
        opts,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
    };

    if space.dim_w() == 1 {
        // Reachability of a single form is decided by its inertia.
        let vals = linalg::sym_eigenvalues(space.form(0).matrix())?;
        let sig = forms::signature_from_eigenvalues(vals.as_slice(), opts.zero_tol);
        let reachable = if homogeneous {
            (sig.n_plus > 0 && sig.n_minus > 0) || (!nonsingular && sig.n_zero > 0)
        } else if t[0] > 0.0 {
            sig.n_plus > 0
        } else {
            sig.n_minus > 0
        };
        if !reachable {
            return Err(Error::Infeasible(format!(
                "single form with signature ({}, {}, {}) cannot reach the target",
                sig.n_plus, sig.n_zero, sig.n_minus
            )));
        }
    }

    let mut best: Option<(DVector<f64>, f64)> = None;
    let mut signs = Vec::new();
    let mut clearance_failures = 0;
    let mut other_failures = 0;
    for restart in 0..opts.max_restarts {
        let (v, corrected) = match attempt(space, &t_hat, &mut lvl, 0)? {
            Attempt::Solved { v, corrected } => {
                signs.push(if corrected { -1 } else { 0 });
                (v, corrected)
            }
            Attempt::Positive { u, residual } => {
                signs.push(1);
                if best.as_ref().is_none_or(|b| residual < b.1) {
                    best = Some((u, residual));
                }
                continue;
            }
            Attempt::Failed => {
                signs.push(0);
                other_failures += 1;
                continue;
            }
        };
        let v = if homogeneous { v } else { v * tn.sqrt() };
        let candidate_r = residual_unchecked(space, &v, t);
        match finish(space, v.clone(), t, nonsingular, &mut lvl)? {
            Ok((v, residual)) => {
                return Ok(SolveResult {
                    v,
                    residual,
                    restarts_used: restart,
                    path_taken: if corrected {
                        PathTaken::Combined
                    } else {
                        PathTaken::Recursive
                    },
                })
            }
            Err(Error::Clearance(_)) => clearance_failures += 1,
            Err(_) => other_failures += 1,
        }
        if best.as_ref().is_none_or(|b| candidate_r < b.1) {
            best = Some((v, candidate_r));
        }
    }

    if opts.fallback_enabled {
        let start = match &best {
            Some((v, _))
                if forms::is_w_independent(space, std::slice::from_ref(v), opts.rank_tol)? =>
            {
                v.clone()
            }
            _ => linalg::random_unit(space.dim_v(), &mut lvl.rng),
        };
        if let Ok(v) = continuation_with(space, &start, t, opts, &mut lvl.rng) {
            match finish(space, v, t, nonsingular, &mut lvl)? {
                Ok((v, residual)) => {
                    return Ok(SolveResult {
                        v,
                        residual,
                        restarts_used: opts.max_restarts,
                        path_taken: PathTaken::Continuation,
                    })
                }
                Err(Error::Clearance(_)) => clearance_failures += 1,
                Err(_) => other_failures += 1,
            }
        }
    }

    if clearance_failures > 0 && other_failures == 0 && !signs.contains(&1) {
        return Err(Error::Clearance(format!(
            "every candidate stayed within {} of the avoid set",
            opts.avoid.clearance()
        )));
    }
    Err(Error::NoSolution {
        restarts: opts.max_restarts,
        best_residual: best.map_or(f64::INFINITY, |b| b.1),
        sign_history: signs,
    })
}

/// Solves `E(v) = t`.
pub fn solve_e(space: &FormSpace, t: &EvalVector, opts: &SolveOptions) -> Result<SolveResult> {
    solve_top(space, t, opts, false)
}

/// A unit vector with `E(v) = 0` that is W-independent and clears `opts.avoid`.
pub fn solve_null(space: &FormSpace, opts: &SolveOptions) -> Result<SolveResult> {
    solve_top(space, &EvalVector::zeros(space.dim_w()), opts, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::{make_admissible_space, GeneratorParams};

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn form_value_examples() {
        let w = SymmetricForm::diagonal(&[2.0, -3.0]);
        let x = solve_form_value(&w, 5.0, 1e-12).unwrap();
        assert!((x[0].abs() - 2.5f64.sqrt()).abs() < 1e-12 && x[1].abs() < 1e-12);

        let w = SymmetricForm::diagonal(&[4.0, -1.0]);
        let x = solve_form_value(&w, 0.0, 1e-12).unwrap();
        assert!((x[1] / x[0] - 2.0).abs() < 1e-12 || (x[1] / x[0] + 2.0).abs() < 1e-12);
        assert!(w.pair(&x, &x).abs() < 1e-12);

        let w = SymmetricForm::diagonal(&[1.0, 1.0]);
        assert!(matches!(
            solve_form_value(&w, -1.0, 1e-12),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            solve_form_value(&w, 0.0, 1e-12),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn form_value_negative_target() {
        let w = SymmetricForm::from_row_slice(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let x = solve_form_value(&w, -3.0, 1e-12).unwrap();
        assert!((w.pair(&x, &x) + 3.0).abs() < 1e-12);
    }

    #[test]
    fn combine_example() {
        let space = FormSpace::from_diagonals(&[&[1.0, 1.0, -1.0, -1.0]]).unwrap();
        let (x, e) = orthogonal_combine(
            &space,
            &v(&[1.0, 0.0, 0.0, 0.0]),
            &v(&[0.0, 0.0, 1.0, 0.0]),
            2.0,
            3.0,
        )
        .unwrap();
        assert_eq!(x.as_slice(), &[2.0, 0.0, 3.0, 0.0]);
        assert_eq!(e.coords[0], -5.0);
        assert!(matches!(
            orthogonal_combine(
                &space,
                &v(&[1.0, 0.0, 0.0, 0.0]),
                &v(&[1.0, 0.0, 1.0, 0.0]),
                1.0,
                1.0
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ray_cancellation() {
        let space = FormSpace::from_diagonals(&[&[1.0, 1.0, -1.0, -1.0]]).unwrap();
        let v1 = v(&[1.0, 0.0, 0.0, 0.0]);
        let u = v(&[0.0, 0.0, 2.0, 0.0]);
        let x = cancel_on_ray(&space, &v1, &u, -4.0).unwrap();
        assert_eq!(x.as_slice(), &[2.0, 0.0, 2.0, 0.0]);
        assert!(matches!(
            cancel_on_ray(&space, &v1, &v(&[0.0, 1.0, 0.0, 0.0]), 1.0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn null_examples() {
        let space = FormSpace::from_diagonals(&[&[1.0, 1.0, -1.0, -1.0]]).unwrap();
        let res = solve_null(&space, &SolveOptions::with_seed(3)).unwrap();
        assert!((res.v.norm() - 1.0).abs() < 1e-12);
        assert!(res.residual <= 1e-10);
        assert!(forms::is_nonsingular_point(&space, &res.v, 1e-10, 1e-10).unwrap());

        let definite = FormSpace::from_diagonals(&[&[1.0, 1.0]]).unwrap();
        assert!(matches!(
            solve_null(&definite, &SolveOptions::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn value_example_two_forms() {
        let space =
            FormSpace::from_diagonals(&[&[1.0, -1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, -1.0]]).unwrap();
        let t = EvalVector::from_slice(&[2.0, -3.0]);
        let res = solve_e(&space, &t, &SolveOptions::with_seed(1)).unwrap();
        assert!(res.residual <= 1e-10);
        let e = forms::eval_map(&space, &res.v).unwrap();
        assert!((e.coords[0] - 2.0).abs() < 1e-9 && (e.coords[1] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn generated_instances_solve_and_are_deterministic() {
        for k in 1..=3 {
            let space =
                make_admissible_space(&GeneratorParams::disguised(k, k * k + k, 7)).unwrap();
            let t = EvalVector::new(DVector::from_fn(k, |i, _| (i as f64) - 0.7));
            let a = solve_e(&space, &t, &SolveOptions::with_seed(11)).unwrap();
            let b = solve_e(&space, &t, &SolveOptions::with_seed(11)).unwrap();
            assert!(a.residual <= 1e-10, "k = {k}: residual {}", a.residual);
            assert_eq!(a.v, b.v);
            let z = solve_null(&space, &SolveOptions::with_seed(5)).unwrap();
            assert!(forms::is_nonsingular_point(&space, &z.v, 1e-10, 1e-10).unwrap());
        }
    }

    #[test]
    fn null_clears_avoid_set() {
        let space = FormSpace::from_diagonals(&[&[1.0, 1.0, -1.0, -1.0]]).unwrap();
        let frame = DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        let avoid = AvoidSet::new(vec![frame], 0.3).unwrap();
        let opts = SolveOptions {
            avoid: avoid.clone(),
            ..SolveOptions::with_seed(2)
        };
        let res = solve_null(&space, &opts).unwrap();
        assert!(avoid.clears(&res.v));
    }

    #[test]
    fn target_dimension_checked() {
        let space = FormSpace::from_diagonals(&[&[1.0, -1.0]]).unwrap();
        assert!(matches!(
            solve_e(
                &space,
                &EvalVector::from_slice(&[1.0, 2.0]),
                &SolveOptions::default()
            ),
            Err(Error::Input(_))
        ));
    }
}
