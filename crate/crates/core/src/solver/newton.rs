//! Gauss–Newton corrections, the homotopy fallback and avoid-set clearing.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{AvoidSet, PathTaken, SolveOptions, SolveResult};
use crate::error::{check_dim, Error, Result};
use crate::forms::{self, EvalVector, FormSpace};
use crate::linalg;
use crate::seed::rng_for;

const GN_RANK_TOL: f64 = 1e-13;
const POLISH_ITERS: usize = 40;
/// `σ_min / σ_max` of the Jacobian below which the homotopy re-seeds.
const SING_TOL: f64 = 1e-8;
const MIN_STEP: f64 = 1e-6;
const MAX_RESEEDS: usize = 8;

/// `‖E(v) − t‖ / (1 + ‖t‖)`.
pub fn residual(space: &FormSpace, v: &DVector<f64>, t: &EvalVector) -> Result<f64> {
    check_dim("target", t.len(), space.dim_w())?;
    space.check_vector("v", v)?;
    Ok(residual_unchecked(space, v, &t.coords))
}

pub(crate) fn residual_unchecked(space: &FormSpace, v: &DVector<f64>, t: &DVector<f64>) -> f64 {
    (forms::eval_unchecked(space, v).coords - t).norm() / (1.0 + t.norm())
}

/// One Gauss–Newton correction for `E(v) = t`; with `on_sphere` the system
/// is augmented by `‖v‖² = 1`.
fn gn_step(
    space: &FormSpace,
    v: &DVector<f64>,
    t: &DVector<f64>,
    on_sphere: bool,
) -> Result<DVector<f64>> {
    let k = space.dim_w();
    let phi = forms::phi_unchecked(space, std::slice::from_ref(v)) * 2.0;
    let r = forms::eval_unchecked(space, v).coords - t;
    if !on_sphere {
        return Ok(linalg::min_norm_solve(&phi, &r, GN_RANK_TOL)?.0);
    }
    let mut j = DMatrix::zeros(k + 1, v.len());
    j.view_mut((0, 0), (k, v.len())).copy_from(&phi);
    j.set_row(k, &(v.transpose() * 2.0));
    let mut rr = DVector::zeros(k + 1);
    rr.rows_mut(0, k).copy_from(&r);
    rr[k] = v.norm_squared() - 1.0;
    Ok(linalg::min_norm_solve(&j, &rr, GN_RANK_TOL)?.0)
}

fn normalized(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

/// Newton polishing; returns the best iterate and its residual. With
/// `on_sphere` iterates are kept at unit norm.
pub(crate) fn polish(
    space: &FormSpace,
    v: DVector<f64>,
    t: &DVector<f64>,
    on_sphere: bool,
) -> Result<(DVector<f64>, f64)> {
    let mut cur = if on_sphere { normalized(v) } else { v };
    let mut best_r = residual_unchecked(space, &cur, t);
    let mut best = cur.clone();
    let mut stall = 0;
    for _ in 0..POLISH_ITERS {
        if best_r <= 1e-16 {
            break;
        }
        cur = &cur - gn_step(space, &cur, t, on_sphere)?;
        if on_sphere {
            cur = normalized(cur);
        }
        let r = residual_unchecked(space, &cur, t);
        if !r.is_finite() {
            break;
        }
        if r < best_r {
            best_r = r;
            best = cur.clone();
            stall = 0;
        } else {
            stall += 1;
            if stall >= 3 {
                break;
            }
        }
    }
    Ok((best, best_r))
}

/// Tracks `E(v) = (1 − s)·E(v_start) + s·t` from `s = 0` to `1`.
fn track(
    space: &FormSpace,
    v_start: &DVector<f64>,
    t: &DVector<f64>,
    on_sphere: bool,
) -> Result<DVector<f64>> {
    let e0 = forms::eval_unchecked(space, v_start).coords;
    let mut v = v_start.clone();
    let (mut s, mut ds) = (0.0_f64, 0.1_f64);
    while s < 1.0 {
        let phi = forms::phi_unchecked(space, std::slice::from_ref(&v));
        if linalg::inverse_condition(&phi)? < SING_TOL {
            return Err(Error::Numeric(format!(
                "Jacobian nearly singular at s = {s:.6}"
            )));
        }
        let s1 = (s + ds).min(1.0);
        let tau = &e0 * (1.0 - s1) + t * s1;
        let mut w = v.clone();
        let mut converged = false;
        for _ in 0..8 {
            w = &w - gn_step(space, &w, &tau, on_sphere)?;
            if on_sphere {
                w = normalized(w);
            }
            if residual_unchecked(space, &w, &tau) <= 1e-9 {
                converged = true;
                break;
            }
        }
        let jump = (&w - &v).norm() / (1.0 + v.norm());
        if converged && jump <= 0.5 {
            v = w;
            s = s1;
            ds = (ds * 2.0).min(0.25);
        } else {
            ds /= 2.0;
            if ds < MIN_STEP {
                return Err(Error::Numeric(format!(
                    "homotopy step underflow at s = {s:.6}"
                )));
            }
        }
    }
    Ok(v)
}

/// Homotopy solve of `E(v) = t` starting from a W-independent `v_start`.
///
/// For `t = 0` the path stays on the unit sphere. When the Jacobian becomes
/// nearly singular or the step size underflows the path is restarted from a
/// fresh random point, up to a fixed number of times.
pub fn continuation_solve(
    space: &FormSpace,
    v_start: &DVector<f64>,
    t: &EvalVector,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    check_dim("target", t.len(), space.dim_w())?;
    space.check_vector("v_start", v_start)?;
    if !forms::is_w_independent(space, std::slice::from_ref(v_start), opts.rank_tol)? {
        return Err(Error::Precondition(
            "continuation start is not W-independent".into(),
        ));
    }
    let mut rng = rng_for(opts.seed, "continuation", 0);
    let v = continuation_with(space, v_start, &t.coords, opts, &mut rng)?;
    let residual = residual_unchecked(space, &v, &t.coords);
    Ok(SolveResult {
        v,
        residual,
        restarts_used: 0,
        path_taken: PathTaken::Continuation,
    })
}

pub(crate) fn continuation_with(
    space: &FormSpace,
    v_start: &DVector<f64>,
    t: &DVector<f64>,
    opts: &SolveOptions,
    rng: &mut ChaCha8Rng,
) -> Result<DVector<f64>> {
    let on_sphere = t.norm() == 0.0;
    let scale = if on_sphere {
        1.0
    } else {
        (t.norm() / space.max_scale().max(1e-300)).sqrt()
    };
    let mut start = if on_sphere {
        normalized(v_start.clone())
    } else {
        v_start.clone()
    };
    let mut last_err = None;
    for _ in 0..=MAX_RESEEDS {
        match track(space, &start, t, on_sphere) {
            Ok(v) => {
                let (v, r) = polish(space, v, t, on_sphere)?;
                if r <= opts.res_tol {
                    return Ok(v);
                }
                last_err = Some(Error::Numeric(format!(
                    "homotopy endpoint residual {r:.3e}"
                )));
            }
            Err(e) => last_err = Some(e),
        }
        start = linalg::random_unit(space.dim_v(), rng) * scale;
    }
    Err(Error::Numeric(format!(
        "continuation failed after {MAX_RESEEDS} re-seeds: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Moves a solution of `E(v) = target` along its fibre until it clears `avoid`.
pub fn clear_avoid(
    space: &FormSpace,
    v: &DVector<f64>,
    target: &EvalVector,
    avoid: &AvoidSet,
    opts: &SolveOptions,
) -> Result<DVector<f64>> {
    check_dim("target", target.len(), space.dim_w())?;
    space.check_vector("v", v)?;
    avoid.check_dim(space.dim_v())?;
    let mut rng = rng_for(opts.seed, "clear", 0);
    clear_with(space, v, &target.coords, avoid, opts, &mut rng)
}

pub(crate) fn clear_with(
    space: &FormSpace,
    v: &DVector<f64>,
    t: &DVector<f64>,
    avoid: &AvoidSet,
    opts: &SolveOptions,
    rng: &mut impl Rng,
) -> Result<DVector<f64>> {
    if avoid.clears(v) {
        return Ok(v.clone());
    }
    let on_sphere = t.norm() == 0.0;
    let keep_independent = forms::is_w_independent(space, std::slice::from_ref(v), opts.rank_tol)?;
    let vn = v.norm();
    for attempt in 0..opts.clear_tries {
        let tangent =
            forms::w_orthogonal_complement(space, std::slice::from_ref(v), opts.rank_tol)?;
        if tangent.ncols() == 0 {
            break;
        }
        let g = linalg::random_unit(tangent.ncols(), rng);
        let size = (0.05 * 2f64.powf(attempt as f64 / 3.0)).min(2.0) * vn;
        let (w, r) = polish(space, v + tangent * g * size, t, on_sphere)?;
        if r <= opts.res_tol
            && avoid.clears(&w)
            && (!keep_independent
                || forms::is_w_independent(space, std::slice::from_ref(&w), opts.rank_tol)?)
        {
            return Ok(w);
        }
    }
    Err(Error::Clearance(format!(
        "no point within clearance {} found after {} fibre moves (start distance {:.3e})",
        avoid.clearance(),
        opts.clear_tries,
        avoid.min_distance(v)
    )))
}
