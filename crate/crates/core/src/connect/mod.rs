//! Piecewise-linear paths on the nonsingular zero locus `Y_W^{ns}`.
//!
//! A segment between null vectors `u ⊥_W v` stays on `Y_W` because
//! `E((1−s)u + sv) = (1−s)²E(u) + s²E(v)`. The two-segment construction finds
//! a midpoint `r` on the W-orthogonal complement of `{p, q}`; when that
//! restricted space is not admissible enough the five-knot chain
//! `p, g₁, g₂, g₃, q` is used instead, with `g₂` chosen so that `φ(g₂ ⊗ W)`
//! meets `φ(span(p, q) ⊗ W)` trivially.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility::{estimate_admissibility, surjectivity_level};
use crate::error::{Error, Result};
use crate::forms::{self, FormSpace};
use crate::linalg;
use crate::seed::derive_seed;
use crate::solver::{solve_null, AvoidSet, SolveOptions};

#[derive(Clone, Debug)]
pub struct ConnectOptions {
    /// Solver settings; `solve.avoid` is the set `X` every path must clear.
    pub solve: SolveOptions,
    /// Relative W-orthogonality tolerance for consecutive knots.
    pub ortho_tol: f64,
    /// Minimum angle (radians) between consecutive knot directions.
    pub angle_tol: f64,
    pub admissibility_samples: usize,
    /// Solver draws per midpoint or `g₂` search.
    pub max_attempts: usize,
    pub verify_samples: usize,
    /// Smallest segment norm accepted by [`spherical_lift`].
    pub norm_floor: f64,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            ortho_tol: 1e-10,
            angle_tol: 1e-6,
            admissibility_samples: 256,
            max_attempts: 16,
            verify_samples: 100,
            norm_floor: 1e-8,
        }
    }
}

impl ConnectOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            solve: SolveOptions::with_seed(seed),
            ..Self::default()
        }
    }

    fn solve_with(&self, seed: u64, avoid: AvoidSet) -> SolveOptions {
        SolveOptions {
            seed,
            avoid,
            ..self.solve.clone()
        }
    }

    fn ortho_bound(&self, space: &FormSpace, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        self.ortho_tol * (1.0 + u.norm() * v.norm()) * space.max_scale().max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentInfo {
    pub orthogonality_defect: f64,
    /// Exact minimum of `‖(1−s)u + sv‖` over `s ∈ [0, 1]`.
    pub min_norm: f64,
    /// Sine of the angle between the knot lines.
    pub sine: f64,
    /// Exact minimum distance of the normalized segment to each avoid subspace.
    pub avoid_distances: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct PiecewisePath {
    pub knots: Vec<DVector<f64>>,
    pub segments: Vec<SegmentInfo>,
}

impl PiecewisePath {
    pub fn from_knots(
        space: &FormSpace,
        knots: Vec<DVector<f64>>,
        avoid: &AvoidSet,
    ) -> Result<Self> {
        for (i, v) in knots.iter().enumerate() {
            space.check_vector(&format!("knot {i}"), v)?;
        }
        let segments = knots
            .windows(2)
            .map(|w| {
                Ok(SegmentInfo {
                    orthogonality_defect: forms::orthogonality_defect(space, &w[0], &w[1])?,
                    min_norm: segment_min_norm(&w[0], &w[1]),
                    sine: linalg::line_sine(&w[0], &w[1]),
                    avoid_distances: avoid.segment_distances(&w[0], &w[1]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { knots, segments })
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn knots_as_vecs(&self) -> Vec<Vec<f64>> {
        self.knots
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect()
    }
}

/// Exact minimum norm on the segment `[u, v]`.
pub fn segment_min_norm(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let d = v - u;
    let dd = d.norm_squared();
    let s = if dd > 0.0 {
        (-u.dot(&d) / dd).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (u + d * s).norm()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub verified: bool,
    pub max_residual_on_samples: f64,
    pub max_knot_residual: f64,
    pub segments: Vec<SegmentInfo>,
    pub failures: Vec<String>,
}

fn check_endpoint(
    space: &FormSpace,
    name: &str,
    v: &DVector<f64>,
    opts: &ConnectOptions,
) -> Result<()> {
    space.check_vector(name, v)?;
    if !forms::is_nonsingular_point(space, v, opts.solve.res_tol, opts.solve.rank_tol)? {
        return Err(Error::Precondition(format!(
            "{name} is not a nonsingular zero"
        )));
    }
    Ok(())
}

struct Found {
    v: DVector<f64>,
    restarts: usize,
}

fn midpoint_inner(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
    seed: u64,
) -> Result<Found> {
    check_endpoint(space, "p", p, opts)?;
    check_endpoint(space, "q", q, opts)?;
    let basis =
        forms::w_orthogonal_complement(space, &[p.clone(), q.clone()], opts.solve.rank_tol)?;
    if basis.ncols() == 0 {
        return Err(Error::Escalate(
            "W-orthogonal complement of {p, q} is zero".into(),
        ));
    }
    let restriction = forms::restrict_forms(space, &basis)?;
    if !restriction.injective {
        return Err(Error::Escalate(
            "restriction to the complement of {p, q} is not injective".into(),
        ));
    }
    let sub = restriction.into_space()?;
    let need = surjectivity_level(space.dim_w());
    let estimate = estimate_admissibility(
        &sub,
        opts.admissibility_samples,
        derive_seed(seed, "midpoint-admissibility", 0),
    )?;
    if estimate.m_hat < need {
        return Err(Error::Escalate(format!(
            "restricted space looks only {}-admissible, {need} needed",
            estimate.m_hat
        )));
    }
    let cones = opts.solve.avoid.with_cones_through(&[p, q])?;
    let local_avoid = cones.pull_back(&basis);
    let min_sine = opts.angle_tol.sin();
    let mut restarts = 0;
    let mut last = String::from("no attempts made");
    for attempt in 0..opts.max_attempts {
        let solve_opts = opts.solve_with(
            derive_seed(seed, "midpoint", attempt as u64),
            local_avoid.clone(),
        );
        let y = match solve_null(&sub, &solve_opts) {
            Ok(res) => {
                restarts += res.restarts_used;
                res.v
            }
            Err(e @ (Error::NoSolution { .. } | Error::Clearance(_) | Error::Numeric(_))) => {
                restarts += opts.solve.max_restarts;
                last = e.to_string();
                continue;
            }
            Err(e) => return Err(e),
        };
        let r = &basis * y;
        let r = &r / r.norm();
        let ok_point =
            forms::is_nonsingular_point(space, &r, opts.solve.res_tol, opts.solve.rank_tol)?;
        let ok_ortho = forms::orthogonality_defect(space, &r, p)? <= opts.ortho_bound(space, &r, p)
            && forms::orthogonality_defect(space, &r, q)? <= opts.ortho_bound(space, &r, q);
        let ok_angle = linalg::line_sine(&r, p) >= min_sine && linalg::line_sine(&r, q) >= min_sine;
        let ok_clear = cones.clears(&r);
        if ok_point && ok_ortho && ok_angle && ok_clear {
            return Ok(Found { v: r, restarts });
        }
        last = format!(
            "candidate rejected (nonsingular {ok_point}, orthogonal {ok_ortho}, angle {ok_angle}, clear {ok_clear})"
        );
    }
    Err(Error::Numeric(format!(
        "no valid midpoint after {} attempts: {last}",
        opts.max_attempts
    )))
}

/// A nonsingular zero `r` W-orthogonal to `p` and `q`, independent of both and
/// clear of the avoid set and of its cones through `p` and `q`.
pub fn midpoint_find(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
) -> Result<DVector<f64>> {
    Ok(midpoint_inner(space, p, q, opts, opts.solve.seed)?.v)
}

fn two_inner(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
    seed: u64,
) -> Result<(PiecewisePath, usize)> {
    let r = midpoint_inner(space, p, q, opts, seed)?;
    let path =
        PiecewisePath::from_knots(space, vec![p.clone(), r.v, q.clone()], &opts.solve.avoid)?;
    Ok((path, r.restarts))
}

/// The path `(p, r, q)` through a midpoint; `Escalate` when the chain is needed.
pub fn connect_two(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
) -> Result<PiecewisePath> {
    Ok(two_inner(space, p, q, opts, opts.solve.seed)?.0)
}

fn no_path(stage: &str, e: Error) -> Error {
    match e {
        e @ (Error::Input(_) | Error::Precondition(_)) => e,
        e @ Error::NoPath { .. } => e,
        e => Error::NoPath {
            stage: stage.into(),
            detail: e.to_string(),
        },
    }
}

fn chain_inner(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
    seed: u64,
) -> Result<(PiecewisePath, usize)> {
    check_endpoint(space, "p", p, opts)?;
    check_endpoint(space, "q", q, opts)?;
    let k = space.dim_w();
    let ends = [p.clone(), q.clone()];
    let base_rank = forms::phi_rank(space, &ends, opts.solve.rank_tol)?;
    let cones = opts.solve.avoid.with_cones_through(&[p, q])?;
    let min_sine = opts.angle_tol.sin();
    let mut restarts = 0;
    let mut g2 = None;
    let mut last = String::from("no attempts made");
    for attempt in 0..opts.max_attempts {
        let solve_opts =
            opts.solve_with(derive_seed(seed, "chain-g2", attempt as u64), cones.clone());
        let g = match solve_null(space, &solve_opts) {
            Ok(res) => {
                restarts += res.restarts_used;
                res.v
            }
            Err(e @ (Error::Input(_) | Error::Precondition(_))) => return Err(e),
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let rank = forms::phi_rank(
            space,
            &[p.clone(), q.clone(), g.clone()],
            opts.solve.rank_tol,
        )?;
        if rank == base_rank + k
            && linalg::line_sine(&g, p) >= min_sine
            && linalg::line_sine(&g, q) >= min_sine
        {
            g2 = Some(g);
            break;
        }
        last = format!(
            "candidate adds rank {} instead of {k}",
            rank.saturating_sub(base_rank)
        );
    }
    let g2 = g2.ok_or_else(|| Error::NoPath {
        stage: "g2".into(),
        detail: last,
    })?;
    let g1 = midpoint_inner(space, p, &g2, opts, derive_seed(seed, "chain-g1", 0))
        .map_err(|e| no_path("g1", e))?;
    let g3 = midpoint_inner(space, &g2, q, opts, derive_seed(seed, "chain-g3", 0))
        .map_err(|e| no_path("g3", e))?;
    restarts += g1.restarts + g3.restarts;
    let path = PiecewisePath::from_knots(
        space,
        vec![p.clone(), g1.v, g2, g3.v, q.clone()],
        &opts.solve.avoid,
    )?;
    Ok((path, restarts))
}

/// The five-knot chain `(p, g₁, g₂, g₃, q)`; failures name the stage.
pub fn connect_chain5(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
) -> Result<PiecewisePath> {
    Ok(chain_inner(space, p, q, opts, opts.solve.seed)?.0)
}

#[derive(Clone, Debug)]
pub struct Connection {
    pub path: PiecewisePath,
    pub report: PathReport,
    pub escalated: bool,
    pub restarts: usize,
    /// Why the two-segment attempt was abandoned, when it was.
    pub escalation_reason: Option<String>,
}

fn connect_inner(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
    seed: u64,
) -> Result<Connection> {
    let (restarts, reason) = match two_inner(space, p, q, opts, derive_seed(seed, "two", 0)) {
        Ok((path, restarts)) => {
            let report = verify_path(space, &path.knots, opts.verify_samples, opts)?;
            if report.verified {
                return Ok(Connection {
                    path,
                    report,
                    escalated: false,
                    restarts,
                    escalation_reason: None,
                });
            }
            (
                restarts,
                format!(
                    "two-segment path failed verification: {}",
                    report.failures.join("; ")
                ),
            )
        }
        Err(e @ (Error::Input(_) | Error::Precondition(_))) => return Err(e),
        Err(e) => (0, e.to_string()),
    };
    let (path, more) = chain_inner(space, p, q, opts, derive_seed(seed, "chain", 0))
        .map_err(|e| no_path("chain5", e))?;
    let report = verify_path(space, &path.knots, opts.verify_samples, opts)?;
    if !report.verified {
        return Err(Error::NoPath {
            stage: "verify".into(),
            detail: report.failures.join("; "),
        });
    }
    Ok(Connection {
        path,
        report,
        escalated: true,
        restarts: restarts + more,
        escalation_reason: Some(reason),
    })
}

/// Tries [`connect_two`], escalates to [`connect_chain5`], and verifies the result.
pub fn connect(
    space: &FormSpace,
    p: &DVector<f64>,
    q: &DVector<f64>,
    opts: &ConnectOptions,
) -> Result<Connection> {
    connect_inner(space, p, q, opts, opts.solve.seed)
}

/// Checks knot invariants and samples every segment at `n_samples` interior
/// parameters plus both endpoints and the midpoint.
pub fn verify_path(
    space: &FormSpace,
    knots: &[DVector<f64>],
    n_samples: usize,
    opts: &ConnectOptions,
) -> Result<PathReport> {
    let path = PiecewisePath::from_knots(space, knots.to_vec(), &opts.solve.avoid)?;
    let mut failures = Vec::new();
    if knots.len() < 2 {
        failures.push("a path needs at least two knots".to_string());
    }
    let scale = space.max_scale();
    let mut max_knot = 0.0_f64;
    for (i, v) in knots.iter().enumerate() {
        max_knot = max_knot.max(forms::null_residual(space, v)?);
        if !forms::is_nonsingular_point(space, v, opts.solve.res_tol, opts.solve.rank_tol)? {
            failures.push(format!("knot {i} is not a nonsingular zero"));
        }
        if !opts.solve.avoid.clears(v) {
            failures.push(format!("knot {i} is within the avoid clearance"));
        }
    }
    let min_sine = opts.angle_tol.sin();
    let mut max_res = 0.0_f64;
    for (i, (w, seg)) in knots.windows(2).zip(&path.segments).enumerate() {
        if seg.orthogonality_defect > opts.ortho_bound(space, &w[0], &w[1]) {
            failures.push(format!(
                "segment {i}: orthogonality defect {:.3e}",
                seg.orthogonality_defect
            ));
        }
        if seg.sine < min_sine {
            failures.push(format!(
                "segment {i}: knots are parallel (sine {:.3e})",
                seg.sine
            ));
        }
        if seg.min_norm <= opts.norm_floor {
            failures.push(format!(
                "segment {i}: passes within {:.3e} of the origin",
                seg.min_norm
            ));
        }
        if seg
            .avoid_distances
            .iter()
            .any(|&d| d < opts.solve.avoid.clearance())
        {
            failures.push(format!("segment {i}: comes within the avoid clearance"));
        }
        let params = (0..n_samples)
            .map(|j| (j + 1) as f64 / (n_samples + 1) as f64)
            .chain([0.0, 0.5, 1.0]);
        for s in params {
            let x = &w[0] * (1.0 - s) + &w[1] * s;
            let e = forms::eval_map(space, &x)?;
            max_res = max_res.max(e.norm() / (1.0 + x.norm_squared() * scale));
        }
    }
    if max_res > opts.solve.res_tol {
        failures.push(format!("sampled residual {max_res:.3e} exceeds tolerance"));
    }
    Ok(PathReport {
        verified: failures.is_empty(),
        max_residual_on_samples: max_res,
        max_knot_residual: max_knot,
        segments: path.segments,
        failures,
    })
}

/// A path pushed to the unit sphere.
#[derive(Clone, Debug)]
pub struct SphericalPath {
    pub knots: Vec<DVector<f64>>,
    raw: Vec<DVector<f64>>,
    /// Smallest norm met on any segment before normalization.
    pub min_norm: f64,
}

impl SphericalPath {
    /// The normalized point at parameter `s ∈ [0, 1]` of segment `i`.
    pub fn point(&self, i: usize, s: f64) -> DVector<f64> {
        let x = &self.raw[i] * (1.0 - s) + &self.raw[i + 1] * s;
        let n = x.norm();
        x / n
    }
}

pub fn spherical_lift(knots: &[DVector<f64>], floor: f64) -> Result<SphericalPath> {
    let mut min_norm = knots.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    for w in knots.windows(2) {
        min_norm = min_norm.min(segment_min_norm(&w[0], &w[1]));
    }
    if !(min_norm > floor) {
        return Err(Error::Numeric(format!(
            "path comes within {min_norm:.3e} of the origin (floor {floor:.3e})"
        )));
    }
    Ok(SphericalPath {
        knots: knots.iter().map(|v| v / v.norm()).collect(),
        raw: knots.to_vec(),
        min_norm,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub success: bool,
    pub escalated: bool,
    pub knots: usize,
    pub restarts: usize,
    /// Largest sampled residual on the verified path; absent for failures.
    pub max_residual: Option<f64>,
    pub error: Option<String>,
    pub path: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityStats {
    pub n_pairs: usize,
    pub successes: usize,
    pub success_rate: Option<f64>,
    pub escalation_rate: Option<f64>,
    pub mean_knots: Option<f64>,
    pub mean_restarts: Option<f64>,
    pub max_residual: f64,
    pub trials: Vec<TrialRecord>,
}

fn run_trial(
    space: &FormSpace,
    opts: &ConnectOptions,
    seed: u64,
    index: usize,
) -> Result<TrialRecord> {
    let trial_seed = derive_seed(seed, "trial", index as u64);
    let mut restarts = 0;
    let mut endpoint = |label: &str| -> Result<DVector<f64>> {
        let res = solve_null(
            space,
            &opts.solve_with(derive_seed(trial_seed, label, 0), opts.solve.avoid.clone()),
        )?;
        restarts += res.restarts_used;
        Ok(res.v)
    };
    let (p, q) = match (endpoint("p"), endpoint("q")) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(e), _) | (_, Err(e)) => {
            return Ok(TrialRecord {
                index,
                success: false,
                escalated: false,
                knots: 0,
                restarts,
                max_residual: None,
                error: Some(format!("endpoint sampling failed: {e}")),
                path: None,
            })
        }
    };
    Ok(
        match connect_inner(space, &p, &q, opts, derive_seed(trial_seed, "connect", 0)) {
            Ok(c) => TrialRecord {
                index,
                success: true,
                escalated: c.escalated,
                knots: c.path.len(),
                restarts: restarts + c.restarts,
                max_residual: Some(c.report.max_residual_on_samples),
                error: None,
                path: Some(c.path.knots_as_vecs()),
            },
            Err(e @ (Error::Input(_) | Error::Resource(_))) => return Err(e),
            Err(e) => TrialRecord {
                index,
                success: false,
                escalated: true,
                knots: 0,
                restarts,
                max_residual: None,
                error: Some(e.to_string()),
                path: None,
            },
        },
    )
}

/// Connects `n_pairs` random pairs of nonsingular zeros. Trial `i` draws from
/// seeds derived from `(seed, i)`, so results do not depend on thread count.
pub fn monte_carlo_connectivity(
    space: &FormSpace,
    n_pairs: usize,
    opts: &ConnectOptions,
    seed: u64,
) -> Result<ConnectivityStats> {
    let trials = (0..n_pairs)
        .into_par_iter()
        .map(|i| run_trial(space, opts, seed, i))
        .collect::<Result<Vec<_>>>()?;
    let successes = trials.iter().filter(|t| t.success).count();
    let rate = |count: usize| (n_pairs > 0).then(|| count as f64 / n_pairs as f64);
    let mean_knots = (successes > 0).then(|| {
        trials
            .iter()
            .filter(|t| t.success)
            .map(|t| t.knots as f64)
            .sum::<f64>()
            / successes as f64
    });
    Ok(ConnectivityStats {
        n_pairs,
        successes,
        success_rate: rate(successes),
        escalation_rate: rate(trials.iter().filter(|t| t.escalated).count()),
        mean_knots,
        mean_restarts: (n_pairs > 0)
            .then(|| trials.iter().map(|t| t.restarts as f64).sum::<f64>() / n_pairs as f64),
        max_residual: trials
            .iter()
            .filter_map(|t| t.max_residual)
            .fold(0.0, f64::max),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::{make_admissible_space, GeneratorParams};

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    fn split() -> FormSpace {
        FormSpace::from_diagonals(&[&[1.0, 1.0, -1.0, -1.0]]).unwrap()
    }

    #[test]
    fn isotropic_plane_pair_needs_the_chain() {
        // p and q span a totally isotropic plane, so their W-orthogonal
        // complement is that plane and the restricted form vanishes.
        let space = split();
        let p = v(&[1.0, 0.0, 1.0, 0.0]);
        let q = v(&[0.0, 1.0, 0.0, 1.0]);
        let opts = ConnectOptions::with_seed(1);
        assert!(matches!(
            connect_two(&space, &p, &q, &opts),
            Err(Error::Escalate(_))
        ));
        let c = connect(&space, &p, &q, &opts).unwrap();
        assert!(c.escalated);
        assert_eq!(c.path.len(), 5);
        assert!(c.report.verified);
        assert!(c.report.max_residual_on_samples <= 1e-12);
    }

    #[test]
    fn hyperbolic_pair_uses_two_segments() {
        let space = split();
        let p = v(&[1.0, 0.0, 1.0, 0.0]);
        let q = v(&[1.0, 0.0, -1.0, 0.0]);
        let opts = ConnectOptions::with_seed(2);
        let path = connect_two(&space, &p, &q, &opts).unwrap();
        let r = &path.knots[1];
        assert!(forms::orthogonality_defect(&space, r, &p).unwrap() < 1e-12);
        assert!(forms::orthogonality_defect(&space, r, &q).unwrap() < 1e-12);
        assert!(
            verify_path(&space, &path.knots, 100, &opts)
                .unwrap()
                .verified
        );
    }

    #[test]
    fn closed_path_through_midpoint() {
        let space = split();
        let p = v(&[1.0, 0.0, 1.0, 0.0]) / 2f64.sqrt();
        let opts = ConnectOptions::with_seed(3);
        let path = connect_two(&space, &p, &p, &opts).unwrap();
        assert_eq!(path.knots[0], path.knots[2]);
        assert!(linalg::line_sine(&path.knots[1], &p) > 1e-6);
        assert!(
            verify_path(&space, &path.knots, 50, &opts)
                .unwrap()
                .verified
        );
    }

    #[test]
    fn verification_catches_bad_paths() {
        let space = split();
        let opts = ConnectOptions::default();
        let good = [v(&[1.0, 0.0, 1.0, 0.0]), v(&[1.0, 0.0, -1.0, 0.0])];
        // Not W-orthogonal, so the segment leaves the cone.
        assert!(!verify_path(&space, &good, 10, &opts).unwrap().verified);
        let corrupted = [v(&[1.0, 0.0, 1.0, 0.0]), v(&[0.0, 1.0, 0.0, 1.5])];
        assert!(!verify_path(&space, &corrupted, 10, &opts).unwrap().verified);
        let parallel = [v(&[1.0, 0.0, 1.0, 0.0]), v(&[2.0, 0.0, 2.0, 0.0])];
        let report = verify_path(&space, &parallel, 10, &opts).unwrap();
        assert!(!report.verified);
        assert!(report.failures.iter().any(|f| f.contains("parallel")));
    }

    #[test]
    fn lift_examples() {
        let knots = [v(&[1.0, 0.0, 1.0, 0.0]), v(&[1.0, 0.0, -1.0, 0.0])];
        let lifted = spherical_lift(&knots, 1e-8).unwrap();
        assert!((lifted.min_norm - 1.0).abs() < 1e-15);
        let mid = lifted.point(0, 0.5);
        assert!((mid - v(&[1.0, 0.0, 0.0, 0.0])).amax() < 1e-15);
        let unit = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert_eq!(spherical_lift(&unit, 1e-8).unwrap().knots, unit.to_vec());
        let through_origin = [v(&[1.0, 0.0]), v(&[-1.0, 0.0])];
        assert!(matches!(
            spherical_lift(&through_origin, 1e-8),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn witt_index_one_cannot_connect() {
        let space = FormSpace::from_diagonals(&[&[1.0, -1.0, -1.0]]).unwrap();
        let p = v(&[1.0, 1.0, 0.0]);
        let q = v(&[-1.0, 1.0, 0.0]);
        assert!(connect(&space, &p, &q, &ConnectOptions::with_seed(4)).is_err());
    }

    #[test]
    fn generated_instance_midpoint() {
        let space = make_admissible_space(&GeneratorParams::disguised(2, 12, 9)).unwrap();
        let p = solve_null(&space, &SolveOptions::with_seed(1)).unwrap().v;
        let q = solve_null(&space, &SolveOptions::with_seed(2)).unwrap().v;
        let opts = ConnectOptions::with_seed(5);
        let r = midpoint_find(&space, &p, &q, &opts).unwrap();
        assert!(forms::orthogonality_defect(&space, &r, &p).unwrap() <= 1e-10);
        assert!(forms::orthogonality_defect(&space, &r, &q).unwrap() <= 1e-10);
    }

    #[test]
    fn monte_carlo_small_and_empty() {
        let space = split();
        let opts = ConnectOptions::default();
        let stats = monte_carlo_connectivity(&space, 8, &opts, 11).unwrap();
        assert_eq!(stats.success_rate, Some(1.0));
        let again = monte_carlo_connectivity(&space, 8, &opts, 11).unwrap();
        assert_eq!(stats, again);
        let empty = monte_carlo_connectivity(&space, 0, &opts, 11).unwrap();
        assert_eq!(empty.success_rate, None);
        assert!(empty.trials.is_empty());
    }
}
