use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// A finite union of linear subspaces that solutions must stay away from.
///
/// Distances are measured between the unit vector `v / ‖v‖` and a subspace.
/// Each subspace is held as a frame `F` with `dist(x̂)² = 1 − ‖Fᵀ x̂‖²`; frames
/// built by [`AvoidSet::new`] are orthonormal, so this is the exact Euclidean
/// distance. [`AvoidSet::pull_back`] composes frames with an isometric
/// embedding so the same distances can be evaluated in sub-coordinates.
#[derive(Clone, Debug, Default)]
pub struct AvoidSet {
    frames: Vec<DMatrix<f64>>,
    clearance: f64,
}

impl AvoidSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `spans` are `n × d` matrices with independent columns; `clearance ∈ (0, 1]`.
    pub fn new(spans: Vec<DMatrix<f64>>, clearance: f64) -> Result<Self> {
        if !spans.is_empty() && !(clearance > 0.0 && clearance <= 1.0) {
            return Err(Error::Input(format!(
                "avoid clearance must lie in (0, 1], got {clearance}"
            )));
        }
        let mut frames = Vec::with_capacity(spans.len());
        let dim = spans.first().map(|s| s.nrows());
        for (i, s) in spans.into_iter().enumerate() {
            if Some(s.nrows()) != dim {
                return Err(Error::Input(format!(
                    "avoid subspace {i} has the wrong ambient dimension"
                )));
            }
            let basis = linalg::range_basis(&s, 1e-10)?;
            if basis.ncols() != s.ncols() || s.ncols() == 0 {
                return Err(Error::Input(format!(
                    "avoid subspace {i} spanning matrix does not have full column rank"
                )));
            }
            frames.push(basis);
        }
        Ok(Self { frames, clearance })
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    pub fn frames(&self) -> &[DMatrix<f64>] {
        &self.frames
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.frames.first() {
            Some(f) if f.nrows() != n => Err(Error::Input(format!(
                "avoid set lives in dimension {}, expected {n}",
                f.nrows()
            ))),
            _ => Ok(()),
        }
    }

    /// Distance from `v / ‖v‖` to each subspace (0 for the zero vector).
    pub fn distances(&self, v: &DVector<f64>) -> Vec<f64> {
        let n = v.norm();
        self.frames
            .iter()
            .map(|f| {
                if n == 0.0 {
                    return 0.0;
                }
                let proj = (f.transpose() * v).norm_squared() / (n * n);
                (1.0 - proj).max(0.0).sqrt()
            })
            .collect()
    }

    pub fn min_distance(&self, v: &DVector<f64>) -> f64 {
        self.distances(v).into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn clears(&self, v: &DVector<f64>) -> bool {
        self.is_empty() || self.min_distance(v) >= self.clearance
    }

    /// Adds `span(p ∪ S)` for every subspace `S` and every point `p`, keeping the
    /// original subspaces. Knots that clear these cones see segments to `p`
    /// that clear `S`.
    pub fn with_cones_through(&self, points: &[&DVector<f64>]) -> Result<Self> {
        let mut frames = self.frames.clone();
        for f in &self.frames {
            for p in points {
                let mut cols: Vec<DVector<f64>> = vec![(*p).clone()];
                cols.extend(f.column_iter().map(|c| c.into_owned()));
                frames.push(linalg::range_basis(&DMatrix::from_columns(&cols), 1e-10)?);
            }
        }
        Ok(Self {
            frames,
            clearance: self.clearance,
        })
    }

    /// Expresses the set in the coordinates `y` of `x = embed · y`, where
    /// `embed` has orthonormal columns.
    pub fn pull_back(&self, embed: &DMatrix<f64>) -> Self {
        Self {
            frames: self.frames.iter().map(|f| embed.transpose() * f).collect(),
            clearance: self.clearance,
        }
    }

    /// Exact minimum over the segment `[u, v]` of the distance from the
    /// normalized segment point to each subspace. Segments through the origin
    /// report 0.
    pub fn segment_distances(&self, u: &DVector<f64>, v: &DVector<f64>) -> Vec<f64> {
        self.frames
            .iter()
            .map(|f| {
                let (fu, fv) = (f.transpose() * u, f.transpose() * v);
                let g = [u.dot(u), u.dot(v), v.dot(v)];
                let p = [fu.dot(&fu), fu.dot(&fv), fv.dot(&fv)];
                match max_ratio_on_quadrant(g, p) {
                    Some(r) => (1.0 - r).max(0.0).sqrt(),
                    None => 0.0,
                }
            })
            .collect()
    }
}

/// Maximum of `zᵀPz / zᵀGz` over `z = (a, b) ≥ 0, z ≠ 0`, with symmetric 2×2
/// matrices passed as `[m11, m12, m22]`. `None` when `zᵀGz` vanishes on the
/// quadrant, i.e. the segment passes through the origin.
fn max_ratio_on_quadrant(g: [f64; 3], p: [f64; 3]) -> Option<f64> {
    let quad = |m: [f64; 3], a: f64, b: f64| m[0] * a * a + 2.0 * m[1] * a * b + m[2] * b * b;
    let ratio = |a: f64, b: f64| {
        let den = quad(g, a, b);
        (den > 0.0).then(|| quad(p, a, b) / den)
    };
    let scale = g[0].max(g[2]);
    if scale == 0.0 {
        return None;
    }
    // Minimum of zᵀGz over the quadrant's unit simplex decides origin crossing.
    let d = g[0] - 2.0 * g[1] + g[2];
    let s = if d > 0.0 {
        ((g[0] - g[1]) / d).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let min_den = quad(g, 1.0 - s, s).min(g[0]).min(g[2]);
    if min_den <= 1e-28 * scale {
        return None;
    }
    let mut best = f64::NEG_INFINITY;
    for (a, b) in [(1.0, 0.0), (0.0, 1.0)] {
        if let Some(r) = ratio(a, b) {
            best = best.max(r);
        }
    }
    // Stationary points: det(P − λG) = 0.
    let a2 = g[0] * g[2] - g[1] * g[1];
    let a1 = -(p[0] * g[2] + p[2] * g[0] - 2.0 * p[1] * g[1]);
    let a0 = p[0] * p[2] - p[1] * p[1];
    let mut roots = Vec::new();
    if a2.abs() > 1e-300 {
        let disc = (a1 * a1 - 4.0 * a2 * a0).max(0.0).sqrt();
        roots.push((-a1 + disc) / (2.0 * a2));
        roots.push((-a1 - disc) / (2.0 * a2));
    }
    for lambda in roots {
        let m = [
            p[0] - lambda * g[0],
            p[1] - lambda * g[1],
            p[2] - lambda * g[2],
        ];
        let candidates = [(-m[1], m[0]), (m[2], -m[1])];
        for (a, b) in candidates {
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let (a, b) = if a < 0.0 || (a == 0.0 && b < 0.0) {
                (-a, -b)
            } else {
                (a, b)
            };
            if a >= 0.0 && b >= 0.0 {
                if let Some(r) = ratio(a, b) {
                    best = best.max(r);
                }
            }
        }
    }
    Some(best.min(1.0))
}
