//! m-admissibility: every nonzero `w ∈ W` is positive definite on some
//! m-dimensional subspace and negative definite on another.
//!
//! Certification evaluates the signature margin on a covering net of the unit
//! sphere of coefficients and absorbs the gaps between net points with Weyl's
//! inequality: `|λ_i(Σ c_j A_j) − λ_i(Σ c'_j A_j)| ≤ L ‖c − c'‖` where
//! `L = Σ_j ‖A_j‖₂`.

pub mod net;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{self, FormSpace, Signature, SymmetricForm, DEFAULT_ZERO_TOL};
use crate::linalg;
use crate::seed::rng_for;

pub use net::{cross_polytope_net, SphereNet, DEFAULT_NET_CAP};

/// Stand-in margin for forms with fewer than `m` positive or negative eigenvalues.
pub const MARGIN_SENTINEL: f64 = f64::MIN;

/// Safety factor applied to the Lipschitz bound.
pub const LIPSCHITZ_SAFEGUARD: f64 = 1.01;

const ESTIMATE_CHUNK: usize = 4096;

/// `Σ c_j A_j` for a unit coefficient vector `c`.
pub fn direction_form(space: &FormSpace, c: &DVector<f64>) -> Result<SymmetricForm> {
    let norm = c.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Input(format!(
            "direction must be a unit vector (‖c‖ = {norm})"
        )));
    }
    space.combination(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureMargin {
    /// `min(λ⁺_(m), −λ⁻_(m))`, or [`MARGIN_SENTINEL`] when `sufficient` is false.
    pub value: f64,
    /// At least `m` strictly positive and `m` strictly negative eigenvalues.
    pub sufficient: bool,
}

/// Slack of the m-admissibility condition at one form: the smaller of the
/// m-th largest eigenvalue and minus the m-th smallest.
pub fn signature_margin(w: &SymmetricForm, m: usize) -> Result<SignatureMargin> {
    let n = w.dim();
    if m == 0 || m > n {
        return Err(Error::Input(format!(
            "margin level m = {m} outside 1..={n}"
        )));
    }
    let vals = linalg::sym_eigenvalues(w.matrix())?;
    Ok(margin_from_sorted(vals.as_slice(), m))
}

fn margin_from_sorted(ascending: &[f64], m: usize) -> SignatureMargin {
    let n = ascending.len();
    let top = ascending[n - m];
    let bottom = ascending[m - 1];
    if top > 0.0 && bottom < 0.0 {
        SignatureMargin {
            value: top.min(-bottom),
            sufficient: true,
        }
    } else {
        SignatureMargin {
            value: MARGIN_SENTINEL,
            sufficient: false,
        }
    }
}

/// `1.01 · Σ_j ‖A_j‖₂`, a Lipschitz constant of `c ↦ Σ c_j A_j` in the spectral norm.
pub fn lipschitz_bound(space: &FormSpace) -> f64 {
    LIPSCHITZ_SAFEGUARD * space.basis_norms().iter().sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    NetCertified,
    SampledEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityCertificate {
    pub m: usize,
    pub net_resolution: f64,
    pub lipschitz: f64,
    pub min_margin: f64,
    pub method: CertificateMethod,
    pub samples_or_net_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub m: usize,
    pub worst_direction: Vec<f64>,
    pub worst_margin: f64,
    /// Margin needed at every net point, `L · δ`.
    pub required_margin: f64,
    pub lipschitz: f64,
    pub net_resolution: f64,
    pub net_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Certification {
    Certified(AdmissibilityCertificate),
    Rejected(Rejection),
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

pub fn certify_admissibility(space: &FormSpace, m: usize, delta: f64) -> Result<Certification> {
    certify_admissibility_with_cap(space, m, delta, DEFAULT_NET_CAP)
}

/// Certifies m-admissibility when `min_net margin > L · δ`.
pub fn certify_admissibility_with_cap(
    space: &FormSpace,
    m: usize,
    delta: f64,
    net_cap: usize,
) -> Result<Certification> {
    if m == 0 {
        return Err(Error::Input(
            "admissibility level must be at least 1".into(),
        ));
    }
    let net = cross_polytope_net(space.dim_w(), delta, net_cap)?;
    let lipschitz = lipschitz_bound(space);
    let required = lipschitz * delta;

    let margins: Vec<f64> = net
        .points
        .par_iter()
        .map(|c| -> Result<f64> {
            if m > space.dim_v() {
                return Ok(MARGIN_SENTINEL);
            }
            let w = space.combination(c)?;
            Ok(signature_margin(&w, m)?.value)
        })
        .collect::<Result<Vec<_>>>()?;
    let (worst_idx, worst) =
        margins
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, x)| if x < best.1 { (i, x) } else { best },
            );

    if worst > required {
        Ok(Certification::Certified(AdmissibilityCertificate {
            m,
            net_resolution: delta,
            lipschitz,
            min_margin: worst,
            method: CertificateMethod::NetCertified,
            samples_or_net_points: net.points.len(),
        }))
    } else {
        Ok(Certification::Rejected(Rejection {
            m,
            worst_direction: net.points[worst_idx].iter().copied().collect(),
            worst_margin: worst,
            required_margin: required,
            lipschitz,
            net_resolution: delta,
            net_points: net.points.len(),
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityEstimate {
    /// Smallest `min(n₊, n₋)` seen; an upper bound on the true admissibility.
    pub m_hat: usize,
    pub worst_direction: Vec<f64>,
    pub worst_signature: Signature,
    pub samples: usize,
}

impl AdmissibilityEstimate {
    /// The estimate as a (non-rigorous) certificate record.
    pub fn certificate(&self, space: &FormSpace) -> AdmissibilityCertificate {
        let c = DVector::from_column_slice(&self.worst_direction);
        let min_margin = match space.combination(&c) {
            Ok(w) if self.m_hat >= 1 => signature_margin(&w, self.m_hat)
                .map(|s| s.value)
                .unwrap_or(MARGIN_SENTINEL),
            _ => MARGIN_SENTINEL,
        };
        AdmissibilityCertificate {
            m: self.m_hat,
            net_resolution: 0.0,
            lipschitz: lipschitz_bound(space),
            min_margin,
            method: CertificateMethod::SampledEstimate,
            samples_or_net_points: self.samples,
        }
    }
}

/// Monte Carlo upper bound on admissibility over `n_samples` random unit
/// directions; deterministic in `seed` regardless of thread count.
pub fn estimate_admissibility(
    space: &FormSpace,
    n_samples: usize,
    seed: u64,
) -> Result<AdmissibilityEstimate> {
    if n_samples == 0 {
        return Err(Error::Input("estimate needs at least one sample".into()));
    }
    let k = space.dim_w();
    let chunks = n_samples.div_ceil(ESTIMATE_CHUNK);
    let per_chunk: Vec<(usize, Signature, DVector<f64>)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<(usize, Signature, DVector<f64>)> {
            let mut rng = rng_for(seed, "estimate", chunk as u64);
            let count = ESTIMATE_CHUNK.min(n_samples - chunk * ESTIMATE_CHUNK);
            let mut best: Option<(usize, Signature, DVector<f64>)> = None;
            for _ in 0..count {
                let c = linalg::random_unit(k, &mut rng);
                let sig = forms::signature(&space.combination(&c)?, DEFAULT_ZERO_TOL)?;
                let level = sig.witt_index();
                if best.as_ref().is_none_or(|b| level < b.0) {
                    best = Some((level, sig, c));
                }
            }
            Ok(best.expect("chunk has at least one sample"))
        })
        .collect::<Result<Vec<_>>>()?;
    let (m_hat, worst_signature, worst) = per_chunk
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one chunk");
    Ok(AdmissibilityEstimate {
        m_hat,
        worst_direction: worst.iter().copied().collect(),
        worst_signature,
        samples: n_samples,
    })
}

/// Parameters for [`make_admissible_space`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub k: usize,
    pub m: usize,
    /// Ambient dimension; at least `2mk`, defaults to `2mk`.
    pub ambient_n: Option<usize>,
    pub seed: u64,
    pub disguise: bool,
}

impl GeneratorParams {
    pub fn new(k: usize, m: usize) -> Self {
        Self {
            k,
            m,
            ambient_n: None,
            seed: 0,
            disguise: false,
        }
    }

    pub fn disguised(k: usize, m: usize, seed: u64) -> Self {
        Self {
            k,
            m,
            ambient_n: None,
            seed,
            disguise: true,
        }
    }
}

fn random_orthogonal(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    g.qr().q()
}

/// `Q₁ · diag(s) · Q₂` with singular values drawn from `[1/2, 2]`.
fn random_well_conditioned(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let q1 = random_orthogonal(n, rng);
    let q2 = random_orthogonal(n, rng);
    let s = DVector::from_fn(n, |_, _| rng.random_range(0.5..=2.0));
    q1 * DMatrix::from_diagonal(&s) * q2
}

/// An m-admissible k-dimensional space: `V = U_1 ⊕ … ⊕ U_k` with `dim U_j = 2m`,
/// `w_j` of signature `(m, m)` on `U_j` and zero elsewhere, zero-padded to the
/// ambient dimension. A disguise applies a random congruence `A ↦ Bᵀ A B` and a
/// random change of basis of `W`; both preserve m-admissibility.
pub fn make_admissible_space(params: &GeneratorParams) -> Result<FormSpace> {
    let GeneratorParams {
        k,
        m,
        ambient_n,
        seed,
        disguise,
    } = *params;
    if k == 0 || m == 0 {
        return Err(Error::Input(format!(
            "generator needs k ≥ 1 and m ≥ 1 (got k = {k}, m = {m})"
        )));
    }
    let block = 2 * m * k;
    let n = ambient_n.unwrap_or(block);
    if n < block {
        return Err(Error::Input(format!(
            "ambient dimension {n} is below 2mk = {block}"
        )));
    }
    let mut mats: Vec<DMatrix<f64>> = (0..k)
        .map(|j| {
            let mut a = DMatrix::zeros(n, n);
            for i in 0..m {
                a[(2 * m * j + i, 2 * m * j + i)] = 1.0;
                a[(2 * m * j + m + i, 2 * m * j + m + i)] = -1.0;
            }
            a
        })
        .collect();
    if disguise {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_well_conditioned(n, &mut rng);
        let mix = random_well_conditioned(k, &mut rng);
        let congruent: Vec<DMatrix<f64>> = mats.iter().map(|a| b.transpose() * a * &b).collect();
        mats = (0..k)
            .map(|i| {
                let mut acc = DMatrix::zeros(n, n);
                for (j, a) in congruent.iter().enumerate() {
                    acc += a * mix[(i, j)];
                }
                (&acc + acc.transpose()) * 0.5
            })
            .collect();
    }
    FormSpace::new(mats.into_iter().map(SymmetricForm::symmetrized).collect())
}

/// The closed-form admissibility and codimension constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremConstants {
    pub i: i64,
    pub k: i64,
    pub n_tuple: i64,
    /// `m(i, k) = k² + 2ik + 3k + 2`: admissibility giving i-connectivity.
    pub m_ik: i64,
    /// `r(i, k) = k² + 2ik + i + 6k − 2`: codimension allowed for removed sets.
    pub r_ik: i64,
    /// `M = ⌈(k² + 3nk + 5k − 3) / 2⌉`: admissibility for lifting n-tuples.
    pub m_nk: i64,
}

pub fn theorem_constants(i: i64, k: i64, n_tuple: i64) -> Result<TheoremConstants> {
    if i < -1 || k < 1 || n_tuple < 0 {
        return Err(Error::Input(format!(
            "constants need i ≥ −1, k ≥ 1, n ≥ 0 (got i = {i}, k = {k}, n = {n_tuple})"
        )));
    }
    let m_ik = k * k + 2 * i * k + 3 * k + 2;
    let r_ik = k * k + 2 * i * k + i + 6 * k - 2;
    let numer = k * k + 3 * n_tuple * k + 5 * k - 3;
    let m_nk = numer.div_euclid(2) + numer.rem_euclid(2);
    Ok(TheoremConstants {
        i,
        k,
        n_tuple,
        m_ik,
        r_ik,
        m_nk,
    })
}

/// Admissibility level under which `E` is onto `W*`: `k² + k − 1`.
pub fn surjectivity_level(k: usize) -> usize {
    k * k + k - 1
}
