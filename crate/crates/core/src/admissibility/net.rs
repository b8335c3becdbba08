//! Covering nets on the unit sphere `S^{k−1}` of coefficient space.
//!
//! The boundary of the cross-polytope is split into its `2^k` facets, each
//! facet is refined by longest-edge bisection until every edge, measured
//! geodesically after radial projection, is at most `δ`, and the leaf vertices
//! are projected to the sphere. Every point of a projected facet simplex lies
//! within chord distance of its longest edge from one of the simplex vertices,
//! so every point of the sphere is within `δ` (Euclidean) of a net point.

use std::collections::HashSet;

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Default cap on the number of net points.
pub const DEFAULT_NET_CAP: usize = 10_000_000;

#[derive(Clone, Debug)]
pub struct SphereNet {
    pub points: Vec<DVector<f64>>,
    /// Longest geodesic edge among the leaf simplices (0 for `k = 1`).
    pub resolution: f64,
}

fn geodesic(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let chord = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x / na - y / nb).powi(2))
        .sum::<f64>()
        .sqrt();
    2.0 * (chord / 2.0).min(1.0).asin()
}

/// Upper estimate of the number of net points, used to refuse oversized nets
/// before any allocation happens.
pub fn estimated_net_size(k: usize, delta: f64) -> f64 {
    if k == 1 {
        return 2.0;
    }
    // Facet edges span a right angle; bisection halves them.
    let levels = ((std::f64::consts::FRAC_PI_2 / delta).log2().ceil()).max(0.0);
    let per_edge = 2f64.powf(levels);
    let mut lattice = 1.0;
    for i in 1..k {
        lattice *= (per_edge + i as f64) / i as f64;
    }
    2f64.powi(k as i32) * lattice
}

pub fn cross_polytope_net(k: usize, delta: f64, cap: usize) -> Result<SphereNet> {
    if k == 0 {
        return Err(Error::Input("coefficient space must have k ≥ 1".into()));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Input(format!(
            "net resolution must be positive, got {delta}"
        )));
    }
    let estimate = estimated_net_size(k, delta);
    if estimate > cap as f64 {
        return Err(Error::Resource(format!(
            "a δ = {delta} net on S^{} needs about {estimate:.3e} points (cap {cap}); \
             use a larger δ or a smaller k",
            k - 1
        )));
    }
    if k == 1 {
        return Ok(SphereNet {
            points: vec![
                DVector::from_element(1, 1.0),
                DVector::from_element(1, -1.0),
            ],
            resolution: 0.0,
        });
    }

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut points = Vec::new();
    let mut resolution = 0.0_f64;
    let mut stack: Vec<Vec<Vec<f64>>> = Vec::new();
    for signs in 0..(1u32 << k) {
        let simplex: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let mut e = vec![0.0; k];
                e[i] = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
                e
            })
            .collect();
        stack.push(simplex);
    }

    while let Some(simplex) = stack.pop() {
        let mut longest = (0usize, 1usize, -1.0_f64);
        for a in 0..simplex.len() {
            for b in a + 1..simplex.len() {
                let g = geodesic(&simplex[a], &simplex[b]);
                if g > longest.2 {
                    longest = (a, b, g);
                }
            }
        }
        let (a, b, len) = longest;
        if len <= delta {
            resolution = resolution.max(len);
            for vtx in simplex {
                // Vertices are dyadic combinations of ±e_i, so midpoints are exact
                // and identical vertices have identical bit patterns.
                let key: Vec<u64> = vtx.iter().map(|x| (x + 0.0).to_bits()).collect();
                if seen.insert(key) {
                    let v = DVector::from_vec(vtx);
                    let n = v.norm();
                    points.push(v / n);
                    if points.len() > cap {
                        return Err(Error::Resource(format!(
                            "net exceeded the cap of {cap} points; use a larger δ"
                        )));
                    }
                }
            }
            continue;
        }
        let mid: Vec<f64> = simplex[a]
            .iter()
            .zip(&simplex[b])
            .map(|(x, y)| (x + y) / 2.0)
            .collect();
        let mut left = simplex.clone();
        left[b] = mid.clone();
        let mut right = simplex;
        right[a] = mid;
        stack.push(left);
        stack.push(right);
    }
    Ok(SphereNet { points, resolution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn single_form_net_is_two_points() {
        let net = cross_polytope_net(1, 0.5, DEFAULT_NET_CAP).unwrap();
        assert_eq!(net.points.len(), 2);
        assert_eq!(net.resolution, 0.0);
    }

    #[test]
    fn circle_net_has_expected_spacing() {
        let net = cross_polytope_net(2, 0.1, DEFAULT_NET_CAP).unwrap();
        // Each quarter arc (π/2) needs at least 16 pieces of length ≤ 0.1; flat
        // bisection spacing is uneven on the arc, so allow up to 64.
        assert!(net.points.len() >= 4 * 16 && net.points.len() <= 4 * 64);
        assert!(net.resolution <= 0.1);
    }

    #[test]
    fn random_points_are_covered() {
        for k in 2..=4 {
            let delta = 0.3;
            let net = cross_polytope_net(k, delta, DEFAULT_NET_CAP).unwrap();
            assert!(net.resolution <= delta);
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            for _ in 0..2000 {
                let c = DVector::<f64>::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
                let c = &c / c.norm();
                let d = net
                    .points
                    .iter()
                    .map(|p| (p - &c).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(d <= delta, "k = {k}: point at distance {d} from the net");
            }
        }
    }

    #[test]
    fn oversized_net_refused() {
        assert!(matches!(
            cross_polytope_net(6, 1e-3, DEFAULT_NET_CAP),
            Err(Error::Resource(_))
        ));
    }
}
