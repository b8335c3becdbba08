//! Reference computations that bypass the library's linear algebra: plain
//! loops over row-major arrays.
#![allow(dead_code)]

use nalgebra::DVector;
use quadric_atlas::FormSpace;

/// `uᵀ A v` by explicit summation over the row-major entries of `A`.
pub fn bilinear(entries: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += entries[i * n + j] * v[j];
        }
        acc += u[i] * row;
    }
    acc
}

pub fn row_major(space: &FormSpace) -> Vec<Vec<f64>> {
    space.basis().iter().map(|w| w.to_row_major()).collect()
}

/// `E(v)` from row-major matrices.
pub fn eval(mats: &[Vec<f64>], v: &DVector<f64>) -> Vec<f64> {
    mats.iter()
        .map(|a| bilinear(a, v.as_slice(), v.as_slice()))
        .collect()
}

pub fn pair(mats: &[Vec<f64>], u: &DVector<f64>, v: &DVector<f64>) -> Vec<f64> {
    mats.iter()
        .map(|a| bilinear(a, u.as_slice(), v.as_slice()))
        .collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0_f64, |a, b| a.max(b.abs()))
}

/// `‖A‖_F`, an upper bound on the spectral norm.
pub fn frobenius(entries: &[f64]) -> f64 {
    norm(entries)
}
