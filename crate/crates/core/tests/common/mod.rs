#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use oulp::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cvec(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn circulant(col: &[C64]) -> DMatrix<C64> {
    let n = col.len();
    DMatrix::from_fn(n, n, |a, b| col[(a + n - b) % n])
}

pub fn max_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn diag(v: &[C64]) -> DMatrix<C64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(v))
}

pub fn qam_frame(rng: &mut impl Rng, slots: usize, n: usize) -> Vec<Vec<C64>> {
    let pts = oulp::qam::constellation();
    (0..slots)
        .map(|_| (0..n).map(|_| pts[rng.random_range(0..16)]).collect())
        .collect()
}
