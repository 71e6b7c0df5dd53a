//! FFT helpers and small complex vector utilities.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

pub type C64 = Complex<f64>;

pub const J: C64 = C64::new(0.0, 1.0);

/// Forward and inverse plans of one length.
///
/// `forward` computes `X[k] = sum x[n] e^{-j2πkn/N}` and `inverse` the same
/// with `e^{+j...}`, both unscaled. The `unitary_*` variants divide by `sqrt(N)`.
#[derive(Clone)]
pub struct Dft {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Dft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("n", &self.n).finish()
    }
}

impl Dft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
    }

    pub fn inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
    }

    pub fn unitary_forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
        scale(buf, 1.0 / (self.n as f64).sqrt());
    }

    pub fn unitary_inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
        scale(buf, 1.0 / (self.n as f64).sqrt());
    }
}

pub fn scale(buf: &mut [C64], s: f64) {
    for x in buf {
        *x *= s;
    }
}

/// Unscaled DFT of `taps` zero-padded to `points`.
pub fn padded_fft(taps: &[C64], points: usize) -> Vec<C64> {
    let mut buf = vec![C64::new(0.0, 0.0); points];
    for (i, &t) in taps.iter().enumerate() {
        buf[i % points] += t;
    }
    Dft::new(points).forward(&mut buf);
    buf
}

/// `j^p` for any integer `p`.
pub fn j_pow(p: i64) -> C64 {
    match p.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Unitary DFT matrix `F[a][b] = e^{-j2πab/n}/sqrt(n)`.
pub fn dft_matrix(n: usize) -> nalgebra::DMatrix<C64> {
    let s = 1.0 / (n as f64).sqrt();
    nalgebra::DMatrix::from_fn(n, n, |a, b| {
        let ph = -2.0 * std::f64::consts::PI * ((a * b) % n) as f64 / n as f64;
        C64::from_polar(s, ph)
    })
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn energy(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}
