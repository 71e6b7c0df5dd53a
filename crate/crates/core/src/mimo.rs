//! Alamouti space-time coding over two slots and ML detection.

use nalgebra::DMatrix;

use crate::dsp::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Code {
    Alamouti,
    Uncoded,
}

/// `[slot][antenna]`: slot 1 sends `(s1, s2)`, slot 2 sends `(-s2*, s1*)`.
pub fn alamouti_encode(s1: C64, s2: C64) -> [[C64; 2]; 2] {
    [[s1, s2], [-s2.conj(), s1.conj()]]
}

/// Codeword as an `Nt × T` matrix (antenna rows, slot columns).
fn alamouti_matrix(s1: C64, s2: C64) -> DMatrix<C64> {
    let b = alamouti_encode(s1, s2);
    DMatrix::from_fn(2, 2, |ant, slot| b[slot][ant])
}

fn residual(chi: &DMatrix<C64>, xi: &DMatrix<C64>, q: &DMatrix<C64>) -> f64 {
    (chi - xi * q).norm_squared()
}

fn argmin(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, m) in it.enumerate() {
        if m < best.1 {
            best = (i, m);
        }
    }
    best.0
}

/// Searches every codeword for the smallest `‖χ − Ξ Q‖²`.
///
/// `chi` is `Nr × T` and `xi` is `Nr × Nt`. Returns constellation indices in
/// transmission order: `[s1, s2]` for Alamouti, slot-major for uncoded.
pub fn ml_detect_exhaustive(chi: &DMatrix<C64>, xi: &DMatrix<C64>, points: &[C64], code: Code) -> Vec<usize> {
    let m = points.len();
    match code {
        Code::Alamouti => {
            let best = argmin((0..m * m).map(|c| {
                let q = alamouti_matrix(points[c / m], points[c % m]);
                residual(chi, xi, &q)
            }));
            vec![best / m, best % m]
        }
        Code::Uncoded => {
            let nt = xi.ncols();
            let total = m.pow(nt as u32);
            let mut out = Vec::with_capacity(chi.ncols() * nt);
            for t in 0..chi.ncols() {
                let col = chi.columns(t, 1).into_owned();
                let best = argmin((0..total).map(|c| {
                    let q = DMatrix::from_fn(nt, 1, |i, _| points[(c / m.pow((nt - 1 - i) as u32)) % m]);
                    residual(&col, xi, &q)
                }));
                out.extend((0..nt).map(|i| (best / m.pow((nt - 1 - i) as u32)) % m));
            }
            out
        }
    }
}

/// Decoupled Alamouti decision for a 2-slot block with `Nr` receive antennas.
pub fn alamouti_detect(chi: &DMatrix<C64>, xi: &DMatrix<C64>, points: &[C64]) -> [usize; 2] {
    let mut s1 = C64::new(0.0, 0.0);
    let mut s2 = C64::new(0.0, 0.0);
    let mut g = 0.0;
    for j in 0..chi.nrows() {
        let (h1, h2) = (xi[(j, 0)], xi[(j, 1)]);
        let (y1, y2) = (chi[(j, 0)], chi[(j, 1)]);
        s1 += h1.conj() * y1 + h2 * y2.conj();
        s2 += h2.conj() * y1 - h1 * y2.conj();
        g += h1.norm_sqr() + h2.norm_sqr();
    }
    let pick = |z: C64| argmin(points.iter().map(|p| g * p.norm_sqr() - 2.0 * (p.conj() * z).re));
    [pick(s1), pick(s2)]
}

/// ML detection, using the decoupled rule for Alamouti and maximum-ratio
/// nearest neighbour for a single transmit antenna.
pub fn ml_detect(chi: &DMatrix<C64>, xi: &DMatrix<C64>, points: &[C64], code: Code) -> Vec<usize> {
    match code {
        Code::Alamouti => alamouti_detect(chi, xi, points).to_vec(),
        Code::Uncoded if xi.ncols() == 1 => (0..chi.ncols())
            .map(|t| {
                let mut z = C64::new(0.0, 0.0);
                let mut g = 0.0;
                for j in 0..chi.nrows() {
                    z += xi[(j, 0)].conj() * chi[(j, t)];
                    g += xi[(j, 0)].norm_sqr();
                }
                argmin(points.iter().map(|p| g * p.norm_sqr() - 2.0 * (p.conj() * z).re))
            })
            .collect(),
        Code::Uncoded => ml_detect_exhaustive(chi, xi, points, code),
    }
}

/// Per-subcarrier detection input for one code block.
#[derive(Clone, Debug)]
pub struct Block {
    /// `Nr × K_block` received values.
    pub chi: DMatrix<C64>,
    /// `Nr × Nt` channel taken at the first slot of the block.
    pub xi: DMatrix<C64>,
    /// Largest relative Frobenius change of the channel inside the block.
    pub drift: f64,
    pub drifted: bool,
}

/// Assembles the block starting at slot `k` on subcarrier `eta`.
///
/// `chi[j][k][η]` are receiver outputs and `hdiag[k][j][i][η]` the channel
/// responses; `gain` scales the channel (per-antenna amplitude).
pub fn collect_block(
    chi: &[Vec<Vec<C64>>],
    hdiag: &[Vec<Vec<Vec<C64>>>],
    k: usize,
    eta: usize,
    k_block: usize,
    gain: f64,
    drift_threshold: f64,
) -> Block {
    let nr = chi.len();
    let nt = hdiag[k][0].len();
    let at = |s: usize| DMatrix::from_fn(nr, nt, |j, i| hdiag[s][j][i][eta] * gain);
    let xi = at(k);
    let base = xi.norm();
    let drift = (1..k_block)
        .map(|t| {
            let d = (at(k + t) - &xi).norm();
            if base > 0.0 {
                d / base
            } else {
                d
            }
        })
        .fold(0.0, f64::max);
    Block {
        chi: DMatrix::from_fn(nr, k_block, |j, t| chi[j][k + t][eta]),
        xi,
        drift,
        drifted: drift > drift_threshold,
    }
}
