//! Time-varying multipath MIMO channel with AR(1) Rayleigh taps and AWGN.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dsp::{padded_fft, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerDelayProfile {
    pub gains_db: Vec<f64>,
    pub delays_ns: Vec<f64>,
}

impl PowerDelayProfile {
    /// Vehicular-A-like profile with delays on the 100 ns grid.
    pub fn vehicular() -> Self {
        Self {
            gains_db: vec![0.0, -1.0, -9.0, -10.0, -15.0, -20.0],
            delays_ns: vec![0.0, 100.0, 300.0, 500.0, 800.0, 1300.0],
        }
    }

    pub fn flat() -> Self {
        Self {
            gains_db: vec![0.0],
            delays_ns: vec![0.0],
        }
    }
}

impl Default for PowerDelayProfile {
    fn default() -> Self {
        Self::vehicular()
    }
}

/// Per-tap powers on the sample grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TapPowers {
    pub powers: Vec<f64>,
    /// Set when two profile taps fell into the same bin.
    pub collided: bool,
}

impl TapPowers {
    pub fn lc(&self) -> usize {
        self.powers.len()
    }
}

pub fn discretize_pdp(pdp: &PowerDelayProfile, sample_period_ns: f64) -> Result<TapPowers> {
    if sample_period_ns <= 0.0 {
        return Err(Error::BadProfile("sample period must be positive".into()));
    }
    if pdp.gains_db.is_empty() || pdp.gains_db.len() != pdp.delays_ns.len() {
        return Err(Error::BadProfile("gains and delays must be nonempty and paired".into()));
    }
    if pdp.delays_ns[0] < 0.0 || pdp.delays_ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadProfile("delays must be nonnegative and increasing".into()));
    }
    let bins: Vec<usize> = pdp
        .delays_ns
        .iter()
        .map(|d| (d / sample_period_ns).round() as usize)
        .collect();
    let mut powers = vec![0.0; bins[bins.len() - 1] + 1];
    let mut collided = false;
    for (&b, g) in bins.iter().zip(&pdp.gains_db) {
        collided |= powers[b] > 0.0;
        powers[b] += 10f64.powf(g / 10.0);
    }
    let total: f64 = powers.iter().sum();
    powers.iter_mut().for_each(|p| *p /= total);
    Ok(TapPowers { powers, collided })
}

/// Circularly symmetric complex Gaussian with variance `var`.
pub fn cgauss<R: Rng + ?Sized>(rng: &mut R, var: f64) -> C64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

/// Tap sets per block of `block_len` samples.
///
/// `taps[b][j][i]` holds the `Lc` taps from tx `i` to rx `j` during block `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    pub taps: Vec<Vec<Vec<Vec<C64>>>>,
    pub block_len: usize,
    pub nt: usize,
    pub nr: usize,
    pub lc: usize,
    pub tco: f64,
}

impl ChannelRealization {
    /// Single static tap set repeated over `blocks` blocks.
    pub fn static_siso(taps: Vec<C64>, blocks: usize, block_len: usize) -> Self {
        let lc = taps.len();
        Self {
            taps: vec![vec![vec![taps]]; blocks],
            block_len,
            nt: 1,
            nr: 1,
            lc,
            tco: f64::INFINITY,
        }
    }

    pub fn blocks(&self) -> usize {
        self.taps.len()
    }

    /// Taps of block `b`, clamped to the last block.
    pub fn block(&self, b: usize) -> &[Vec<Vec<C64>>] {
        &self.taps[b.min(self.taps.len() - 1)]
    }
}

/// Slot-to-slot correlation `0.5^(block_duration/Tco)`.
pub fn ar_coefficient(block_duration: f64, tco: f64) -> f64 {
    if tco.is_infinite() {
        1.0
    } else {
        0.5f64.powf(block_duration / tco)
    }
}

/// Draws a stationary AR(1) sequence of tap sets.
#[allow(clippy::too_many_arguments)]
pub fn sample_channel<R: Rng + ?Sized>(
    powers: &TapPowers,
    tco: f64,
    blocks: usize,
    block_len: usize,
    sample_period: f64,
    nt: usize,
    nr: usize,
    rng: &mut R,
) -> ChannelRealization {
    let rho = ar_coefficient(block_len as f64 * sample_period, tco);
    let innov = (1.0 - rho * rho).max(0.0).sqrt();
    let lc = powers.lc();
    let mut taps = Vec::with_capacity(blocks);
    let mut cur: Vec<Vec<Vec<C64>>> = (0..nr)
        .map(|_| {
            (0..nt)
                .map(|_| powers.powers.iter().map(|&p| cgauss(rng, p)).collect())
                .collect()
        })
        .collect();
    for b in 0..blocks {
        if b > 0 && rho < 1.0 {
            for row in cur.iter_mut() {
                for h in row.iter_mut() {
                    for (t, &p) in h.iter_mut().zip(&powers.powers) {
                        *t = *t * rho + cgauss(rng, p) * innov;
                    }
                }
            }
        }
        taps.push(cur.clone());
    }
    ChannelRealization {
        taps,
        block_len,
        nt,
        nr,
        lc,
        tco,
    }
}

/// Convolves each tx signal with its block-indexed taps, sums per rx antenna
/// and adds AWGN of variance `n0`. The tap set is chosen by the block of the
/// output sample. Output length is the input length plus `Lc - 1`.
pub fn apply_channel<R: Rng + ?Sized>(
    signals: &[Vec<C64>],
    ch: &ChannelRealization,
    n0: f64,
    rng: &mut R,
) -> Vec<Vec<C64>> {
    assert_eq!(signals.len(), ch.nt);
    let len = signals.iter().map(Vec::len).max().unwrap_or(0);
    let out_len = len + ch.lc - 1;
    (0..ch.nr)
        .map(|j| {
            let mut y = vec![C64::new(0.0, 0.0); out_len];
            for (t, yt) in y.iter_mut().enumerate() {
                let set = &ch.block(t / ch.block_len)[j];
                for (i, s) in signals.iter().enumerate() {
                    let h = &set[i];
                    let lo = (t + 1).saturating_sub(s.len());
                    for m in lo..h.len().min(t + 1) {
                        *yt += h[m] * s[t - m];
                    }
                }
            }
            if n0 > 0.0 {
                for yt in y.iter_mut() {
                    *yt += cgauss(rng, n0);
                }
            }
            y
        })
        .collect()
}

/// Unscaled `points`-length DFT of the zero-padded taps.
pub fn channel_ffts(taps: &[C64], points: usize) -> Result<Vec<C64>> {
    if taps.len() > points {
        return Err(Error::ChannelTooLong {
            lc: taps.len(),
            limit: points,
        });
    }
    Ok(padded_fft(taps, points))
}
