//! Time correlation of the receiver output noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::cgauss;
use crate::dsp::{Dft, C64};
use crate::error::Result;
use crate::modem::{desired_half, interference_eliminate, purify, OulpModem};
use crate::prototype::{gain_vector_full, Parity, PrototypeFilter};

/// Largest lag reported.
pub const MAX_LAG: usize = 4;

const CHUNK: usize = 256;

/// `|φ_k|/φ_0` for `k = 0..=MAX_LAG`.
///
/// `receiver` follows the actual receiver, where consecutive slots read
/// opposite halves. `same_half` reads the even-slot half at every lag.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult {
    pub receiver_empirical: Vec<f64>,
    pub receiver_analytic: Vec<f64>,
    pub same_half_empirical: Vec<f64>,
    pub same_half_analytic: Vec<f64>,
}

fn ratios(phi: &[C64]) -> Vec<f64> {
    phi.iter().map(|p| p.norm() / phi[0].re).collect()
}

/// Drives the receiver with white noise and a flat channel and measures the
/// correlation of `Ψ_{k',η}` across `k'`. Analytic values come from the
/// untruncated gain vectors `v_κ`.
pub fn noise_correlation_probe(filter: &PrototypeFilter, lc: usize, trials: usize, seed: u64) -> Result<ProbeResult> {
    let modem = OulpModem::new(filter.clone(), 1)?;
    let l = filter.l();
    let slots = MAX_LAG + 2;
    let len = modem.signal_len(slots);
    let full = Dft::new(l);
    let half = Dft::new(l / 2);
    let flat = vec![C64::new(1.0, 0.0); l];
    let zero = || vec![C64::new(0.0, 0.0); MAX_LAG + 1];

    let chunks = trials.div_ceil(CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<(Vec<C64>, Vec<C64>)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut rx = zero();
            let mut same = zero();
            for _ in 0..CHUNK.min(trials - c * CHUNK) {
                let noise: Vec<C64> = (0..len).map(|_| cgauss(&mut rng, 1.0)).collect();
                let y = modem.analyze(&noise, slots);
                let mut chi_rx = Vec::with_capacity(slots);
                let mut chi_same = Vec::with_capacity(slots);
                for (k, yk) in y.iter().enumerate() {
                    let parity = Parity::of(k as i64);
                    let mut rt = interference_eliminate(yk, &flat, 0.0, parity)?;
                    full.unitary_inverse(&mut rt);
                    let mut x = purify(&rt, parity, lc)?;
                    half.unitary_forward(&mut x);
                    chi_rx.push(x);
                    let mut big_y = yk.clone();
                    full.unitary_inverse(&mut big_y);
                    let mut s = big_y[..l / 2].to_vec();
                    half.unitary_forward(&mut s);
                    chi_same.push(s);
                }
                for k0 in 0..2 {
                    for lag in 0..=MAX_LAG {
                        for eta in 0..l / 2 {
                            rx[lag] += chi_rx[k0][eta] * chi_rx[k0 + lag][eta].conj();
                            same[lag] += chi_same[k0][eta] * chi_same[k0 + lag][eta].conj();
                        }
                    }
                }
            }
            Ok((rx, same))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rx = zero();
    let mut same = zero();
    for (a, b) in sums {
        for lag in 0..=MAX_LAG {
            rx[lag] += a[lag];
            same[lag] += b[lag];
        }
    }

    let mut rx_an = zero();
    let mut same_an = zero();
    for k0 in 0..2i64 {
        let parity = Parity::of(k0);
        for lag in 0..=MAX_LAG {
            let v = gain_vector_full(filter, -(lag as i64), parity);
            let mean = |r: std::ops::Range<usize>| {
                let n = r.len() as f64;
                r.map(|i| v[i]).sum::<C64>() / n
            };
            if lag % 2 == 0 {
                rx_an[lag] += mean(desired_half(parity, l));
            }
            same_an[lag] += mean(0..l / 2);
        }
    }
    Ok(ProbeResult {
        receiver_empirical: ratios(&rx),
        receiver_analytic: ratios(&rx_an),
        same_half_empirical: ratios(&same),
        same_half_analytic: ratios(&same_an),
    })
}
