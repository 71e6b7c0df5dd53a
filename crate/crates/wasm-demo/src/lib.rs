//! Browser bindings for the OULP simulator.
//!
//! Every export returns a flat `Vec<f64>` so the page can wrap it in a
//! `Float64Array` without any glue beyond wasm-bindgen.

use num_complex::Complex64 as C64;
use oulp::channel::{apply_channel, cgauss, discretize_pdp, ChannelRealization, PowerDelayProfile};
use oulp::dsp::padded_fft;
use oulp::harness::SimConfig;
use oulp::modem::OulpModem;
use oulp::prototype::{build_iota, gain_vector_v, xi_coefficient, Parity};
use oulp::qam::{constellation, qam16_demap, qam16_map};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

fn err(e: oulp::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Filter taps followed by `v_{0,n}` for even slots.
///
/// Layout: `[len, f_0..f_{len-1}, re(v_0), im(v_0), ...]`.
#[wasm_bindgen]
pub fn prototype_curves(l: usize, overlap: usize) -> Result<Vec<f64>, JsError> {
    let f = build_iota(l, overlap).map_err(err)?;
    let mut out = vec![f.len() as f64];
    out.extend_from_slice(f.coeffs());
    for v in gain_vector_v(&f, 0, Parity::Even, 1) {
        out.extend([v.re, v.im]);
    }
    Ok(out)
}

/// `ξ_{κ,ℓ}` for κ, ℓ in `[-radius, radius]`, row-major in ℓ, as re/im pairs.
#[wasm_bindgen]
pub fn xi_grid(l: usize, overlap: usize, odd: bool, radius: i64) -> Result<Vec<f64>, JsError> {
    let f = build_iota(l, overlap).map_err(err)?;
    let parity = if odd { Parity::Odd } else { Parity::Even };
    let mut out = Vec::new();
    for ell in -radius..=radius {
        for kappa in -radius..=radius {
            let z = xi_coefficient(&f, kappa, ell, parity);
            out.extend([z.re, z.im]);
        }
    }
    Ok(out)
}

/// Runs one OULP frame over a static vehicular channel and returns the
/// equalized receiver outputs.
///
/// Layout: `[bit_errors, bits, re_0, im_0, ...]`.
#[wasm_bindgen]
pub fn constellation_run(l: usize, overlap: usize, slots: usize, ebn0_db: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    let modem = OulpModem::new(build_iota(l, overlap).map_err(err)?, 1).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let powers = discretize_pdp(&PowerDelayProfile::vehicular(), 100.0).map_err(err)?;
    let taps: Vec<C64> = powers.powers.iter().map(|&p| cgauss(&mut rng, p)).collect();
    let ch = ChannelRealization::static_siso(taps.clone(), 4 * slots + 8 * overlap, l / 2);

    let bits: Vec<u8> = (0..slots * l / 2 * 4).map(|_| rng.random_range(0..2u8)).collect();
    let big_q: Vec<Vec<C64>> = qam16_map(&bits).chunks(l / 2).map(<[C64]>::to_vec).collect();
    let q: Vec<Vec<C64>> = big_q.iter().map(|x| modem.precode(x)).collect();
    let s = modem.transmit(&q).map_err(err)?;
    let n0 = SimConfig::n0(ebn0_db);
    let r = apply_channel(&[s], &ch, n0, &mut rng);
    let rx = modem.receive(&r, &ch, n0, slots).map_err(err)?;

    let hh = padded_fft(&taps, l / 2);
    let eq: Vec<C64> = rx.chi[0]
        .iter()
        .flat_map(|chi| chi.iter().zip(&hh).map(|(y, h)| y / h))
        .collect();
    let errors = qam16_demap(&eq).iter().zip(&bits).filter(|(a, b)| a != b).count();
    let mut out = vec![errors as f64, bits.len() as f64];
    for z in eq {
        out.extend([z.re, z.im]);
    }
    Ok(out)
}

/// The 16-QAM reference points as re/im pairs.
#[wasm_bindgen]
pub fn reference_points() -> Vec<f64> {
    constellation().iter().flat_map(|z| [z.re, z.im]).collect()
}
