//! CP-OFDM reference transceiver.

use crate::dsp::{Dft, C64};

#[derive(Clone, Debug)]
pub struct OfdmConfig {
    pub l: usize,
    pub cp_len: usize,
}

impl OfdmConfig {
    pub fn slot_len(&self) -> usize {
        self.l + self.cp_len
    }

    /// True when a channel of `lc` taps fits inside the prefix.
    pub fn isi_free(&self, lc: usize) -> bool {
        lc <= self.cp_len + 1
    }

    /// Share of airtime spent on the prefix, in percent.
    pub fn overhead_percent(&self) -> f64 {
        100.0 * self.cp_len as f64 / (self.cp_len + self.l) as f64
    }
}

/// Unitary inverse DFT per slot, last `ν` samples prepended.
pub fn ofdm_modulate(symbols: &[Vec<C64>], cfg: &OfdmConfig) -> Vec<C64> {
    let dft = Dft::new(cfg.l);
    let mut out = Vec::with_capacity(symbols.len() * cfg.slot_len());
    for x in symbols {
        assert_eq!(x.len(), cfg.l);
        let mut t = x.clone();
        dft.unitary_inverse(&mut t);
        out.extend_from_slice(&t[cfg.l - cfg.cp_len..]);
        out.extend_from_slice(&t);
    }
    out
}

/// Strips the prefix and applies the unitary DFT to each of `slots` slots.
pub fn ofdm_demodulate(signal: &[C64], cfg: &OfdmConfig, slots: usize) -> Vec<Vec<C64>> {
    let dft = Dft::new(cfg.l);
    (0..slots)
        .map(|k| {
            let start = k * cfg.slot_len() + cfg.cp_len;
            let mut y: Vec<C64> = (start..start + cfg.l)
                .map(|t| signal.get(t).copied().unwrap_or_default())
                .collect();
            dft.unitary_forward(&mut y);
            y
        })
        .collect()
}
