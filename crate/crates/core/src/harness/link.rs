//! One frame through transmitter, channel, receiver and detector.

use rand::Rng;

use crate::channel::{apply_channel, discretize_pdp, sample_channel, ChannelRealization, TapPowers};
use crate::dsp::{padded_fft, C64};
use crate::error::Result;
use crate::harness::config::{SimConfig, Stbc, System};
use crate::mimo::{collect_block, ml_detect, Code};
use crate::modem::OulpModem;
use crate::ofdm::{ofdm_demodulate, ofdm_modulate, OfdmConfig};
use crate::prototype::design_iota;
use crate::qam::constellation;

#[derive(Clone, Debug)]
enum Link {
    Oulp(Box<OulpModem>),
    Ofdm(OfdmConfig),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameStats {
    pub bits: u64,
    pub errors: u64,
    pub blocks: u64,
    pub drifted: u64,
}

impl std::ops::AddAssign for FrameStats {
    fn add_assign(&mut self, o: Self) {
        self.bits += o.bits;
        self.errors += o.errors;
        self.blocks += o.blocks;
        self.drifted += o.drifted;
    }
}

/// Immutable per-configuration state shared by all frames.
#[derive(Clone, Debug)]
pub struct LinkSim {
    link: Link,
    powers: TapPowers,
    l: usize,
    nt: usize,
    nr: usize,
    slots: usize,
    stbc: Stbc,
    sample_period: f64,
    drift_threshold: f64,
}

impl LinkSim {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let link = match cfg.system {
            System::Oulp => {
                let f = design_iota(cfg.l, cfg.overlap)?;
                Link::Oulp(Box::new(OulpModem::new(f, cfg.delta)?))
            }
            System::Ofdm => Link::Ofdm(OfdmConfig {
                l: cfg.l,
                cp_len: cfg.cp_len,
            }),
        };
        Ok(Self {
            link,
            powers: discretize_pdp(&cfg.pdp, cfg.sample_period_ns)?,
            l: cfg.l,
            nt: cfg.nt,
            nr: cfg.nr,
            slots: cfg.slots,
            stbc: cfg.stbc,
            sample_period: cfg.sample_period_ns * 1e-9,
            drift_threshold: cfg.drift_threshold,
        })
    }

    /// Symbols per slot and antenna.
    pub fn subcarriers(&self) -> usize {
        match self.link {
            Link::Oulp(_) => self.l / 2,
            Link::Ofdm(_) => self.l,
        }
    }

    fn streams(&self) -> usize {
        match self.stbc {
            Stbc::Alamouti => 1,
            Stbc::None => self.nt,
        }
    }

    pub fn bits_per_frame(&self) -> u64 {
        (self.slots * self.subcarriers() * self.streams() * 4) as u64
    }

    pub fn tap_powers(&self) -> &TapPowers {
        &self.powers
    }

    /// Simulates one frame at the given Eb/N0 (dB) and coherence time (s).
    pub fn run_frame<R: Rng + ?Sized>(&self, ebn0_db: f64, tco: f64, rng: &mut R) -> Result<FrameStats> {
        let n0 = SimConfig::n0(ebn0_db);
        let ns = self.subcarriers();
        let pts = constellation();
        let amp = 1.0 / (self.nt as f64).sqrt();
        // idx[k][η] lists the data symbols of slot k in transmission order
        let idx: Vec<Vec<Vec<u8>>> = (0..self.slots)
            .map(|_| {
                (0..ns)
                    .map(|_| (0..self.streams()).map(|_| rng.random_range(0..16u8)).collect())
                    .collect()
            })
            .collect();
        let mut grid = vec![vec![vec![C64::new(0.0, 0.0); ns]; self.slots]; self.nt];
        for k in 0..self.slots {
            for eta in 0..ns {
                match self.stbc {
                    Stbc::Alamouti if k % 2 == 0 => {
                        let (s1, s2) = (pts[idx[k][eta][0] as usize], pts[idx[k + 1][eta][0] as usize]);
                        let b = crate::mimo::alamouti_encode(s1, s2);
                        for (t, row) in b.iter().enumerate() {
                            for (i, &x) in row.iter().enumerate() {
                                grid[i][k + t][eta] = x * amp;
                            }
                        }
                    }
                    Stbc::Alamouti => {}
                    Stbc::None => {
                        for i in 0..self.nt {
                            grid[i][k][eta] = pts[idx[k][eta][i] as usize] * amp;
                        }
                    }
                }
            }
        }
        let (chi, hdiag) = match &self.link {
            Link::Oulp(m) => {
                let tx = grid
                    .iter()
                    .map(|g| {
                        let q: Vec<Vec<C64>> = g.iter().map(|x| m.precode(x)).collect();
                        m.transmit(&q)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ch = self.channel(tx[0].len(), self.l / 2, tco, rng);
                let r = apply_channel(&tx, &ch, n0, rng);
                let rx = m.receive(&r, &ch, n0, self.slots)?;
                (rx.chi, rx.hdiag)
            }
            Link::Ofdm(cfg) => {
                let tx: Vec<Vec<C64>> = grid.iter().map(|g| ofdm_modulate(g, cfg)).collect();
                let ch = self.channel(tx[0].len(), cfg.slot_len(), tco, rng);
                let r = apply_channel(&tx, &ch, n0, rng);
                let chi: Vec<Vec<Vec<C64>>> = r.iter().map(|rj| ofdm_demodulate(rj, cfg, self.slots)).collect();
                let hdiag = (0..self.slots)
                    .map(|k| {
                        ch.block(k)
                            .iter()
                            .map(|row| row.iter().map(|t| padded_fft(t, self.l)).collect())
                            .collect()
                    })
                    .collect();
                (chi, hdiag)
            }
        };
        let mut st = FrameStats {
            bits: self.bits_per_frame(),
            ..Default::default()
        };
        let (code, k_block) = match self.stbc {
            Stbc::Alamouti => (Code::Alamouti, 2),
            Stbc::None => (Code::Uncoded, 1),
        };
        for k in (0..self.slots).step_by(k_block) {
            for eta in 0..ns {
                let b = collect_block(&chi, &hdiag, k, eta, k_block, amp, self.drift_threshold);
                let det = ml_detect(&b.chi, &b.xi, &pts, code);
                let sent: Vec<u8> = match self.stbc {
                    Stbc::Alamouti => vec![idx[k][eta][0], idx[k + 1][eta][0]],
                    Stbc::None => idx[k][eta].clone(),
                };
                for (&a, &d) in sent.iter().zip(&det) {
                    st.errors += u64::from((a ^ d as u8).count_ones());
                }
                st.blocks += 1;
                st.drifted += u64::from(b.drifted);
            }
        }
        Ok(st)
    }

    fn channel<R: Rng + ?Sized>(&self, len: usize, block_len: usize, tco: f64, rng: &mut R) -> ChannelRealization {
        let blocks = (len + self.powers.lc() - 1).div_ceil(block_len) + 1;
        sample_channel(&self.powers, tco, blocks, block_len, self.sample_period, self.nt, self.nr, rng)
    }
}
