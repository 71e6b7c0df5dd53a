use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::PowerDelayProfile;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Oulp,
    Ofdm,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Oulp => "oulp",
            System::Ofdm => "ofdm",
        }
    }
}

impl std::str::FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oulp" => Ok(System::Oulp),
            "ofdm" => Ok(System::Ofdm),
            _ => Err(Error::Config(format!("unknown system `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stbc {
    Alamouti,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modulation {
    #[serde(rename = "16qam")]
    Qam16,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub system: System,
    #[serde(rename = "L")]
    pub l: usize,
    pub overlap: usize,
    pub delta: usize,
    pub modulation: Modulation,
    #[serde(rename = "Nt")]
    pub nt: usize,
    #[serde(rename = "Nr")]
    pub nr: usize,
    pub stbc: Stbc,
    /// Slots per frame.
    #[serde(rename = "K")]
    pub slots: usize,
    pub k_block: usize,
    pub cp_len: usize,
    pub sample_period_ns: f64,
    pub pdp: PowerDelayProfile,
    pub tco_s: Vec<f64>,
    pub ebn0_db: Vec<f64>,
    pub target_errors: u64,
    pub max_bits: u64,
    pub seed: u64,
    pub output: PathBuf,
    /// Worker threads, 0 for one per core.
    pub workers: usize,
    /// Frames simulated between stopping checks.
    pub batch_frames: usize,
    /// Frames simulated before the stopping rule applies.
    pub min_frames: u64,
    pub drift_threshold: f64,
    pub probe_trials: usize,
    pub probe_lc: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            system: System::Oulp,
            l: 128,
            overlap: crate::prototype::DEFAULT_OVERLAP,
            delta: 1,
            modulation: Modulation::Qam16,
            nt: 1,
            nr: 1,
            stbc: Stbc::None,
            slots: 32,
            k_block: 2,
            cp_len: 12,
            sample_period_ns: 100.0,
            pdp: PowerDelayProfile::vehicular(),
            tco_s: vec![0.08],
            ebn0_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            target_errors: 200,
            max_bits: 2_000_000,
            seed: 1,
            output: PathBuf::from("results.csv"),
            workers: 0,
            batch_frames: 8,
            min_frames: 64,
            drift_threshold: 0.1,
            probe_trials: 100_000,
            probe_lc: 1,
        }
    }
}

/// Command-line values that replace config entries.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub system: Option<System>,
    pub l: Option<usize>,
    pub ebn0_db: Option<Vec<f64>>,
    pub tco_s: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl SimConfig {
    pub fn from_toml(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text).map_err(|source| Error::Toml {
            path: path.to_owned(),
            source,
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.system {
            self.system = s;
        }
        if let Some(l) = o.l {
            self.l = l;
        }
        if let Some(e) = &o.ebn0_db {
            self.ebn0_db = e.clone();
        }
        if let Some(t) = &o.tco_s {
            self.tco_s = t.clone();
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(p) = &o.output {
            self.output = p.clone();
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.l < 8 || !self.l.is_multiple_of(4) {
            return bad("L must be at least 8 and divisible by 4");
        }
        if self.tco_s.is_empty() || self.ebn0_db.is_empty() {
            return bad("tco_s and ebn0_db must be nonempty");
        }
        if self.tco_s.iter().any(|t| t.is_nan() || *t <= 0.0) {
            return bad("coherence times must be positive");
        }
        if self.ebn0_db.iter().any(|e| e.is_nan()) {
            return bad("Eb/N0 values must be numbers");
        }
        if self.nt == 0 || self.nr == 0 || self.nt > 2 {
            return bad("Nt must be 1 or 2 and Nr at least 1");
        }
        if self.stbc == Stbc::Alamouti && (self.nt != 2 || self.k_block != 2 || !self.slots.is_multiple_of(2)) {
            return bad("Alamouti needs Nt = 2, k_block = 2 and an even K");
        }
        if self.slots == 0 || self.max_bits == 0 || self.batch_frames == 0 {
            return bad("K, max_bits and batch_frames must be positive");
        }
        if self.cp_len >= self.l {
            return bad("cp_len must be shorter than L");
        }
        Ok(())
    }

    /// Noise power per complex sample for unit symbol energy and 4 bits per symbol.
    pub fn n0(ebn0_db: f64) -> f64 {
        if ebn0_db.is_infinite() && ebn0_db > 0.0 {
            0.0
        } else {
            1.0 / (4.0 * 10f64.powf(ebn0_db / 10.0))
        }
    }

    /// Symbol SNR in dB implied by an Eb/N0 value.
    pub fn snr_db(ebn0_db: f64) -> f64 {
        ebn0_db + 10.0 * 4f64.log10()
    }
}
