//! Seeded Monte Carlo sweeps over Eb/N0 and coherence time.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::config::SimConfig;
use crate::harness::link::{FrameStats, LinkSim};

#[derive(Clone, Debug, PartialEq)]
pub struct BerPoint {
    pub system: String,
    pub l: usize,
    pub nt: usize,
    pub nr: usize,
    pub ebn0_db: f64,
    pub tco_s: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub seconds: f64,
}

impl BerPoint {
    /// Equality ignoring wall time.
    pub fn same_counts(&self, o: &Self) -> bool {
        BerPoint { seconds: 0.0, ..self.clone() } == BerPoint { seconds: 0.0, ..o.clone() }
    }
}

/// A point that could not be simulated.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFailure {
    pub ebn0_db: f64,
    pub tco_s: f64,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BerRecord {
    pub points: Vec<BerPoint>,
    pub failures: Vec<PointFailure>,
}

/// RNG of frame `frame` at sweep point `point`.
pub fn frame_rng(seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) | frame);
    rng
}

fn run_point(sim: &LinkSim, cfg: &SimConfig, point: usize, ebn0_db: f64, tco_s: f64) -> Result<BerPoint> {
    let start = Instant::now();
    let mut total = FrameStats::default();
    let mut next = 0u64;
    while next < cfg.min_frames || (total.errors < cfg.target_errors && total.bits < cfg.max_bits) {
        let batch: Vec<Result<FrameStats>> = (next..next + cfg.batch_frames as u64)
            .into_par_iter()
            .map(|f| sim.run_frame(ebn0_db, tco_s, &mut frame_rng(cfg.seed, point, f)))
            .collect();
        for st in batch {
            total += st?;
        }
        next += cfg.batch_frames as u64;
    }
    Ok(BerPoint {
        system: cfg.system.name().to_string(),
        l: cfg.l,
        nt: cfg.nt,
        nr: cfg.nr,
        ebn0_db,
        tco_s,
        bits: total.bits,
        errors: total.errors,
        ber: total.errors as f64 / total.bits as f64,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn run_grid(cfg: &SimConfig, grid: Vec<(f64, f64)>) -> Result<BerRecord> {
    let sim = LinkSim::new(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut rec = BerRecord::default();
    pool.install(|| {
        for (point, (ebn0_db, tco_s)) in grid.into_iter().enumerate() {
            match run_point(&sim, cfg, point, ebn0_db, tco_s) {
                Ok(p) => rec.points.push(p),
                Err(e) => rec.failures.push(PointFailure {
                    ebn0_db,
                    tco_s,
                    message: e.to_string(),
                }),
            }
        }
    });
    Ok(rec)
}

/// BER against Eb/N0 for each coherence time.
pub fn run_ber_sweep(cfg: &SimConfig) -> Result<BerRecord> {
    let grid = cfg
        .tco_s
        .iter()
        .flat_map(|&t| cfg.ebn0_db.iter().map(move |&e| (e, t)))
        .collect();
    run_grid(cfg, grid)
}

/// BER against coherence time for each Eb/N0.
pub fn run_coherence_sweep(cfg: &SimConfig) -> Result<BerRecord> {
    let grid = cfg
        .ebn0_db
        .iter()
        .flat_map(|&e| cfg.tco_s.iter().map(move |&t| (e, t)))
        .collect();
    run_grid(cfg, grid)
}
