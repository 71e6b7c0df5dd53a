//! Experiment orchestration: configuration, Monte Carlo sweeps, the noise
//! correlation probe and CSV output.

pub mod config;
pub mod io;
pub mod link;
pub mod probe;
pub mod sweep;

pub use config::{Overrides, SimConfig, Stbc, System};
pub use link::LinkSim;
pub use probe::{noise_correlation_probe, ProbeResult};
pub use sweep::{run_ber_sweep, run_coherence_sweep, BerPoint, BerRecord};
