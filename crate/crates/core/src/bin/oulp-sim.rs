use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oulp::harness::io::{append_results, emit_plot_data, write_probe, write_xi_table, PlotAxis};
use oulp::harness::{noise_correlation_probe, run_ber_sweep, run_coherence_sweep, BerRecord, Overrides, SimConfig, System};
use oulp::prototype::design_iota;

#[derive(Parser)]
#[command(name = "oulp-sim", about = "FBMC/OULP and CP-OFDM link simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// BER against Eb/N0, one curve per coherence time.
    BerSweep(Common),
    /// BER against coherence time, one curve per Eb/N0.
    CoherenceSweep(Common),
    /// Dump ξ for κ, ℓ in [-4, 4] and both parities.
    XiTable(Common),
    /// Output noise correlation across slots.
    NoiseProbe(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<System>,
    #[arg(long = "L")]
    l: Option<usize>,
    /// Comma-separated list in dB.
    #[arg(long, value_delimiter = ',')]
    ebn0: Option<Vec<f64>>,
    /// Comma-separated list in seconds.
    #[arg(long, value_delimiter = ',')]
    tco: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> oulp::Result<SimConfig> {
        let mut cfg = match &self.config {
            Some(p) => SimConfig::load(p)?,
            None => SimConfig::default(),
        };
        cfg.apply(&Overrides {
            system: self.system,
            l: self.l,
            ebn0_db: self.ebn0.clone(),
            tco_s: self.tco.clone(),
            seed: self.seed,
            output: self.out.clone(),
        });
        cfg.validate()?;
        Ok(cfg)
    }
}

fn finish(rec: &BerRecord, cfg: &SimConfig, axis: PlotAxis) -> oulp::Result<()> {
    append_results(rec, &cfg.output)?;
    emit_plot_data(rec, axis, &cfg.output.with_extension("plot.csv"))?;
    for p in &rec.points {
        eprintln!(
            "{} L={} {}x{} Eb/N0={} dB (SNR {:.2} dB) Tco={} s: {}/{} ber={:.3e} {:.1}s",
            p.system,
            p.l,
            p.nt,
            p.nr,
            p.ebn0_db,
            SimConfig::snr_db(p.ebn0_db),
            p.tco_s,
            p.errors,
            p.bits,
            p.ber,
            p.seconds
        );
    }
    for f in &rec.failures {
        eprintln!("failed Eb/N0={} Tco={}: {}", f.ebn0_db, f.tco_s, f.message);
    }
    if rec.failures.is_empty() {
        Ok(())
    } else {
        Err(oulp::Error::Config(format!("{} point(s) failed", rec.failures.len())))
    }
}

fn run(cli: Cli) -> oulp::Result<()> {
    match cli.cmd {
        Cmd::BerSweep(c) => {
            let cfg = c.config()?;
            finish(&run_ber_sweep(&cfg)?, &cfg, PlotAxis::EbN0)
        }
        Cmd::CoherenceSweep(c) => {
            let cfg = c.config()?;
            finish(&run_coherence_sweep(&cfg)?, &cfg, PlotAxis::Coherence)
        }
        Cmd::XiTable(c) => {
            let cfg = c.config()?;
            write_xi_table(&design_iota(cfg.l, cfg.overlap)?, 4, &cfg.output)
        }
        Cmd::NoiseProbe(c) => {
            let cfg = c.config()?;
            let f = design_iota(cfg.l, cfg.overlap)?;
            let r = noise_correlation_probe(&f, cfg.probe_lc, cfg.probe_trials, cfg.seed)?;
            write_probe(&r, &cfg.output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
