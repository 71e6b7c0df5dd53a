//! CSV persistence of sweep results, plot series, ξ tables and probe output.

use std::fs::OpenOptions;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::probe::ProbeResult;
use crate::harness::sweep::{BerPoint, BerRecord};
use crate::prototype::{xi_coefficient, Parity, PrototypeFilter};

pub const HEADER: [&str; 10] = ["system", "L", "Nt", "Nr", "ebn0_db", "tco_s", "bits", "errors", "ber", "seconds"];

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_owned(),
        source,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn row(p: &BerPoint) -> [String; 10] {
    [
        p.system.clone(),
        p.l.to_string(),
        p.nt.to_string(),
        p.nr.to_string(),
        p.ebn0_db.to_string(),
        p.tco_s.to_string(),
        p.bits.to_string(),
        p.errors.to_string(),
        p.ber.to_string(),
        p.seconds.to_string(),
    ]
}

fn write_rows(record: &BerRecord, path: &Path, append: bool) -> Result<()> {
    let fresh = !append || std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(append)
        .truncate(!append)
        .open(path)
        .map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record(HEADER).map_err(csv_err(path))?;
    }
    for p in &record.points {
        w.write_record(row(p)).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes a fresh CSV, replacing any existing file.
pub fn persist_results(record: &BerRecord, path: &Path) -> Result<()> {
    write_rows(record, path, false)
}

/// Appends rows, writing the header only when the file is new or empty.
pub fn append_results(record: &BerRecord, path: &Path) -> Result<()> {
    write_rows(record, path, true)
}

pub fn read_results(path: &Path) -> Result<BerRecord> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let bad = |m: String| Error::Config(format!("{}: {m}", path.display()));
    let mut rec = BerRecord::default();
    for line in r.records() {
        let line = line.map_err(csv_err(path))?;
        if line.len() != HEADER.len() {
            return Err(bad(format!("expected {} columns", HEADER.len())));
        }
        let f = |i: usize| line[i].parse::<f64>().map_err(|e| bad(format!("{}: {e}", HEADER[i])));
        let u = |i: usize| line[i].parse::<u64>().map_err(|e| bad(format!("{}: {e}", HEADER[i])));
        rec.points.push(BerPoint {
            system: line[0].to_string(),
            l: u(1)? as usize,
            nt: u(2)? as usize,
            nr: u(3)? as usize,
            ebn0_db: f(4)?,
            tco_s: f(5)?,
            bits: u(6)?,
            errors: u(7)?,
            ber: f(8)?,
            seconds: f(9)?,
        });
    }
    Ok(rec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotAxis {
    EbN0,
    Coherence,
}

/// Long-format series `curve,x,ber`, one curve per fixed value of the other axis.
pub fn emit_plot_data(record: &BerRecord, axis: PlotAxis, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["curve", "x", "ber"]).map_err(csv_err(path))?;
    for p in &record.points {
        let (fixed, x) = match axis {
            PlotAxis::EbN0 => (format!("tco={}", p.tco_s), p.ebn0_db),
            PlotAxis::Coherence => (format!("ebn0={}", p.ebn0_db), p.tco_s),
        };
        let curve = format!("{} L={} {}x{} {}", p.system, p.l, p.nt, p.nr, fixed);
        w.write_record([curve, x.to_string(), p.ber.to_string()])
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// ξ for `κ, ℓ ∈ [-radius, radius]` and both parities, columns `κ,ℓ,parity,re,im`.
pub fn write_xi_table(filter: &PrototypeFilter, radius: i64, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["κ", "ℓ", "parity", "re", "im"]).map_err(csv_err(path))?;
    for parity in [Parity::Even, Parity::Odd] {
        for kappa in -radius..=radius {
            for ell in -radius..=radius {
                let z = xi_coefficient(filter, kappa, ell, parity);
                w.write_record([
                    kappa.to_string(),
                    ell.to_string(),
                    parity.name().to_string(),
                    z.re.to_string(),
                    z.im.to_string(),
                ])
                .map_err(csv_err(path))?;
            }
        }
    }
    w.flush().map_err(io_err(path))
}

pub fn write_probe(result: &ProbeResult, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["lag", "receiver_empirical", "receiver_analytic", "same_half_empirical", "same_half_analytic"])
        .map_err(csv_err(path))?;
    for k in 0..result.receiver_empirical.len() {
        w.write_record([
            k.to_string(),
            result.receiver_empirical[k].to_string(),
            result.receiver_analytic[k].to_string(),
            result.same_half_empirical[k].to_string(),
            result.same_half_analytic[k].to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}
