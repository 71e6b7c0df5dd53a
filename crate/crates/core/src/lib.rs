//! Link-level simulator for FBMC with offset upper/lower polyphase loading (OULP).
//!
//! The crate builds an IOTA prototype filter, runs the OULP transmitter and
//! receiver (interference eliminator plus purifier), a CP-OFDM reference
//! system, Alamouti detection, and a seeded Monte Carlo harness.

pub mod channel;
pub mod dsp;
pub mod error;
pub mod harness;
pub mod mimo;
pub mod modem;
pub mod ofdm;
pub mod prototype;
pub mod qam;

pub use dsp::C64;
pub use error::{Error, Result};
