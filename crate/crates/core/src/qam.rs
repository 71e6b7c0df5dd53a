//! Gray-mapped 16-QAM with unit average energy.

use crate::dsp::C64;

const LEVEL: [f64; 4] = [-3.0, -1.0, 3.0, 1.0];

fn norm() -> f64 {
    10f64.sqrt()
}

/// Gray level for a bit pair: 00 → -3, 01 → -1, 11 → +1, 10 → +3.
fn level(b0: u8, b1: u8) -> f64 {
    LEVEL[((b0 << 1) | b1) as usize]
}

/// Maps one nibble `b0 b1 b2 b3` (bit 3 of `idx` is `b0`) to its point.
pub fn point(idx: u8) -> C64 {
    let b = |i: u8| (idx >> (3 - i)) & 1;
    C64::new(level(b(0), b(1)), level(b(2), b(3))) / norm()
}

/// All 16 points, indexed by nibble.
pub fn constellation() -> [C64; 16] {
    std::array::from_fn(|i| point(i as u8))
}

/// Maps bits (one per byte, value 0 or 1) four at a time.
pub fn qam16_map(bits: &[u8]) -> Vec<C64> {
    assert!(bits.len().is_multiple_of(4), "bit count must be a multiple of 4");
    bits.chunks_exact(4)
        .map(|c| point((c[0] << 3) | (c[1] << 2) | (c[2] << 1) | c[3]))
        .collect()
}

fn axis_bits(x: f64) -> (u8, u8) {
    let t = 2.0 / norm();
    let b0 = u8::from(x > 0.0);
    let b1 = u8::from(x.abs() < t);
    (b0, b1)
}

/// Hard decision nibble of the nearest point.
pub fn decide(s: C64) -> u8 {
    let (a, b) = axis_bits(s.re);
    let (c, d) = axis_bits(s.im);
    (a << 3) | (b << 2) | (c << 1) | d
}

/// Hard decision on each symbol, four bits out per symbol.
pub fn qam16_demap(symbols: &[C64]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|&s| {
            let n = decide(s);
            [(n >> 3) & 1, (n >> 2) & 1, (n >> 1) & 1, n & 1]
        })
        .collect()
}

/// Closed-form bit error rate of Gray 16-QAM over AWGN at linear `Eb/N0`.
pub fn ber_awgn(ebn0: f64) -> f64 {
    let q = |x: f64| 0.5 * statrs::function::erf::erfc(x / 2f64.sqrt());
    let x = (4.0 * ebn0 / 5.0).sqrt();
    (3.0 * q(x) + 2.0 * q(3.0 * x) - q(5.0 * x)) / 4.0
}
