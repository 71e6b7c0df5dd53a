//! OULP transmitter and receiver for one or more antenna streams.
//!
//! Slot `k` carries `L/2` complex symbols. Even slots load the lower half of
//! the `L`-point vector `D_k`, odd slots the upper half.

use nalgebra::{DMatrix, DVector};

use crate::channel::ChannelRealization;
use crate::dsp::{j_pow, padded_fft, Dft, C64};
use crate::error::{Error, Result};
use crate::prototype::{InterferenceTable, Parity, PrototypeFilter};

const MIN_GAIN: f64 = 1e-6;

/// Range of `D`/`Y` indices carrying the desired symbols of a slot.
pub fn desired_half(parity: Parity, l: usize) -> std::ops::Range<usize> {
    match parity {
        Parity::Even => 0..l / 2,
        Parity::Odd => l / 2..l,
    }
}

/// Places `q / v_{0,n}` on the slot's half and zeros elsewhere.
pub fn oulp_load(q: &[C64], k: i64, table: &InterferenceTable) -> Result<Vec<C64>> {
    let l = table.l();
    assert_eq!(q.len(), l / 2, "slot needs L/2 symbols");
    let parity = Parity::of(k);
    let v = table.v(parity, 0).expect("table retains κ = 0");
    let mut d = vec![C64::new(0.0, 0.0); l];
    for (qn, n) in q.iter().zip(desired_half(parity, l)) {
        let g = v[n];
        if g.norm() < MIN_GAIN {
            return Err(Error::GainTooSmall {
                index: n,
                magnitude: g.norm(),
            });
        }
        d[n] = qn / g;
    }
    Ok(d)
}

/// Folds the Lc−1 wrap entries of the discarded half onto the head of the kept half.
pub fn purify(rt: &[C64], parity: Parity, lc: usize) -> Result<Vec<C64>> {
    let h = rt.len() / 2;
    if lc == 0 || lc > h {
        return Err(Error::ChannelTooLong { lc, limit: h });
    }
    let (keep, wrap) = match parity {
        Parity::Even => (&rt[..h], &rt[h..]),
        Parity::Odd => (&rt[h..], &rt[..h]),
    };
    let mut x = keep.to_vec();
    for n in 0..lc - 1 {
        x[n] += wrap[n];
    }
    Ok(x)
}

/// Dense purifier `G^{Lc}` of size `L/2 × L`.
pub fn purifier_matrix(parity: Parity, l: usize, lc: usize) -> DMatrix<f64> {
    let h = l / 2;
    let (keep, wrap) = match parity {
        Parity::Even => (0, h),
        Parity::Odd => (h, 0),
    };
    DMatrix::from_fn(h, l, |r, c| {
        let hit = c == keep + r || (r + 1 < lc && c == wrap + r);
        if hit {
            1.0
        } else {
            0.0
        }
    })
}

/// Dense interference selector `Π`: identity on the discarded half.
pub fn selector_matrix(parity: Parity, l: usize) -> DMatrix<f64> {
    let keep = desired_half(parity, l);
    DMatrix::from_fn(l, l, |r, c| {
        if r == c && !keep.contains(&r) {
            1.0
        } else {
            0.0
        }
    })
}

/// Per-subcarrier MMSE estimate `(H†H + N0 I)⁻¹ H† r` for every tx stream.
///
/// `h[j][i][l]` is the channel from tx `i` to rx `j`, `r[j][l]` the rx vectors.
pub fn mmse_estimate(r: &[Vec<C64>], h: &[Vec<Vec<C64>>], n0: f64) -> Result<Vec<Vec<C64>>> {
    let nr = r.len();
    let nt = h[0].len();
    let l = r[0].len();
    let mut out = vec![vec![C64::new(0.0, 0.0); l]; nt];
    if nt == 1 {
        for s in 0..l {
            let mut num = C64::new(0.0, 0.0);
            let mut den = n0;
            for j in 0..nr {
                num += h[j][0][s].conj() * r[j][s];
                den += h[j][0][s].norm_sqr();
            }
            if den == 0.0 {
                return Err(Error::ZfSingular(s));
            }
            out[0][s] = num / den;
        }
        return Ok(out);
    }
    for s in 0..l {
        let hm = DMatrix::from_fn(nr, nt, |j, i| h[j][i][s]);
        let rv = DVector::from_fn(nr, |j, _| r[j][s]);
        let ha = hm.adjoint();
        let a = &ha * &hm + DMatrix::<C64>::identity(nt, nt) * C64::new(n0, 0.0);
        let y = a
            .lu()
            .solve(&(&ha * rv))
            .filter(|y| y.iter().all(|v| v.is_finite()))
            .ok_or(Error::ZfSingular(s))?;
        for i in 0..nt {
            out[i][s] = y[i];
        }
    }
    Ok(out)
}

/// `r̃^j = r̄^j − Σ_i H^{ji} F Y^In_i`.
pub fn subtract_interference(
    r: &[Vec<C64>],
    h: &[Vec<Vec<C64>>],
    y_in: &[Vec<C64>],
    dft: &Dft,
) -> Vec<Vec<C64>> {
    let spectra: Vec<Vec<C64>> = y_in
        .iter()
        .map(|y| {
            let mut b = y.clone();
            dft.unitary_forward(&mut b);
            b
        })
        .collect();
    r.iter()
        .enumerate()
        .map(|(j, rj)| {
            let mut out = rj.clone();
            for (i, sp) in spectra.iter().enumerate() {
                for ((o, hv), s) in out.iter_mut().zip(&h[j][i]).zip(sp) {
                    *o -= hv * s;
                }
            }
            out
        })
        .collect()
}

/// MMSE interference eliminator for `Nr` receive and `Nt` transmit streams.
pub fn interference_eliminate_mimo(
    r: &[Vec<C64>],
    h: &[Vec<Vec<C64>>],
    n0: f64,
    parity: Parity,
    dft: &Dft,
) -> Result<Vec<Vec<C64>>> {
    let l = dft.len();
    let keep = desired_half(parity, l);
    let mut y_hat = mmse_estimate(r, h, n0)?;
    for y in y_hat.iter_mut() {
        dft.unitary_inverse(y);
        for n in keep.clone() {
            y[n] = C64::new(0.0, 0.0);
        }
    }
    Ok(subtract_interference(r, h, &y_hat, dft))
}

/// Single-antenna interference eliminator.
pub fn interference_eliminate(r: &[C64], h: &[C64], n0: f64, parity: Parity) -> Result<Vec<C64>> {
    let dft = Dft::new(r.len());
    let out = interference_eliminate_mimo(&[r.to_vec()], &[vec![h.to_vec()]], n0, parity, &dft)?;
    Ok(out.into_iter().next().unwrap())
}

/// `χ = F_{L/2} x` and the `L/2`-point channel response.
pub fn final_transform(x: &[C64], taps: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let mut chi = x.to_vec();
    Dft::new(x.len()).unitary_forward(&mut chi);
    (chi, padded_fft(taps, x.len()))
}

/// Receiver outputs of one frame.
#[derive(Clone, Debug)]
pub struct RxFrame {
    /// `chi[j][k][η]`.
    pub chi: Vec<Vec<Vec<C64>>>,
    /// `hdiag[k][j][i][η]`, the `L/2`-point responses used for slot `k`.
    pub hdiag: Vec<Vec<Vec<Vec<C64>>>>,
}

/// Filter bank, interference table and transform plans shared by tx and rx.
#[derive(Clone, Debug)]
pub struct OulpModem {
    filter: PrototypeFilter,
    table: InterferenceTable,
    full: Dft,
    half: Dft,
    tx_scale: f64,
}

impl OulpModem {
    pub fn new(filter: PrototypeFilter, delta: usize) -> Result<Self> {
        let l = filter.l();
        let table = InterferenceTable::new(&filter, delta, &[-1, 0, 1]);
        for parity in [Parity::Even, Parity::Odd] {
            let v = table.v(parity, 0).unwrap();
            for n in desired_half(parity, l) {
                if v[n].norm() < MIN_GAIN {
                    return Err(Error::GainTooSmall {
                        index: n,
                        magnitude: v[n].norm(),
                    });
                }
            }
        }
        let mut m = Self {
            filter,
            table,
            full: Dft::new(l),
            half: Dft::new(l / 2),
            tx_scale: 1.0,
        };
        m.tx_scale = 1.0 / m.radiated_energy_per_symbol().sqrt();
        Ok(m)
    }

    pub fn l(&self) -> usize {
        self.filter.l()
    }

    pub fn filter(&self) -> &PrototypeFilter {
        &self.filter
    }

    pub fn table(&self) -> &InterferenceTable {
        &self.table
    }

    /// Amplitude applied by [`transmit`](Self::transmit) so that one symbol of
    /// unit energy radiates unit energy.
    pub fn tx_scale(&self) -> f64 {
        self.tx_scale
    }

    /// Expected radiated energy per unit-energy symbol before scaling, from
    /// the untruncated self-term gain and the pre-equalizer.
    pub fn radiated_energy_per_symbol(&self) -> f64 {
        let l = self.l();
        let mut e = 0.0;
        for parity in [Parity::Even, Parity::Odd] {
            let v = self.table.v(parity, 0).unwrap();
            let vf = self.table.v_full(parity);
            e += desired_half(parity, l)
                .map(|n| vf[n].re / v[n].norm_sqr())
                .sum::<f64>();
        }
        e / l as f64
    }

    pub fn signal_len(&self, slots: usize) -> usize {
        slots.saturating_sub(1) * self.l() / 2 + self.filter.len()
    }

    /// Channel block (of `L/2` samples) under the filter centre of slot `k`.
    pub fn center_block(&self, k: usize) -> usize {
        k + self.filter.half_len() / (self.l() / 2)
    }

    /// `s(m) = Σ_k Σ_l d_{k,l} f_{k,l}(m)` via one inverse FFT per slot.
    pub fn synthesize(&self, d: &[Vec<C64>]) -> Vec<C64> {
        let l = self.l();
        let half = self.filter.half_len();
        let mut s = vec![C64::new(0.0, 0.0); self.signal_len(d.len())];
        let mut g = vec![C64::new(0.0, 0.0); l];
        for (k, dk) in d.iter().enumerate() {
            for (i, (gi, &x)) in g.iter_mut().zip(dk).enumerate() {
                *gi = x * j_pow(i as i64);
            }
            self.full.inverse(&mut g);
            let ph = j_pow(k as i64);
            let start = k * l / 2;
            for (c, &f) in self.filter.coeffs().iter().enumerate() {
                let t = start + c;
                let m = (t + l * half - half) % l;
                s[t] += ph * f * g[m];
            }
        }
        s
    }

    /// Direct evaluation of the synthesis sum.
    pub fn synthesize_direct(&self, d: &[Vec<C64>]) -> Vec<C64> {
        let l = self.l() as i64;
        let half = self.filter.half_len() as i64;
        let mut s = vec![C64::new(0.0, 0.0); self.signal_len(d.len())];
        for (t, st) in s.iter_mut().enumerate() {
            let m = t as i64 - half;
            for (k, dk) in d.iter().enumerate() {
                let f = self.filter.at(m - k as i64 * l / 2);
                if f == 0.0 {
                    continue;
                }
                for (li, &x) in dk.iter().enumerate() {
                    let li = li as i64;
                    let ph = 2.0 * std::f64::consts::PI * (li * m).rem_euclid(l) as f64 / l as f64;
                    *st += x * f * C64::from_polar(1.0, ph) * j_pow(li + k as i64);
                }
            }
        }
        s
    }

    /// Matched-filter outputs `y_{k',l'} = Σ_m r(m) f*_{k',l'}(m)` for `slots` slots.
    pub fn analyze(&self, r: &[C64], slots: usize) -> Vec<Vec<C64>> {
        let l = self.l();
        let half = self.filter.half_len();
        (0..slots)
            .map(|k| {
                let mut acc = vec![C64::new(0.0, 0.0); l];
                let start = k * l / 2;
                for (c, &f) in self.filter.coeffs().iter().enumerate() {
                    let t = start + c;
                    if t >= r.len() {
                        break;
                    }
                    acc[(t + l * half - half) % l] += r[t] * f;
                }
                self.full.forward(&mut acc);
                for (i, a) in acc.iter_mut().enumerate() {
                    *a *= j_pow(-((i + k) as i64));
                }
                acc
            })
            .collect()
    }

    /// Loads, pre-equalizes and synthesizes one stream of `q` vectors
    /// (`L/2` symbols per slot), scaled by [`tx_scale`](Self::tx_scale).
    pub fn transmit(&self, q: &[Vec<C64>]) -> Result<Vec<C64>> {
        let d = q
            .iter()
            .enumerate()
            .map(|(k, qk)| {
                let mut dk = oulp_load(qk, k as i64, &self.table)?;
                self.full.unitary_forward(&mut dk);
                Ok(dk)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = self.synthesize(&d);
        s.iter_mut().for_each(|x| *x *= self.tx_scale);
        Ok(s)
    }

    /// Symbol vector `q = F†_{L/2} Q` for frequency-domain symbols `Q`.
    pub fn precode(&self, big_q: &[C64]) -> Vec<C64> {
        let mut q = big_q.to_vec();
        self.half.unitary_inverse(&mut q);
        q
    }

    /// Full receiver: analysis, interference elimination, purification and
    /// the final `L/2`-point transform, using the taps under each slot's
    /// filter centre.
    pub fn receive(&self, r: &[Vec<C64>], ch: &ChannelRealization, n0: f64, slots: usize) -> Result<RxFrame> {
        let l = self.l();
        let g = self.tx_scale;
        let n0_rx = n0 / (g * g);
        let mut bank: Vec<Vec<Vec<C64>>> = r.iter().map(|rj| self.analyze(rj, slots)).collect();
        for rj in bank.iter_mut() {
            for y in rj.iter_mut() {
                y.iter_mut().for_each(|x| *x /= g);
            }
        }
        let mut chi = vec![Vec::with_capacity(slots); ch.nr];
        let mut hdiag = Vec::with_capacity(slots);
        for k in 0..slots {
            let parity = Parity::of(k as i64);
            let taps = ch.block(self.center_block(k));
            let hl: Vec<Vec<Vec<C64>>> = taps
                .iter()
                .map(|row| row.iter().map(|t| padded_fft(t, l)).collect())
                .collect();
            let rk: Vec<Vec<C64>> = bank.iter().map(|rj| rj[k].clone()).collect();
            let rt = interference_eliminate_mimo(&rk, &hl, n0_rx, parity, &self.full)?;
            for (j, mut x) in rt.into_iter().enumerate() {
                self.full.unitary_inverse(&mut x);
                let mut p = purify(&x, parity, ch.lc)?;
                self.half.unitary_forward(&mut p);
                chi[j].push(p);
            }
            hdiag.push(
                taps.iter()
                    .map(|row| row.iter().map(|t| padded_fft(t, l / 2)).collect())
                    .collect(),
            );
        }
        Ok(RxFrame { chi, hdiag })
    }
}
