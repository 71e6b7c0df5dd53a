//! IOTA prototype filter, interference coefficients ξ, circulant Z and gain vectors v.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::dsp::{j_pow, Dft, C64};
use crate::error::{Error, Result};

/// Largest real-orthogonality residual a designed filter may have.
pub const RESIDUAL_BOUND: f64 = 1e-8;

/// Overlap used when none is given. Twelve periods is the shortest
/// integer-centred support that keeps the residual under [`RESIDUAL_BOUND`].
pub const DEFAULT_OVERLAP: usize = 12;

/// Sample period of the reference system, 100 ns.
pub const DEFAULT_SAMPLE_PERIOD: f64 = 100e-9;

/// Which half of the lattice a slot index falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn index(self) -> i64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Real, even-symmetric prototype filter on the (L/2, 1/L) lattice.
///
/// Coefficients cover `m = -overlap*L/2 ..= overlap*L/2`.
#[derive(Clone, Debug)]
pub struct PrototypeFilter {
    coeffs: Vec<f64>,
    l: usize,
    overlap: usize,
    sample_period: f64,
}

impl PrototypeFilter {
    /// Wraps arbitrary coefficients. The sequence must have odd length and be
    /// even-symmetric about its middle sample; it is scaled to unit energy.
    pub fn from_coeffs(coeffs: Vec<f64>, l: usize, sample_period: f64) -> Result<Self> {
        check_l(l)?;
        let n = coeffs.len();
        if n.is_multiple_of(2) || (0..n).any(|i| (coeffs[i] - coeffs[n - 1 - i]).abs() > 1e-12) {
            return Err(Error::NotSymmetric);
        }
        let e: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        let coeffs = coeffs.into_iter().map(|c| c / e).collect();
        Ok(Self {
            coeffs,
            l,
            overlap: (n - 1).div_ceil(l),
            sample_period,
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    /// Index of `m = 0` in [`coeffs`](Self::coeffs).
    pub fn half_len(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `f(m)`, zero outside the support.
    pub fn at(&self, m: i64) -> f64 {
        let i = m + self.half_len() as i64;
        if i < 0 || i as usize >= self.coeffs.len() {
            0.0
        } else {
            self.coeffs[i as usize]
        }
    }
}

fn check_l(l: usize) -> Result<()> {
    if l < 8 || !l.is_multiple_of(4) {
        return Err(Error::BadSubchannelCount(l));
    }
    Ok(())
}

/// Builds the IOTA filter without enforcing the residual bound.
///
/// A Gaussian on a long circle is made orthogonal by normalizing every
/// polyphase pair `(r, r + L/2)` to be power complementary, which is the
/// time and frequency orthogonalization done in one step. The result is then
/// cut to the requested support.
pub fn build_iota(l: usize, overlap: usize) -> Result<PrototypeFilter> {
    check_l(l)?;
    if overlap < 3 {
        return Err(Error::OverlapTooShort { overlap });
    }
    let periods = (4 * overlap).max(32);
    let nb = periods * l;
    let g: Vec<f64> = (0..nb)
        .map(|i| {
            let m = if i < nb / 2 { i as f64 } else { i as f64 - nb as f64 };
            (-2.0 * PI * (m / l as f64).powi(2)).exp()
        })
        .collect();
    let dft = Dft::new(periods);
    let mut circ = vec![0.0; nb];
    for r in 0..l / 2 {
        let mut p: Vec<C64> = (0..periods).map(|c| g[r + c * l].into()).collect();
        let mut q: Vec<C64> = (0..periods).map(|c| g[r + l / 2 + c * l].into()).collect();
        dft.forward(&mut p);
        dft.forward(&mut q);
        for (a, b) in p.iter_mut().zip(q.iter_mut()) {
            let s = (a.norm_sqr() + b.norm_sqr()).sqrt();
            *a /= s;
            *b /= s;
        }
        dft.inverse(&mut p);
        dft.inverse(&mut q);
        for c in 0..periods {
            circ[r + c * l] = p[c].re;
            circ[r + l / 2 + c * l] = q[c].re;
        }
    }
    let half = overlap * l / 2;
    let mut coeffs: Vec<f64> = (0..=2 * half)
        .map(|i| circ[(i as i64 - half as i64).rem_euclid(nb as i64) as usize])
        .collect();
    let n = coeffs.len();
    for i in 0..half {
        let avg = 0.5 * (coeffs[i] + coeffs[n - 1 - i]);
        coeffs[i] = avg;
        coeffs[n - 1 - i] = avg;
    }
    let e = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    coeffs.iter_mut().for_each(|c| *c /= e);
    Ok(PrototypeFilter {
        coeffs,
        l,
        overlap,
        sample_period: DEFAULT_SAMPLE_PERIOD,
    })
}

/// Designs the IOTA filter and checks it against [`RESIDUAL_BOUND`].
pub fn design_iota(l: usize, overlap: usize) -> Result<PrototypeFilter> {
    let f = build_iota(l, overlap)?;
    let achieved = orthogonality_residual(&f);
    if achieved > RESIDUAL_BOUND {
        return Err(Error::OverlapTooSmall {
            overlap,
            achieved,
            bound: RESIDUAL_BOUND,
        });
    }
    Ok(f)
}

/// Largest deviation of `Re<f_{k,l}, f_{k',l'}>` from the Kronecker delta over
/// every lattice offset where the shifted filters overlap.
pub fn orthogonality_residual(filter: &PrototypeFilter) -> f64 {
    let reach = (2 * filter.len()).div_ceil(filter.l()) as i64;
    let mut worst: f64 = 0.0;
    for kappa in -reach..=reach {
        let row = xi_row(filter, kappa, Parity::Even);
        for (ell, z) in row.iter().enumerate() {
            let target = if kappa == 0 && ell == 0 { 1.0 } else { 0.0 };
            worst = worst.max((z.re - target).abs());
        }
    }
    worst
}

fn lag_product(filter: &PrototypeFilter, kappa: i64) -> impl Iterator<Item = (i64, f64)> + '_ {
    let shift = kappa * filter.l() as i64 / 2;
    let h = filter.half_len() as i64;
    (-h..=h).filter_map(move |m| {
        let p = filter.at(m + shift) * filter.at(m);
        (p != 0.0).then_some((m, p))
    })
}

fn xi_phase(kappa: i64, ell: i64, parity: Parity) -> C64 {
    let p = j_pow(-(kappa + ell));
    if parity == Parity::Odd && ell.rem_euclid(2) == 1 {
        -p
    } else {
        p
    }
}

/// `ξ^{k'}_{κ,ℓ} = Σ_m f(m + κL/2) f(m) e^{-j2πℓm/L} · e^{-jπℓk'} · e^{-jπ(κ+ℓ)/2}`.
pub fn xi_coefficient(filter: &PrototypeFilter, kappa: i64, ell: i64, parity: Parity) -> C64 {
    let l = filter.l() as i64;
    let sum: C64 = lag_product(filter, kappa)
        .map(|(m, p)| {
            let ph = -2.0 * PI * (ell * m).rem_euclid(l) as f64 / l as f64;
            C64::from_polar(p, ph)
        })
        .sum();
    sum * xi_phase(kappa, ell, parity)
}

/// All `ξ^{k'}_{κ,ℓ}` for `ℓ = 0..L`, computed with one FFT.
pub fn xi_row(filter: &PrototypeFilter, kappa: i64, parity: Parity) -> Vec<C64> {
    let l = filter.l();
    let mut buf = vec![C64::new(0.0, 0.0); l];
    for (m, p) in lag_product(filter, kappa) {
        buf[m.rem_euclid(l as i64) as usize] += p;
    }
    Dft::new(l).forward(&mut buf);
    for (ell, z) in buf.iter_mut().enumerate() {
        *z *= xi_phase(kappa, ell as i64, parity);
    }
    buf
}

/// `v̄ = Σ_{|ℓ|≤Δ} ξ_{κ,ℓ} e^{j2πℓn/L}`, the unscaled inverse DFT of the padded ξ column.
pub fn gain_vector_v(filter: &PrototypeFilter, kappa: i64, parity: Parity, delta: usize) -> Vec<C64> {
    let row = xi_row(filter, kappa, parity);
    let mut col = truncate_column(&row, delta);
    Dft::new(filter.l()).inverse(&mut col);
    col
}

/// Same as [`gain_vector_v`] with every ℓ kept.
pub fn gain_vector_full(filter: &PrototypeFilter, kappa: i64, parity: Parity) -> Vec<C64> {
    let mut row = xi_row(filter, kappa, parity);
    Dft::new(filter.l()).inverse(&mut row);
    row
}

fn truncate_column(row: &[C64], delta: usize) -> Vec<C64> {
    let l = row.len();
    let mut col = vec![C64::new(0.0, 0.0); l];
    if 2 * delta + 1 >= l {
        col.copy_from_slice(row);
        return col;
    }
    for s in -(delta as i64)..=delta as i64 {
        let i = s.rem_euclid(l as i64) as usize;
        col[i] = row[i];
    }
    col
}

/// ξ rows and gain vectors for the retained time offsets of both parities.
#[derive(Clone, Debug)]
pub struct InterferenceTable {
    l: usize,
    delta: usize,
    kappas: Vec<i64>,
    rows: HashMap<(Parity, i64), Vec<C64>>,
    v: HashMap<(Parity, i64), Vec<C64>>,
    v_full: HashMap<Parity, Vec<C64>>,
}

impl InterferenceTable {
    pub fn new(filter: &PrototypeFilter, delta: usize, kappas: &[i64]) -> Self {
        let l = filter.l();
        let dft = Dft::new(l);
        let mut rows = HashMap::new();
        let mut v = HashMap::new();
        let mut v_full = HashMap::new();
        for parity in [Parity::Even, Parity::Odd] {
            for &kappa in kappas {
                let row = xi_row(filter, kappa, parity);
                let mut col = truncate_column(&row, delta);
                dft.inverse(&mut col);
                v.insert((parity, kappa), col);
                if kappa == 0 {
                    let mut full = row.clone();
                    dft.inverse(&mut full);
                    v_full.insert(parity, full);
                }
                rows.insert((parity, kappa), row);
            }
            if !kappas.contains(&0) {
                v_full.insert(parity, gain_vector_full(filter, 0, parity));
            }
        }
        Self {
            l,
            delta,
            kappas: kappas.to_vec(),
            rows,
            v,
            v_full,
        }
    }

    /// Table with Δ = 1 and κ ∈ {-1, 0, 1}.
    pub fn standard(filter: &PrototypeFilter) -> Self {
        Self::new(filter, 1, &[-1, 0, 1])
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn kappas(&self) -> &[i64] {
        &self.kappas
    }

    /// Untruncated ξ value; `None` when κ is not retained.
    pub fn xi(&self, parity: Parity, kappa: i64, ell: i64) -> Option<C64> {
        self.rows
            .get(&(parity, kappa))
            .map(|r| r[ell.rem_euclid(self.l as i64) as usize])
    }

    /// Padded column `[ξ_0 … ξ_Δ, 0 … 0, ξ_{-Δ} … ξ_{-1}]`.
    pub fn column(&self, parity: Parity, kappa: i64) -> Option<Vec<C64>> {
        self.rows
            .get(&(parity, kappa))
            .map(|r| truncate_column(r, self.delta))
    }

    pub fn v(&self, parity: Parity, kappa: i64) -> Option<&[C64]> {
        self.v.get(&(parity, kappa)).map(Vec::as_slice)
    }

    /// Self-term gain with all ℓ retained.
    pub fn v_full(&self, parity: Parity) -> &[C64] {
        &self.v_full[&parity]
    }

    /// Circulant `Z` whose first column is [`column`](Self::column).
    pub fn interference_matrix(&self, parity: Parity, kappa: i64) -> Option<DMatrix<C64>> {
        let col = self.column(parity, kappa)?;
        let l = self.l;
        Some(DMatrix::from_fn(l, l, |a, b| col[(a + l - b) % l]))
    }
}
