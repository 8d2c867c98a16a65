//! Channel ensemble, power allocations, and reproducible sampling.
//!
//! Every channel entry is circularly symmetric complex Gaussian with
//! variance `sigma^2`: real and imaginary parts are independent
//! `N(0, sigma^2 / 2)`, so `|h_k|^2` is exponential with mean `sigma^2`.
//!
//! Draws are produced in fixed-size chunks. Chunk `c` of a stream is
//! generated by a ChaCha8 generator keyed from `(seed, side)` and positioned
//! on stream `c`, so the output depends only on the inputs and never on how
//! many worker threads produced it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Rows generated per independent RNG stream.
pub const CHUNK_ROWS: usize = 4096;

/// The MISOSE ensemble: `n_t` transmit antennas, legitimate scale `sigma_h`,
/// eavesdropper scale `sigma_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    n_t: usize,
    sigma_h: f64,
    sigma_g: f64,
}

impl ChannelModel {
    pub fn new(n_t: usize, sigma_h: f64, sigma_g: f64) -> Result<Self> {
        if n_t == 0 {
            return Err(invalid("n_t", "need at least one transmit antenna"));
        }
        check_scale("sigma_h", sigma_h)?;
        check_scale("sigma_g", sigma_g)?;
        Ok(Self { n_t, sigma_h, sigma_g })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn sigma_h(&self) -> f64 {
        self.sigma_h
    }

    pub fn sigma_g(&self) -> f64 {
        self.sigma_g
    }

    /// `sigma_g^2 / sigma_h^2`. The channel is degraded (positive capacity)
    /// iff this is below 1.
    pub fn a(&self) -> f64 {
        (self.sigma_g * self.sigma_g) / (self.sigma_h * self.sigma_h)
    }

    pub fn is_degraded(&self) -> bool {
        self.sigma_h > self.sigma_g
    }

    pub fn scale(&self, side: Side) -> f64 {
        match side {
            Side::Legitimate => self.sigma_h,
            Side::Eavesdropper => self.sigma_g,
        }
    }

    pub fn with_n_t(&self, n_t: usize) -> Result<Self> {
        Self::new(n_t, self.sigma_h, self.sigma_g)
    }
}

fn check_scale(name: &'static str, sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid(name, format!("must be positive and finite, got {sigma}")));
    }
    Ok(())
}

/// Which channel of the wiretap pair to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Legitimate,
    Eavesdropper,
}

impl Side {
    fn salt(self) -> u64 {
        match self {
            Side::Legitimate => 0x6c65_6769_7469_6d61,
            Side::Eavesdropper => 0x6561_7665_7364_726f,
        }
    }
}

/// Diagonal power spectrum `d` (eigenvalues of the input covariance) with
/// total budget `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    d: Vec<f64>,
    budget: f64,
}

impl PowerAllocation {
    /// Relative slack allowed on `sum(d) <= budget`.
    pub const BUDGET_RTOL: f64 = 1e-9;

    pub fn new(d: Vec<f64>, budget: f64) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(invalid("budget", format!("must be nonnegative, got {budget}")));
        }
        if let Some(bad) = d.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(invalid("d", format!("entries must be nonnegative, got {bad}")));
        }
        let total: f64 = d.iter().sum();
        if total > budget * (1.0 + Self::BUDGET_RTOL) + f64::MIN_POSITIVE {
            return Err(invalid("d", format!("total power {total} exceeds budget {budget}")));
        }
        Ok(Self { d, budget })
    }

    /// `P / n_t` on every antenna.
    pub fn uniform(n_t: usize, budget: f64) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::EmptyInput);
        }
        Self::new(vec![budget / n_t as f64; n_t], budget)
    }

    /// All power on antenna `index`.
    pub fn single(n_t: usize, index: usize, budget: f64) -> Result<Self> {
        if index >= n_t {
            return Err(invalid("index", format!("{index} out of range for {n_t} antennas")));
        }
        let mut d = vec![0.0; n_t];
        d[index] = budget;
        Self::new(d, budget)
    }

    pub fn zeros(n_t: usize) -> Result<Self> {
        Self::new(vec![0.0; n_t], 0.0)
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.d.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0.0)
    }

    /// Whether the whole budget is spent, to relative tolerance `rtol`.
    pub fn is_full_power(&self, rtol: f64) -> bool {
        (self.total() - self.budget).abs() <= rtol * self.budget.max(f64::MIN_POSITIVE)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.d
    }
}

/// Row-major batch of channel draws: `rows` realisations of an `n_t`-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGainMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    scale: f64,
}

impl ComplexGainMatrix {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>, scale: f64) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            data,
            scale,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks_exact(self.cols)
    }

    /// Maps every row `g` to `U^H g`, so that `quadratic_form` on the result
    /// evaluates `g^H U D U^H g`.
    pub fn rotated(&self, unitary: &UnitaryMatrix) -> Result<Self> {
        if unitary.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: unitary.dim(),
            });
        }
        let n = self.cols;
        let mut data = Vec::with_capacity(self.data.len());
        for g in self.iter_rows() {
            for j in 0..n {
                // (U^H g)_j = sum_i conj(U_ij) g_i
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, gi) in g.iter().enumerate() {
                    acc += unitary.get(i, j).conj() * gi;
                }
                data.push(acc);
            }
        }
        Self::from_rows(self.rows, n, data, self.scale)
    }
}

/// Square unitary matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// Haar-distributed unitary: QR of a complex Gaussian square matrix by
    /// modified Gram-Schmidt. Gram-Schmidt produces a positive real diagonal
    /// in `R`, which is the phase convention that makes `Q` Haar.
    pub fn random(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 0x756e_6974_6172_7921));
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re * half, im * half)
                    })
                    .collect()
            })
            .collect();
        for j in 0..dim {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let proj: Complex64 = qk.iter().zip(rest[0].iter()).map(|(q, v)| q.conj() * v).sum();
                for (v, q) in rest[0].iter_mut().zip(qk.iter()) {
                    *v -= proj * q;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(invalid("seed", "singular Gaussian draw"));
            }
            for v in cols[j].iter_mut() {
                *v /= norm;
            }
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                data[i * dim + j] = *v;
            }
        }
        Ok(Self { dim, data })
    }

    /// Largest entry of `|U^H U - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let dot: Complex64 = (0..n).map(|i| self.get(i, a).conj() * self.get(i, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// SplitMix64 finaliser over `seed ^ salt`.
pub(crate) fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = (seed ^ salt).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chunk_rng(seed: u64, side: Side, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, side.salt()));
    rng.set_stream(chunk);
    rng
}

fn fill_chunk(rng: &mut ChaCha8Rng, std_dev: f64, out: &mut Vec<Complex64>, len: usize) {
    out.clear();
    out.reserve(len);
    for _ in 0..len {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        out.push(Complex64::new(re * std_dev, im * std_dev));
    }
}

/// A stream of i.i.d. `CN(0, scale^2 I_{n_t})` vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianStream {
    pub n_t: usize,
    pub scale: f64,
    pub side: Side,
    pub seed: u64,
}

impl GaussianStream {
    pub fn new(n_t: usize, scale: f64, side: Side, seed: u64) -> Result<Self> {
        if n_t == 0 {
            return Err(invalid("n_t", "need at least one transmit antenna"));
        }
        check_scale("scale", scale)?;
        Ok(Self { n_t, scale, side, seed })
    }

    /// Applies `f` to each chunk of the first `count` rows, in parallel, and
    /// returns the per-chunk results in chunk order. The chunk slice is
    /// row-major with `n_t` columns.
    pub fn map_chunks<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&[Complex64]) -> T + Sync,
    {
        let n_chunks = count.div_ceil(CHUNK_ROWS);
        let std_dev = self.scale * std::f64::consts::FRAC_1_SQRT_2;
        (0..n_chunks)
            .into_par_iter()
            .map_init(Vec::new, |buf, c| {
                let rows = CHUNK_ROWS.min(count - c * CHUNK_ROWS);
                let mut rng = chunk_rng(self.seed, self.side, c as u64);
                fill_chunk(&mut rng, std_dev, buf, rows * self.n_t);
                f(buf)
            })
            .collect()
    }
}

/// `count` independent draws of the selected channel; a pure function of
/// `(model, side, count, seed)`.
pub fn sample_channel(model: &ChannelModel, side: Side, count: usize, seed: u64) -> Result<ComplexGainMatrix> {
    if count == 0 {
        return Err(Error::ZeroSamples);
    }
    let scale = model.scale(side);
    let stream = GaussianStream::new(model.n_t(), scale, side, seed)?;
    let chunks = stream.map_chunks(count, |c| c.to_vec());
    let data = chunks.concat();
    ComplexGainMatrix::from_rows(count, model.n_t(), data, scale)
}

/// `q_i = sum_k d_k |g_{i,k}|^2` for every row `i`.
pub fn quadratic_form(gains: &ComplexGainMatrix, alloc: &PowerAllocation) -> Result<Vec<f64>> {
    if gains.cols() != alloc.len() {
        return Err(Error::DimensionMismatch {
            expected: gains.cols(),
            got: alloc.len(),
        });
    }
    Ok(gains.iter_rows().map(|g| weighted_power(g, alloc.d())).collect())
}

#[inline]
pub(crate) fn weighted_power(g: &[Complex64], d: &[f64]) -> f64 {
    g.iter().zip(d).map(|(z, w)| w * z.norm_sqr()).sum()
}
