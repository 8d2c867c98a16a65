//! Monte Carlo estimates and the running moments behind them.

/// A Monte Carlo (or deterministic) estimate of an expectation, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl RateEstimate {
    /// An exact value with no sampling error (quadrature, clamps, closed forms).
    pub fn exact(value: f64, n_samples: usize, seed: u64) -> Self {
        Self {
            mean: value,
            std_error: 0.0,
            n_samples,
            seed,
        }
    }

    /// Number of combined standard errors separating `self` from `other`,
    /// treating the two estimates as independent. Returns 0 for identical
    /// exact values and infinity for distinct exact values.
    pub fn z_score(&self, other: &RateEstimate) -> f64 {
        let diff = (self.mean - other.mean).abs();
        let se = self.combined_std_error(other);
        if se == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / se
        }
    }

    pub fn combined_std_error(&self, other: &RateEstimate) -> f64 {
        self.std_error.hypot(other.std_error)
    }
}

/// Streaming mean/variance accumulator (Welford), mergeable across chunks
/// with Chan's update so that a fixed merge order gives bit-identical output.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n_a = self.count as f64;
        let n_b = other.count as f64;
        let n = n_a + n_b;
        let delta = other.mean - self.mean;
        self.mean += delta * n_b / n;
        self.m2 += other.m2 + delta * delta * n_a * n_b / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; 0 for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn into_estimate(self, seed: u64) -> RateEstimate {
        RateEstimate {
            mean: self.mean,
            std_error: self.std_error(),
            n_samples: self.count as usize,
            seed,
        }
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}
