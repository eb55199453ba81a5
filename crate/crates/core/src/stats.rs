//! Sample statistics shared by the stochastic modules.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{ceil, floor, sqrt};

/// Running mean/variance by Welford's update, fed in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance, `None` below two samples.
    pub fn variance(&self) -> Option<f64> {
        (self.count >= 2).then(|| self.m2 / (self.count - 1) as f64)
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> Option<f64> {
        self.variance().map(|v| sqrt(v / self.count as f64))
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Self::default();
        iter.into_iter().for_each(|x| m.push(x));
        m
    }
}

/// Sample variance with the standard error of that variance estimate.
///
/// The error uses the fourth central moment, `Var(s^2) ~ (mu4 - s^4) / n`.
pub fn variance_with_stderr(xs: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let (m2, m4) = xs.iter().fold((0.0, 0.0), |(m2, m4), &x| {
        let d2 = (x - mean) * (x - mean);
        (m2 + d2, m4 + d2 * d2)
    });
    let var = m2 / (n - 1) as f64;
    let mu4 = m4 / n as f64;
    let se = sqrt(((mu4 - var * var) / n as f64).max(0.0));
    Ok((var, se))
}

/// Linear-interpolation quantile of already sorted data, `q` in `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// How histogram bins are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Binning {
    /// Width `2 IQR n^(-1/3)` over the sample range.
    #[default]
    FreedmanDiaconis,
    /// Fixed number of equal bins over the sample range.
    Count(usize),
}

/// Equal-width histogram over `[lo, lo + width * counts.len()]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub width: f64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn edges(&self, i: usize) -> (f64, f64) {
        let a = self.lo + self.width * i as f64;
        (a, a + self.width)
    }

    pub fn hi(&self) -> f64 {
        self.lo + self.width * self.counts.len() as f64
    }

    /// Build with edges from `sorted` and `binning`.
    pub fn from_sorted(sorted: &[f64], binning: Binning) -> Result<Self> {
        let (lo, width, bins) = layout(sorted, binning)?;
        let mut h = Self {
            lo,
            width,
            counts: vec![0; bins],
            total: 0,
        };
        h.fill(sorted);
        Ok(h)
    }

    /// Same edges, different data.
    pub fn with_layout_of(&self, xs: &[f64]) -> Self {
        let mut h = Self {
            lo: self.lo,
            width: self.width,
            counts: vec![0; self.counts.len()],
            total: 0,
        };
        h.fill(xs);
        h
    }

    fn fill(&mut self, xs: &[f64]) {
        let bins = self.counts.len();
        for &x in xs {
            self.total += 1;
            let f = (x - self.lo) / self.width;
            if f < 0.0 || f > bins as f64 {
                continue;
            }
            let i = (floor(f) as usize).min(bins - 1);
            self.counts[i] += 1;
        }
    }

    /// Fraction of all samples in bin `i`.
    pub fn mass(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.total as f64
    }
}

fn layout(sorted: &[f64], binning: Binning) -> Result<(f64, f64, usize)> {
    let n = sorted.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let lo = sorted[0];
    let hi = sorted[n - 1];
    let range = hi - lo;
    if range.is_nan() || range <= 0.0 {
        return Err(Error::DegenerateSample(n));
    }
    let bins = match binning {
        Binning::Count(k) => {
            if k == 0 {
                return Err(Error::InvalidSpec("bin count must be positive".into()));
            }
            k
        }
        Binning::FreedmanDiaconis => {
            let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
            let width = 2.0 * iqr / libm::cbrt(n as f64);
            if width > 0.0 {
                (ceil(range / width) as usize).max(1)
            } else {
                // Over half the data tied: fall back to the square-root rule.
                ceil(sqrt(n as f64)) as usize
            }
        }
    };
    Ok((lo, range / bins as f64, bins))
}

/// Kolmogorov-Smirnov distance between sorted samples and a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Sort a copy with total ordering; NaN is rejected.
pub fn sorted_copy(xs: &[f64]) -> Result<Vec<f64>> {
    if let Some(&bad) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain {
            what: "sample value",
            value: bad,
        });
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Least-squares line `y = a + b t`; returns `(a, b)`.
pub fn linear_fit(t: &[f64], y: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (sty, stt) = t.iter().zip(y).fold((0.0, 0.0), |(sty, stt), (&ti, &yi)| {
        (sty + (ti - tm) * (yi - ym), stt + (ti - tm) * (ti - tm))
    });
    let b = if stt > 0.0 { sty / stt } else { 0.0 };
    (ym - b * tm, b)
}
