//! Radix-2 complex FFT for power-of-two lengths.
//!
//! Forward transform is `X_k = sum_j x_j exp(-2 pi i j k / n)`, inverse
//! carries the `1/n`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::sin_cos;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Precomputed twiddles for one length.
#[derive(Debug, Clone)]
pub struct Fft {
    n: usize,
    /// `exp(-2 pi i j / n)` for `j < n/2`
    twiddles: Vec<Complex64>,
}

impl Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidSpec(alloc::format!(
                "FFT length must be a power of two, got {n}"
            )));
        }
        let twiddles = (0..n / 2)
            .map(|j| {
                let (s, c) = sin_cos(-TAU * j as f64 / n as f64);
                Complex64::new(c, s)
            })
            .collect();
        Ok(Self { n, twiddles })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn process(&self, data: &mut [Complex64], dir: Direction) {
        assert_eq!(data.len(), self.n, "FFT length mismatch");
        let n = self.n;
        if n == 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = match dir {
                        Direction::Forward => w,
                        Direction::Inverse => w.conj(),
                    };
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
        if dir == Direction::Inverse {
            let scale = 1.0 / n as f64;
            data.iter_mut().for_each(|z| *z *= scale);
        }
    }
}

/// Signed frequency index of bin `j` in FFT order.
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}
