use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fraction of nodes at each end of the grid that must stay empty.
pub const MARGIN_FRACTION: f64 = 0.05;
/// Largest amplitude tolerated inside the boundary margin.
pub const MARGIN_AMPLITUDE: f64 = 1e-10;

/// Uniform periodic lattice on `[x_min, x_max)` with its spectral momentum lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::BadGrid(format!(
                "need finite x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::BadGrid(format!(
                "node count must be a power of two >= 8, got {n}"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Wavenumbers `2*pi*j/L` for `j = -n/2 .. n/2-1`, ascending.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let half = (self.n / 2) as i64;
        (-half..half).map(|j| j as f64 * self.dk()).collect()
    }

    /// Wavenumbers in FFT output order (`0, 1, .., n/2-1, -n/2, .., -1`).
    pub(crate) fn wavenumbers_fft_order(&self) -> Vec<f64> {
        let n = self.n as i64;
        (0..n)
            .map(|i| {
                let j = if i < n / 2 { i } else { i - n };
                j as f64 * self.dk()
            })
            .collect()
    }

    /// Largest representable |k| (the Nyquist wavenumber).
    pub fn k_max(&self) -> f64 {
        PI / self.dx()
    }

    /// Number of nodes at each end that make up the boundary margin.
    pub fn margin_nodes(&self) -> usize {
        ((MARGIN_FRACTION * self.n as f64).ceil() as usize).max(1)
    }

    /// Interior interval where packets may carry amplitude.
    pub fn interior(&self) -> (f64, f64) {
        let m = self.margin_nodes();
        (self.x(m), self.x(self.n - m))
    }
}
