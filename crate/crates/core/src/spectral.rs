//! Discrete Fourier transform between the position and momentum lattices.
//!
//! Momentum amplitudes are samples of the continuum transform
//! `psi~(k) = (2 pi)^(-1/2) * integral psi(x) exp(-i k x) dx`, so that
//! `sum |psi~|^2 dk = sum |psi|^2 dx`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::wavepacket::WavePacket;

/// Forward/inverse FFT pair for one grid size.
#[derive(Clone)]
pub(crate) struct SpectralPlan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl SpectralPlan {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / n as f64,
        }
    }

    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Normalized inverse: `inverse(forward(v)) == v`.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        for z in buf.iter_mut() {
            *z *= self.scale;
        }
    }

    /// Multiplies by a function of the wavenumber: `v -> F^-1 diag(f(k)) F v`.
    pub(crate) fn apply_diagonal(&self, buf: &mut [Complex64], multiplier: &[Complex64]) {
        self.forward(buf);
        for (z, w) in buf.iter_mut().zip(multiplier) {
            *z *= w;
        }
        self.inverse(buf);
    }
}

/// A wave packet in momentum representation, ordered by ascending wavenumber.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumPacket {
    grid: Grid,
    amp: Vec<Complex64>,
}

impl MomentumPacket {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    /// Wavenumbers matching [`MomentumPacket::amplitudes`].
    pub fn wavenumbers(&self) -> Vec<f64> {
        self.grid.wavenumbers()
    }

    /// `sum |psi~|^2 dk`.
    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dk()
    }

    /// Mean and standard deviation of the wavenumber distribution.
    pub fn wavenumber_stats(&self) -> (f64, f64) {
        let k = self.wavenumbers();
        let w: Vec<f64> = self.amp.iter().map(|z| z.norm_sqr()).collect();
        let total: f64 = w.iter().sum();
        let mean = k.iter().zip(&w).map(|(k, w)| k * w).sum::<f64>() / total;
        let var = k
            .iter()
            .zip(&w)
            .map(|(k, w)| (k - mean).powi(2) * w)
            .sum::<f64>()
            / total;
        (mean, var.sqrt())
    }

    /// Inverse transform back to the position lattice.
    pub fn to_position(&self) -> Result<WavePacket> {
        let n = self.grid.n();
        let plan = SpectralPlan::new(n);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let half = n / 2;
        let prefactor = (2.0 * PI).sqrt() / self.grid.dx();
        for (idx, &k) in self.grid.wavenumbers().iter().enumerate() {
            // ascending index idx maps to FFT slot (idx + n/2) mod n
            let slot = (idx + half) % n;
            buf[slot] = self.amp[idx] * Complex64::from_polar(prefactor, k * self.grid.x_min());
        }
        plan.inverse(&mut buf);
        WavePacket::from_parts_checked(self.grid, buf)
    }
}

/// Transforms a packet to the momentum lattice.
pub fn to_momentum(psi: &WavePacket) -> MomentumPacket {
    let grid = *psi.grid();
    let n = grid.n();
    let plan = SpectralPlan::new(n);
    let mut buf = psi.amplitudes().to_vec();
    plan.forward(&mut buf);
    let half = n / 2;
    let prefactor = grid.dx() / (2.0 * PI).sqrt();
    let amp = grid
        .wavenumbers()
        .iter()
        .enumerate()
        .map(|(idx, &k)| {
            let slot = (idx + half) % n;
            buf[slot] * Complex64::from_polar(prefactor, -k * grid.x_min())
        })
        .collect();
    MomentumPacket { grid, amp }
}

/// Inverse of [`to_momentum`].
pub fn to_position(phi: &MomentumPacket) -> Result<WavePacket> {
    phi.to_position()
}

impl MomentumPacket {
    pub fn from_amplitudes(grid: Grid, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "expected {} momentum amplitudes, got {}",
                grid.n(),
                amp.len()
            )));
        }
        Ok(Self { grid, amp })
    }
}
