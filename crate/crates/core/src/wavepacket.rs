use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, MARGIN_AMPLITUDE};
use crate::params::PhysicalParams;
use crate::spectral::to_momentum;

/// Complex amplitudes on a [`Grid`], normalized so that `sum |amp|^2 dx = 1`.
///
/// Every constructor and every evolution verifies that the boundary margin
/// (outer 5% of nodes on each side) stays below [`MARGIN_AMPLITUDE`].
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    grid: Grid,
    amp: Vec<Complex64>,
}

impl WavePacket {
    /// Normalizes `amp` and checks the boundary margin.
    pub fn new(grid: Grid, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes, got {}",
                grid.n(),
                amp.len()
            )));
        }
        let norm = amp.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have norm {norm}"
            )));
        }
        let scale = norm.sqrt().recip();
        let amp = amp.into_iter().map(|z| z * scale).collect();
        Self::from_parts_checked(grid, amp)
    }

    /// Wraps amplitudes produced by a unitary map; only the margin is checked.
    pub(crate) fn from_parts_checked(grid: Grid, amp: Vec<Complex64>) -> Result<Self> {
        let psi = Self { grid, amp };
        psi.check_margin()?;
        Ok(psi)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    /// Largest |amp| inside the boundary margin.
    pub fn margin_amplitude(&self) -> f64 {
        margin_amplitude(&self.grid, &self.amp)
    }

    pub fn check_margin(&self) -> Result<()> {
        check_margin(&self.grid, &self.amp)
    }
}

fn margin_amplitude(grid: &Grid, amp: &[Complex64]) -> f64 {
    let m = grid.margin_nodes();
    let n = grid.n();
    amp[..m]
        .iter()
        .chain(&amp[n - m..])
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub(crate) fn check_margin(grid: &Grid, amp: &[Complex64]) -> Result<()> {
    let edge = margin_amplitude(grid, amp);
    if edge.is_finite() && edge < MARGIN_AMPLITUDE {
        Ok(())
    } else {
        Err(Error::GridOverflow {
            reason: format!(
                "|amp| = {edge:e} in the outer {} nodes of [{}, {}] (limit {MARGIN_AMPLITUDE:e})",
                grid.margin_nodes(),
                grid.x_min(),
                grid.x_max()
            ),
            segment: None,
        })
    }
}

/// Position and momentum statistics of a packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub norm: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub sigma_x: f64,
    pub sigma_p: f64,
}

/// Minimum-uncertainty Gaussian `exp(-(x-x0)^2/(4 sigma0^2) + i p0 x/hbar)`.
pub fn make_gaussian(
    grid: &Grid,
    x0: f64,
    p0: f64,
    sigma0: f64,
    params: &PhysicalParams,
) -> Result<WavePacket> {
    params.validate()?;
    let min = 2.0 * grid.dx();
    if !(sigma0.is_finite() && sigma0 > 0.0 && sigma0 >= min) {
        return Err(Error::BadSigma { sigma0, min });
    }
    if !x0.is_finite() || x0 - 6.0 * sigma0 < grid.x_min() || x0 + 6.0 * sigma0 > grid.x_max() {
        return Err(Error::GridOverflow {
            reason: format!(
                "6-sigma support [{}, {}] leaves the grid [{}, {}]",
                x0 - 6.0 * sigma0,
                x0 + 6.0 * sigma0,
                grid.x_min(),
                grid.x_max()
            ),
            segment: None,
        });
    }
    let p_limit = 0.5 * params.hbar * grid.k_max();
    if !(p0.abs() < p_limit) {
        return Err(Error::InvalidArgument(format!(
            "|p0| = {} must stay below half the lattice momentum limit ({p_limit})",
            p0.abs()
        )));
    }
    let amp = grid
        .positions()
        .into_iter()
        .map(|x| {
            let u = x - x0;
            Complex64::from_polar((-u * u / (4.0 * sigma0 * sigma0)).exp(), p0 * x / params.hbar)
        })
        .collect();
    WavePacket::new(*grid, amp)
}

/// Lattice quadrature of the first two moments in position and momentum space.
pub fn moments(psi: &WavePacket, params: &PhysicalParams) -> Moments {
    let grid = psi.grid();
    let dx = grid.dx();
    let xs = grid.positions();
    let w: Vec<f64> = psi.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let norm = w.iter().sum::<f64>() * dx;
    let total: f64 = w.iter().sum();
    let mean_x = xs.iter().zip(&w).map(|(x, w)| x * w).sum::<f64>() / total;
    let var_x = xs
        .iter()
        .zip(&w)
        .map(|(x, w)| (x - mean_x).powi(2) * w)
        .sum::<f64>()
        / total;

    let (mean_k, sigma_k) = to_momentum(psi).wavenumber_stats();
    Moments {
        norm,
        mean_x,
        mean_p: params.hbar * mean_k,
        sigma_x: var_x.sqrt(),
        sigma_p: params.hbar * sigma_k,
    }
}

/// `<a|b> = sum conj(a_i) b_i dx`.
pub fn overlap(a: &WavePacket, b: &WavePacket) -> Result<Complex64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let s: Complex64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(s * a.grid().dx())
}

/// L2 distance `sqrt(sum |a_i - b_i|^2 dx)`.
pub fn l2_distance(a: &WavePacket, b: &WavePacket) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let s: f64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    Ok((s * a.grid().dx()).sqrt())
}
