//! Dense-matrix ground truth on small grids.
//!
//! Operators are `n x n` matrices in the basis of position nodes. Momentum is
//! spectral: `P = F^dagger diag(hbar k) F` with the unitary DFT `F`, so the
//! oracle shares the discretization of the spectral backends and differences
//! isolate factorization and splitting errors.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::PhysicalParams;
use crate::wavepacket::WavePacket;

/// Largest grid accepted by [`dense_hamiltonian`].
pub const MAX_HAMILTONIAN_DIM: usize = 1024;
/// Largest grid accepted by [`commutator_element`].
pub const MAX_COMMUTATOR_DIM: usize = 512;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    grid: Grid,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(grid: Grid, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != grid.n() || matrix.ncols() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, grid has {} nodes",
                matrix.nrows(),
                matrix.ncols(),
                grid.n()
            )));
        }
        Ok(Self { grid, matrix })
    }

    /// Diagonal position operator `X`.
    pub fn position(grid: &Grid) -> Self {
        let diag = DVector::from_iterator(
            grid.n(),
            grid.positions().into_iter().map(|x| Complex64::new(x, 0.0)),
        );
        Self {
            grid: *grid,
            matrix: DMatrix::from_diagonal(&diag),
        }
    }

    /// Spectral kinetic operator `P^2 / (2m)`.
    pub fn kinetic(grid: &Grid, params: &PhysicalParams) -> Self {
        let n = grid.n();
        // circulant: entry (a, b) depends on (a - b) mod n only
        let energies: Vec<f64> = grid
            .wavenumbers()
            .into_iter()
            .map(|k| (params.hbar * k).powi(2) / (2.0 * params.m))
            .collect();
        let half = (n / 2) as i64;
        let column: Vec<f64> = (0..n)
            .map(|d| {
                (-half..half)
                    .zip(&energies)
                    .map(|(j, e)| e * (2.0 * PI * (j * d as i64) as f64 / n as f64).cos())
                    .sum::<f64>()
                    / n as f64
            })
            .collect();
        let matrix = DMatrix::from_fn(n, n, |a, b| {
            Complex64::new(column[(a + n - b) % n], 0.0)
        });
        Self {
            grid: *grid,
            matrix,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in a..n {
                worst = worst.max((self.matrix[(a, b)] - self.matrix[(b, a)].conj()).norm());
            }
        }
        worst
    }

    /// `max |A^dagger A - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let mut worst = 0.0_f64;
        for ((a, b), z) in prod.iter().enumerate().map(|(i, z)| ((i % self.dim(), i / self.dim()), z)) {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((z - target).norm());
        }
        worst
    }

    fn check_grid(&self, psi: &WavePacket) -> Result<()> {
        if psi.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn apply_raw(&self, amp: &[Complex64]) -> DVector<Complex64> {
        &self.matrix * DVector::from_column_slice(amp)
    }

    /// `A psi` as a wave packet (margin-checked, not renormalized).
    pub fn apply(&self, psi: &WavePacket) -> Result<WavePacket> {
        self.check_grid(psi)?;
        let out = self.apply_raw(psi.amplitudes());
        WavePacket::from_parts_checked(self.grid, out.iter().copied().collect())
    }

    /// `<phi|A|psi>` with the `dx` quadrature weight.
    pub fn matrix_element(&self, phi: &WavePacket, psi: &WavePacket) -> Result<Complex64> {
        self.check_grid(phi)?;
        self.check_grid(psi)?;
        let a_psi = self.apply_raw(psi.amplitudes());
        Ok(braket(phi.amplitudes(), a_psi.as_slice()) * self.grid.dx())
    }
}

fn braket(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `H = P^2/(2m) + m g X`.
pub fn dense_hamiltonian(grid: &Grid, params: &PhysicalParams) -> Result<DenseOperator> {
    params.validate()?;
    if grid.n() > MAX_HAMILTONIAN_DIM {
        return Err(Error::TooLarge {
            n: grid.n(),
            max: MAX_HAMILTONIAN_DIM,
        });
    }
    let mut h = DenseOperator::kinetic(grid, params);
    for (i, x) in grid.positions().into_iter().enumerate() {
        h.matrix[(i, i)] += params.m * params.g * x;
    }
    Ok(h)
}

/// Eigendecomposition of a Hermitian operator, reusable for any `t`.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    grid: Grid,
    energies: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

impl HermitianSpectrum {
    pub fn new(h: &DenseOperator) -> Result<Self> {
        let err = h.hermiticity_error();
        if !(err <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian(err));
        }
        let eig = h.matrix.clone().symmetric_eigen();
        Ok(Self {
            grid: h.grid,
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    /// Lowest eigenvalue and its eigenvector (unit Euclidean norm).
    pub fn ground_state(&self) -> (f64, Vec<Complex64>) {
        let (idx, e) = self
            .energies
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        (*e, self.vectors.column(idx).iter().copied().collect())
    }

    /// `exp(-i H t / hbar) = V diag(exp(-i E t / hbar)) V^dagger`.
    pub fn propagator(&self, t: f64, params: &PhysicalParams) -> DenseOperator {
        let mut scaled = self.vectors.clone();
        for (j, e) in self.energies.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -e * t / params.hbar);
            let mut column = scaled.column_mut(j);
            column *= phase;
        }
        DenseOperator {
            grid: self.grid,
            matrix: scaled * self.vectors.adjoint(),
        }
    }
}

/// `U = exp(-i H t / hbar)` via Hermitian eigendecomposition.
pub fn dense_propagator(h: &DenseOperator, t: f64, params: &PhysicalParams) -> Result<DenseOperator> {
    Ok(HermitianSpectrum::new(h)?.propagator(t, params))
}

/// Heisenberg-picture position `x(t) = U^dagger X U`.
pub fn heisenberg_position(u: &DenseOperator, grid: &Grid) -> Result<DenseOperator> {
    if u.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let err = u.unitarity_error();
    if !(err <= UNITARY_TOL) {
        return Err(Error::NotUnitary(err));
    }
    let mut xu = u.matrix.clone();
    for (i, x) in grid.positions().into_iter().enumerate() {
        xu.row_mut(i).iter_mut().for_each(|z| *z *= x);
    }
    Ok(DenseOperator {
        grid: *grid,
        matrix: u.matrix.adjoint() * xu,
    })
}

/// `<phi| [x(t), x(0)] |psi>` from dense operators.
pub fn commutator_element(
    phi: &WavePacket,
    psi: &WavePacket,
    t: f64,
    grid: &Grid,
    params: &PhysicalParams,
) -> Result<Complex64> {
    if grid.n() > MAX_COMMUTATOR_DIM {
        return Err(Error::TooLarge {
            n: grid.n(),
            max: MAX_COMMUTATOR_DIM,
        });
    }
    if phi.grid() != grid || psi.grid() != grid {
        return Err(Error::GridMismatch);
    }
    phi.check_margin()?;
    psi.check_margin()?;
    let h = dense_hamiltonian(grid, params)?;
    let u = dense_propagator(&h, t, params)?;
    let xt = heisenberg_position(&u, grid)?;

    let xs = grid.positions();
    let x_psi: Vec<Complex64> = psi.amplitudes().iter().zip(&xs).map(|(z, x)| z * x).collect();
    let x_phi: Vec<Complex64> = phi.amplitudes().iter().zip(&xs).map(|(z, x)| z * x).collect();
    let xt_x_psi = xt.apply_raw(&x_psi);
    let xt_psi = xt.apply_raw(psi.amplitudes());
    let value = braket(phi.amplitudes(), xt_x_psi.as_slice()) - braket(&x_phi, xt_psi.as_slice());
    Ok(value * grid.dx())
}
