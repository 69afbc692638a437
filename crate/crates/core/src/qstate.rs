//! State vectors, density matrices, and operators for multi-site game
//! states (qubits throughout, plus the one qutrit pair used by the
//! coordination game).
//!
//! Site ordering is big-endian: player 1 owns the most significant digit of
//! the computational index. Payoff indexing elsewhere relies on this.

use num_complex::Complex;

use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::scalar::{as_f64, Scalar};

/// Dense complex matrix. Unitaries, projectors, and Kraus elements all use
/// this one representation; validity flags (unitarity etc.) are checked at
/// the point of use, not carried in the type.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOperator<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> QuantumOperator<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Self {
            rows: dim,
            cols: dim,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| *e * factor).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` supplies the most significant index.
    pub fn tensor(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Max-abs entry of `U U^dag - I`; zero for a unitary.
    pub fn unitarity_residual(&self) -> T {
        if self.rows != self.cols {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.rows {
                let mut s = Complex::new(T::zero(), T::zero());
                for k in 0..self.cols {
                    s += self.get(i, k) * self.get(j, k).conj();
                }
                if i == j {
                    s -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn check_unitary(&self) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual > T::op_tol() {
            return Err(Error::NotUnitary {
                residual: as_f64(residual),
            });
        }
        Ok(())
    }

    /// Max-abs entry-wise distance, usable on any equal-shaped pair.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

/// Pure state over `n_sites` sites of equal local dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    local_dim: usize,
    n_sites: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Validates that the length is a power of `local_dim` and the state is
    /// normalized within `Scalar::norm_tol`.
    pub fn new(local_dim: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::param("local dimension must be at least 2"));
        }
        let mut dim = 1usize;
        let mut n_sites = 0usize;
        while dim < amps.len() {
            dim *= local_dim;
            n_sites += 1;
        }
        if dim != amps.len() || amps.is_empty() {
            return Err(Error::param(format!(
                "amplitude count {} is not a power of local dimension {}",
                amps.len(),
                local_dim
            )));
        }
        let state = Self {
            local_dim,
            n_sites,
            amps,
        };
        state.check_normalized()?;
        Ok(state)
    }

    /// Basis state |index> (big-endian digit string).
    pub fn basis(local_dim: usize, n_sites: usize, index: usize) -> Self {
        let dim = local_dim.pow(n_sites as u32);
        assert!(index < dim, "basis index out of range");
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Self {
            local_dim,
            n_sites,
            amps,
        }
    }

    /// |0...0> on `n` qubits.
    pub fn zero_qubits(n: usize) -> Self {
        Self::basis(2, n, 0)
    }

    pub(crate) fn from_amps_unchecked(local_dim: usize, n_sites: usize, amps: Vec<Complex<T>>) -> Self {
        Self {
            local_dim,
            n_sites,
            amps,
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let residual = (self.norm_sqr() - T::one()).abs();
        if residual > T::norm_tol() {
            return Err(Error::NotNormalized {
                residual: as_f64(residual),
            });
        }
        Ok(())
    }

    /// Tensor product; `self` supplies the most significant digits.
    pub fn tensor(&self, rhs: &Self) -> Result<Self> {
        if self.local_dim != rhs.local_dim {
            return Err(Error::param("tensor operands have different local dimensions"));
        }
        let mut amps = Vec::with_capacity(self.dim() * rhs.dim());
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(*a * *b);
            }
        }
        Ok(Self {
            local_dim: self.local_dim,
            n_sites: self.n_sites + rhs.n_sites,
            amps,
        })
    }

    /// Full-matrix application; re-validates normalization, so only unitary
    /// operators are accepted.
    pub fn apply_op(&self, op: &QuantumOperator<T>) -> Result<Self> {
        if op.cols() != self.dim() || op.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: op.cols(),
            });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); self.dim()];
        for (i, out) in amps.iter_mut().enumerate() {
            let mut s = Complex::new(T::zero(), T::zero());
            for (j, a) in self.amps.iter().enumerate() {
                s += op.get(i, j) * *a;
            }
            *out = s;
        }
        let state = Self {
            local_dim: self.local_dim,
            n_sites: self.n_sites,
            amps,
        };
        state.check_normalized()?;
        Ok(state)
    }

    /// Applies a single-qubit operator to one qubit by strided contraction.
    pub fn apply_local(&self, op: &QuantumOperator<T>, qubit: usize) -> Result<Self> {
        self.qubit_bit(qubit, op)?;
        let bit = self.n_sites - 1 - qubit;
        let stride = 1usize << bit;
        let m = [op.get(0, 0), op.get(0, 1), op.get(1, 0), op.get(1, 1)];
        let mut amps = self.amps.clone();
        for i0 in 0..self.dim() {
            if i0 & stride != 0 {
                continue;
            }
            let i1 = i0 | stride;
            let a0 = amps[i0];
            let a1 = amps[i1];
            amps[i0] = m[0] * a0 + m[1] * a1;
            amps[i1] = m[2] * a0 + m[3] * a1;
        }
        Ok(Self {
            local_dim: 2,
            n_sites: self.n_sites,
            amps,
        })
    }

    /// |amplitude|^2 per computational outcome.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn qubit_bit(&self, qubit: usize, op: &QuantumOperator<T>) -> Result<()> {
        if self.local_dim != 2 || op.rows() != 2 || op.cols() != 2 {
            return Err(Error::param("apply_local expects a 2x2 operator on a qubit register"));
        }
        if qubit >= self.n_sites {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_sites,
            });
        }
        Ok(())
    }
}

/// Mixed state: Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Fully validating constructor (Hermiticity, trace, PSD). Internal
    /// pipeline steps use the unchecked path since they preserve the
    /// invariants by construction.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        let rho = Self { dim, entries };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    /// Outer product |psi><psi| of a normalized pure state.
    pub fn from_pure(psi: &StateVector<T>) -> Self {
        let dim = psi.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in psi.amplitudes() {
            for b in psi.amplitudes() {
                entries.push(*a * b.conj());
            }
        }
        Self { dim, entries }
    }

    /// I/d, the maximally mixed state.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        let w = T::one() / T::from_usize(dim);
        for i in 0..dim {
            entries[i * dim + i] = Complex::new(w, T::zero());
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn n_qubits(&self) -> Result<usize> {
        let n = self.dim.trailing_zeros() as usize;
        if 1usize << n != self.dim {
            return Err(Error::param(format!(
                "dimension {} is not a power of two",
                self.dim
            )));
        }
        Ok(n)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self.get(i, i)).fold(
            Complex::new(T::zero(), T::zero()),
            |acc, v| acc + v,
        )
    }

    /// Max-abs entry of `rho - rho^dag`.
    pub fn hermiticity_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Eigenvalues (real, ascending). The matrix is treated as Hermitian.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    /// Checks all three density-matrix invariants: Hermiticity and trace
    /// within `norm_tol`, minimum eigenvalue >= -`op_tol`.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_residual();
        if herm > T::norm_tol() {
            return Err(Error::InvalidDensity {
                reason: format!("hermiticity residual {:e}", as_f64(herm)),
            });
        }
        let tr = self.trace();
        let tr_err = (tr - Complex::new(T::one(), T::zero())).norm();
        if tr_err > T::norm_tol() {
            return Err(Error::InvalidDensity {
                reason: format!("trace residual {:e}", as_f64(tr_err)),
            });
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -T::op_tol() {
            return Err(Error::InvalidDensity {
                reason: format!("negative eigenvalue {:e}", as_f64(min_eig)),
            });
        }
        Ok(())
    }

    /// U rho U^dag with a full matrix. Callers pass a unitary (which
    /// preserves trace and spectrum); the same contraction also serves the
    /// Kraus-term sums in `channels`, so unitarity is the caller's
    /// precondition rather than a checked error.
    pub fn conjugate(&self, u: &QuantumOperator<T>) -> Result<Self> {
        if u.rows() != self.dim || u.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: u.rows(),
            });
        }
        let d = self.dim;
        // tmp = U rho
        let mut tmp = vec![Complex::new(T::zero(), T::zero()); d * d];
        for i in 0..d {
            for k in 0..d {
                let uik = u.get(i, k);
                if uik.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..d {
                    tmp[i * d + j] += uik * self.get(k, j);
                }
            }
        }
        // out = tmp U^dag
        let mut out = vec![Complex::new(T::zero(), T::zero()); d * d];
        for i in 0..d {
            for k in 0..d {
                let t = tmp[i * d + k];
                if t.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += t * u.get(j, k).conj();
                }
            }
        }
        Ok(Self {
            dim: d,
            entries: out,
        })
    }

    /// Applies a single-qubit operator at `qubit` as K rho K^dag by
    /// index-strided contraction, equal to conjugation by
    /// I (x) ... (x) K (x) ... (x) I without building that matrix.
    pub fn apply_local(&self, op: &QuantumOperator<T>, qubit: usize) -> Result<Self> {
        let n = self.n_qubits()?;
        if op.rows() != 2 || op.cols() != 2 {
            return Err(Error::param("apply_local expects a 2x2 operator"));
        }
        if qubit >= n {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: n,
            });
        }
        Ok(self.apply_local_unchecked(op, n, qubit))
    }

    pub(crate) fn apply_local_unchecked(
        &self,
        op: &QuantumOperator<T>,
        n_qubits: usize,
        qubit: usize,
    ) -> Self {
        let d = self.dim;
        let bit = n_qubits - 1 - qubit;
        let stride = 1usize << bit;
        let m = [op.get(0, 0), op.get(0, 1), op.get(1, 0), op.get(1, 1)];
        let mut entries = self.entries.clone();
        // Left-multiply by K: combine row pairs.
        for i0 in 0..d {
            if i0 & stride != 0 {
                continue;
            }
            let i1 = i0 | stride;
            for j in 0..d {
                let a0 = entries[i0 * d + j];
                let a1 = entries[i1 * d + j];
                entries[i0 * d + j] = m[0] * a0 + m[1] * a1;
                entries[i1 * d + j] = m[2] * a0 + m[3] * a1;
            }
        }
        // Right-multiply by K^dag: combine column pairs.
        for j0 in 0..d {
            if j0 & stride != 0 {
                continue;
            }
            let j1 = j0 | stride;
            for i in 0..d {
                let a0 = entries[i * d + j0];
                let a1 = entries[i * d + j1];
                entries[i * d + j0] = a0 * m[0].conj() + a1 * m[1].conj();
                entries[i * d + j1] = a0 * m[2].conj() + a1 * m[3].conj();
            }
        }
        Self { dim: d, entries }
    }

    /// Diagonal of rho (real parts): the computational-basis outcome
    /// distribution.
    pub fn outcome_probabilities(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub(crate) fn add_scaled(&mut self, other: &Self, weight: T) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += *b * weight;
        }
    }

    pub(crate) fn zero_like(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }
}

/// Spec-level name for the outer product; see [`DensityMatrix::from_pure`].
pub fn pure_to_density<T: Scalar>(psi: &StateVector<T>) -> DensityMatrix<T> {
    DensityMatrix::from_pure(psi)
}
