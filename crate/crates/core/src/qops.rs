//! Constructors for the operators the games use: parameterized SU(2)
//! strategies, the penny-flip F/N pair and Meyer's U(a,b), Pauli matrices,
//! and the entangling operator J(gamma) with both its closed form and its
//! Hadamard + CNOT gate-sequence realization.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{DensityMatrix, QuantumOperator, StateVector};
use crate::scalar::{as_f64, cx, Scalar};

pub fn identity2<T: Scalar>() -> QuantumOperator<T> {
    QuantumOperator::identity(2)
}

pub fn sigma_x<T: Scalar>() -> QuantumOperator<T> {
    QuantumOperator::new(2, 2, vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)])
        .expect("static 2x2")
}

pub fn sigma_y<T: Scalar>() -> QuantumOperator<T> {
    QuantumOperator::new(2, 2, vec![cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)])
        .expect("static 2x2")
}

pub fn sigma_z<T: Scalar>() -> QuantumOperator<T> {
    QuantumOperator::new(2, 2, vec![cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)])
        .expect("static 2x2")
}

pub fn hadamard<T: Scalar>() -> QuantumOperator<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    QuantumOperator::new(2, 2, vec![cx(h, 0.0), cx(h, 0.0), cx(h, 0.0), cx(-h, 0.0)])
        .expect("static 2x2")
}

/// The penny-flip pair in the {H, T} basis: F flips the penny, N leaves it.
pub fn flip_matrices<T: Scalar>() -> (QuantumOperator<T>, QuantumOperator<T>) {
    (sigma_x(), identity2())
}

/// Euler-angle parameterization of a pure single-qubit strategy.
///
/// The built unitary is
/// `[[e^{i a} cos(t/2), i e^{i b} sin(t/2)], [i e^{-i b} sin(t/2), e^{-i a} cos(t/2)]]`,
/// which covers SU(2); arbitrary U(2) moves differ from it only by a global
/// phase, which no payoff can see.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Params<T: Scalar> {
    pub theta: T,
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> Su2Params<T> {
    /// Requires theta in [0, pi], alpha and beta in [-pi, pi].
    pub fn new(theta: T, alpha: T, beta: T) -> Result<Self> {
        if theta < T::zero() || theta > T::PI() {
            return Err(Error::param(format!(
                "theta {} outside [0, pi]",
                as_f64(theta)
            )));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if v < -T::PI() || v > T::PI() {
                return Err(Error::param(format!("{name} {} outside [-pi, pi]", as_f64(v))));
            }
        }
        Ok(Self { theta, alpha, beta })
    }

    pub fn identity() -> Self {
        Self {
            theta: T::zero(),
            alpha: T::zero(),
            beta: T::zero(),
        }
    }

    /// theta = pi: a bit flip up to global phase (i sigma_x).
    pub fn flip() -> Self {
        Self {
            theta: T::PI(),
            alpha: T::zero(),
            beta: T::zero(),
        }
    }

    /// Clamps theta into [0, pi] and wraps the phases into [-pi, pi];
    /// used by grid-refinement steps that walk off the box.
    pub fn canonicalized(theta: T, alpha: T, beta: T) -> Self {
        let two_pi = T::PI() + T::PI();
        let wrap = |v: T| {
            let mut v = v % two_pi;
            if v > T::PI() {
                v -= two_pi;
            } else if v < -T::PI() {
                v += two_pi;
            }
            v
        };
        Self {
            theta: theta.max(T::zero()).min(T::PI()),
            alpha: wrap(alpha),
            beta: wrap(beta),
        }
    }
}

/// Builds the SU(2) strategy operator for the given parameters.
pub fn su2<T: Scalar>(params: Su2Params<T>) -> QuantumOperator<T> {
    let half = params.theta * T::from_f64(0.5);
    let (sin, cos) = (half.sin(), half.cos());
    let ea = Complex::from_polar(T::one(), params.alpha);
    let eb = Complex::from_polar(T::one(), params.beta);
    let i = Complex::<T>::i();
    QuantumOperator::new(
        2,
        2,
        vec![
            ea * cos,
            i * eb * sin,
            i * eb.conj() * sin,
            ea.conj() * cos,
        ],
    )
    .expect("static 2x2")
}

/// Meyer's U(a, b) = [[a, b], [conj(b), -conj(a)]]; requires |a|^2 + |b|^2 = 1.
/// U(1/sqrt(2), 1/sqrt(2)) is the Hadamard matrix.
pub fn meyer_u<T: Scalar>(a: Complex<T>, b: Complex<T>) -> Result<QuantumOperator<T>> {
    let residual = (a.norm_sqr() + b.norm_sqr() - T::one()).abs();
    if residual > T::norm_tol() {
        return Err(Error::NotNormalized {
            residual: as_f64(residual),
        });
    }
    QuantumOperator::new(2, 2, vec![a, b, b.conj(), -a.conj()])
}

/// The entangling operator J(gamma) = cos(gamma/2) I + i sin(gamma/2) X^(xN):
/// identity at gamma = 0, GHZ-maker at gamma = pi/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglerSpec<T: Scalar> {
    pub n_players: usize,
    pub gamma: T,
}

impl<T: Scalar> EntanglerSpec<T> {
    pub fn new(n_players: usize, gamma: T) -> Result<Self> {
        if n_players == 0 {
            return Err(Error::param("entangler needs at least one player"));
        }
        if gamma < T::zero() || gamma > T::FRAC_PI_2() {
            return Err(Error::param(format!(
                "gamma {} outside [0, pi/2]",
                as_f64(gamma)
            )));
        }
        Ok(Self { n_players, gamma })
    }

    pub fn maximal(n_players: usize) -> Self {
        Self {
            n_players,
            gamma: T::FRAC_PI_2(),
        }
    }

    pub fn none(n_players: usize) -> Self {
        Self {
            n_players,
            gamma: T::zero(),
        }
    }

    fn cos_sin(&self) -> (T, T) {
        let half = self.gamma * T::from_f64(0.5);
        (half.cos(), half.sin())
    }

    /// Applies J (or J^dag with `dagger`) to a qubit state vector without
    /// building the 2^N x 2^N matrix: J psi = c psi + i s (X^(xN) psi),
    /// where X^(xN) reverses every bit of the index.
    pub fn apply_vec(&self, psi: &StateVector<T>, dagger: bool) -> Result<StateVector<T>> {
        if psi.local_dim() != 2 || psi.n_sites() != self.n_players {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n_players,
                actual: psi.dim(),
            });
        }
        let (c, s) = self.cos_sin();
        let is = if dagger {
            Complex::new(T::zero(), -s)
        } else {
            Complex::new(T::zero(), s)
        };
        let dim = psi.dim();
        let mask = dim - 1;
        let amps = psi.amplitudes();
        let out: Vec<Complex<T>> = (0..dim)
            .map(|k| amps[k] * c + amps[mask ^ k] * is)
            .collect();
        Ok(StateVector::from_amps_unchecked(2, self.n_players, out))
    }

    /// Applies J rho J^dag (or the daggered version) structurally:
    /// c^2 rho + s^2 X rho X + i c s (X rho - rho X) with X = X^(xN).
    pub fn apply_dm(&self, rho: &DensityMatrix<T>, dagger: bool) -> Result<DensityMatrix<T>> {
        let dim = 1usize << self.n_players;
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: rho.dim(),
            });
        }
        let (c, s) = self.cos_sin();
        let cc = c * c;
        let ss = s * s;
        let ics = if dagger {
            Complex::new(T::zero(), -(c * s))
        } else {
            Complex::new(T::zero(), c * s)
        };
        let mask = dim - 1;
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = rho.get(i, j) * cc
                    + rho.get(mask ^ i, mask ^ j) * ss
                    + (rho.get(mask ^ i, j) - rho.get(i, mask ^ j)) * ics;
                entries.push(v);
            }
        }
        Ok(DensityMatrix::from_entries_unchecked(dim, entries))
    }
}

/// Full-matrix form of J(gamma): cos(gamma/2) on the diagonal and
/// i sin(gamma/2) on the anti-diagonal.
pub fn entangler<T: Scalar>(spec: &EntanglerSpec<T>) -> QuantumOperator<T> {
    let dim = 1usize << spec.n_players;
    let (c, s) = spec.cos_sin();
    let mut op = QuantumOperator::zeros(dim, dim);
    for i in 0..dim {
        op.set(i, i, Complex::new(c, T::zero()));
        op.set(i, dim - 1 - i, Complex::new(T::zero(), s));
    }
    op
}

/// CNOT on an `n`-qubit register as a permutation matrix (big-endian
/// qubit indices).
pub fn cnot<T: Scalar>(n_qubits: usize, control: usize, target: usize) -> QuantumOperator<T> {
    assert!(control < n_qubits && target < n_qubits && control != target);
    let dim = 1usize << n_qubits;
    let cbit = 1usize << (n_qubits - 1 - control);
    let tbit = 1usize << (n_qubits - 1 - target);
    let mut op = QuantumOperator::zeros(dim, dim);
    for col in 0..dim {
        let row = if col & cbit != 0 { col ^ tbit } else { col };
        op.set(row, col, Complex::new(T::one(), T::zero()));
    }
    op
}

/// Gate-sequence entangler: Hadamard on qubit 0 followed by CNOTs fanning
/// out to every other qubit. Produces (|0...0> + |1...1>)/sqrt(2) from the
/// all-zero state; note the |1...1> phase is +1 here versus +i for
/// [`entangler`] at gamma = pi/2, so the two agree only up to that phase.
pub fn entangler_gate_sequence<T: Scalar>(n_players: usize) -> QuantumOperator<T> {
    assert!(n_players >= 2, "gate sequence needs at least two players");
    let mut op = hadamard::<T>();
    for _ in 1..n_players {
        op = op.tensor(&identity2());
    }
    for target in 1..n_players {
        op = cnot(n_players, 0, target).mul(&op).expect("square dims");
    }
    op
}

/// True when a = e^{i phi} b for some phase phi.
pub fn equal_up_to_global_phase<T: Scalar>(
    a: &QuantumOperator<T>,
    b: &QuantumOperator<T>,
    tol: T,
) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let mut phase = None;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        if y.norm() > tol {
            phase = Some(*x / *y);
            break;
        }
        if x.norm() > tol {
            return false;
        }
    }
    let Some(phase) = phase else {
        return true;
    };
    if (phase.norm() - T::one()).abs() > tol {
        return false;
    }
    a.entries()
        .iter()
        .zip(b.entries())
        .all(|(x, y)| (*x - *y * phase).norm() <= tol)
}
