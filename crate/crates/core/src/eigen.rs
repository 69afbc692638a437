//! Jacobi eigenvalue iteration for Hermitian matrices.
//!
//! Only eigenvalues are needed (positive-semidefiniteness checks and
//! spectrum comparisons), so eigenvectors are not accumulated. The cyclic
//! sweep with complex rotations converges quadratically; the matrices here
//! are small (dimension <= a few hundred).

use num_complex::Complex;

use crate::scalar::Scalar;

/// Eigenvalues of a Hermitian matrix given in row-major order, sorted
/// ascending. The strictly-lower triangle is taken from the conjugate of
/// the upper one, so slightly non-Hermitian input is symmetrized first.
pub(crate) fn hermitian_eigenvalues<T: Scalar>(dim: usize, entries: &[Complex<T>]) -> Vec<T> {
    assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
    let mut a: Vec<Complex<T>> = entries.to_vec();
    // Symmetrize: a <- (a + a^dag)/2.
    let half = T::from_f64(0.5);
    for i in 0..dim {
        for j in i..dim {
            let m = (a[i * dim + j] + a[j * dim + i].conj()) * half;
            a[i * dim + j] = m;
            a[j * dim + i] = m.conj();
        }
    }

    let scale: T = (0..dim)
        .map(|i| a[i * dim + i].re.abs())
        .fold(T::one(), T::max);
    let tol = T::epsilon() * scale * T::from_usize(dim);
    let max_sweeps = 64;

    for _ in 0..max_sweeps {
        let mut off = T::zero();
        for i in 0..dim {
            for j in (i + 1)..dim {
                off += a[i * dim + j].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                rotate(&mut a, dim, p, q, tol);
            }
        }
    }

    let mut eigs: Vec<T> = (0..dim).map(|i| a[i * dim + i].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    eigs
}

/// One complex Jacobi rotation zeroing a[p][q] (and a[q][p]).
fn rotate<T: Scalar>(a: &mut [Complex<T>], dim: usize, p: usize, q: usize, tol: T) {
    let apq = a[p * dim + q];
    let r = apq.norm();
    if r <= tol {
        return;
    }
    let phase = apq / r; // e^{i arg(a_pq)}
    let app = a[p * dim + p].re;
    let aqq = a[q * dim + q].re;
    let tau = (aqq - app) / (T::from_f64(2.0) * r);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // G has G[p][p]=c, G[p][q]=s*phase, G[q][p]=-s*conj(phase), G[q][q]=c;
    // apply a <- G^dag a G.
    let gs = phase * s;
    for k in 0..dim {
        let akp = a[k * dim + p];
        let akq = a[k * dim + q];
        a[k * dim + p] = akp * c - akq * gs.conj();
        a[k * dim + q] = akq * c + akp * gs;
    }
    for k in 0..dim {
        let apk = a[p * dim + k];
        let aqk = a[q * dim + k];
        a[p * dim + k] = apk * c - aqk * gs;
        a[q * dim + k] = aqk * c + apk * gs.conj();
    }
    // Clean up round-off on the zeroed pair and the real diagonal.
    a[p * dim + q] = (a[p * dim + q] + a[q * dim + p].conj()) * T::from_f64(0.5);
    a[q * dim + p] = a[p * dim + q].conj();
    a[p * dim + p] = Complex::new(a[p * dim + p].re, T::zero());
    a[q * dim + q] = Complex::new(a[q * dim + q].re, T::zero());
}
