//! Single-qubit decoherence channels as Kraus-operator quantum operations.
//!
//! Each channel is a completely positive trace-preserving map
//! `rho -> sum_k K_k rho K_k^dag` applied independently per qubit. The
//! parameterizations:
//!
//! ```text
//! bit flip          {sqrt(1-p) I,  sqrt(p) X}
//! phase flip        {sqrt(1-p) I,  sqrt(p) Z}
//! bit-phase flip    {sqrt(1-p) I,  sqrt(p) Y}
//! depolarizing      {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}
//! phase damping     {[[1,0],[0,sqrt(1-p)]], [[0,0],[0,sqrt(p)]]}
//! amplitude damping {[[1,0],[0,sqrt(1-p)]], [[0,sqrt(p)],[0,0]]}
//! ```
//!
//! The depolarizing weights put total error probability p split equally
//! across the three Paulis, so p = 1 lands exactly on the maximally mixed
//! state instead of overshooting it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qops;
use crate::qstate::{DensityMatrix, QuantumOperator};
use crate::scalar::{cx, Scalar};

/// The six supported channel kinds. The serialized names below are the
/// canonical strings accepted by the CLI `--channel` flag; `dephasing` is
/// accepted as an alias for `phase_damping`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
    Depolarizing,
    PhaseDamping,
    AmplitudeDamping,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
        ChannelKind::Depolarizing,
        ChannelKind::PhaseDamping,
        ChannelKind::AmplitudeDamping,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::BitFlip => "bit_flip",
            ChannelKind::PhaseFlip => "phase_flip",
            ChannelKind::BitPhaseFlip => "bit_phase_flip",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::PhaseDamping => "phase_damping",
            ChannelKind::AmplitudeDamping => "amplitude_damping",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bit_flip" => Ok(ChannelKind::BitFlip),
            "phase_flip" => Ok(ChannelKind::PhaseFlip),
            "bit_phase_flip" => Ok(ChannelKind::BitPhaseFlip),
            "depolarizing" => Ok(ChannelKind::Depolarizing),
            "phase_damping" | "dephasing" => Ok(ChannelKind::PhaseDamping),
            "amplitude_damping" => Ok(ChannelKind::AmplitudeDamping),
            other => Err(Error::param(format!("unknown channel kind '{other}'"))),
        }
    }
}

/// A single-qubit channel: its kind, probability, and Kraus elements.
#[derive(Debug, Clone)]
pub struct KrausChannel<T: Scalar> {
    kind: ChannelKind,
    p: T,
    kraus_ops: Vec<QuantumOperator<T>>,
}

impl<T: Scalar> KrausChannel<T> {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn kraus_ops(&self) -> &[QuantumOperator<T>] {
        &self.kraus_ops
    }

    /// Max-abs entry of `sum_k K_k^dag K_k - I`; zero for a CPTP map.
    pub fn completeness_residual(&self) -> T {
        let mut sum = QuantumOperator::zeros(2, 2);
        for k in &self.kraus_ops {
            let kk = k.adjoint().mul(k).expect("2x2");
            for i in 0..2 {
                for j in 0..2 {
                    sum.set(i, j, sum.get(i, j) + kk.get(i, j));
                }
            }
        }
        sum.max_abs_diff(&QuantumOperator::identity(2))
    }

    /// Applies the channel independently to each listed qubit. An empty
    /// list leaves the state untouched.
    pub fn apply(&self, rho: &DensityMatrix<T>, qubits: &[usize]) -> Result<DensityMatrix<T>> {
        let n = rho.n_qubits()?;
        for &q in qubits {
            if q >= n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: n,
                });
            }
        }
        let mut out = rho.clone();
        for &q in qubits {
            let mut acc = DensityMatrix::zero_like(rho.dim());
            for k in &self.kraus_ops {
                acc.add_scaled(&out.apply_local_unchecked(k, n, q), T::one());
            }
            out = acc;
        }
        Ok(out)
    }

    /// Applies the channel to every qubit of the register.
    pub fn apply_all(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let n = rho.n_qubits()?;
        let qubits: Vec<usize> = (0..n).collect();
        self.apply(rho, &qubits)
    }
}

/// Builds the Kraus set for `kind` at decoherence probability `p` in [0, 1].
pub fn make_channel<T: Scalar>(kind: ChannelKind, p: T) -> Result<KrausChannel<T>> {
    if p < T::zero() || p > T::one() {
        return Err(Error::param(format!(
            "decoherence probability {} outside [0, 1]",
            crate::scalar::as_f64(p)
        )));
    }
    let sp = p.sqrt();
    let s1p = (T::one() - p).sqrt();
    let id = qops::identity2::<T>();
    let kraus_ops = match kind {
        ChannelKind::BitFlip => vec![
            id.scale(s1p.into()),
            qops::sigma_x().scale(sp.into()),
        ],
        ChannelKind::PhaseFlip => vec![
            id.scale(s1p.into()),
            qops::sigma_z().scale(sp.into()),
        ],
        ChannelKind::BitPhaseFlip => vec![
            id.scale(s1p.into()),
            qops::sigma_y().scale(sp.into()),
        ],
        ChannelKind::Depolarizing => {
            let three_quarters = T::from_f64(0.75);
            let quarter = T::from_f64(0.25);
            let w0 = (T::one() - three_quarters * p).sqrt();
            let w = (quarter * p).sqrt();
            vec![
                id.scale(w0.into()),
                qops::sigma_x().scale(w.into()),
                qops::sigma_y().scale(w.into()),
                qops::sigma_z().scale(w.into()),
            ]
        }
        ChannelKind::PhaseDamping => vec![
            QuantumOperator::new(2, 2, vec![cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), s1p.into()])?,
            QuantumOperator::new(2, 2, vec![cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), sp.into()])?,
        ],
        ChannelKind::AmplitudeDamping => vec![
            QuantumOperator::new(2, 2, vec![cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), s1p.into()])?,
            QuantumOperator::new(2, 2, vec![cx(0.0, 0.0), sp.into(), cx(0.0, 0.0), cx(0.0, 0.0)])?,
        ],
    };
    let channel = KrausChannel { kind, p, kraus_ops };
    debug_assert!(channel.completeness_residual() <= T::op_tol());
    Ok(channel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::EntanglerSpec;
    use crate::qstate::{pure_to_density, StateVector};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_density(n_qubits: usize, rng: &mut ChaCha8Rng) -> DensityMatrix<f64> {
        let dim = 1usize << n_qubits;
        let mut rho = DensityMatrix::zero_like(dim);
        for w in [0.4, 0.35, 0.25] {
            let mut amps: Vec<num_complex::Complex<f64>> = (0..dim)
                .map(|_| {
                    num_complex::Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                })
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in amps.iter_mut() {
                *a /= norm;
            }
            let psi = StateVector::new(2, amps.to_vec()).unwrap();
            rho.add_scaled(&DensityMatrix::from_pure(&psi), w);
        }
        rho
    }

    #[test]
    fn completeness_on_probability_grid() {
        for kind in ChannelKind::ALL {
            for k in 0..=10 {
                let p = k as f64 / 10.0;
                let ch = make_channel::<f64>(kind, p).unwrap();
                assert!(
                    ch.completeness_residual() < 1e-10,
                    "{kind} p={p}: residual {}",
                    ch.completeness_residual()
                );
            }
        }
    }

    #[test]
    fn p_out_of_range_rejected() {
        assert!(make_channel::<f64>(ChannelKind::BitFlip, -0.1).is_err());
        assert!(make_channel::<f64>(ChannelKind::BitFlip, 1.1).is_err());
    }

    #[test]
    fn p_zero_is_identity_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rho = random_density(2, &mut rng);
        for kind in ChannelKind::ALL {
            let ch = make_channel::<f64>(kind, 0.0).unwrap();
            let out = ch.apply_all(&rho).unwrap();
            assert!(rho.max_abs_diff(&out) < 1e-14, "{kind}");
        }
    }

    #[test]
    fn bit_flip_at_p_one_flips_basis_state() {
        let rho = pure_to_density(&StateVector::<f64>::zero_qubits(1));
        let ch = make_channel::<f64>(ChannelKind::BitFlip, 1.0).unwrap();
        let out = ch.apply_all(&rho).unwrap();
        assert!((out.get(1, 1).re - 1.0).abs() < 1e-15);
        assert!(out.get(0, 0).norm() < 1e-15);
    }

    #[test]
    fn phase_damping_at_p_one_kills_coherence() {
        let plus = StateVector::<f64>::new(
            2,
            vec![
                cx(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                cx(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ],
        )
        .unwrap();
        let ch = make_channel::<f64>(ChannelKind::PhaseDamping, 1.0).unwrap();
        let out = ch.apply_all(&pure_to_density(&plus)).unwrap();
        assert!((out.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((out.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!(out.get(0, 1).norm() < 1e-15 && out.get(1, 0).norm() < 1e-15);
    }

    #[test]
    fn dephasing_ghz_becomes_diagonal() {
        let ghz = EntanglerSpec::<f64>::maximal(2)
            .apply_vec(&StateVector::zero_qubits(2), false)
            .unwrap();
        let ch = make_channel::<f64>(ChannelKind::PhaseDamping, 1.0).unwrap();
        let out = ch.apply_all(&pure_to_density(&ghz)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j && (i == 0 || i == 3) { 0.5 } else { 0.0 };
                assert!((out.get(i, j) - cx::<f64>(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn empty_qubit_set_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(2, &mut rng);
        let ch = make_channel::<f64>(ChannelKind::Depolarizing, 0.7).unwrap();
        let out = ch.apply(&rho, &[]).unwrap();
        assert!(rho.max_abs_diff(&out) < 1e-15);
    }

    #[test]
    fn channels_preserve_density_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in ChannelKind::ALL {
            for p in [0.15, 0.5, 0.95] {
                let rho = random_density(2, &mut rng);
                let ch = make_channel::<f64>(kind, p).unwrap();
                let out = ch.apply_all(&rho).unwrap();
                assert!((out.trace().re - 1.0).abs() < 1e-12, "{kind} p={p}");
                assert!(out.hermiticity_residual() < 1e-12);
                assert!(out.min_eigenvalue() >= -1e-10, "{kind} p={p}");
            }
        }
    }

    #[test]
    fn per_qubit_applications_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rho = random_density(2, &mut rng);
        for kind in ChannelKind::ALL {
            let ch = make_channel::<f64>(kind, 0.35).unwrap();
            let ab = ch.apply(&rho, &[0, 1]).unwrap();
            let ba = ch.apply(&rho, &[1, 0]).unwrap();
            assert!(ab.max_abs_diff(&ba) < 1e-12, "{kind}");
        }
    }

    #[test]
    fn diagonal_states_are_phase_damping_fixed_points() {
        let mut diag = DensityMatrix::<f64>::zero_like(4);
        let weights = [0.4, 0.1, 0.2, 0.3];
        for (i, w) in weights.iter().enumerate() {
            let psi = StateVector::basis(2, 2, i);
            diag.add_scaled(&DensityMatrix::from_pure(&psi), *w);
        }
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let ch = make_channel::<f64>(ChannelKind::PhaseDamping, p).unwrap();
            let out = ch.apply_all(&diag).unwrap();
            assert!(diag.max_abs_diff(&out) < 1e-14, "p={p}");
        }
    }

    #[test]
    fn apply_matches_explicit_tensor_kraus_sum() {
        // Oracle: sum_k (I x..x K_k x..x I) rho (...)^dag with explicitly
        // built tensor operators.
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for n in 1..=3usize {
            let rho = random_density(n, &mut rng);
            for kind in ChannelKind::ALL {
                let ch = make_channel::<f64>(kind, 0.4).unwrap();
                for qubit in 0..n {
                    let fast = ch.apply(&rho, &[qubit]).unwrap();
                    let mut slow = DensityMatrix::zero_like(rho.dim());
                    for k in ch.kraus_ops() {
                        let mut full = QuantumOperator::<f64>::identity(1);
                        for site in 0..n {
                            let factor = if site == qubit {
                                k.clone()
                            } else {
                                QuantumOperator::identity(2)
                            };
                            full = full.tensor(&factor);
                        }
                        slow.add_scaled(&rho.conjugate(&full).unwrap(), 1.0);
                    }
                    assert!(
                        fast.max_abs_diff(&slow) < 1e-12,
                        "{kind} n={n} qubit={qubit}"
                    );
                }
            }
        }
    }

    #[test]
    fn channel_names_round_trip() {
        for kind in ChannelKind::ALL {
            assert_eq!(kind.name().parse::<ChannelKind>().unwrap(), kind);
        }
        assert_eq!(
            "dephasing".parse::<ChannelKind>().unwrap(),
            ChannelKind::PhaseDamping
        );
        assert!("measurement".parse::<ChannelKind>().is_err());
    }
}
