//! Simulation engine and equilibrium tooling for quantized games.
//!
//! The crate covers the full pipeline of an N-player quantized game: an
//! entangling operator acting on |0...0>, local unitary moves, optional
//! decoherence before and after the moves, an optional disentangler, and a
//! computational-basis payoff readout. On top of that sit a numerical
//! Nash-equilibrium certifier, the quantum and classical Minority games,
//! Meyer's penny flip, and an entanglement-coordinated rock-paper-scissors
//! round.
//!
//! Everything is generic over the real scalar (see [`scalar::Scalar`]);
//! the `*64` aliases below are the types most callers want.
//!
//! ```
//! use qgames::equilibria::{certify_nash, mg_ne_profile, SearchBudget};
//! use qgames::games::{profile_payoffs, GameSpec};
//!
//! // Four-player Minority game at maximal entanglement.
//! let game = GameSpec::<f64>::minority(4, std::f64::consts::FRAC_PI_2)?;
//! let profile = mg_ne_profile(4, 0)?;
//!
//! // Every player expects 1/4, double the classical random-play value...
//! let payoffs = profile_payoffs(&game, &profile)?;
//! assert!((payoffs[0] - 0.25).abs() < 1e-12);
//!
//! // ...and no unilateral deviation improves on it.
//! let cert = certify_nash(&game, &profile, 1e-3, &SearchBudget::default())?;
//! assert!(cert.certified);
//! # Ok::<(), qgames::Error>(())
//! ```

pub mod channels;
pub mod classical_mg;
mod eigen;
pub mod equilibria;
pub mod error;
pub mod games;
pub mod qops;
pub mod qstate;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type StateVector64 = qstate::StateVector<f64>;
pub type DensityMatrix64 = qstate::DensityMatrix<f64>;
pub type QuantumOperator64 = qstate::QuantumOperator<f64>;
pub type Su2Params64 = qops::Su2Params<f64>;
pub type EntanglerSpec64 = qops::EntanglerSpec<f64>;
pub type KrausChannel64 = channels::KrausChannel<f64>;
pub type GameSpec64 = games::GameSpec<f64>;
pub type StrategyProfile64 = games::StrategyProfile<f64>;
pub type PayoffTable64 = games::PayoffTable<f64>;
pub type DeviationReport64 = equilibria::DeviationReport<f64>;
pub type NeCertificate64 = equilibria::NeCertificate<f64>;
pub type SearchBudget64 = equilibria::SearchBudget<f64>;

pub type StateVector32 = qstate::StateVector<f32>;
pub type DensityMatrix32 = qstate::DensityMatrix<f32>;
pub type QuantumOperator32 = qstate::QuantumOperator<f32>;
