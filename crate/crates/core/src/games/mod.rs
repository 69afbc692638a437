//! Game definitions and the quantization pipeline.
//!
//! A game run walks the state through six stages: prepare |0...0><0...0|,
//! entangle with J(gamma), partially decohere with probability p, apply the
//! players' local moves (mixed moves as convex combinations of
//! conjugations), decohere again with probability p', optionally apply the
//! disentangler J^dag, and read payoffs off the computational-basis
//! distribution.
//!
//! When p = p' = 0 and every move is a pure unitary,
//! [`outcome_distribution`] takes a state-vector fast path instead of
//! carrying the full density matrix; the two paths agree to rounding and
//! are cross-checked in the tests.

pub mod rps;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::channels::{make_channel, ChannelKind};
use crate::error::{Error, Result};
use crate::qops::{self, EntanglerSpec, Su2Params};
use crate::qstate::{DensityMatrix, QuantumOperator, StateVector};
use crate::scalar::{as_f64, Scalar};

/// A per-player move: a pure SU(2) strategy or a convex mixture of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Move<T: Scalar> {
    Pure(Su2Params<T>),
    Mixed(Vec<(T, Su2Params<T>)>),
}

impl<T: Scalar> Move<T> {
    pub fn pure(params: Su2Params<T>) -> Self {
        Move::Pure(params)
    }

    /// Weights must be non-negative and sum to 1 within `norm_tol`.
    pub fn mixed(branches: Vec<(T, Su2Params<T>)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::param("mixed move needs at least one branch"));
        }
        let mut total = T::zero();
        for (w, _) in &branches {
            if *w < T::zero() {
                return Err(Error::param("mixed-move weights must be non-negative"));
            }
            total += *w;
        }
        if (total - T::one()).abs() > T::norm_tol() {
            return Err(Error::param(format!(
                "mixed-move weights sum to {}, not 1",
                as_f64(total)
            )));
        }
        Ok(Move::Mixed(branches))
    }

    /// The classical coin flip: identity and flip mixed 50/50.
    pub fn classical_random() -> Self {
        let half = T::from_f64(0.5);
        Move::Mixed(vec![
            (half, Su2Params::identity()),
            (half, Su2Params::flip()),
        ])
    }

    fn operators(&self) -> MoveOperator<T> {
        match self {
            Move::Pure(p) => MoveOperator::Pure(qops::su2(*p)),
            Move::Mixed(branches) => {
                MoveOperator::Mixed(branches.iter().map(|(w, p)| (*w, qops::su2(*p))).collect())
            }
        }
    }
}

/// Operator-level form of a move, for callers that need unitaries outside
/// the SU(2) parameterization (phases, Meyer's U, ...). Payoffs cannot see
/// the difference, which the global-phase tests pin down.
#[derive(Debug, Clone)]
pub enum MoveOperator<T: Scalar> {
    Pure(QuantumOperator<T>),
    Mixed(Vec<(T, QuantumOperator<T>)>),
}

impl<T: Scalar> MoveOperator<T> {
    fn validate(&self) -> Result<()> {
        let check = |op: &QuantumOperator<T>| -> Result<()> {
            if op.rows() != 2 || op.cols() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    actual: op.rows(),
                });
            }
            op.check_unitary()
        };
        match self {
            MoveOperator::Pure(op) => check(op),
            MoveOperator::Mixed(branches) => {
                let mut total = T::zero();
                for (w, op) in branches {
                    if *w < T::zero() {
                        return Err(Error::param("mixed-move weights must be non-negative"));
                    }
                    total += *w;
                    check(op)?;
                }
                if (total - T::one()).abs() > T::norm_tol() {
                    return Err(Error::param("mixed-move weights must sum to 1"));
                }
                Ok(())
            }
        }
    }

    fn is_pure(&self) -> bool {
        matches!(self, MoveOperator::Pure(_))
    }
}

/// One move per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile<T: Scalar> {
    moves: Vec<Move<T>>,
}

impl<T: Scalar> StrategyProfile<T> {
    pub fn new(moves: Vec<Move<T>>) -> Self {
        Self { moves }
    }

    /// All players use the same pure strategy.
    pub fn symmetric(params: Su2Params<T>, n_players: usize) -> Self {
        Self {
            moves: vec![Move::Pure(params); n_players],
        }
    }

    pub fn all_identity(n_players: usize) -> Self {
        Self::symmetric(Su2Params::identity(), n_players)
    }

    /// Classical pure profile: `true` = flip, `false` = stay.
    pub fn classical(bits: &[bool]) -> Self {
        Self {
            moves: bits
                .iter()
                .map(|b| {
                    Move::Pure(if *b {
                        Su2Params::flip()
                    } else {
                        Su2Params::identity()
                    })
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn moves(&self) -> &[Move<T>] {
        &self.moves
    }

    pub fn set_move(&mut self, player: usize, mv: Move<T>) {
        self.moves[player] = mv;
    }

    pub fn to_operators(&self) -> Vec<MoveOperator<T>> {
        self.moves.iter().map(Move::operators).collect()
    }
}

/// Payoff vector per computational outcome; row index is the big-endian
/// outcome bitstring (player 1 = most significant bit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffTable<T: Scalar> {
    n_players: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> PayoffTable<T> {
    pub fn from_rows(n_players: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let outcomes = 1usize << n_players;
        if rows.len() != outcomes {
            return Err(Error::DimensionMismatch {
                expected: outcomes,
                actual: rows.len(),
            });
        }
        for row in &rows {
            if row.len() != n_players {
                return Err(Error::DimensionMismatch {
                    expected: n_players,
                    actual: row.len(),
                });
            }
        }
        Ok(Self { n_players, rows })
    }

    /// Strict-minority payoffs: 1 to each player on the strictly smaller
    /// side, 0 otherwise, all zeros on a tie.
    pub fn minority(n_players: usize) -> Self {
        let rows = (0..(1usize << n_players))
            .map(|outcome| minority_payoff(n_players, outcome))
            .collect();
        Self { n_players, rows }
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn outcomes(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, outcome: usize) -> &[T] {
        &self.rows[outcome]
    }

    /// Bitstring-keyed view, the JSON golden-file format.
    pub fn to_outcome_map(&self) -> BTreeMap<String, Vec<T>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(outcome, row)| (outcome_bitstring(self.n_players, outcome), row.clone()))
            .collect()
    }
}

/// Big-endian bitstring for an outcome index.
pub fn outcome_bitstring(n_players: usize, outcome: usize) -> String {
    (0..n_players)
        .map(|k| {
            if outcome >> (n_players - 1 - k) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Payoff vector of the strict-minority rule for one outcome.
pub fn minority_payoff<T: Scalar>(n_players: usize, outcome: usize) -> Vec<T> {
    let ones = (outcome & ((1usize << n_players) - 1)).count_ones() as usize;
    let zeros = n_players - ones;
    let winning_bit = if ones < zeros {
        Some(1)
    } else if zeros < ones {
        Some(0)
    } else {
        None
    };
    (0..n_players)
        .map(|k| {
            let bit = outcome >> (n_players - 1 - k) & 1;
            match winning_bit {
                Some(w) if bit == w => T::one(),
                _ => T::zero(),
            }
        })
        .collect()
}

/// Full configuration of one quantized game.
#[derive(Debug, Clone)]
pub struct GameSpec<T: Scalar> {
    n_players: usize,
    payoffs: PayoffTable<T>,
    entangler: EntanglerSpec<T>,
    channel: ChannelKind,
    p: T,
    p_prime: T,
    apply_final_disentangler: bool,
}

impl<T: Scalar> GameSpec<T> {
    pub fn new(
        payoffs: PayoffTable<T>,
        entangler: EntanglerSpec<T>,
        channel: ChannelKind,
        p: T,
        p_prime: T,
        apply_final_disentangler: bool,
    ) -> Result<Self> {
        let n_players = payoffs.n_players();
        if entangler.n_players != n_players {
            return Err(Error::DimensionMismatch {
                expected: n_players,
                actual: entangler.n_players,
            });
        }
        for (name, v) in [("p", p), ("p'", p_prime)] {
            if v < T::zero() || v > T::one() {
                return Err(Error::param(format!("{name} = {} outside [0, 1]", as_f64(v))));
            }
        }
        Ok(Self {
            n_players,
            payoffs,
            entangler,
            channel,
            p,
            p_prime,
            apply_final_disentangler,
        })
    }

    /// Noise-free Minority game at entanglement `gamma`. The final
    /// disentangler is skipped: it only mixes outcomes with identical
    /// winner sets, so Minority payoffs cannot see it.
    pub fn minority(n_players: usize, gamma: T) -> Result<Self> {
        Self::new(
            PayoffTable::minority(n_players),
            EntanglerSpec::new(n_players, gamma)?,
            ChannelKind::PhaseDamping,
            T::zero(),
            T::zero(),
            false,
        )
    }

    /// Same game with decoherence `p` applied at both noise slots.
    pub fn with_decoherence(mut self, channel: ChannelKind, p: T, p_prime: T) -> Result<Self> {
        for (name, v) in [("p", p), ("p'", p_prime)] {
            if v < T::zero() || v > T::one() {
                return Err(Error::param(format!("{name} = {} outside [0, 1]", as_f64(v))));
            }
        }
        self.channel = channel;
        self.p = p;
        self.p_prime = p_prime;
        Ok(self)
    }

    pub fn with_gamma(mut self, gamma: T) -> Result<Self> {
        self.entangler = EntanglerSpec::new(self.n_players, gamma)?;
        Ok(self)
    }

    pub fn with_final_disentangler(mut self, apply: bool) -> Self {
        self.apply_final_disentangler = apply;
        self
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn payoffs(&self) -> &PayoffTable<T> {
        &self.payoffs
    }

    pub fn entangler(&self) -> &EntanglerSpec<T> {
        &self.entangler
    }

    pub fn channel(&self) -> ChannelKind {
        self.channel
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn p_prime(&self) -> T {
        self.p_prime
    }

    pub fn applies_final_disentangler(&self) -> bool {
        self.apply_final_disentangler
    }

    fn noiseless(&self) -> bool {
        self.p == T::zero() && self.p_prime == T::zero()
    }
}

/// Runs the full density-matrix pipeline and returns the final state.
pub fn run_pipeline<T: Scalar>(
    game: &GameSpec<T>,
    profile: &StrategyProfile<T>,
) -> Result<DensityMatrix<T>> {
    if profile.len() != game.n_players {
        return Err(Error::DimensionMismatch {
            expected: game.n_players,
            actual: profile.len(),
        });
    }
    run_pipeline_with_operators(game, &profile.to_operators())
}

/// Density-matrix pipeline over operator-level moves.
pub fn run_pipeline_with_operators<T: Scalar>(
    game: &GameSpec<T>,
    moves: &[MoveOperator<T>],
) -> Result<DensityMatrix<T>> {
    if moves.len() != game.n_players {
        return Err(Error::DimensionMismatch {
            expected: game.n_players,
            actual: moves.len(),
        });
    }
    for mv in moves {
        mv.validate()?;
    }
    let n = game.n_players;
    let rho0 = DensityMatrix::from_pure(&StateVector::zero_qubits(n));
    let rho1 = game.entangler.apply_dm(&rho0, false)?;
    let rho2 = if game.p > T::zero() {
        make_channel(game.channel, game.p)?.apply_all(&rho1)?
    } else {
        rho1
    };
    let mut rho3 = rho2;
    for (player, mv) in moves.iter().enumerate() {
        rho3 = match mv {
            MoveOperator::Pure(op) => rho3.apply_local_unchecked(op, n, player),
            MoveOperator::Mixed(branches) => {
                let mut acc = DensityMatrix::zero_like(rho3.dim());
                for (w, op) in branches {
                    acc.add_scaled(&rho3.apply_local_unchecked(op, n, player), *w);
                }
                acc
            }
        };
    }
    let rho4 = if game.p_prime > T::zero() {
        make_channel(game.channel, game.p_prime)?.apply_all(&rho3)?
    } else {
        rho3
    };
    let rho5 = if game.apply_final_disentangler {
        game.entangler.apply_dm(&rho4, true)?
    } else {
        rho4
    };
    debug_assert!((rho5.trace().re - T::one()).abs() <= T::norm_tol());
    Ok(rho5)
}

/// Computational-basis outcome distribution of the final state, taking the
/// state-vector fast path when the run is noiseless and all moves pure.
pub fn outcome_distribution<T: Scalar>(
    game: &GameSpec<T>,
    profile: &StrategyProfile<T>,
) -> Result<Vec<T>> {
    if profile.len() != game.n_players {
        return Err(Error::DimensionMismatch {
            expected: game.n_players,
            actual: profile.len(),
        });
    }
    let moves = profile.to_operators();
    outcome_distribution_with_operators(game, &moves)
}

/// Operator-level variant of [`outcome_distribution`].
pub fn outcome_distribution_with_operators<T: Scalar>(
    game: &GameSpec<T>,
    moves: &[MoveOperator<T>],
) -> Result<Vec<T>> {
    if game.noiseless() && moves.iter().all(MoveOperator::is_pure) {
        if moves.len() != game.n_players {
            return Err(Error::DimensionMismatch {
                expected: game.n_players,
                actual: moves.len(),
            });
        }
        for mv in moves {
            mv.validate()?;
        }
        let mut psi = game
            .entangler
            .apply_vec(&StateVector::zero_qubits(game.n_players), false)?;
        for (player, mv) in moves.iter().enumerate() {
            let MoveOperator::Pure(op) = mv else { unreachable!() };
            psi = psi.apply_local(op, player)?;
        }
        if game.apply_final_disentangler {
            psi = game.entangler.apply_vec(&psi, true)?;
        }
        Ok(psi.probabilities())
    } else {
        Ok(run_pipeline_with_operators(game, moves)?.outcome_probabilities())
    }
}

/// Expected payoff per player given the final state: the dot product of the
/// outcome distribution with each payoff column.
pub fn expected_payoffs<T: Scalar>(rho_f: &DensityMatrix<T>, game: &GameSpec<T>) -> Result<Vec<T>> {
    if rho_f.dim() != game.payoffs.outcomes() {
        return Err(Error::DimensionMismatch {
            expected: game.payoffs.outcomes(),
            actual: rho_f.dim(),
        });
    }
    Ok(payoffs_from_distribution(
        &rho_f.outcome_probabilities(),
        &game.payoffs,
    ))
}

/// Expected payoff per player from an outcome distribution.
pub fn payoffs_from_distribution<T: Scalar>(probs: &[T], table: &PayoffTable<T>) -> Vec<T> {
    let mut out = vec![T::zero(); table.n_players()];
    for (outcome, weight) in probs.iter().enumerate() {
        for (k, v) in table.get(outcome).iter().enumerate() {
            out[k] += *weight * *v;
        }
    }
    out
}

/// Expected per-player payoffs of a profile, via whichever pipeline path
/// applies.
pub fn profile_payoffs<T: Scalar>(
    game: &GameSpec<T>,
    profile: &StrategyProfile<T>,
) -> Result<Vec<T>> {
    Ok(payoffs_from_distribution(
        &outcome_distribution(game, profile)?,
        &game.payoffs,
    ))
}

/// Result of one penny-flip game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PennyFlipOutcome<T: Scalar> {
    pub prob_heads: T,
    pub value_to_p: T,
}

/// Meyer's PQ penny flip. The penny starts heads-up (|H> = |0>); Q moves,
/// P flips with probability `flip_prob` (the convex mix a F rho F^dag +
/// (1-a) rho), Q moves again. P scores +1 when the penny ends tails, -1
/// when it ends heads.
pub fn play_penny_flip<T: Scalar>(
    q_first: &QuantumOperator<T>,
    flip_prob: T,
    q_second: &QuantumOperator<T>,
) -> Result<PennyFlipOutcome<T>> {
    if flip_prob < T::zero() || flip_prob > T::one() {
        return Err(Error::param(format!(
            "flip probability {} outside [0, 1]",
            as_f64(flip_prob)
        )));
    }
    for op in [q_first, q_second] {
        if op.rows() != 2 || op.cols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: op.rows(),
            });
        }
        op.check_unitary()?;
    }
    let (f, _) = qops::flip_matrices::<T>();
    let heads = DensityMatrix::from_pure(&StateVector::zero_qubits(1));
    let after_q1 = heads.conjugate(q_first)?;
    let mut mixed = DensityMatrix::zero_like(2);
    mixed.add_scaled(&after_q1.conjugate(&f)?, flip_prob);
    mixed.add_scaled(&after_q1, T::one() - flip_prob);
    let final_state = mixed.conjugate(q_second)?;
    let prob_heads = final_state.get(0, 0).re;
    // Tails pays P +1, heads pays P -1.
    let value_to_p = (T::one() - prob_heads) - prob_heads;
    Ok(PennyFlipOutcome {
        prob_heads,
        value_to_p,
    })
}
