//! Numerical Nash-equilibrium machinery: unilateral-deviation search over
//! SU(2), epsilon-Nash certification, symmetric-strategy optimization, and
//! the closed NE family of the even-N quantum Minority game.
//!
//! Deviation searches cover pure unitaries only. A mixed deviation cannot
//! beat the best pure one: the deviator's payoff is linear in its mixture
//! weights, so the maximum over the simplex sits at a vertex. The
//! mixed-move linearity test in `games` pins the premise down.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::{
    outcome_distribution_with_operators, payoffs_from_distribution, GameSpec, Move, MoveOperator,
    StrategyProfile,
};
use crate::qops::{su2, Su2Params};
use crate::scalar::Scalar;

/// Search effort knobs. The defaults (13^3 grid, 4 halving rounds refined
/// down to 1e-3 rad, 4 restart cells) are what every caller in this crate
/// uses unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchBudget<T: Scalar> {
    /// Grid points per axis over theta in [0, pi], alpha and beta in
    /// [-pi, pi]. At least 9 per axis for a meaningful coarse pass.
    pub grid_points: usize,
    /// Minimum number of step-halving rounds of coordinate descent.
    pub refine_rounds: usize,
    /// How many of the best distinct grid cells get refined.
    pub refine_starts: usize,
    /// Refinement continues until the step reaches this size (radians).
    pub min_step: T,
    /// Hard cap on payoff evaluations.
    pub max_evals: usize,
}

impl<T: Scalar> Default for SearchBudget<T> {
    fn default() -> Self {
        Self {
            grid_points: 13,
            refine_rounds: 4,
            refine_starts: 4,
            min_step: T::from_f64(1e-3),
            max_evals: 50_000,
        }
    }
}

impl<T: Scalar> SearchBudget<T> {
    fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::param("grid needs at least 2 points per axis"));
        }
        let grid_size = self.grid_points.pow(3);
        if self.max_evals < grid_size {
            return Err(Error::param(format!(
                "evaluation budget {} below the coarse grid size {}",
                self.max_evals, grid_size
            )));
        }
        if self.refine_starts == 0 {
            return Err(Error::param("need at least one refinement start"));
        }
        Ok(())
    }
}

/// Outcome of a single-player best-response search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport<T: Scalar> {
    pub player: usize,
    pub baseline_payoff: T,
    pub best_payoff: T,
    /// best - baseline; never materially negative because the player's own
    /// move is among the search seeds.
    pub gain: T,
    pub best_params: Su2Params<T>,
    pub evals_used: usize,
}

/// Certification result: one deviation report per player.
#[derive(Debug, Clone, Serialize)]
pub struct NeCertificate<T: Scalar> {
    pub profile: StrategyProfile<T>,
    pub epsilon: T,
    pub reports: Vec<DeviationReport<T>>,
    pub max_gain: T,
    pub certified: bool,
}

struct Search<'a, F, T: Scalar> {
    eval: F,
    budget: &'a SearchBudget<T>,
    evals: usize,
}

impl<'a, F, T> Search<'a, F, T>
where
    T: Scalar,
    F: FnMut(Su2Params<T>) -> T,
{
    fn new(eval: F, budget: &'a SearchBudget<T>) -> Self {
        Self {
            eval,
            budget,
            evals: 0,
        }
    }

    fn try_eval(&mut self, params: Su2Params<T>) -> Option<T> {
        if self.evals >= self.budget.max_evals {
            return None;
        }
        self.evals += 1;
        Some((self.eval)(params))
    }

    /// Coarse grid plus extra seeds, then coordinate descent with step
    /// halving from the best `refine_starts` cells. Fully deterministic.
    fn run(&mut self, extra_seeds: &[Su2Params<T>]) -> (Su2Params<T>, T) {
        let g = self.budget.grid_points;
        let theta_step = T::PI() / T::from_usize(g - 1);
        let phase_step = (T::PI() + T::PI()) / T::from_usize(g - 1);

        let mut candidates: Vec<(Su2Params<T>, T)> = Vec::with_capacity(g * g * g);
        for i in 0..g {
            let theta = theta_step * T::from_usize(i);
            for j in 0..g {
                let alpha = -T::PI() + phase_step * T::from_usize(j);
                for k in 0..g {
                    let beta = -T::PI() + phase_step * T::from_usize(k);
                    let params = Su2Params::canonicalized(theta, alpha, beta);
                    if let Some(v) = self.try_eval(params) {
                        candidates.push((params, v));
                    }
                }
            }
        }
        for seed in extra_seeds {
            if let Some(v) = self.try_eval(*seed) {
                candidates.push((*seed, v));
            }
        }
        // Stable sort by value, descending; index order breaks ties, so
        // the start set is deterministic.
        candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite payoffs"));
        let starts = candidates.len().min(self.budget.refine_starts);

        let mut best = candidates[0];
        for &(params, value) in candidates.iter().take(starts) {
            let refined = self.descend(params, value, theta_step, phase_step);
            if refined.1 > best.1 {
                best = refined;
            }
        }
        best
    }

    fn descend(
        &mut self,
        start: Su2Params<T>,
        start_value: T,
        theta_step: T,
        phase_step: T,
    ) -> (Su2Params<T>, T) {
        let mut best = (start, start_value);
        let mut steps = [theta_step, phase_step, phase_step];
        let half = T::from_f64(0.5);
        // Enough halvings to push the largest step below min_step, but at
        // least the configured round count.
        let spacing = crate::scalar::as_f64(theta_step.max(phase_step));
        let min_step = crate::scalar::as_f64(self.budget.min_step).max(1e-9);
        let needed = (spacing / min_step).log2().ceil().max(0.0) as usize + 1;
        let rounds = self.budget.refine_rounds.max(needed);

        for _ in 0..rounds {
            loop {
                let mut improved = false;
                for (axis, step) in steps.iter().copied().enumerate() {
                    for dir in [T::one(), -T::one()] {
                        let delta = step * dir;
                        let (theta, alpha, beta) = (best.0.theta, best.0.alpha, best.0.beta);
                        let candidate = match axis {
                            0 => Su2Params::canonicalized(theta + delta, alpha, beta),
                            1 => Su2Params::canonicalized(theta, alpha + delta, beta),
                            _ => Su2Params::canonicalized(theta, alpha, beta + delta),
                        };
                        match self.try_eval(candidate) {
                            Some(v) if v > best.1 => {
                                best = (candidate, v);
                                improved = true;
                            }
                            Some(_) => {}
                            None => return best,
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            for s in steps.iter_mut() {
                *s *= half;
            }
        }
        best
    }
}

/// Payoff to `player` when it deviates to `params` while everyone else
/// keeps the profile move.
fn deviation_eval<T: Scalar>(
    game: &GameSpec<T>,
    template: &[MoveOperator<T>],
    player: usize,
    params: Su2Params<T>,
) -> T {
    let mut moves = template.to_vec();
    moves[player] = MoveOperator::Pure(su2(params));
    let probs = outcome_distribution_with_operators(game, &moves)
        .expect("validated profile stays valid under pure deviation");
    payoffs_from_distribution(&probs, game.payoffs())[player]
}

/// Best-response search for one player with all others held fixed.
pub fn best_response_gain<T: Scalar>(
    game: &GameSpec<T>,
    profile: &StrategyProfile<T>,
    player: usize,
    budget: &SearchBudget<T>,
) -> Result<DeviationReport<T>> {
    budget.validate()?;
    if profile.len() != game.n_players() {
        return Err(Error::DimensionMismatch {
            expected: game.n_players(),
            actual: profile.len(),
        });
    }
    if player >= game.n_players() {
        return Err(Error::param(format!(
            "player {player} out of range for {} players",
            game.n_players()
        )));
    }
    let template = profile.to_operators();
    let probs = outcome_distribution_with_operators(game, &template)?;
    let baseline = payoffs_from_distribution(&probs, game.payoffs())[player];

    // The deviation space contains the baseline move: seed the search with
    // the player's own parameters (every branch, for a mixed move).
    let seeds: Vec<Su2Params<T>> = match &profile.moves()[player] {
        Move::Pure(p) => vec![*p],
        Move::Mixed(branches) => branches.iter().map(|(_, p)| *p).collect(),
    };

    let mut search = Search::new(
        |params| deviation_eval(game, &template, player, params),
        budget,
    );
    let (best_params, best_payoff) = search.run(&seeds);
    Ok(DeviationReport {
        player,
        baseline_payoff: baseline,
        best_payoff,
        gain: best_payoff - baseline,
        best_params,
        evals_used: search.evals,
    })
}

/// Runs the deviation search for every player; the profile is certified as
/// an epsilon-NE when no player gains more than epsilon.
pub fn certify_nash<T: Scalar>(
    game: &GameSpec<T>,
    profile: &StrategyProfile<T>,
    epsilon: T,
    budget: &SearchBudget<T>,
) -> Result<NeCertificate<T>> {
    if epsilon <= T::zero() {
        return Err(Error::param("epsilon must be positive"));
    }
    let reports: Vec<DeviationReport<T>> = (0..game.n_players())
        .map(|player| best_response_gain(game, profile, player, budget))
        .collect::<Result<_>>()?;
    let max_gain = reports
        .iter()
        .map(|r| r.gain)
        .fold(T::neg_infinity(), T::max);
    Ok(NeCertificate {
        profile: profile.clone(),
        epsilon,
        reports,
        max_gain,
        certified: max_gain <= epsilon,
    })
}

/// Maximizes the common payoff over one SU(2) strategy played by all
/// players. Returns the argmax and its payoff.
pub fn optimize_symmetric<T: Scalar>(
    game: &GameSpec<T>,
    budget: &SearchBudget<T>,
) -> Result<(Su2Params<T>, T)> {
    budget.validate()?;
    let n = game.n_players();
    let mut search = Search::new(
        |params| {
            let moves = vec![MoveOperator::Pure(su2(params)); n];
            let probs = outcome_distribution_with_operators(game, &moves)
                .expect("symmetric pure profiles are always valid");
            payoffs_from_distribution(&probs, game.payoffs())[0]
        },
        budget,
    );
    let (params, payoff) = search.run(&[]);
    Ok((params, payoff))
}

/// One member of the even-N Minority-game NE family.
///
/// The family was reconstructed by running [`optimize_symmetric`] on the
/// four-player maximally entangled game and reading off the argmax
/// structure: theta = pi/2 with opposite phases of magnitude
/// delta = pi/(4N), i.e. U(pi/2, -delta, delta) for the canonical member.
/// Member `n` shifts the phases by +- pi n / N, which leaves the symmetric
/// payoff unchanged but makes mismatched-member payoffs depend on the index
/// sum, the signature this family is known by.
pub fn mg_ne_move<T: Scalar>(n_players: usize, member: usize) -> Result<Su2Params<T>> {
    if n_players < 4 || !n_players.is_multiple_of(2) {
        return Err(Error::param(format!(
            "the quantum Minority NE family needs an even player count >= 4, got {n_players}; \
             odd games collapse to the classical payoff"
        )));
    }
    let n = T::from_usize(n_players);
    let delta = T::PI() / (T::from_f64(4.0) * n);
    let shift = T::PI() * T::from_usize(member % n_players) / n;
    Ok(Su2Params::canonicalized(
        T::FRAC_PI_2(),
        -delta + shift,
        delta - shift,
    ))
}

/// Symmetric profile in which every player uses NE-family member `member`.
pub fn mg_ne_profile<T: Scalar>(n_players: usize, member: usize) -> Result<StrategyProfile<T>> {
    Ok(StrategyProfile::symmetric(
        mg_ne_move(n_players, member)?,
        n_players,
    ))
}

/// Exact expected Minority payoff per player when every one of N players
/// chooses a side uniformly at random, by exhaustive enumeration of the
/// 2^N outcomes. The count is an integer and the scale a power of two, so
/// the division below is error-free in binary floating point.
pub fn classical_random_payoff<T: Scalar>(n_players: usize) -> Result<T> {
    if n_players < 2 {
        return Err(Error::param("need at least two players"));
    }
    if n_players > 30 {
        return Err(Error::param(
            "enumeration over 2^N outcomes is impractical beyond N = 30",
        ));
    }
    let outcomes = 1usize << n_players;
    let mut wins = 0usize;
    for outcome in 0..outcomes {
        let ones = outcome.count_ones() as usize;
        let zeros = n_players - ones;
        // Count wins for player 1 (the most significant bit); symmetry
        // makes the value identical for every player.
        let bit = outcome >> (n_players - 1) & 1;
        if (bit == 1 && ones < zeros) || (bit == 0 && zeros < ones) {
            wins += 1;
        }
    }
    Ok(T::from_usize(wins) / T::from_usize(outcomes))
}
