//! Coordinated rock-paper-scissors: two allies against a third player.
//!
//! In entangled mode the allies share a maximally entangled qutrit pair
//! (|00> + |11> + |22>)/sqrt(3); a computational-basis measurement hands
//! both the same uniformly random symbol, so their choices never differ and
//! their win probability against a random opponent is 1/3. Independent
//! play only agrees a third of the time, for 1/9 overall.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::StateVector;
use crate::scalar::{as_f64, cx, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RpsChoice {
    Rock,
    Paper,
    Scissors,
}

impl RpsChoice {
    pub const ALL: [RpsChoice; 3] = [RpsChoice::Rock, RpsChoice::Paper, RpsChoice::Scissors];

    pub fn index(&self) -> usize {
        match self {
            RpsChoice::Rock => 0,
            RpsChoice::Paper => 1,
            RpsChoice::Scissors => 2,
        }
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 3]
    }

    pub fn beats(&self, other: RpsChoice) -> bool {
        matches!(
            (self, other),
            (RpsChoice::Rock, RpsChoice::Scissors)
                | (RpsChoice::Paper, RpsChoice::Rock)
                | (RpsChoice::Scissors, RpsChoice::Paper)
        )
    }
}

impl fmt::Display for RpsChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RpsChoice::Rock => "rock",
            RpsChoice::Paper => "paper",
            RpsChoice::Scissors => "scissors",
        };
        f.write_str(s)
    }
}

impl FromStr for RpsChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rock" => Ok(RpsChoice::Rock),
            "paper" => Ok(RpsChoice::Paper),
            "scissors" => Ok(RpsChoice::Scissors),
            other => Err(Error::param(format!("unknown choice '{other}'"))),
        }
    }
}

/// How the two allies pick their (ideally common) symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinationMode {
    Entangled,
    Independent,
}

impl fmt::Display for CoordinationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordinationMode::Entangled => "entangled",
            CoordinationMode::Independent => "independent",
        })
    }
}

impl FromStr for CoordinationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entangled" => Ok(CoordinationMode::Entangled),
            "independent" => Ok(CoordinationMode::Independent),
            other => Err(Error::param(format!("unknown coordination mode '{other}'"))),
        }
    }
}

/// The shared resource: (|00> + |11> + |22>)/sqrt(3) on a qutrit pair.
pub fn qutrit_pair_state<T: Scalar>() -> StateVector<T> {
    let w = (1.0f64 / 3.0).sqrt();
    let mut amps = vec![cx(0.0, 0.0); 9];
    for k in 0..3 {
        amps[k * 3 + k] = cx(w, 0.0);
    }
    StateVector::new(3, amps).expect("static state")
}

/// Zero-sum payoff (allies, third) when the allies agree on `allies`.
pub fn table3_payoff<T: Scalar>(allies: RpsChoice, third: RpsChoice) -> (T, T) {
    if allies.beats(third) {
        (T::one(), -T::one())
    } else if third.beats(allies) {
        (-T::one(), T::one())
    } else {
        (T::zero(), T::zero())
    }
}

/// One resolved round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RpsRound<T: Scalar> {
    pub ally_a: RpsChoice,
    pub ally_b: RpsChoice,
    pub third: RpsChoice,
    /// Payoff to each ally: the table value when they agree, 0 otherwise.
    pub ally_payoff: T,
    pub third_payoff: T,
    pub allies_win: bool,
}

/// Plays one round. `third_choice = None` draws the opponent uniformly.
pub fn coord_rps_round<T: Scalar, R: Rng + ?Sized>(
    mode: CoordinationMode,
    third_choice: Option<RpsChoice>,
    rng: &mut R,
) -> RpsRound<T> {
    let (ally_a, ally_b) = match mode {
        CoordinationMode::Entangled => {
            let outcome = measure_qutrit_pair::<T, R>(rng);
            (RpsChoice::from_index(outcome / 3), RpsChoice::from_index(outcome % 3))
        }
        CoordinationMode::Independent => (
            RpsChoice::from_index(rng.random_range(0..3)),
            RpsChoice::from_index(rng.random_range(0..3)),
        ),
    };
    let third = third_choice.unwrap_or_else(|| RpsChoice::from_index(rng.random_range(0..3)));
    if ally_a != ally_b {
        // Uncoordinated allies score nothing and hand the round to the
        // third player.
        return RpsRound {
            ally_a,
            ally_b,
            third,
            ally_payoff: T::zero(),
            third_payoff: T::one(),
            allies_win: false,
        };
    }
    let (ally_payoff, third_payoff) = table3_payoff::<T>(ally_a, third);
    RpsRound {
        ally_a,
        ally_b,
        third,
        ally_payoff,
        third_payoff,
        allies_win: ally_a.beats(third),
    }
}

/// Computational-basis measurement of the shared qutrit pair, returning the
/// joint outcome index in 0..9.
fn measure_qutrit_pair<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> usize {
    let probs = qutrit_pair_state::<T>().probabilities();
    let draw: f64 = rng.random();
    let mut acc = 0.0f64;
    let mut last_nonzero = 0;
    for (idx, p) in probs.iter().enumerate() {
        let p = as_f64(*p);
        if p > 0.0 {
            last_nonzero = idx;
        }
        acc += p;
        if draw < acc {
            return idx;
        }
    }
    last_nonzero
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RpsSummary<T: Scalar> {
    pub rounds: usize,
    pub win_probability: T,
    pub mean_table3_payoff: T,
}

/// Monte-Carlo estimate of the allies' win probability against a uniformly
/// random third player.
pub fn coord_rps_win_probability<T: Scalar, R: Rng + ?Sized>(
    mode: CoordinationMode,
    n_rounds: usize,
    rng: &mut R,
) -> Result<T> {
    Ok(coord_rps_summary::<T, R>(mode, n_rounds, rng)?.win_probability)
}

/// Win-rate and mean ally payoff over `n_rounds` seeded rounds.
pub fn coord_rps_summary<T: Scalar, R: Rng + ?Sized>(
    mode: CoordinationMode,
    n_rounds: usize,
    rng: &mut R,
) -> Result<RpsSummary<T>> {
    if n_rounds == 0 {
        return Err(Error::param("need at least one round"));
    }
    let mut wins = 0usize;
    let mut payoff_total = T::zero();
    for _ in 0..n_rounds {
        let round = coord_rps_round::<T, R>(mode, None, rng);
        if round.allies_win {
            wins += 1;
        }
        payoff_total += round.ally_payoff;
    }
    let n = T::from_usize(n_rounds);
    Ok(RpsSummary {
        rounds: n_rounds,
        win_probability: T::from_usize(wins) / n,
        mean_table3_payoff: payoff_total / n,
    })
}
