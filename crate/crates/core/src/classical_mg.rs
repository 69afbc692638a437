//! Agent-based classical Minority game.
//!
//! Each of N (odd) agents holds s random lookup-table strategies over the
//! last m public symbols. Every step each agent plays its highest-scoring
//! table (coin-toss tie-breaks), the strict minority side wins, and every
//! table that predicted the winning side (played or not) gains a point of
//! virtual value. The public symbol appended to the history is configurable:
//! the most popular side (default) or the winning side, since both
//! conventions appear in the literature.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lookup table from an m-symbol history to a side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyTable {
    memory: usize,
    outputs: Vec<u8>,
}

impl StrategyTable {
    pub fn random<R: Rng + ?Sized>(memory: usize, rng: &mut R) -> Self {
        let outputs = (0..(1usize << memory))
            .map(|_| rng.random_range(0..2u8))
            .collect();
        Self { memory, outputs }
    }

    pub fn from_outputs(memory: usize, outputs: Vec<u8>) -> Result<Self> {
        if outputs.len() != 1 << memory {
            return Err(Error::DimensionMismatch {
                expected: 1 << memory,
                actual: outputs.len(),
            });
        }
        if outputs.iter().any(|&o| o > 1) {
            return Err(Error::param("table outputs must be 0 or 1"));
        }
        Ok(Self { memory, outputs })
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    #[inline]
    pub fn output(&self, history: usize) -> u8 {
        self.outputs[history]
    }
}

/// One agent: its strategy tables and their running virtual values.
#[derive(Debug, Clone)]
pub struct Agent {
    tables: Vec<StrategyTable>,
    virtual_values: Vec<u64>,
}

impl Agent {
    pub fn new(tables: Vec<StrategyTable>) -> Self {
        let n = tables.len();
        Self {
            tables,
            virtual_values: vec![0; n],
        }
    }

    pub fn tables(&self) -> &[StrategyTable] {
        &self.tables
    }

    pub fn virtual_values(&self) -> &[u64] {
        &self.virtual_values
    }

    /// Index of the highest-valued table, coin-tossing among ties.
    fn choose_table<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let best = *self.virtual_values.iter().max().expect("s >= 1");
        let tied: Vec<usize> = self
            .virtual_values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == best)
            .map(|(i, _)| i)
            .collect();
        if tied.len() == 1 {
            tied[0]
        } else {
            tied[rng.random_range(0..tied.len())]
        }
    }
}

/// Which public symbol the history records each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistoryMode {
    /// Record the majority (most popular) side.
    #[default]
    Popular,
    /// Record the winning (minority) side.
    Winning,
}

impl std::str::FromStr for HistoryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "popular" => Ok(HistoryMode::Popular),
            "winning" => Ok(HistoryMode::Winning),
            other => Err(Error::param(format!("unknown history mode '{other}'"))),
        }
    }
}

/// Full game state plus the attendance record.
#[derive(Debug, Clone)]
pub struct MgState {
    n_agents: usize,
    memory: usize,
    history_mode: HistoryMode,
    history: usize,
    agents: Vec<Agent>,
    t: usize,
    attendance: Vec<u32>,
    winning_sides: Vec<u8>,
}

impl MgState {
    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn history(&self) -> usize {
        self.history
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    /// Per-step count of agents choosing side 0.
    pub fn attendance(&self) -> &[u32] {
        &self.attendance
    }

    pub fn winning_sides(&self) -> &[u8] {
        &self.winning_sides
    }

    /// Advances the game one step; returns (side-0 attendance, winner).
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (u32, u8) {
        let h = self.history;
        let mut attendance0 = 0u32;
        for agent in &self.agents {
            let table = agent.choose_table(rng);
            if agent.tables[table].output(h) == 0 {
                attendance0 += 1;
            }
        }
        let n = self.n_agents as u32;
        // Strict minority wins; unanimity leaves the other side "winning"
        // with zero members rewarded.
        let winning = if 2 * attendance0 < n { 0u8 } else { 1u8 };
        for agent in self.agents.iter_mut() {
            for (table, value) in agent.tables.iter().zip(agent.virtual_values.iter_mut()) {
                if table.output(h) == winning {
                    *value += 1;
                }
            }
        }
        let symbol = match self.history_mode {
            HistoryMode::Popular => 1 - winning,
            HistoryMode::Winning => winning,
        };
        let mask = (1usize << self.memory) - 1;
        self.history = ((self.history << 1) | symbol as usize) & mask;
        self.t += 1;
        self.attendance.push(attendance0);
        self.winning_sides.push(winning);
        (attendance0, winning)
    }

    #[cfg(test)]
    fn hand_built(agents: Vec<Agent>, memory: usize, mode: HistoryMode, history: usize) -> Self {
        Self {
            n_agents: agents.len(),
            memory,
            history_mode: mode,
            history,
            agents,
            t: 0,
            attendance: Vec::new(),
            winning_sides: Vec::new(),
        }
    }
}

/// Builds a fresh population: `n` agents with `s` independent random
/// tables of memory `m` each, zero virtual values, random initial history.
pub fn init_population<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    s: usize,
    rng: &mut R,
) -> Result<MgState> {
    init_population_with_mode(n, m, s, HistoryMode::default(), rng)
}

pub fn init_population_with_mode<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    s: usize,
    history_mode: HistoryMode,
    rng: &mut R,
) -> Result<MgState> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::param(format!(
            "need an odd number of agents >= 3, got {n}"
        )));
    }
    if m == 0 || m > 20 {
        return Err(Error::param(format!("memory {m} outside 1..=20")));
    }
    if s == 0 {
        return Err(Error::param("each agent needs at least one strategy"));
    }
    let agents = (0..n)
        .map(|_| Agent::new((0..s).map(|_| StrategyTable::random(m, rng)).collect()))
        .collect();
    let history = rng.random_range(0..(1usize << m));
    Ok(MgState {
        n_agents: n,
        memory: m,
        history_mode,
        history,
        agents,
        t: 0,
        attendance: Vec::new(),
        winning_sides: Vec::new(),
    })
}

/// Summary statistics of one run.
#[derive(Debug, Clone, Serialize)]
pub struct MgStats<T: Scalar> {
    pub n_agents: usize,
    pub memory: usize,
    pub strategies: usize,
    pub seed: u64,
    pub steps: usize,
    pub burn_in: usize,
    /// Mean of attendance/N over the post-burn-in window.
    pub mean_fraction: T,
    /// Population standard deviation of the post-burn-in attendance counts.
    pub sigma: T,
    #[serde(skip)]
    pub series: Vec<u32>,
    #[serde(skip)]
    pub winning_sides: Vec<u8>,
}

/// Default burn-in: enough steps to leave the virtual-value transient at
/// any memory length.
pub fn default_burn_in(memory: usize) -> usize {
    1000.max(10 * (1usize << memory))
}

/// Runs the game for `steps` total steps and reports statistics over the
/// post-burn-in window. Deterministic for a given seed.
pub fn run<T: Scalar>(
    n: usize,
    m: usize,
    s: usize,
    steps: usize,
    burn_in: usize,
    seed: u64,
) -> Result<MgStats<T>> {
    run_with_mode(n, m, s, steps, burn_in, HistoryMode::default(), seed)
}

pub fn run_with_mode<T: Scalar>(
    n: usize,
    m: usize,
    s: usize,
    steps: usize,
    burn_in: usize,
    history_mode: HistoryMode,
    seed: u64,
) -> Result<MgStats<T>> {
    if steps <= burn_in {
        return Err(Error::param(format!(
            "steps ({steps}) must exceed burn-in ({burn_in})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = init_population_with_mode(n, m, s, history_mode, &mut rng)?;
    for _ in 0..steps {
        state.step(&mut rng);
    }
    let window = &state.attendance[burn_in..];
    let count = T::from_usize(window.len());
    let mean: T = window
        .iter()
        .map(|&a| T::from_usize(a as usize))
        .sum::<T>()
        / count;
    let var: T = window
        .iter()
        .map(|&a| {
            let d = T::from_usize(a as usize) - mean;
            d * d
        })
        .sum::<T>()
        / count;
    Ok(MgStats {
        n_agents: n,
        memory: m,
        strategies: s,
        seed,
        steps,
        burn_in,
        mean_fraction: mean / T::from_usize(n),
        sigma: var.sqrt(),
        series: state.attendance,
        winning_sides: state.winning_sides,
    })
}

/// Number of distinct strategy tables at memory m: 2^(2^m), exactly.
pub fn strategy_space_size(m: usize) -> BigUint {
    BigUint::from(1u8) << (1usize << m)
}
