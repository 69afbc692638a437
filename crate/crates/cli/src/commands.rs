//! Implementations of the seven subcommands.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qgames::channels::ChannelKind;
use qgames::classical_mg::{self, HistoryMode};
use qgames::equilibria::{
    certify_nash, classical_random_payoff, mg_ne_profile, SearchBudget,
};
use qgames::games::rps::{coord_rps_summary, CoordinationMode};
use qgames::games::{play_penny_flip, profile_payoffs, GameSpec, StrategyProfile};
use qgames::qops::{self, Su2Params};
use qgames::scalar::cx;

use crate::config::{pick, pick_opt, ExperimentConfig};
use crate::output::{int, linspace, num, text, write_bytes, OutputFormat, Table};
use crate::{Cli, CliError, Command};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// The density-matrix path at N qubits costs 4^N; past this the sweep is
/// no longer desk-scale.
const MAX_DECOHERENCE_PLAYERS: usize = 14;

struct Ctx {
    seed: u64,
    out: Option<PathBuf>,
    format: OutputFormat,
    pool: Option<rayon::ThreadPool>,
}

impl Ctx {
    fn scoped<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    fn emit(&self, table: &Table) -> Result<(), CliError> {
        table.write(self.format, self.out.as_deref())
    }
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let pool = match pick_opt(cli.jobs, cfg.jobs) {
        Some(jobs) => {
            if jobs == 0 {
                return Err(CliError::usage("--jobs must be at least 1"));
            }
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| CliError::usage(format!("cannot build worker pool: {e}")))?,
            )
        }
        None => None,
    };
    let ctx = Ctx {
        seed: pick(cli.seed, cfg.seed, 0),
        out: pick_opt(cli.out, cfg.out.clone()),
        format: pick(cli.format, cfg.format, OutputFormat::Csv),
        pool,
    };

    match cli.command {
        Command::Pennyflip { a_points, q_strategy } => {
            cfg.check_experiment("pennyflip")?;
            cmd_pennyflip(
                &ctx,
                pick(a_points, cfg.a_points, 11),
                pick(q_strategy, cfg.q_strategy.clone(), "hadamard".into()),
            )
        }
        Command::MgSweepN { players } => {
            cfg.check_experiment("mg-sweep-n")?;
            cmd_mg_sweep_n(
                &ctx,
                pick(players, cfg.player_list.clone(), vec![4, 6, 8, 10]),
            )
        }
        Command::MgDecoherence {
            players,
            channel,
            p_points,
        } => {
            cfg.check_experiment("mg-decoherence")?;
            cmd_mg_decoherence(
                &ctx,
                pick(players, cfg.players, 4),
                parse_channel(&pick(channel, cfg.channel.clone(), "phase_damping".into()))?,
                pick(p_points, cfg.p_points, 21),
            )
        }
        Command::MgEntanglement {
            players,
            gamma_points,
        } => {
            cfg.check_experiment("mg-entanglement")?;
            cmd_mg_entanglement(
                &ctx,
                pick(players, cfg.players, 4),
                pick(gamma_points, cfg.gamma_points, 50),
            )
        }
        Command::MgClassical {
            agents,
            memory,
            strategies,
            steps,
            burn_in,
            seeds,
            history_mode,
            series,
        } => {
            cfg.check_experiment("mg-classical")?;
            let params = ClassicalParams {
                agents: pick(agents, cfg.agents, 101),
                memory: pick(memory, cfg.memory.clone(), (1..=10).collect()),
                strategies: pick(strategies, cfg.strategies, 2),
                steps: pick(steps, cfg.steps, 10_000),
                burn_in: pick_opt(burn_in, cfg.burn_in),
                seeds: pick(seeds, cfg.seeds, 10),
                history_mode: pick(history_mode, cfg.history_mode.clone(), "popular".into())
                    .parse::<HistoryMode>()
                    .map_err(|e| CliError::usage(e.to_string()))?,
                series: series || cfg.series.unwrap_or(false),
            };
            cmd_mg_classical(&ctx, params)
        }
        Command::Rps { mode, rounds } => {
            cfg.check_experiment("rps")?;
            let mode = pick(mode, cfg.mode.clone(), "entangled".into())
                .parse::<CoordinationMode>()
                .map_err(|e| CliError::usage(e.to_string()))?;
            cmd_rps(&ctx, mode, pick(rounds, cfg.rounds, 100_000))
        }
        Command::Certify {
            players,
            gamma,
            channel,
            p,
            epsilon,
            profile,
            member,
            theta,
            alpha,
            beta,
        } => {
            cfg.check_experiment("certify")?;
            let params = CertifyParams {
                players: pick(players, cfg.players, 4),
                gamma: pick(gamma, cfg.gamma, FRAC_PI_2),
                channel: parse_channel(&pick(
                    channel,
                    cfg.channel.clone(),
                    "phase_damping".into(),
                ))?,
                p: pick(p, cfg.p, 0.0),
                epsilon: pick(epsilon, cfg.epsilon, 1e-3),
                profile: pick(profile, cfg.profile.clone(), "ne".into()),
                member: pick(member, cfg.member, 0),
                theta: pick_opt(theta, cfg.theta),
                alpha: pick_opt(alpha, cfg.alpha),
                beta: pick_opt(beta, cfg.beta),
            };
            cmd_certify(&ctx, params)
        }
    }
}

fn parse_channel(name: &str) -> Result<ChannelKind, CliError> {
    name.parse::<ChannelKind>()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn cmd_pennyflip(ctx: &Ctx, a_points: usize, q_strategy: String) -> Result<u8, CliError> {
    if a_points == 0 {
        return Err(CliError::usage("--a-points must be at least 1"));
    }
    let q = match q_strategy.as_str() {
        "hadamard" => qops::meyer_u(cx::<f64>(SQRT_HALF, 0.0), cx(SQRT_HALF, 0.0))
            .map_err(CliError::from)?,
        "identity" => qops::identity2::<f64>(),
        other => {
            return Err(CliError::usage(format!(
                "unknown q-strategy '{other}' (expected hadamard | identity)"
            )))
        }
    };
    let mut table = Table::new(vec!["a", "prob_heads", "value_to_p"]);
    for a in linspace(0.0, 1.0, a_points) {
        let outcome = play_penny_flip(&q, a, &q)?;
        table.push(vec![num(a), num(outcome.prob_heads), num(outcome.value_to_p)]);
    }
    ctx.emit(&table)?;
    Ok(0)
}

fn cmd_mg_sweep_n(ctx: &Ctx, players: Vec<usize>) -> Result<u8, CliError> {
    if players.is_empty() {
        return Err(CliError::usage("--players needs at least one entry"));
    }
    for &n in &players {
        if n < 4 || n % 2 != 0 {
            return Err(CliError::usage(format!(
                "player counts must be even and >= 4, got {n}"
            )));
        }
    }
    let rows: Result<Vec<_>, CliError> = ctx.scoped(|| {
        players
            .par_iter()
            .map(|&n| {
                let game = GameSpec::<f64>::minority(n, FRAC_PI_2)?;
                let quantum = profile_payoffs(&game, &mg_ne_profile(n, 0)?)?[0];
                let classical = classical_random_payoff::<f64>(n)?;
                let pareto = (n as f64 / 2.0 - 1.0) / n as f64;
                Ok(vec![int(n), num(quantum), num(classical), num(pareto)])
            })
            .collect()
    });
    let mut table = Table::new(vec![
        "n",
        "quantum_ne_payoff",
        "classical_payoff",
        "pareto_bound",
    ]);
    table.extend(rows?);
    ctx.emit(&table)?;
    Ok(0)
}

fn cmd_mg_decoherence(
    ctx: &Ctx,
    players: usize,
    channel: ChannelKind,
    p_points: usize,
) -> Result<u8, CliError> {
    if players > MAX_DECOHERENCE_PLAYERS {
        return Err(CliError::usage(format!(
            "the decoherence sweep is limited to {MAX_DECOHERENCE_PLAYERS} players"
        )));
    }
    if p_points == 0 {
        return Err(CliError::usage("--p-points must be at least 1"));
    }
    let profile = mg_ne_profile::<f64>(players, 0)?;
    let rows: Result<Vec<_>, CliError> = ctx.scoped(|| {
        linspace(0.0, 1.0, p_points)
            .par_iter()
            .map(|&p| {
                let game = GameSpec::<f64>::minority(players, FRAC_PI_2)?
                    .with_decoherence(channel, p, p)?;
                let payoff = profile_payoffs(&game, &profile)?[0];
                Ok(vec![num(p), text(channel.name()), num(payoff)])
            })
            .collect()
    });
    let mut table = Table::new(vec!["p", "channel", "payoff"]);
    table.extend(rows?);
    ctx.emit(&table)?;
    Ok(0)
}

fn cmd_mg_entanglement(ctx: &Ctx, players: usize, gamma_points: usize) -> Result<u8, CliError> {
    if gamma_points == 0 {
        return Err(CliError::usage("--gamma-points must be at least 1"));
    }
    let profile = mg_ne_profile::<f64>(players, 0)?;
    let rows: Result<Vec<_>, CliError> = ctx.scoped(|| {
        linspace(0.0, FRAC_PI_2, gamma_points)
            .par_iter()
            .map(|&gamma| {
                let game = GameSpec::<f64>::minority(players, gamma)?;
                let payoff = profile_payoffs(&game, &profile)?[0];
                Ok(vec![num(gamma), num(payoff)])
            })
            .collect()
    });
    let mut table = Table::new(vec!["gamma", "payoff"]);
    table.extend(rows?);
    ctx.emit(&table)?;
    Ok(0)
}

struct ClassicalParams {
    agents: usize,
    memory: Vec<usize>,
    strategies: usize,
    /// Measured steps after burn-in.
    steps: usize,
    burn_in: Option<usize>,
    seeds: usize,
    history_mode: HistoryMode,
    series: bool,
}

fn cmd_mg_classical(ctx: &Ctx, params: ClassicalParams) -> Result<u8, CliError> {
    if params.memory.is_empty() {
        return Err(CliError::usage("--memory needs at least one entry"));
    }
    if params.seeds == 0 {
        return Err(CliError::usage("--seeds must be at least 1"));
    }
    let burn_for = |m: usize| {
        params
            .burn_in
            .unwrap_or_else(|| classical_mg::default_burn_in(m))
    };

    if params.series {
        if params.memory.len() != 1 {
            return Err(CliError::usage("--series needs exactly one --memory value"));
        }
        let m = params.memory[0];
        let stats = classical_mg::run_with_mode::<f64>(
            params.agents,
            m,
            params.strategies,
            burn_for(m) + params.steps,
            burn_for(m),
            params.history_mode,
            ctx.seed,
        )?;
        let mut table = Table::new(vec!["t", "attendance", "winning_side"]);
        for (t, (attendance, winning)) in stats
            .series
            .iter()
            .zip(stats.winning_sides.iter())
            .enumerate()
        {
            table.push(vec![int(t), int(*attendance as usize), int(*winning as usize)]);
        }
        ctx.emit(&table)?;
        return Ok(0);
    }

    // One run per (memory, seed) pair; rows come back in grid order.
    let points: Vec<(usize, u64)> = params
        .memory
        .iter()
        .flat_map(|&m| (0..params.seeds as u64).map(move |s| (m, s)))
        .collect();
    let runs: Result<Vec<_>, CliError> = ctx.scoped(|| {
        points
            .par_iter()
            .map(|&(m, offset)| {
                let stats = classical_mg::run_with_mode::<f64>(
                    params.agents,
                    m,
                    params.strategies,
                    burn_for(m) + params.steps,
                    burn_for(m),
                    params.history_mode,
                    ctx.seed + offset,
                )?;
                Ok((m, stats))
            })
            .collect()
    });
    let runs = runs?;

    if ctx.format == OutputFormat::Json {
        // Per-run summaries.
        let mut table = Table::new(vec![
            "n_agents",
            "memory",
            "strategies",
            "seed",
            "sigma",
            "mean_fraction",
        ]);
        for (m, stats) in &runs {
            table.push(vec![
                int(params.agents),
                int(*m),
                int(params.strategies),
                int(stats.seed as usize),
                num(stats.sigma),
                num(stats.mean_fraction),
            ]);
        }
        ctx.emit(&table)?;
        return Ok(0);
    }

    let mut table = Table::new(vec![
        "m",
        "sigma_mean",
        "sigma_spread",
        "mean_fraction",
        "strategy_space_size",
    ]);
    for &m in &params.memory {
        let sigmas: Vec<f64> = runs
            .iter()
            .filter(|(rm, _)| *rm == m)
            .map(|(_, s)| s.sigma)
            .collect();
        let fractions: Vec<f64> = runs
            .iter()
            .filter(|(rm, _)| *rm == m)
            .map(|(_, s)| s.mean_fraction)
            .collect();
        let mean = sigmas.iter().sum::<f64>() / sigmas.len() as f64;
        let spread = (sigmas
            .iter()
            .map(|s| (s - mean) * (s - mean))
            .sum::<f64>()
            / sigmas.len() as f64)
            .sqrt();
        let mean_fraction = fractions.iter().sum::<f64>() / fractions.len() as f64;
        table.push(vec![
            int(m),
            num(mean),
            num(spread),
            num(mean_fraction),
            text(classical_mg::strategy_space_size(m).to_string()),
        ]);
    }
    ctx.emit(&table)?;
    Ok(0)
}

fn cmd_rps(ctx: &Ctx, mode: CoordinationMode, rounds: usize) -> Result<u8, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let summary = coord_rps_summary::<f64, _>(mode, rounds, &mut rng)?;
    let mut table = Table::new(vec![
        "mode",
        "rounds",
        "win_probability",
        "mean_table3_payoff",
    ]);
    table.push(vec![
        text(mode.to_string()),
        int(rounds),
        num(summary.win_probability),
        num(summary.mean_table3_payoff),
    ]);
    ctx.emit(&table)?;
    Ok(0)
}

struct CertifyParams {
    players: usize,
    gamma: f64,
    channel: ChannelKind,
    p: f64,
    epsilon: f64,
    profile: String,
    member: usize,
    theta: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
}

fn cmd_certify(ctx: &Ctx, params: CertifyParams) -> Result<u8, CliError> {
    if params.p > 0.0 && params.players > MAX_DECOHERENCE_PLAYERS {
        return Err(CliError::usage(format!(
            "certification under decoherence is limited to {MAX_DECOHERENCE_PLAYERS} players"
        )));
    }
    let game = GameSpec::<f64>::minority(params.players, params.gamma)?
        .with_decoherence(params.channel, params.p, params.p)?;
    let profile: StrategyProfile<f64> = match params.profile.as_str() {
        "ne" => mg_ne_profile(params.players, params.member)?,
        "identity" => StrategyProfile::all_identity(params.players),
        "custom" => {
            let (Some(theta), Some(alpha), Some(beta)) =
                (params.theta, params.alpha, params.beta)
            else {
                return Err(CliError::usage(
                    "--profile custom needs --theta, --alpha, and --beta",
                ));
            };
            StrategyProfile::symmetric(Su2Params::new(theta, alpha, beta)?, params.players)
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown profile '{other}' (expected ne | identity | custom)"
            )))
        }
    };
    let certificate = ctx.scoped(|| {
        certify_nash(&game, &profile, params.epsilon, &SearchBudget::default())
    })?;
    let mut bytes = serde_json::to_vec_pretty(&certificate)?;
    bytes.push(b'\n');
    write_bytes(&bytes, ctx.out.as_deref())?;
    Ok(if certificate.certified { 0 } else { 3 })
}
