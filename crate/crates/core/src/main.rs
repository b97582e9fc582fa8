use std::f64::consts::{FRAC_PI_8, TAU};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qparrondo::classical::{
    run_classical, ClassicalConfig, ClassicalKind, CooperativeParams, InitialFlags, OriginalParams,
    UpdateOrder,
};
use qparrondo::discriminator::{DiscriminationMode, Discriminator};
use qparrondo::engine::{run_averaged, GameScheme, Granularity, SimulationConfig, DEFAULT_ROUNDS};
use qparrondo::io as csvio;
use qparrondo::sweep::{
    default_omega_values, default_rho4_values, default_schemes, sweep_entanglement,
    sweep_phase_map, sweep_rho4, PhaseGrid, SweepPoint,
};
use qparrondo::{initial_coin_state, InitialCoinKind, PayoffSeries};

#[derive(Parser)]
#[command(
    name = "qparrondo",
    version,
    about = "Cooperative quantum Parrondo games on a three-axis quantum walk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write the per-round gain series.
    Run(RunArgs),
    /// Final gains as a function of rho4.
    SweepRho4(SweepRho4Args),
    /// Final gains on a (theta, phi) grid.
    SweepPhase(SweepPhaseArgs),
    /// Final gains as a function of the initial entanglement omega.
    SweepOmega(SweepOmegaArgs),
    /// Classify a coin state as GHZ or W from game-A payoffs.
    Discriminate(DiscriminateArgs),
    /// Classical Monte Carlo baseline.
    Classical(ClassicalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialArg {
    Ghz,
    W,
    Separable,
    J,
}

/// Flags shared by every quantum subcommand. Unset flags keep the value from
/// `--config`, or the built-in default.
#[derive(Args)]
struct SimArgs {
    /// JSON file with SimulationConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    initial: Option<InitialArg>,
    /// Entanglement of the `j` initial state, in [0, π/2].
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Number of rounds [default: 16].
    #[arg(long)]
    rounds: Option<usize>,
    /// Game-A coin [default: 0.5].
    #[arg(long, allow_hyphen_values = true)]
    rho0: Option<f64>,
    /// Game-B coin, both neighbours R [default: 0.5].
    #[arg(long, allow_hyphen_values = true)]
    rho1: Option<f64>,
    /// Game-B coin, neighbours R, L [default: 0.5].
    #[arg(long, allow_hyphen_values = true)]
    rho2: Option<f64>,
    /// Game-B coin, neighbours L, R [default: 0.5].
    #[arg(long, allow_hyphen_values = true)]
    rho3: Option<f64>,
    /// Game-B coin, both neighbours L [default: 0.5].
    #[arg(long, allow_hyphen_values = true)]
    rho4: Option<f64>,
    /// Phase theta of every coin [default: π/2].
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Phase phi of every coin [default: π/2].
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Runs averaged for the random mix [default: 10].
    #[arg(long)]
    runs: Option<usize>,
    /// What one schedule entry covers: `toss` or `round` [default: toss].
    #[arg(long)]
    granularity: Option<Granularity>,
}

impl SimArgs {
    fn config(&self) -> Result<SimulationConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing {}", path.display()))?
            }
            None => SimulationConfig::default(),
        };
        if let Some(initial) = self.initial {
            c.initial = match initial {
                InitialArg::Ghz => InitialCoinKind::Ghz,
                InitialArg::W => InitialCoinKind::W,
                InitialArg::Separable => InitialCoinKind::Separable,
                InitialArg::J => match (self.omega, c.initial) {
                    (Some(omega), _) | (None, InitialCoinKind::JEntangled(omega)) => {
                        InitialCoinKind::JEntangled(omega)
                    }
                    (None, _) => bail!("--initial j needs --omega"),
                },
            };
        }
        if let Some(omega) = self.omega {
            match c.initial {
                InitialCoinKind::JEntangled(_) => c.initial = InitialCoinKind::JEntangled(omega),
                _ => bail!("--omega only applies to --initial j"),
            }
        }
        if let Some(r) = self.rounds {
            c.rounds = r;
        }
        let rhos = [
            (self.rho0, &mut c.rho0),
            (self.rho1, &mut c.game_b.ww),
            (self.rho2, &mut c.game_b.wl),
            (self.rho3, &mut c.game_b.lw),
            (self.rho4, &mut c.game_b.ll),
        ];
        for (flag, coin) in rhos {
            if let Some(rho) = flag {
                coin.rho = rho;
            }
        }
        for coin in [
            &mut c.rho0,
            &mut c.game_b.ww,
            &mut c.game_b.wl,
            &mut c.game_b.lw,
            &mut c.game_b.ll,
        ] {
            coin.theta = self.theta.unwrap_or(coin.theta);
            coin.phi = self.phi.unwrap_or(coin.phi);
        }
        if let Some(seed) = self.seed {
            c.seed = seed;
        }
        if let Some(runs) = self.runs {
            c.runs = runs;
        }
        if let Some(g) = self.granularity {
            c.granularity = g;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// a, b, mix or periodic:M,N [default: a].
    #[arg(long)]
    scheme: Option<GameScheme>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// Scheme to report; repeatable [default: a, b, periodic:2,2, mix].
    #[arg(long)]
    scheme: Vec<GameScheme>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn schemes(&self) -> Vec<GameScheme> {
        if self.scheme.is_empty() {
            default_schemes()
        } else {
            self.scheme.clone()
        }
    }
}

#[derive(Args)]
struct SweepRho4Args {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Comma-separated rho4 values [default: 0.1,0.2,…,0.9].
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
}

#[derive(Args)]
struct SweepPhaseArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Grid step in radians [default: π/8].
    #[arg(long)]
    step: Option<f64>,
    /// Lower end of the phase range [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    phase_start: Option<f64>,
    /// Upper (excluded) end of the phase range [default: 2π].
    #[arg(long, allow_hyphen_values = true)]
    phase_end: Option<f64>,
}

#[derive(Args)]
struct SweepOmegaArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Comma-separated omega values [default: 0, π/10, …, 5π/10].
    #[arg(long, value_delimiter = ',')]
    omegas: Vec<f64>,
}

#[derive(Args)]
struct DiscriminateArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// Sample this many positions instead of using exact expectations.
    #[arg(long)]
    shots: Option<usize>,
    /// Output JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Original,
    Cooperative,
}

#[derive(Args)]
struct ClassicalArgs {
    /// JSON file with ClassicalConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// a, b, mix or periodic:M,N [default: b].
    #[arg(long)]
    scheme: Option<GameScheme>,
    /// Number of rounds [default: 16].
    #[arg(long)]
    rounds: Option<usize>,
    /// Independent trajectories [default: 1000].
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bias of the original games [default: 0.005].
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Game-A win probability [original: 1/2 - ε, cooperative: 1/2].
    #[arg(long, allow_hyphen_values = true)]
    pa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p4: Option<f64>,
    /// Ring size of the cooperative game [default: 3].
    #[arg(long)]
    players: Option<usize>,
    /// sequential or synchronous [default: sequential].
    #[arg(long)]
    update: Option<UpdateOrder>,
    /// Initial winner flags: random, winners or losers [default: random].
    #[arg(long)]
    flags: Option<InitialFlags>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

const DEFAULT_EPSILON: f64 = 0.005;
const DEFAULT_TRIALS: usize = 1000;

impl ClassicalArgs {
    fn config(&self) -> Result<ClassicalConfig> {
        let file: Option<ClassicalConfig> = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Some(
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", path.display()))?,
                )
            }
            None => None,
        };
        let mode = match (self.mode, file.map(|f| f.kind)) {
            (Some(m), _) => m,
            (None, Some(ClassicalKind::Cooperative(_))) => ModeArg::Cooperative,
            (None, _) => ModeArg::Original,
        };
        let kind = match mode {
            ModeArg::Original => {
                let mut p = match file.map(|f| f.kind) {
                    Some(ClassicalKind::Original(p)) if self.epsilon.is_none() => p,
                    _ => original_defaults(self.epsilon.unwrap_or(DEFAULT_EPSILON)),
                };
                p.p = self.pa.unwrap_or(p.p);
                p.p1 = self.p1.unwrap_or(p.p1);
                p.p2 = self.p2.unwrap_or(p.p2);
                ClassicalKind::Original(p)
            }
            ModeArg::Cooperative => {
                let from_file = match file.map(|f| f.kind) {
                    Some(ClassicalKind::Cooperative(p)) => Some(p),
                    _ => None,
                };
                let pick = |flag: Option<f64>, file: Option<f64>, name: &str| {
                    flag.or(file)
                        .with_context(|| format!("cooperative mode needs --{name}"))
                };
                ClassicalKind::Cooperative(CooperativeParams {
                    n_players: self.players.or(from_file.map(|p| p.n_players)).unwrap_or(3),
                    p_a: self.pa.or(from_file.map(|p| p.p_a)).unwrap_or(0.5),
                    p1: pick(self.p1, from_file.map(|p| p.p1), "p1")?,
                    p2: pick(self.p2, from_file.map(|p| p.p2), "p2")?,
                    p3: pick(self.p3, from_file.map(|p| p.p3), "p3")?,
                    p4: pick(self.p4, from_file.map(|p| p.p4), "p4")?,
                    update: self
                        .update
                        .or(from_file.map(|p| p.update))
                        .unwrap_or_default(),
                    initial_flags: self
                        .flags
                        .or(from_file.map(|p| p.initial_flags))
                        .unwrap_or_default(),
                })
            }
        };
        let config = ClassicalConfig {
            kind,
            scheme: self
                .scheme
                .or(file.map(|f| f.scheme))
                .unwrap_or(GameScheme::PureB),
            rounds: self
                .rounds
                .or(file.map(|f| f.rounds))
                .unwrap_or(DEFAULT_ROUNDS),
            trials: self
                .trials
                .or(file.map(|f| f.trials))
                .unwrap_or(DEFAULT_TRIALS),
            seed: self.seed.or(file.map(|f| f.seed)).unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }
}

fn original_defaults(epsilon: f64) -> OriginalParams {
    // Unvalidated; the caller validates after applying overrides.
    OriginalParams {
        epsilon,
        p: 0.5 - epsilon,
        p1: 0.1 - epsilon,
        p2: 0.75 - epsilon,
    }
}

fn write_series(series: &PayoffSeries, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => csvio::emit_series_csv(series, path)?,
        None => csvio::write_series_csv(series, io::stdout().lock())?,
    }
    Ok(())
}

fn write_sweep(points: &[SweepPoint], param: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => csvio::emit_sweep_csv(points, param, path)?,
        None => csvio::write_sweep_csv(points, param, io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let mut config = args.sim.config()?;
            if let Some(scheme) = args.scheme {
                config.scheme = scheme;
            }
            let series = run_averaged(&config)?;
            write_series(&series, args.out.as_deref())
        }
        Command::SweepRho4(args) => {
            let base = args.sweep.sim.config()?;
            let values = if args.values.is_empty() {
                default_rho4_values()
            } else {
                args.values.clone()
            };
            let points = sweep_rho4(&base, &values, &args.sweep.schemes())?;
            write_sweep(&points, "rho4", args.sweep.out.as_deref())
        }
        Command::SweepOmega(args) => {
            let base = args.sweep.sim.config()?;
            let omegas = if args.omegas.is_empty() {
                default_omega_values()
            } else {
                args.omegas.clone()
            };
            let points = sweep_entanglement(&base, &omegas, &args.sweep.schemes())?;
            write_sweep(&points, "omega", args.sweep.out.as_deref())
        }
        Command::SweepPhase(args) => {
            let base = args.sweep.sim.config()?;
            let grid = PhaseGrid {
                start: args.phase_start.unwrap_or(0.0),
                end: args.phase_end.unwrap_or(TAU),
                step: args.step.unwrap_or(FRAC_PI_8),
            };
            let records = sweep_phase_map(&base, &grid, &args.sweep.schemes())?;
            match args.sweep.out.as_deref() {
                Some(path) => csvio::emit_map_csv(&records, path)?,
                None => csvio::write_map_csv(&records, io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Discriminate(args) => {
            let config = args.sim.config()?;
            let discriminator = Discriminator::new(config.rounds)?;
            let mode = match args.shots {
                Some(shots) => DiscriminationMode::Sampled { shots },
                None => DiscriminationMode::Expectation,
            };
            let coin = initial_coin_state(config.initial)?;
            let mut rng = qparrondo::engine::run_rng(config.seed, 0);
            let result = discriminator.discriminate(&coin, mode, &mut rng)?;
            let mut text = serde_json::to_string_pretty(&result)?;
            text.push('\n');
            match args.out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => io::stdout().lock().write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Classical(args) => {
            let config = args.config()?;
            let series = run_classical(&config)?;
            write_series(&series, args.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
