//! Game schedules, single rounds and full simulations.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin::{coin_unitary, initial_coin_state, CoinParams, GameBParams, InitialCoinKind};
use crate::error::{Error, Result};
use crate::observables::PayoffSeries;
use crate::state::{ControlledCoin, PositionLattice, RoundSpec, Toss, WalkerState, PLAYERS};

pub const DEFAULT_ROUNDS: usize = 16;
pub const DEFAULT_RUNS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameLabel {
    A,
    B,
}

/// Serialised by its command-line name, e.g. `"periodic:2,2"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GameScheme {
    PureA,
    PureB,
    /// Each play draws A or B uniformly.
    RandomMix,
    /// `a` plays of A followed by `b` plays of B, repeating, starting with A.
    Periodic {
        a: u32,
        b: u32,
    },
}

impl GameScheme {
    pub fn is_random(&self) -> bool {
        matches!(self, Self::RandomMix)
    }

    /// Schemes that mix both games.
    pub fn is_combined(&self) -> bool {
        matches!(self, Self::RandomMix | Self::Periodic { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Periodic { a, b } if a == 0 || b == 0 => Err(Error::InvalidArgument(format!(
                "periodic scheme needs positive block lengths, got [{a},{b}]"
            ))),
            _ => Ok(()),
        }
    }

    /// Short name used on the command line and in CSV files.
    pub fn cli_name(&self) -> String {
        match self {
            Self::PureA => "a".into(),
            Self::PureB => "b".into(),
            Self::RandomMix => "mix".into(),
            Self::Periodic { a, b } => format!("periodic:{a},{b}"),
        }
    }
}

impl fmt::Display for GameScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PureA => write!(f, "A"),
            Self::PureB => write!(f, "B"),
            Self::RandomMix => write!(f, "A+B"),
            Self::Periodic { a, b } => write!(f, "[{a},{b}]"),
        }
    }
}

impl FromStr for GameScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidArgument(format!("unknown scheme {s:?} (a, b, mix, periodic:M,N)"));
        let lower = s.trim().to_ascii_lowercase();
        let scheme = match lower.as_str() {
            "a" => Self::PureA,
            "b" => Self::PureB,
            "mix" | "a+b" => Self::RandomMix,
            other => {
                let body = other
                    .strip_prefix("periodic:")
                    .or_else(|| other.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
                    .ok_or_else(bad)?;
                let (a, b) = body.split_once(',').ok_or_else(bad)?;
                Self::Periodic {
                    a: a.trim().parse().map_err(|_| bad())?,
                    b: b.trim().parse().map_err(|_| bad())?,
                }
            }
        };
        scheme.validate()?;
        Ok(scheme)
    }
}

impl TryFrom<String> for GameScheme {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GameScheme> for String {
    fn from(s: GameScheme) -> Self {
        s.cli_name()
    }
}

/// What one entry of a schedule stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    /// One label per player toss: the sequence runs over player 1, 2, 3 of
    /// round 1, then round 2, and so on.
    #[default]
    PerToss,
    /// One label per round, shared by all three players.
    PerRound,
}

impl Granularity {
    pub fn plays(&self, rounds: usize) -> usize {
        match self {
            Self::PerToss => rounds * PLAYERS,
            Self::PerRound => rounds,
        }
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "toss" | "per-toss" => Ok(Self::PerToss),
            "round" | "per-round" => Ok(Self::PerRound),
            _ => Err(Error::InvalidArgument(format!(
                "unknown granularity {s:?} (toss, round)"
            ))),
        }
    }
}

/// Sequence of game labels, one per play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundSchedule(Vec<GameLabel>);

impl RoundSchedule {
    pub fn labels(&self) -> &[GameLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Labels of players 1, 2, 3 in round `round` (0-based).
    pub fn round_labels(&self, granularity: Granularity, round: usize) -> [GameLabel; PLAYERS] {
        match granularity {
            Granularity::PerToss => {
                let base = round * PLAYERS;
                [self.0[base], self.0[base + 1], self.0[base + 2]]
            }
            Granularity::PerRound => [self.0[round]; PLAYERS],
        }
    }
}

impl fmt::Display for RoundSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

/// `plays` labels following `scheme`; `RandomMix` draws each label
/// independently with probability 1/2.
pub fn build_schedule<R: Rng + ?Sized>(
    scheme: GameScheme,
    plays: usize,
    rng: &mut R,
) -> RoundSchedule {
    let labels = match scheme {
        GameScheme::PureA => vec![GameLabel::A; plays],
        GameScheme::PureB => vec![GameLabel::B; plays],
        GameScheme::RandomMix => (0..plays)
            .map(|_| {
                if rng.random_bool(0.5) {
                    GameLabel::A
                } else {
                    GameLabel::B
                }
            })
            .collect(),
        GameScheme::Periodic { a, b } => {
            let period = (a + b) as usize;
            (0..plays)
                .map(|t| {
                    if t % period < a as usize {
                        GameLabel::A
                    } else {
                        GameLabel::B
                    }
                })
                .collect()
        }
    };
    RoundSchedule(labels)
}

/// Generator for run `run` of a simulation seeded with `seed`. Each run gets
/// its own ChaCha stream, so run `k` is reproducible on its own.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Fields missing from a deserialised config take their default values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationConfig {
    pub initial: InitialCoinKind,
    pub scheme: GameScheme,
    pub rounds: usize,
    pub rho0: CoinParams,
    pub game_b: GameBParams,
    pub seed: u64,
    pub runs: usize,
    pub granularity: Granularity,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            initial: InitialCoinKind::Ghz,
            scheme: GameScheme::PureA,
            rounds: DEFAULT_ROUNDS,
            rho0: CoinParams::fair(),
            game_b: GameBParams::default(),
            seed: 0,
            runs: DEFAULT_RUNS,
            granularity: Granularity::PerToss,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds < 1 {
            return Err(Error::InvalidArgument("rounds must be at least 1".into()));
        }
        if self.runs < 1 {
            return Err(Error::InvalidArgument("runs must be at least 1".into()));
        }
        self.scheme.validate()?;
        let coins = [
            ("rho0", self.rho0),
            ("rho1", self.game_b.ww),
            ("rho2", self.game_b.wl),
            ("rho3", self.game_b.lw),
            ("rho4", self.game_b.ll),
        ];
        for (name, coin) in coins {
            coin.validate().map_err(|e| match e {
                Error::Domain {
                    name: "rho",
                    value,
                    domain,
                } => Error::Domain {
                    name,
                    value,
                    domain,
                },
                e => e,
            })?;
        }
        initial_coin_state(self.initial).map(|_| ())
    }

    /// Applies one `(theta, phi)` pair to every coin, A and B alike.
    pub fn with_phases(self, theta: f64, phi: f64) -> Self {
        Self {
            rho0: self.rho0.with_phases(theta, phi),
            game_b: self.game_b.with_phases(theta, phi),
            ..self
        }
    }

    pub fn lattice(&self) -> Result<PositionLattice> {
        PositionLattice::new(self.rounds)
    }
}

/// Toss operator of a single play of `label`.
pub fn toss_for(label: GameLabel, rho0: &CoinParams, game_b: &GameBParams) -> Result<Toss> {
    Ok(match label {
        GameLabel::A => Toss::Single(coin_unitary(rho0)?),
        GameLabel::B => Toss::Controlled(ControlledCoin {
            rr: coin_unitary(&game_b.ww)?,
            rl: coin_unitary(&game_b.wl)?,
            lr: coin_unitary(&game_b.lw)?,
            ll: coin_unitary(&game_b.ll)?,
        }),
    })
}

/// Round operators for the labels of players 1, 2, 3.
pub fn round_spec(labels: [GameLabel; PLAYERS], config: &SimulationConfig) -> Result<RoundSpec> {
    let a = toss_for(GameLabel::A, &config.rho0, &config.game_b)?;
    let b = toss_for(GameLabel::B, &config.rho0, &config.game_b)?;
    Ok(RoundSpec {
        tosses: labels.map(|l| match l {
            GameLabel::A => a,
            GameLabel::B => b,
        }),
    })
}

/// Players 1, 2, 3 all play `label`, then the walker moves.
pub fn step_round(
    state: &mut WalkerState,
    label: GameLabel,
    config: &SimulationConfig,
) -> Result<()> {
    step_round_mixed(state, [label; PLAYERS], config)
}

/// Players 1, 2, 3 play `labels[0]`, `labels[1]`, `labels[2]` in turn,
/// then the walker moves.
pub fn step_round_mixed(
    state: &mut WalkerState,
    labels: [GameLabel; PLAYERS],
    config: &SimulationConfig,
) -> Result<()> {
    state.apply_round(&round_spec(labels, config)?)
}

/// Schedule of run `run` for this config.
pub fn schedule_for(config: &SimulationConfig, run: u64) -> RoundSchedule {
    build_schedule(
        config.scheme,
        config.granularity.plays(config.rounds),
        &mut run_rng(config.seed, run),
    )
}

fn simulate_run(config: &SimulationConfig, run: u64) -> Result<PayoffSeries> {
    let coin = initial_coin_state(config.initial)?;
    let mut state = WalkerState::new(&coin, config.lattice()?)?;
    let schedule = schedule_for(config, run);
    let mut series = PayoffSeries::new();
    series.push_state(&state);
    for t in 0..config.rounds {
        let spec = round_spec(schedule.round_labels(config.granularity, t), config)?;
        state.apply_round(&spec)?;
        series.push_state(&state);
    }
    Ok(series)
}

/// One simulation; the schedule of `RandomMix` comes from run 0 of the seed.
pub fn run_simulation(config: &SimulationConfig) -> Result<PayoffSeries> {
    config.validate()?;
    simulate_run(config, 0)
}

/// Mean over `config.runs` runs with per-round standard errors of the
/// average gain. Deterministic schemes are evaluated once.
pub fn run_averaged(config: &SimulationConfig) -> Result<PayoffSeries> {
    config.validate()?;
    let runs = if config.scheme.is_random() {
        config.runs
    } else {
        1
    };
    let all: Vec<PayoffSeries> = (0..runs as u64)
        .into_par_iter()
        .map(|run| simulate_run(config, run))
        .collect::<Result<_>>()?;
    Ok(mean_series(&all))
}

fn mean_series(all: &[PayoffSeries]) -> PayoffSeries {
    let n = all.len() as f64;
    let len = all[0].average_gain.len();
    let mut out = PayoffSeries::new();
    let mut stderr = Vec::with_capacity(len);
    for t in 0..len {
        let mut positions = [0.0; PLAYERS];
        for s in all {
            for (acc, x) in positions.iter_mut().zip(s.per_player[t]) {
                *acc += x;
            }
        }
        positions.iter_mut().for_each(|p| *p /= n);
        out.push(positions);
        let mean = out.average_gain[t];
        stderr.push(if all.len() > 1 {
            let var = all
                .iter()
                .map(|s| (s.average_gain[t] - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        });
    }
    out.stderr = Some(stderr);
    out
}
