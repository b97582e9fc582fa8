//! Classical Parrondo games: the capital-dependent original pair and the
//! cooperative ring game, simulated by Monte Carlo.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{build_schedule, run_rng, GameLabel, GameScheme};
use crate::error::{Error, Result};
use crate::observables::PayoffSeries;

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: p,
            domain: "[0, 1]",
        })
    }
}

/// Single-player games: A wins with `p`; B uses `p1` when the capital is a
/// multiple of 3 and `p2` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginalParams {
    pub epsilon: f64,
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
}

impl OriginalParams {
    /// `p = 1/2 - ε`, `p1 = 1/10 - ε`, `p2 = 3/4 - ε`.
    pub fn new(epsilon: f64) -> Result<Self> {
        let params = Self {
            epsilon,
            p: 0.5 - epsilon,
            p1: 0.1 - epsilon,
            p2: 0.75 - epsilon,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) {
            return Err(Error::Domain {
                name: "epsilon",
                value: self.epsilon,
                domain: "[0, ∞)",
            });
        }
        check_probability("p", self.p)?;
        check_probability("p1", self.p1)?;
        check_probability("p2", self.p2)
    }

    pub fn win_probability(&self, capital: i64, label: GameLabel) -> f64 {
        match label {
            GameLabel::A => self.p,
            GameLabel::B if capital.rem_euclid(3) == 0 => self.p1,
            GameLabel::B => self.p2,
        }
    }
}

/// When a player reads the neighbours' flags within a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateOrder {
    /// Players move in index order and see flags already updated this round.
    #[default]
    Sequential,
    /// All players read the flags as they stood at the start of the round.
    Synchronous,
}

impl FromStr for UpdateOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sequential" => Ok(Self::Sequential),
            "synchronous" => Ok(Self::Synchronous),
            _ => Err(Error::InvalidArgument(format!(
                "unknown update order {s:?} (sequential, synchronous)"
            ))),
        }
    }
}

/// Winner flags before the first round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialFlags {
    /// Each flag drawn uniformly from the trial's generator.
    #[default]
    Random,
    AllWinners,
    AllLosers,
}

impl FromStr for InitialFlags {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(Self::Random),
            "winners" | "all_winners" => Ok(Self::AllWinners),
            "losers" | "all_losers" => Ok(Self::AllLosers),
            _ => Err(Error::InvalidArgument(format!(
                "unknown initial flags {s:?} (random, winners, losers)"
            ))),
        }
    }
}

/// Ring of players. Game B uses `p1..p4` according to whether neighbours
/// `i-1` and `i+1` won their last game: (W,W), (W,L), (L,W), (L,L).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CooperativeParams {
    pub n_players: usize,
    pub p_a: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    #[serde(default)]
    pub update: UpdateOrder,
    #[serde(default)]
    pub initial_flags: InitialFlags,
}

impl CooperativeParams {
    pub fn new(n_players: usize, p_a: f64, p: [f64; 4]) -> Result<Self> {
        let params = Self {
            n_players,
            p_a,
            p1: p[0],
            p2: p[1],
            p3: p[2],
            p4: p[3],
            update: UpdateOrder::default(),
            initial_flags: InitialFlags::default(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_players < 3 {
            return Err(Error::InvalidArgument(format!(
                "players must be at least 3, got {}",
                self.n_players
            )));
        }
        check_probability("pa", self.p_a)?;
        check_probability("p1", self.p1)?;
        check_probability("p2", self.p2)?;
        check_probability("p3", self.p3)?;
        check_probability("p4", self.p4)
    }

    pub fn branch(&self, prev_winner: bool, next_winner: bool) -> f64 {
        match (prev_winner, next_winner) {
            (true, true) => self.p1,
            (true, false) => self.p2,
            (false, true) => self.p3,
            (false, false) => self.p4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalState {
    pub capitals: Vec<i64>,
    pub winner_flags: Vec<bool>,
    pub time: u64,
}

impl ClassicalState {
    pub fn new<R: Rng + ?Sized>(n_players: usize, flags: InitialFlags, rng: &mut R) -> Self {
        let winner_flags = match flags {
            InitialFlags::Random => (0..n_players).map(|_| rng.random_bool(0.5)).collect(),
            InitialFlags::AllWinners => vec![true; n_players],
            InitialFlags::AllLosers => vec![false; n_players],
        };
        Self {
            capitals: vec![0; n_players],
            winner_flags,
            time: 0,
        }
    }

    pub fn total_capital(&self) -> i64 {
        self.capitals.iter().sum()
    }
}

/// One play of the original games.
pub fn original_step<R: Rng + ?Sized>(
    capital: i64,
    label: GameLabel,
    params: &OriginalParams,
    rng: &mut R,
) -> i64 {
    if rng.random_bool(params.win_probability(capital, label)) {
        capital + 1
    } else {
        capital - 1
    }
}

/// One round of the cooperative game: every player plays `label` once, in
/// index order.
pub fn cooperative_step<R: Rng + ?Sized>(
    state: &mut ClassicalState,
    label: GameLabel,
    params: &CooperativeParams,
    rng: &mut R,
) {
    let n = state.capitals.len();
    let snapshot = match params.update {
        UpdateOrder::Synchronous => Some(state.winner_flags.clone()),
        UpdateOrder::Sequential => None,
    };
    for i in 0..n {
        let flags = snapshot.as_deref().unwrap_or(&state.winner_flags);
        let p = match label {
            GameLabel::A => params.p_a,
            GameLabel::B => params.branch(flags[(i + n - 1) % n], flags[(i + 1) % n]),
        };
        let won = rng.random_bool(p);
        state.capitals[i] += if won { 1 } else { -1 };
        state.winner_flags[i] = won;
    }
    state.time += 1;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKind {
    Original(OriginalParams),
    Cooperative(CooperativeParams),
}

impl ClassicalKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Original(p) => p.validate(),
            Self::Cooperative(p) => p.validate(),
        }
    }

    pub fn players(&self) -> usize {
        match self {
            Self::Original(_) => 1,
            Self::Cooperative(p) => p.n_players,
        }
    }
}

impl fmt::Display for ClassicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Original(_) => "original",
            Self::Cooperative(_) => "cooperative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalConfig {
    pub kind: ClassicalKind,
    pub scheme: GameScheme,
    pub rounds: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ClassicalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds < 1 {
            return Err(Error::InvalidArgument("rounds must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        self.scheme.validate()?;
        self.kind.validate()
    }
}

/// Total capital after each round of one trajectory, starting with 0.
fn trajectory(config: &ClassicalConfig, trial: u64) -> Vec<i64> {
    let mut rng = run_rng(config.seed, trial);
    let schedule = build_schedule(config.scheme, config.rounds, &mut rng);
    let mut totals = Vec::with_capacity(config.rounds + 1);
    totals.push(0);
    match config.kind {
        ClassicalKind::Original(params) => {
            let mut capital = 0;
            for &label in schedule.labels() {
                capital = original_step(capital, label, &params, &mut rng);
                totals.push(capital);
            }
        }
        ClassicalKind::Cooperative(params) => {
            let mut state = ClassicalState::new(params.n_players, params.initial_flags, &mut rng);
            for &label in schedule.labels() {
                cooperative_step(&mut state, label, &params, &mut rng);
                totals.push(state.total_capital());
            }
        }
    }
    totals
}

/// Exact running sums of totals and squared totals, so the reduction does
/// not depend on how trials are split between threads.
#[derive(Clone)]
struct Moments {
    sum: Vec<i128>,
    sum_sq: Vec<i128>,
}

impl Moments {
    fn zeros(len: usize) -> Self {
        Self {
            sum: vec![0; len],
            sum_sq: vec![0; len],
        }
    }

    fn add(mut self, totals: &[i64]) -> Self {
        for (t, &x) in totals.iter().enumerate() {
            self.sum[t] += i128::from(x);
            self.sum_sq[t] += i128::from(x) * i128::from(x);
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        for t in 0..self.sum.len() {
            self.sum[t] += other.sum[t];
            self.sum_sq[t] += other.sum_sq[t];
        }
        self
    }
}

/// Mean player-averaged capital per round over `trials` trajectories, with
/// standard errors. Trial `k` draws from stream `k` of `seed`.
pub fn run_classical(config: &ClassicalConfig) -> Result<PayoffSeries> {
    config.validate()?;
    let len = config.rounds + 1;
    let moments = (0..config.trials as u64)
        .into_par_iter()
        .fold(
            || Moments::zeros(len),
            |m, trial| m.add(&trajectory(config, trial)),
        )
        .reduce(|| Moments::zeros(len), Moments::merge);

    let n = config.trials as f64;
    let players = config.kind.players() as f64;
    let mut series = PayoffSeries::new();
    let mut stderr = Vec::with_capacity(len);
    for t in 0..len {
        let mean_total = moments.sum[t] as f64 / n;
        let gain = mean_total / players;
        series.push([gain; crate::state::PLAYERS]);
        stderr.push(if config.trials > 1 {
            // Sample variance from exact integer moments.
            let centred = moments.sum_sq[t] as f64 - moments.sum[t] as f64 * mean_total;
            (centred.max(0.0) / (n - 1.0) / n).sqrt() / players
        } else {
            0.0
        });
    }
    series.stderr = Some(stderr);
    Ok(series)
}
