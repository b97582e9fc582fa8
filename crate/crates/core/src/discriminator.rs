//! Telling GHZ-class from W-class coin states by the summed game-A payoff.
//!
//! Under the fair coin, game A is fair from GHZ and losing from W. Playing A
//! for a number of rounds and adding the three expected capitals therefore
//! separates the two classes. The result is only meaningful for inputs
//! promised to be one or the other.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::Serialize;

use crate::coin::{coin_unitary, initial_coin_state, CoinParams, InitialCoinKind};
use crate::error::{Error, Result};
use crate::observables::expected_positions;
use crate::state::{CoinVector, PositionLattice, RoundSpec, Toss, WalkerState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StateClass {
    Ghz,
    W,
    Inconclusive,
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ghz => "GHZ",
            Self::W => "W",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminationMode {
    /// Exact `Σ_i <x_i>`.
    Expectation,
    /// Mean coordinate sum of `shots` positions drawn from the final
    /// distribution.
    Sampled { shots: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminationResult {
    pub label: StateClass,
    pub statistic: f64,
    pub threshold: f64,
    /// Standard error of a sampled statistic; zero in expectation mode.
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discriminator {
    rounds: usize,
    coin: CoinParams,
    threshold: f64,
}

impl Discriminator {
    /// Fair coin; the threshold is half the W-state statistic's magnitude.
    pub fn new(rounds: usize) -> Result<Self> {
        let mut d = Self {
            rounds,
            coin: CoinParams::fair(),
            threshold: 0.0,
        };
        let w = initial_coin_state(InitialCoinKind::W)?;
        d.threshold = summed_payoff(&d.final_state(&w)?).abs() / 2.0;
        Ok(d)
    }

    pub fn with_threshold(rounds: usize, coin: CoinParams, threshold: f64) -> Result<Self> {
        coin.validate()?;
        if !(threshold >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "threshold must be >= 0, got {threshold}"
            )));
        }
        if rounds < 1 {
            return Err(Error::InvalidArgument("rounds must be at least 1".into()));
        }
        Ok(Self {
            rounds,
            coin,
            threshold,
        })
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    fn final_state(&self, coin_state: &CoinVector) -> Result<WalkerState> {
        if self.rounds < 1 {
            return Err(Error::InvalidArgument("rounds must be at least 1".into()));
        }
        let mut state = WalkerState::new(coin_state, PositionLattice::new(self.rounds)?)?;
        let round = RoundSpec {
            tosses: [Toss::Single(coin_unitary(&self.coin)?); 3],
        };
        for _ in 0..self.rounds {
            state.apply_round(&round)?;
        }
        Ok(state)
    }

    pub fn classify(&self, statistic: f64) -> StateClass {
        if statistic.abs() <= self.threshold {
            StateClass::Ghz
        } else if statistic < -self.threshold {
            StateClass::W
        } else {
            StateClass::Inconclusive
        }
    }

    pub fn discriminate<R: Rng + ?Sized>(
        &self,
        coin_state: &CoinVector,
        mode: DiscriminationMode,
        rng: &mut R,
    ) -> Result<DiscriminationResult> {
        if let DiscriminationMode::Sampled { shots: 0 } = mode {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        let state = self.final_state(coin_state)?;
        let (statistic, std_error) = match mode {
            DiscriminationMode::Expectation => (summed_payoff(&state), 0.0),
            DiscriminationMode::Sampled { shots } => sample_payoff(&state, shots, rng)?,
        };
        Ok(DiscriminationResult {
            label: self.classify(statistic),
            statistic,
            threshold: self.threshold,
            std_error,
        })
    }
}

fn summed_payoff(state: &WalkerState) -> f64 {
    expected_positions(state).iter().sum()
}

fn sample_payoff<R: Rng + ?Sized>(
    state: &WalkerState,
    shots: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let lattice = state.lattice();
    let marginal = state.position_marginal();
    let dist = WeightedIndex::new(&marginal)
        .map_err(|e| Error::InvalidArgument(format!("cannot sample position distribution: {e}")))?;
    let mut sum = 0i64;
    let mut sum_sq = 0i64;
    for _ in 0..shots {
        let x: i64 = lattice.coordinates(dist.sample(rng)).iter().sum();
        sum += x;
        sum_sq += x * x;
    }
    let n = shots as f64;
    let mean = sum as f64 / n;
    let std_error = if shots > 1 {
        let var = (sum_sq as f64 - sum as f64 * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    } else {
        0.0
    };
    Ok((mean, std_error))
}

/// One-off discrimination with the default threshold.
pub fn discriminate<R: Rng + ?Sized>(
    coin_state: &CoinVector,
    rounds: usize,
    mode: DiscriminationMode,
    rng: &mut R,
) -> Result<DiscriminationResult> {
    Discriminator::new(rounds)?.discriminate(coin_state, mode, rng)
}
