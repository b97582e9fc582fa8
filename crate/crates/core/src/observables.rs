//! Payoffs, game verdicts and paradox detection.

use std::fmt;

use serde::Serialize;

use crate::engine::GameScheme;
use crate::error::{Error, Result};
use crate::state::{WalkerState, PLAYERS};

/// Tolerance separating fair from winning/losing for deterministic schedules.
pub const DETERMINISTIC_TOL: f64 = 1e-9;

/// Expected positions (capital) of each player per round. Index 0 is the
/// initial state, so a 16-round series holds 17 entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffSeries {
    pub per_player: Vec<[f64; PLAYERS]>,
    pub average_gain: Vec<f64>,
    /// Standard error of `average_gain` when the series is a mean over runs.
    pub stderr: Option<Vec<f64>>,
}

impl PayoffSeries {
    pub fn new() -> Self {
        Self {
            per_player: Vec::new(),
            average_gain: Vec::new(),
            stderr: None,
        }
    }

    pub fn push(&mut self, positions: [f64; PLAYERS]) {
        self.average_gain
            .push(positions.iter().sum::<f64>() / PLAYERS as f64);
        self.per_player.push(positions);
    }

    pub fn push_state(&mut self, state: &WalkerState) {
        self.push(expected_positions(state));
    }

    /// Number of played rounds.
    pub fn rounds(&self) -> usize {
        self.average_gain.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.average_gain.is_empty()
    }

    pub fn final_gain(&self) -> Option<f64> {
        self.average_gain.last().copied()
    }

    pub fn final_stderr(&self) -> f64 {
        self.stderr
            .as_ref()
            .and_then(|s| s.last().copied())
            .unwrap_or(0.0)
    }

    /// `max(DETERMINISTIC_TOL, 3 × final standard error)`.
    pub fn default_tolerance(&self) -> f64 {
        DETERMINISTIC_TOL.max(3.0 * self.final_stderr())
    }
}

impl Default for PayoffSeries {
    fn default() -> Self {
        Self::new()
    }
}

/// `Σ |amp|² x_axis` for `axis` in 1..=3.
pub fn expected_position(state: &WalkerState, axis: usize) -> Result<f64> {
    if !(1..=PLAYERS).contains(&axis) {
        return Err(Error::InvalidAxis(axis));
    }
    Ok(expected_positions(state)[axis - 1])
}

/// Expected positions on all three axes in one pass.
pub fn expected_positions(state: &WalkerState) -> [f64; PLAYERS] {
    let lattice = state.lattice();
    let n = lattice.axis_len();
    let t = lattice.half_extent() as f64;
    let marginal = state.position_marginal();
    let mut sums = [0.0; PLAYERS];
    for i1 in 0..n {
        for i2 in 0..n {
            let row = (i1 * n + i2) * n;
            for i3 in 0..n {
                let p = marginal[row + i3];
                if p == 0.0 {
                    continue;
                }
                sums[0] += p * (i1 as f64 - t);
                sums[1] += p * (i2 as f64 - t);
                sums[2] += p * (i3 as f64 - t);
            }
        }
    }
    sums
}

/// Player-averaged expected capital gain relative to the origin start.
pub fn average_capital_gain(state: &WalkerState) -> f64 {
    expected_positions(state).iter().sum::<f64>() / PLAYERS as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Winning,
    Fair,
    Losing,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Winning => "winning",
            Self::Fair => "fair",
            Self::Losing => "losing",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameVerdict {
    pub verdict: Verdict,
    pub gain: f64,
    pub tol: f64,
}

impl GameVerdict {
    pub fn from_gain(gain: f64, tol: f64) -> Self {
        let verdict = if gain > tol {
            Verdict::Winning
        } else if gain < -tol {
            Verdict::Losing
        } else {
            Verdict::Fair
        };
        Self { verdict, gain, tol }
    }
}

/// Judges the final-round average gain against `±tol`.
pub fn classify_game(series: &PayoffSeries, tol: f64) -> Result<GameVerdict> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    let gain = series.final_gain().ok_or(Error::EmptySeries)?;
    Ok(GameVerdict::from_gain(gain, tol))
}

/// Paradox iff neither A nor B wins on its own but the combination does.
pub fn is_paradox(a: Verdict, b: Verdict, combined: Verdict) -> bool {
    a != Verdict::Winning && b != Verdict::Winning && combined == Verdict::Winning
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinedVerdict {
    pub scheme: GameScheme,
    pub verdict: GameVerdict,
    pub paradox: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadoxReport {
    pub game_a: GameVerdict,
    pub game_b: GameVerdict,
    pub combined: Vec<CombinedVerdict>,
}

impl ParadoxReport {
    pub fn paradox_for(&self, scheme: GameScheme) -> Option<bool> {
        self.combined
            .iter()
            .find(|c| c.scheme == scheme)
            .map(|c| c.paradox)
    }

    pub fn any_paradox(&self) -> bool {
        self.combined.iter().any(|c| c.paradox)
    }
}

pub fn detect_paradox(
    a: GameVerdict,
    b: GameVerdict,
    combined: &[(GameScheme, GameVerdict)],
) -> ParadoxReport {
    let combined = combined
        .iter()
        .map(|&(scheme, verdict)| CombinedVerdict {
            scheme,
            verdict,
            paradox: is_paradox(a.verdict, b.verdict, verdict.verdict),
        })
        .collect();
    ParadoxReport {
        game_a: a,
        game_b: b,
        combined,
    }
}
