//! Parameter sweeps over `rho4`, the coin phases and the initial
//! entanglement.
//!
//! Every point evaluates games A and B alongside the requested schemes so
//! that paradox flags can be set. Points are evaluated in parallel and
//! returned in grid order.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::coin::InitialCoinKind;
use crate::engine::{run_averaged, GameScheme, SimulationConfig};
use crate::error::{Error, Result};
use crate::observables::{detect_paradox, GameVerdict, Verdict};

/// Final-round result of one scheme at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeOutcome {
    pub scheme: GameScheme,
    pub gain: f64,
    pub stderr: f64,
    pub verdict: Verdict,
    /// Always false for the pure games.
    pub paradox: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub outcomes: Vec<SchemeOutcome>,
}

impl SweepPoint {
    pub fn outcome(&self, scheme: GameScheme) -> Option<&SchemeOutcome> {
        self.outcomes.iter().find(|o| o.scheme == scheme)
    }
}

/// One row of a phase map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapRecord {
    pub theta: f64,
    pub phi: f64,
    pub scheme: GameScheme,
    pub gain: f64,
    pub paradox: bool,
}

/// `rho4` grid `{0.1, 0.2, …, 0.9}`.
pub fn default_rho4_values() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

/// `ω` grid `{0, π/10, …, 5π/10}`.
pub fn default_omega_values() -> Vec<f64> {
    (0..=5).map(|k| k as f64 * PI / 10.0).collect()
}

pub fn default_schemes() -> Vec<GameScheme> {
    vec![
        GameScheme::PureA,
        GameScheme::PureB,
        GameScheme::Periodic { a: 2, b: 2 },
        GameScheme::RandomMix,
    ]
}

fn verdict_of(config: &SimulationConfig, scheme: GameScheme) -> Result<(GameVerdict, f64)> {
    let series = run_averaged(&SimulationConfig { scheme, ..*config })?;
    let gain = series.final_gain().ok_or(Error::EmptySeries)?;
    Ok((
        GameVerdict::from_gain(gain, series.default_tolerance()),
        series.final_stderr(),
    ))
}

/// Evaluates `schemes` at one configuration, with paradox flags.
pub fn evaluate_point(
    config: &SimulationConfig,
    schemes: &[GameScheme],
) -> Result<Vec<SchemeOutcome>> {
    if schemes.is_empty() {
        return Err(Error::InvalidArgument("no schemes requested".into()));
    }
    let (a, a_se) = verdict_of(config, GameScheme::PureA)?;
    let (b, b_se) = verdict_of(config, GameScheme::PureB)?;
    schemes
        .iter()
        .map(|&scheme| {
            let (v, stderr) = match scheme {
                GameScheme::PureA => (a, a_se),
                GameScheme::PureB => (b, b_se),
                _ => verdict_of(config, scheme)?,
            };
            let paradox =
                scheme.is_combined() && detect_paradox(a, b, &[(scheme, v)]).combined[0].paradox;
            Ok(SchemeOutcome {
                scheme,
                gain: v.gain,
                stderr,
                verdict: v.verdict,
                paradox,
            })
        })
        .collect()
}

fn sweep_with<F>(
    base: &SimulationConfig,
    values: &[f64],
    schemes: &[GameScheme],
    configure: F,
) -> Result<Vec<SweepPoint>>
where
    F: Fn(&SimulationConfig, f64) -> SimulationConfig + Sync,
{
    if values.is_empty() {
        return Err(Error::InvalidArgument("sweep grid is empty".into()));
    }
    let configs: Vec<SimulationConfig> = values.iter().map(|&v| configure(base, v)).collect();
    for c in &configs {
        c.validate()?;
    }
    configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(c, &value)| {
            Ok(SweepPoint {
                value,
                outcomes: evaluate_point(c, schemes)?,
            })
        })
        .collect()
}

/// Final gains per `rho4` value; the other coins keep their base values.
pub fn sweep_rho4(
    base: &SimulationConfig,
    values: &[f64],
    schemes: &[GameScheme],
) -> Result<Vec<SweepPoint>> {
    sweep_with(base, values, schemes, |c, rho4| SimulationConfig {
        game_b: c.game_b.set_rho4(rho4),
        ..*c
    })
}

/// Final gains per initial entanglement `ω`, starting from `J(ω)|LLL>`.
pub fn sweep_entanglement(
    base: &SimulationConfig,
    omegas: &[f64],
    schemes: &[GameScheme],
) -> Result<Vec<SweepPoint>> {
    sweep_with(base, omegas, schemes, |c, omega| SimulationConfig {
        initial: InitialCoinKind::JEntangled(omega),
        ..*c
    })
}

/// Equally spaced phase values `start, start + step, …` below `end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl PhaseGrid {
    /// `[0, 2π)` with the given step.
    pub fn new(step: f64) -> Self {
        Self {
            start: 0.0,
            end: TAU,
            step,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let span = self.end - self.start;
        if !(self.step > 0.0) || !(span > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "phase grid needs step > 0 and end > start, got [{}, {}) step {}",
                self.start, self.end, self.step
            )));
        }
        let ratio = span / self.step;
        let n = ratio.round();
        if (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "phase step {} does not divide the range [{}, {})",
                self.step, self.start, self.end
            )));
        }
        Ok((0..n as usize)
            .map(|k| self.start + k as f64 * self.step)
            .collect())
    }
}

/// Final gains on the `(theta, phi)` grid, one shared phase pair for all
/// coins. Rows are ordered by theta, then phi, then scheme.
pub fn sweep_phase_map(
    base: &SimulationConfig,
    grid: &PhaseGrid,
    schemes: &[GameScheme],
) -> Result<Vec<MapRecord>> {
    base.validate()?;
    let axis = grid.points()?;
    let pairs: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&theta| axis.iter().map(move |&phi| (theta, phi)))
        .collect();
    let per_point: Vec<Vec<MapRecord>> = pairs
        .par_iter()
        .map(|&(theta, phi)| {
            let outcomes = evaluate_point(&base.with_phases(theta, phi), schemes)?;
            Ok(outcomes
                .into_iter()
                .map(|o| MapRecord {
                    theta,
                    phi,
                    scheme: o.scheme,
                    gain: o.gain,
                    paradox: o.paradox,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}
