//! Cooperative quantum Parrondo games for three players, modelled as a
//! discrete-time quantum walk on three position axes driven by three
//! entangled coins, plus a classical Monte Carlo baseline.
//!
//! Each round every player tosses a coin (game A: an independent biased
//! coin; game B: a coin conditioned on the two ring neighbours' coins) and
//! the walker then moves one step along every axis. A player's capital is
//! the expected position on their axis.

// `!(x >= 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod coin;
pub mod discriminator;
pub mod engine;
pub mod error;
pub mod io;
pub mod observables;
pub mod oracle;
pub mod state;
pub mod sweep;

pub use classical::{
    run_classical, ClassicalConfig, ClassicalKind, CooperativeParams, OriginalParams,
};
pub use coin::{
    coin_unitary, entangler_j, initial_coin_state, CoinParams, GameBParams, InitialCoinKind,
};
pub use discriminator::{
    discriminate, DiscriminationMode, DiscriminationResult, Discriminator, StateClass,
};
pub use engine::{
    build_schedule, run_averaged, run_simulation, step_round, step_round_mixed, GameLabel,
    GameScheme, Granularity, RoundSchedule, SimulationConfig,
};
pub use error::{Error, Result};
pub use io::{emit_map_csv, emit_series_csv, emit_sweep_csv};
pub use observables::{
    average_capital_gain, classify_game, detect_paradox, expected_position, GameVerdict,
    ParadoxReport, PayoffSeries, Verdict,
};
pub use oracle::dense_step_oracle;
pub use state::{
    CoinMatrix, CoinVector, ControlledCoin, PositionLattice, RoundSpec, Toss, WalkerState,
};
pub use sweep::{
    sweep_entanglement, sweep_phase_map, sweep_rho4, MapRecord, PhaseGrid, SchemeOutcome,
    SweepPoint,
};
