//! Coin unitaries, the `J(ω)` entangler and the initial coin states.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{CoinMatrix, CoinOperator, CoinVector, COIN_DIM};

/// Parameters of a single biased quantum coin. `1 - rho` is the classical
/// probability that the coin changes state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CoinParams {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

impl CoinParams {
    pub fn new(rho: f64, theta: f64, phi: f64) -> Result<Self> {
        let p = Self { rho, theta, phi };
        p.validate()?;
        Ok(p)
    }

    /// `rho` with the default phases `theta = phi = π/2`.
    pub fn with_rho(rho: f64) -> Result<Self> {
        Self::new(rho, FRAC_PI_2, FRAC_PI_2)
    }

    /// The fair coin, `rho = 1/2`, `theta = phi = π/2`.
    pub fn fair() -> Self {
        Self {
            rho: 0.5,
            theta: FRAC_PI_2,
            phi: FRAC_PI_2,
        }
    }

    pub fn with_phases(self, theta: f64, phi: f64) -> Self {
        Self { theta, phi, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::Domain {
                name: "rho",
                value: self.rho,
                domain: "[0, 1]",
            });
        }
        if !self.theta.is_finite() {
            return Err(Error::Domain {
                name: "theta",
                value: self.theta,
                domain: "finite reals",
            });
        }
        if !self.phi.is_finite() {
            return Err(Error::Domain {
                name: "phi",
                value: self.phi,
                domain: "finite reals",
            });
        }
        Ok(())
    }
}

impl Default for CoinParams {
    fn default() -> Self {
        Self::fair()
    }
}

/// Game-B coins, indexed by the (winner, loser) state of neighbours `i-1`
/// and `i+1`: `ww` is used when both neighbours are winners, `ll` when both
/// are losers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameBParams {
    pub ww: CoinParams,
    pub wl: CoinParams,
    pub lw: CoinParams,
    pub ll: CoinParams,
}

impl GameBParams {
    pub fn new(ww: CoinParams, wl: CoinParams, lw: CoinParams, ll: CoinParams) -> Result<Self> {
        let b = Self { ww, wl, lw, ll };
        b.validate()?;
        Ok(b)
    }

    /// `rho1 = rho2 = rho3 = 1/2` with the given `rho4`, default phases.
    pub fn with_rho4(rho4: f64) -> Result<Self> {
        let fair = CoinParams::fair();
        Self::new(fair, fair, fair, CoinParams::with_rho(rho4)?)
    }

    pub fn branches(&self) -> [CoinParams; 4] {
        [self.ww, self.wl, self.lw, self.ll]
    }

    pub fn with_phases(self, theta: f64, phi: f64) -> Self {
        Self {
            ww: self.ww.with_phases(theta, phi),
            wl: self.wl.with_phases(theta, phi),
            lw: self.lw.with_phases(theta, phi),
            ll: self.ll.with_phases(theta, phi),
        }
    }

    pub fn set_rho4(self, rho4: f64) -> Self {
        Self {
            ll: CoinParams {
                rho: rho4,
                ..self.ll
            },
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.branches().iter().try_for_each(CoinParams::validate)
    }
}

impl Default for GameBParams {
    fn default() -> Self {
        let fair = CoinParams::fair();
        Self {
            ww: fair,
            wl: fair,
            lw: fair,
            ll: fair,
        }
    }
}

/// Initial state of the three coins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCoinKind {
    Ghz,
    W,
    Separable,
    /// `J(ω)|LLL>` with `ω ∈ [0, π/2]`.
    JEntangled(f64),
}

impl fmt::Display for InitialCoinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ghz => write!(f, "ghz"),
            Self::W => write!(f, "w"),
            Self::Separable => write!(f, "separable"),
            Self::JEntangled(omega) => write!(f, "j({omega})"),
        }
    }
}

/// `[[√ρ, √(1-ρ) e^{iθ}], [√(1-ρ) e^{iφ}, -√ρ e^{i(θ+φ)}]]` in the
/// `{|L>, |R>}` basis.
pub fn coin_unitary(p: &CoinParams) -> Result<CoinMatrix> {
    p.validate()?;
    let keep = p.rho.sqrt();
    let flip = (1.0 - p.rho).sqrt();
    let m = Matrix2::new(
        Complex64::new(keep, 0.0),
        Complex64::from_polar(flip, p.theta),
        Complex64::from_polar(flip, p.phi),
        -Complex64::from_polar(keep, p.theta + p.phi),
    );
    CoinMatrix::new(m)
}

fn check_omega(omega: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&omega) {
        return Err(Error::Domain {
            name: "omega",
            value: omega,
            domain: "[0, π/2]",
        });
    }
    Ok(())
}

/// `J(ω) = cos(ω/2) I + i sin(ω/2) σx⊗σx⊗σx`.
pub fn entangler_j(omega: f64) -> Result<CoinOperator> {
    check_omega(omega)?;
    let (s, c) = (omega / 2.0).sin_cos();
    let mut j = CoinOperator::zeros();
    for idx in 0..COIN_DIM {
        j[(idx, idx)] += Complex64::new(c, 0.0);
        // σx on all three qubits flips every bit.
        j[(COIN_DIM - 1 - idx, idx)] += Complex64::new(0.0, s);
    }
    Ok(j)
}

pub fn initial_coin_state(kind: InitialCoinKind) -> Result<CoinVector> {
    let mut v = CoinVector::zeros();
    match kind {
        InitialCoinKind::Ghz => {
            v[0b000] = Complex64::new(1.0 / SQRT_2, 0.0);
            v[0b111] = Complex64::new(1.0 / SQRT_2, 0.0);
        }
        InitialCoinKind::W => {
            let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
            v[0b001] = a;
            v[0b010] = a;
            v[0b100] = a;
        }
        InitialCoinKind::Separable => {
            let a = 1.0 / (2.0 * SQRT_2);
            for (c, amp) in v.iter_mut().enumerate() {
                let sign = if c.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                *amp = Complex64::new(sign * a, 0.0);
            }
        }
        InitialCoinKind::JEntangled(omega) => {
            let mut lll = CoinVector::zeros();
            lll[0] = Complex64::new(1.0, 0.0);
            v = entangler_j(omega)? * lll;
        }
    }
    Ok(v)
}
