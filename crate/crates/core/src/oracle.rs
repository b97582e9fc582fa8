//! Dense reference for one round: the full `8(2T+1)^3`-dimensional round
//! unitary is assembled from Kronecker products and applied by a plain
//! matrix-vector product. Only meant for tiny lattices.
//!
//! The position shift here is cyclic on `Z_{2T+1}` so that the assembled
//! matrix is exactly unitary. It coincides with the structured update
//! whenever the structured update succeeds (no amplitude on the boundary).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{
    ring_neighbours, CoinMatrix, PositionLattice, RoundSpec, Toss, WalkerState, COIN_DIM, PLAYERS,
};

/// Largest state dimension the oracle will materialise (`T = 3`).
pub const ORACLE_MAX_DIM: usize = COIN_DIM * 7 * 7 * 7;

type Dense = DMatrix<Complex64>;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn eye(n: usize) -> Dense {
    Dense::identity(n, n)
}

fn projector(r: bool) -> Dense {
    let mut p = Dense::zeros(2, 2);
    let i = usize::from(r);
    p[(i, i)] = one();
    p
}

fn coin2(m: &CoinMatrix) -> Dense {
    Dense::from_fn(2, 2, |r, c| m.get(r, c))
}

/// `S|x> = |x+1>` (or its adjoint) on a ring of `n` sites.
fn cyclic_shift(n: usize, forward: bool) -> Dense {
    let mut s = Dense::zeros(n, n);
    for x in 0..n {
        let to = if forward {
            (x + 1) % n
        } else {
            (x + n - 1) % n
        };
        s[(to, x)] = one();
    }
    s
}

fn kron_all(factors: &[Dense]) -> Dense {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// 8×8 coin-space operator of one player's toss.
fn toss_operator(player: usize, toss: &Toss) -> Result<Dense> {
    let slot = player - 1;
    match toss {
        Toss::Single(m) => {
            let mut factors = vec![eye(2), eye(2), eye(2)];
            factors[slot] = coin2(m);
            Ok(kron_all(&factors))
        }
        Toss::Controlled(coins) => {
            let (prev, next) = ring_neighbours(player)?;
            let mut total = Dense::zeros(COIN_DIM, COIN_DIM);
            for (prev_r, next_r) in [(true, true), (true, false), (false, true), (false, false)] {
                let mut factors = vec![eye(2), eye(2), eye(2)];
                factors[slot] = coin2(coins.branch(prev_r, next_r));
                factors[prev - 1] = projector(prev_r);
                factors[next - 1] = projector(next_r);
                total += kron_all(&factors);
            }
            Ok(total)
        }
    }
}

/// `Σ_{A,B,C ∈ {P_r, P_l}} A⊗B⊗C⊗f(A)⊗f(B)⊗f(C)`.
fn position_operator(lattice: PositionLattice) -> Dense {
    let n = lattice.axis_len();
    let mut total = Dense::zeros(lattice.dim(), lattice.dim());
    for c in 0..COIN_DIM {
        let bits: Vec<bool> = (0..PLAYERS)
            .map(|k| c & (1 << (PLAYERS - 1 - k)) != 0)
            .collect();
        let mut factors: Vec<Dense> = bits.iter().map(|&r| projector(r)).collect();
        factors.extend(bits.iter().map(|&r| cyclic_shift(n, r)));
        total += kron_all(&factors);
    }
    total
}

/// The full round matrix `U_pos (U_c3 U_c2 U_c1 ⊗ 1_pos)`.
pub fn round_matrix(lattice: PositionLattice, round: &RoundSpec) -> Result<Dense> {
    let dim = lattice.dim();
    if dim > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge {
            dim,
            limit: ORACLE_MAX_DIM,
        });
    }
    let mut coin = eye(COIN_DIM);
    for (k, toss) in round.tosses.iter().enumerate() {
        coin = toss_operator(k + 1, toss)? * coin;
    }
    let coin_full = coin.kronecker(&eye(lattice.sites()));
    Ok(position_operator(lattice) * coin_full)
}

/// Applies one round through the dense matrix.
pub fn dense_step_oracle(state: &WalkerState, round: &RoundSpec) -> Result<WalkerState> {
    let lattice = state.lattice();
    let m = round_matrix(lattice, round)?;
    let v = DVector::from_column_slice(state.amplitudes());
    let out = m * v;
    WalkerState::from_amplitudes(lattice, out.as_slice().to_vec())
}
