//! Walker state storage and the structured (matrix-free) round operators.
//!
//! The state lives in `C^8 ⊗ C^N ⊗ C^N ⊗ C^N` with `N = 2T + 1`. Amplitudes
//! are stored coin-major: block `c` holds the `N^3` position amplitudes for
//! coin basis state `c`, and inside a block the site index is
//! `(i1 * N + i2) * N + i3` where `ik = xk + T`.
//!
//! Coin basis index: `c = 4*b1 + 2*b2 + b3`, with `bk = 0` for `|L>` and
//! `bk = 1` for `|R>` on player `k`'s coin. `|LLL>` is 0 and `|RRR>` is 7.

use nalgebra::{Matrix2, SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Three coin qubits.
pub const COIN_DIM: usize = 8;
pub const PLAYERS: usize = 3;

/// Normalisation tolerance for coin vectors handed to [`WalkerState::new`].
pub const NORM_TOL: f64 = 1e-10;
/// Entrywise tolerance on `M†M - I` for coin matrices.
pub const UNITARY_TOL: f64 = 1e-12;

pub type CoinVector = SVector<Complex64, COIN_DIM>;
pub type CoinOperator = SMatrix<Complex64, COIN_DIM, COIN_DIM>;

/// Bit of player `p` (1-based) inside a coin index.
pub fn player_mask(player: usize) -> Result<usize> {
    match player {
        1..=PLAYERS => Ok(1 << (PLAYERS - player)),
        _ => Err(Error::InvalidPlayer(player)),
    }
}

/// Ring neighbours `(i-1, i+1)` of a player, both 1-based.
pub fn ring_neighbours(player: usize) -> Result<(usize, usize)> {
    player_mask(player)?;
    let prev = (player + PLAYERS - 2) % PLAYERS + 1;
    let next = player % PLAYERS + 1;
    Ok((prev, next))
}

/// Finite cube `[-T, T]^3` of lattice sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PositionLattice {
    half_extent: usize,
}

impl PositionLattice {
    pub fn new(half_extent: usize) -> Result<Self> {
        if half_extent < 1 {
            return Err(Error::InvalidLattice(half_extent));
        }
        Ok(Self { half_extent })
    }

    pub fn half_extent(&self) -> usize {
        self.half_extent
    }

    pub fn axis_len(&self) -> usize {
        2 * self.half_extent + 1
    }

    pub fn sites(&self) -> usize {
        self.axis_len().pow(3)
    }

    pub fn dim(&self) -> usize {
        COIN_DIM * self.sites()
    }

    /// Site index of a coordinate triple, or `None` outside the cube.
    pub fn site_index(&self, x: [i64; 3]) -> Option<usize> {
        let t = self.half_extent as i64;
        let n = self.axis_len();
        let mut idx = 0;
        for xk in x {
            if xk.abs() > t {
                return None;
            }
            idx = idx * n + (xk + t) as usize;
        }
        Some(idx)
    }

    pub fn coordinates(&self, site: usize) -> [i64; 3] {
        let n = self.axis_len();
        let t = self.half_extent as i64;
        [
            (site / (n * n)) as i64 - t,
            ((site / n) % n) as i64 - t,
            (site % n) as i64 - t,
        ]
    }
}

/// A 2×2 coin operator. Construction through [`CoinMatrix::new`] checks
/// unitarity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix(Matrix2<Complex64>);

impl CoinMatrix {
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let deviation = unitarity_deviation(&m);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::new(Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.0)
    }
}

/// Max entrywise `|M†M - I|` for any square matrix.
pub fn unitarity_deviation<const D: usize>(m: &SMatrix<Complex64, D, D>) -> f64 {
    let prod = m.adjoint() * m;
    let mut worst = 0.0f64;
    for r in 0..D {
        for c in 0..D {
            let target = if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let d = (prod[(r, c)] - target).norm();
            if d.is_nan() {
                return f64::INFINITY;
            }
            worst = worst.max(d);
        }
    }
    worst
}

/// The four branches of a neighbour-conditioned toss. The first letter
/// is the state of neighbour `i-1`, the second of neighbour `i+1`;
/// `R` is a winner and `L` a loser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledCoin {
    pub rr: CoinMatrix,
    pub rl: CoinMatrix,
    pub lr: CoinMatrix,
    pub ll: CoinMatrix,
}

impl ControlledCoin {
    pub fn uniform(m: CoinMatrix) -> Self {
        Self {
            rr: m,
            rl: m,
            lr: m,
            ll: m,
        }
    }

    /// Branch selected by the neighbour bits (1 = R).
    pub fn branch(&self, prev_r: bool, next_r: bool) -> &CoinMatrix {
        match (prev_r, next_r) {
            (true, true) => &self.rr,
            (true, false) => &self.rl,
            (false, true) => &self.lr,
            (false, false) => &self.ll,
        }
    }

    fn check_unitary(&self) -> Result<()> {
        for m in [&self.rr, &self.rl, &self.lr, &self.ll] {
            let deviation = m.unitarity_deviation();
            if !(deviation <= UNITARY_TOL) {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(())
    }
}

/// One player's toss within a round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Toss {
    Single(CoinMatrix),
    Controlled(ControlledCoin),
}

/// A full round `U_pos U_c3 U_c2 U_c1`: `tosses[k]` is player `k+1`'s toss,
/// applied in order, followed by the position update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundSpec {
    pub tosses: [Toss; PLAYERS],
}

/// Dense amplitude tensor of the three-coin, three-axis walker.
///
/// `reach` bounds the support: every amplitude with some `|xk| > reach` is
/// zero. Operators only sweep the `[-reach, reach]^3` cube.
#[derive(Debug, Clone)]
pub struct WalkerState {
    lattice: PositionLattice,
    amps: Vec<Amplitude>,
    reach: usize,
}

impl PartialEq for WalkerState {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.amps == other.amps
    }
}

impl WalkerState {
    /// `|coin> ⊗ |0,0,0>`.
    pub fn new(coin: &CoinVector, lattice: PositionLattice) -> Result<Self> {
        let norm = coin.norm();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::Normalization {
                norm,
                tol: NORM_TOL,
            });
        }
        let mut state = Self::zeros(lattice);
        let origin = lattice
            .site_index([0, 0, 0])
            .expect("origin lies in every lattice");
        for (c, amp) in coin.iter().enumerate() {
            state.amps[c * lattice.sites() + origin] = *amp;
        }
        Ok(state)
    }

    pub fn zeros(lattice: PositionLattice) -> Self {
        Self {
            lattice,
            amps: vec![Complex64::new(0.0, 0.0); lattice.dim()],
            reach: 0,
        }
    }

    /// Builds a state from raw coin-major amplitudes.
    pub fn from_amplitudes(lattice: PositionLattice, amps: Vec<Amplitude>) -> Result<Self> {
        if amps.len() != lattice.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for half extent {}, got {}",
                lattice.dim(),
                lattice.half_extent(),
                amps.len()
            )));
        }
        let sites = lattice.sites();
        let reach = amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
            .map(|(i, _)| {
                lattice
                    .coordinates(i % sites)
                    .iter()
                    .map(|x| x.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0);
        Ok(Self {
            lattice,
            amps,
            reach,
        })
    }

    /// Upper bound on `max_k |xk|` over the support.
    pub fn reach(&self) -> usize {
        self.reach
    }

    pub fn lattice(&self) -> PositionLattice {
        self.lattice
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    /// Position block of one coin basis state.
    pub fn coin_block(&self, coin: usize) -> &[Amplitude] {
        let sites = self.lattice.sites();
        &self.amps[coin * sites..(coin + 1) * sites]
    }

    pub fn amplitude(&self, coin: usize, x: [i64; 3]) -> Amplitude {
        match self.lattice.site_index(x) {
            Some(site) if coin < COIN_DIM => self.amps[coin * self.lattice.sites() + site],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Panics if `x` is outside the lattice or `coin >= 8`.
    pub fn set_amplitude(&mut self, coin: usize, x: [i64; 3], value: Amplitude) {
        assert!(coin < COIN_DIM, "coin index {coin} out of range");
        let site = self.lattice.site_index(x).unwrap_or_else(|| {
            panic!(
                "{x:?} outside lattice of half extent {}",
                self.lattice.half_extent()
            )
        });
        let sites = self.lattice.sites();
        self.amps[coin * sites + site] = value;
        if value != Complex64::new(0.0, 0.0) {
            let r = x
                .iter()
                .map(|xk| xk.unsigned_abs() as usize)
                .max()
                .unwrap_or(0);
            self.reach = self.reach.max(r);
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability of each coin basis state, summed over positions.
    pub fn coin_marginal(&self) -> [f64; COIN_DIM] {
        let mut out = [0.0; COIN_DIM];
        for (c, p) in out.iter_mut().enumerate() {
            *p = self.coin_block(c).iter().map(|a| a.norm_sqr()).sum();
        }
        out
    }

    /// Probability of each lattice site, summed over coin states.
    pub fn position_marginal(&self) -> Vec<f64> {
        let sites = self.lattice.sites();
        let mut out = vec![0.0; sites];
        for block in self.amps.chunks_exact(sites) {
            for (p, a) in out.iter_mut().zip(block) {
                *p += a.norm_sqr();
            }
        }
        out
    }

    /// The coin vector at a single site.
    pub fn coin_at(&self, x: [i64; 3]) -> CoinVector {
        CoinVector::from_fn(|c, _| self.amplitude(c, x))
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scale(&mut self, factor: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    /// Applies `m` to one player's coin, identity elsewhere.
    pub fn apply_coin_matrix(&mut self, player: usize, m: &CoinMatrix) -> Result<()> {
        let deviation = m.unitarity_deviation();
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        let mask = player_mask(player)?;
        let rows = self.support_rows();
        for c0 in (0..COIN_DIM).filter(|c| c & mask == 0) {
            let (lo, hi) = self.block_pair(c0, c0 | mask);
            mix_pair(lo, hi, m, &rows);
        }
        Ok(())
    }

    /// Applies the neighbour-conditioned toss to one player's coin.
    pub fn apply_controlled_coin(&mut self, player: usize, coins: &ControlledCoin) -> Result<()> {
        coins.check_unitary()?;
        let mask = player_mask(player)?;
        let (prev, next) = ring_neighbours(player)?;
        let prev_mask = player_mask(prev)?;
        let next_mask = player_mask(next)?;
        let rows = self.support_rows();
        for c0 in (0..COIN_DIM).filter(|c| c & mask == 0) {
            let m = coins.branch(c0 & prev_mask != 0, c0 & next_mask != 0);
            let (lo, hi) = self.block_pair(c0, c0 | mask);
            mix_pair(lo, hi, m, &rows);
        }
        Ok(())
    }

    /// Shifts every coin block by `+1` on axes whose coin is `R` and `-1`
    /// on axes whose coin is `L`.
    pub fn apply_position_update(&mut self) -> Result<()> {
        let t = self.lattice.half_extent();
        if self.reach >= t {
            self.check_interior()?;
        }
        // Everything nonzero is now strictly inside the lattice.
        let r = self.reach.min(t - 1);
        let n = self.lattice.axis_len();
        let sites = self.lattice.sites();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for c in 0..COIN_DIM {
            let step = |bit: usize| if c & bit != 0 { 1isize } else { -1 };
            let offset = step(4) * (n * n) as isize + step(2) * n as isize + step(1);
            let src = &self.amps[c * sites..(c + 1) * sites];
            let dst = &mut out[c * sites..(c + 1) * sites];
            for i1 in t - r..=t + r {
                for i2 in t - r..=t + r {
                    let row = (i1 * n + i2) * n;
                    for site in row + t - r..=row + t + r {
                        dst[(site as isize + offset) as usize] = src[site];
                    }
                }
            }
        }
        self.amps = out;
        self.reach = r + 1;
        Ok(())
    }

    pub fn apply_toss(&mut self, player: usize, toss: &Toss) -> Result<()> {
        match toss {
            Toss::Single(m) => self.apply_coin_matrix(player, m),
            Toss::Controlled(coins) => self.apply_controlled_coin(player, coins),
        }
    }

    pub fn apply_round(&mut self, round: &RoundSpec) -> Result<()> {
        for (k, toss) in round.tosses.iter().enumerate() {
            self.apply_toss(k + 1, toss)?;
        }
        self.apply_position_update()
    }

    /// Errors if any nonzero amplitude sits on the lattice surface.
    fn check_interior(&self) -> Result<()> {
        let n = self.lattice.axis_len();
        let sites = self.lattice.sites();
        let edge = |i: usize| i == 0 || i == n - 1;
        for (c, block) in self.amps.chunks_exact(sites).enumerate() {
            for i1 in 0..n {
                for i2 in 0..n {
                    let row = (i1 * n + i2) * n;
                    let on_face = edge(i1) || edge(i2);
                    for i3 in 0..n {
                        if (on_face || edge(i3)) && block[row + i3] != Complex64::new(0.0, 0.0) {
                            return Err(Error::BoundaryOverflow {
                                coin: c,
                                position: self.lattice.coordinates(row + i3),
                                half_extent: self.lattice.half_extent(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Contiguous site ranges (rows along axis 3) covering the support cube.
    fn support_rows(&self) -> Vec<std::ops::Range<usize>> {
        let n = self.lattice.axis_len();
        let t = self.lattice.half_extent();
        let r = self.reach.min(t);
        let mut rows = Vec::with_capacity((2 * r + 1).pow(2));
        for i1 in t - r..=t + r {
            for i2 in t - r..=t + r {
                let row = (i1 * n + i2) * n;
                rows.push(row + t - r..row + t + r + 1);
            }
        }
        rows
    }

    fn block_pair(&mut self, lo: usize, hi: usize) -> (&mut [Amplitude], &mut [Amplitude]) {
        debug_assert!(lo < hi);
        let sites = self.lattice.sites();
        let (left, right) = self.amps.split_at_mut(hi * sites);
        (&mut left[lo * sites..(lo + 1) * sites], &mut right[..sites])
    }
}

/// `(a, b) <- m (a, b)` for paired amplitudes whose coin differs in one bit.
fn mix_pair(
    lo: &mut [Amplitude],
    hi: &mut [Amplitude],
    m: &CoinMatrix,
    rows: &[std::ops::Range<usize>],
) {
    let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    for row in rows {
        for (a, b) in lo[row.clone()].iter_mut().zip(hi[row.clone()].iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m00 * x + m01 * y;
            *b = m10 * x + m11 * y;
        }
    }
}
