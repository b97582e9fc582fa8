//! Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
//! the individual checks, and exits nonzero if any criterion fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_8, PI};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use qparrondo::classical::{run_classical, ClassicalConfig, ClassicalKind, OriginalParams};
use qparrondo::coin::{
    coin_unitary, entangler_j, initial_coin_state, CoinParams, GameBParams, InitialCoinKind,
};
use qparrondo::discriminator::{DiscriminationMode, Discriminator, StateClass};
use qparrondo::engine::{
    round_spec, run_averaged, run_rng, run_simulation, GameLabel, GameScheme, SimulationConfig,
};
use qparrondo::observables::Verdict;
use qparrondo::oracle::dense_step_oracle;
use qparrondo::state::{unitarity_deviation, CoinMatrix, CoinVector, PositionLattice, WalkerState};
use qparrondo::sweep::{
    default_omega_values, default_rho4_values, sweep_entanglement, sweep_phase_map, sweep_rho4,
    PhaseGrid, SweepPoint,
};

const P22: GameScheme = GameScheme::Periodic { a: 2, b: 2 };
const MIX: GameScheme = GameScheme::RandomMix;

struct Check {
    label: String,
    pass: bool,
    detail: String,
}

type Criterion = fn(&mut Checks);

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.push(Check {
            label: label.into(),
            pass,
            detail: detail.into(),
        });
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn base(initial: InitialCoinKind) -> SimulationConfig {
    SimulationConfig {
        initial,
        ..SimulationConfig::default()
    }
}

fn gain(p: &SweepPoint, scheme: GameScheme) -> f64 {
    p.outcome(scheme).unwrap().gain
}

fn outcome_str(p: &SweepPoint, scheme: GameScheme) -> String {
    let o = p.outcome(scheme).unwrap();
    format!(
        "{scheme} = {:+.4} ± {:.4} ({})",
        o.gain, o.stderr, o.verdict
    )
}

fn criterion_1(ch: &mut Checks) {
    let ghz = initial_coin_state(InitialCoinKind::Ghz).unwrap();
    let fair = coin_unitary(&CoinParams::fair()).unwrap();
    let mut s = WalkerState::new(&ghz, PositionLattice::new(1).unwrap()).unwrap();
    for player in 1..=3 {
        s.apply_coin_matrix(player, &fair).unwrap();
    }
    let a = c(1.0, -1.0) / 4.0;
    let b = c(-1.0, 1.0) / 4.0;
    let expected = [a, b, b, b, b, b, b, a];
    let got = s.coin_at([0, 0, 0]);
    let err = (0..8)
        .map(|k| (got[k] - expected[k]).norm())
        .fold(0.0, f64::max);
    ch.check(
        "one fair toss per qubit maps GHZ to the quoted vector",
        err <= 1e-12,
        format!("max error {err:.2e}"),
    );

    for player in 1..=3 {
        s.apply_coin_matrix(player, &fair).unwrap();
    }
    let back = s.coin_at([0, 0, 0]);
    let overlap = ghz
        .iter()
        .zip(back.iter())
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm();
    ch.check(
        "a second triple toss returns GHZ up to phase",
        (overlap - 1.0).abs() <= 1e-10,
        format!("|<GHZ|psi>| = {overlap:.15}"),
    );
}

fn criterion_2(ch: &mut Checks) {
    let mut lll = CoinVector::zeros();
    lll[0] = c(1.0, 0.0);
    let out = entangler_j(FRAC_PI_2).unwrap() * lll;
    let mut expected = CoinVector::zeros();
    expected[0] = c(FRAC_1_SQRT_2, 0.0);
    expected[7] = c(0.0, FRAC_1_SQRT_2);
    let err = (out - expected)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    ch.check(
        "J(π/2)|LLL> = (|LLL> + i|RRR>)/√2",
        err <= 1e-12,
        format!("max error {err:.2e}"),
    );
}

fn criterion_3(ch: &mut Checks) {
    let s = run_simulation(&base(InitialCoinKind::Ghz)).unwrap();
    let worst = s.average_gain.iter().map(|g| g.abs()).fold(0.0, f64::max);
    ch.check(
        "GHZ game A gain is 0 at every round up to 16",
        s.rounds() == 16 && worst <= 1e-10,
        format!("max |gain| {worst:.2e} over {} rounds", s.rounds()),
    );
}

fn criterion_4(ch: &mut Checks) {
    let values = default_rho4_values();
    let (low, high) = values.split_at(4);
    let high = &high[1..];
    let schemes = [GameScheme::PureA, GameScheme::PureB, P22, MIX];

    let t0 = Instant::now();
    let ghz = sweep_rho4(&base(InitialCoinKind::Ghz), &values, &schemes).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    ch.check(
        "full rho4 sweep over 4 schemes under a minute",
        elapsed < 60.0,
        format!("{elapsed:.1} s"),
    );

    let at = |pts: &[SweepPoint], v: f64| {
        pts.iter()
            .find(|p| (p.value - v).abs() < 1e-12)
            .unwrap()
            .clone()
    };
    for &v in low {
        let p = at(&ghz, v);
        ch.check(
            format!("GHZ B > 0 at rho4 = {v}"),
            gain(&p, GameScheme::PureB) > 0.0,
            outcome_str(&p, GameScheme::PureB),
        );
    }
    for &v in high {
        let p = at(&ghz, v);
        ch.check(
            format!("GHZ B < 0 at rho4 = {v}"),
            gain(&p, GameScheme::PureB) < 0.0,
            outcome_str(&p, GameScheme::PureB),
        );
    }
    for p in &ghz {
        // [2,2] is deterministic; A+B is judged against its 10-run spread.
        let g22 = p.outcome(P22).unwrap();
        ch.check(
            format!("GHZ [2,2] non-losing at rho4 = {}", p.value),
            g22.verdict != Verdict::Losing,
            outcome_str(p, P22),
        );
        let mix = p.outcome(MIX).unwrap();
        ch.check(
            format!("GHZ A+B non-losing at rho4 = {}", p.value),
            mix.verdict != Verdict::Losing,
            outcome_str(p, MIX),
        );
    }

    let sep = sweep_rho4(&base(InitialCoinKind::Separable), &values, &schemes).unwrap();
    for &v in low {
        let p = at(&sep, v);
        ch.check(
            format!("separable [2,2] paradox at rho4 = {v}"),
            p.outcome(P22).unwrap().paradox,
            format!(
                "{}; {}; {}",
                outcome_str(&p, GameScheme::PureA),
                outcome_str(&p, GameScheme::PureB),
                outcome_str(&p, P22)
            ),
        );
    }
    let p = at(&sep, 0.4);
    ch.check(
        "separable A+B paradox at rho4 = 0.4",
        p.outcome(MIX).unwrap().paradox,
        outcome_str(&p, MIX),
    );
    let losing_22: Vec<String> = high
        .iter()
        .map(|&v| at(&sep, v))
        .filter(|p| gain(p, P22) < 0.0 && gain(p, GameScheme::PureB) > 0.0)
        .map(|p| format!("{}", p.value))
        .collect();
    ch.check(
        "separable [2,2] < 0 with B > 0 for some rho4 in 0.6..0.9",
        !losing_22.is_empty(),
        format!("at rho4 = {}", losing_22.join(", ")),
    );

    let w_schemes = [
        GameScheme::PureA,
        GameScheme::PureB,
        P22,
        MIX,
        GameScheme::Periodic { a: 3, b: 2 },
        GameScheme::Periodic { a: 2, b: 3 },
        GameScheme::Periodic { a: 3, b: 3 },
    ];
    let w = sweep_rho4(&base(InitialCoinKind::W), &values, &w_schemes).unwrap();
    for scheme in w_schemes {
        let bad: Vec<String> = w
            .iter()
            .filter(|p| gain(p, scheme) >= 0.0)
            .map(|p| format!("rho4 = {} gain {:+.4}", p.value, gain(p, scheme)))
            .collect();
        ch.check(
            format!("W {scheme} < 0 at every rho4"),
            bad.is_empty(),
            bad.join("; "),
        );
    }
    let flagged: Vec<String> = w
        .iter()
        .flat_map(|p| {
            p.outcomes
                .iter()
                .filter(|o| o.paradox)
                .map(move |o| format!("{} at {}", o.scheme, p.value))
        })
        .collect();
    ch.check(
        "W sets no paradox flag",
        flagged.is_empty(),
        flagged.join("; "),
    );
}

/// rho4 used for the entanglement sweep and the phase maps.
const SWEEP_RHO4: f64 = 0.9;

fn criterion_5(ch: &mut Checks) {
    let cfg = SimulationConfig {
        game_b: GameBParams::with_rho4(SWEEP_RHO4).unwrap(),
        ..SimulationConfig::default()
    };
    let schemes = [GameScheme::PureA, GameScheme::PureB, P22, MIX];
    let pts = sweep_entanglement(&cfg, &default_omega_values(), &schemes).unwrap();
    for p in &pts[..5] {
        let k = (p.value / (PI / 10.0)).round();
        ch.check(
            format!("ω = {k}π/10: A < 0, B < 0, no paradox"),
            gain(p, GameScheme::PureA) < 0.0
                && gain(p, GameScheme::PureB) < 0.0
                && p.outcomes.iter().all(|o| !o.paradox),
            format!(
                "{}; {}; {}; {}",
                outcome_str(p, GameScheme::PureA),
                outcome_str(p, GameScheme::PureB),
                outcome_str(p, P22),
                outcome_str(p, MIX)
            ),
        );
    }
    let p = &pts[5];
    ch.check(
        "ω = π/2: A fair",
        gain(p, GameScheme::PureA).abs() <= 1e-10,
        outcome_str(p, GameScheme::PureA),
    );
    for scheme in [P22, MIX] {
        ch.check(
            format!("ω = π/2: {scheme} paradox"),
            p.outcome(scheme).unwrap().paradox,
            format!(
                "{}; {}",
                outcome_str(p, GameScheme::PureB),
                outcome_str(p, scheme)
            ),
        );
    }
}

fn criterion_6(ch: &mut Checks) {
    let grid = PhaseGrid::new(FRAC_PI_8);
    let cfg = |initial| SimulationConfig {
        initial,
        game_b: GameBParams::with_rho4(SWEEP_RHO4).unwrap(),
        ..SimulationConfig::default()
    };
    let t0 = Instant::now();
    let ghz = sweep_phase_map(
        &cfg(InitialCoinKind::Ghz),
        &grid,
        &[GameScheme::PureA, GameScheme::PureB, P22, MIX],
    )
    .unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    ch.check(
        "16×16 map over 4 schemes under ten minutes",
        elapsed < 600.0,
        format!("{elapsed:.1} s, {} rows", ghz.len()),
    );

    let of = |rows: &[qparrondo::MapRecord], s: GameScheme| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.scheme == s)
            .map(|r| r.gain)
            .collect()
    };
    let a = of(&ghz, GameScheme::PureA);
    let worst = a.iter().map(|g| g.abs()).fold(0.0, f64::max);
    ch.check(
        "GHZ A = 0 on every grid point",
        a.len() == 256 && worst <= 1e-10,
        format!("max |gain| {worst:.2e}"),
    );
    let b = of(&ghz, GameScheme::PureB);
    let max_b = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ch.check(
        "GHZ B < 0 on every grid point",
        b.len() == 256 && max_b < 0.0,
        format!("max gain {max_b:+.4}"),
    );

    let w = sweep_phase_map(
        &cfg(InitialCoinKind::W),
        &grid,
        &[GameScheme::PureA, GameScheme::PureB],
    )
    .unwrap();
    for scheme in [GameScheme::PureA, GameScheme::PureB] {
        let g = of(&w, scheme);
        let lo = g.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ch.check(
            format!("W {scheme} map constant"),
            g.len() == 256 && hi - lo <= 1e-10,
            format!("range [{lo:+.12}, {hi:+.12}]"),
        );
    }
}

fn criterion_7(ch: &mut Checks) {
    let lattice = PositionLattice::new(2).unwrap();
    let cfg = SimulationConfig {
        game_b: GameBParams::with_rho4(0.3).unwrap(),
        ..SimulationConfig::default()
    };
    for initial in [InitialCoinKind::Ghz, InitialCoinKind::W] {
        for label in [GameLabel::A, GameLabel::B] {
            let coin = initial_coin_state(initial).unwrap();
            let start = WalkerState::new(&coin, lattice).unwrap();
            let spec = round_spec([label; 3], &cfg).unwrap();
            let mut fast = start.clone();
            fast.apply_round(&spec).unwrap();
            let dense = dense_step_oracle(&start, &spec).unwrap();
            let diff = fast
                .amplitudes()
                .iter()
                .zip(dense.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            ch.check(
                format!("{initial} game {label:?}"),
                diff <= 1e-10,
                format!("max diff {diff:.2e}"),
            );
        }
    }
}

fn criterion_8(ch: &mut Checks) {
    let mut rng = run_rng(2024, 0);
    let mut worst_u: f64 = 0.0;
    let mut worst_j: f64 = 0.0;
    for _ in 0..1000 {
        let p = CoinParams {
            rho: rng.random_range(0.0..=1.0),
            theta: rng.random_range(-10.0..10.0),
            phi: rng.random_range(-10.0..10.0),
        };
        let m: CoinMatrix = coin_unitary(&p).unwrap();
        worst_u = worst_u.max(unitarity_deviation(m.matrix()));
        worst_j = worst_j.max(unitarity_deviation(
            &entangler_j(rng.random_range(0.0..=FRAC_PI_2)).unwrap(),
        ));
    }
    ch.check(
        "coin_unitary unitary over 1000 draws",
        worst_u <= 1e-12,
        format!("max deviation {worst_u:.2e}"),
    );
    ch.check(
        "entangler_j unitary over 1000 draws",
        worst_j <= 1e-12,
        format!("max deviation {worst_j:.2e}"),
    );

    // Norm, support and parity every round for a random mix of both games.
    let mut worst_norm: f64 = 0.0;
    let mut support_ok = true;
    for initial in [
        InitialCoinKind::Ghz,
        InitialCoinKind::W,
        InitialCoinKind::Separable,
        InitialCoinKind::JEntangled(0.7),
    ] {
        let cfg = SimulationConfig {
            initial,
            scheme: MIX,
            game_b: GameBParams::with_rho4(0.2).unwrap().with_phases(0.4, 1.9),
            rho0: CoinParams::new(0.35, 0.4, 1.9).unwrap(),
            ..SimulationConfig::default()
        };
        let coin = initial_coin_state(initial).unwrap();
        let mut s = WalkerState::new(&coin, cfg.lattice().unwrap()).unwrap();
        let schedule = qparrondo::engine::schedule_for(&cfg, 0);
        for t in 0..cfg.rounds {
            s.apply_round(&round_spec(schedule.round_labels(cfg.granularity, t), &cfg).unwrap())
                .unwrap();
            worst_norm = worst_norm.max((s.norm() - 1.0).abs());
            let marginal = s.position_marginal();
            let steps = (t + 1) as i64;
            for (site, p) in marginal.iter().enumerate() {
                if *p > 0.0 {
                    let x = s.lattice().coordinates(site);
                    support_ok &= x
                        .iter()
                        .all(|xk| xk.abs() <= steps && (xk - steps).rem_euclid(2) == 0);
                }
            }
        }
    }
    ch.check(
        "norm preserved over 16 rounds",
        worst_norm <= 1e-10,
        format!("max |norm - 1| {worst_norm:.2e}"),
    );
    ch.check("support within |x| <= t with parity t", support_ok, "");

    let cfg = SimulationConfig {
        scheme: MIX,
        seed: 77,
        ..base(InitialCoinKind::Separable)
    };
    let a = run_averaged(&cfg).unwrap();
    let b = run_averaged(&cfg).unwrap();
    ch.check("seeded A+B reruns are identical", a == b, "");

    let small = SimulationConfig { rounds: 6, ..cfg };
    let sweep = || sweep_rho4(&small, &default_rho4_values(), &[GameScheme::PureB, MIX]).unwrap();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(sweep);
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(sweep);
    ch.check("sweep results independent of thread count", one == four, "");
}

fn criterion_9(ch: &mut Checks) {
    let d = Discriminator::new(16).unwrap();
    let mut rng = run_rng(9, 0);
    for (kind, class) in [
        (InitialCoinKind::Ghz, StateClass::Ghz),
        (InitialCoinKind::W, StateClass::W),
    ] {
        let coin = initial_coin_state(kind).unwrap();
        let exact = d
            .discriminate(&coin, DiscriminationMode::Expectation, &mut rng)
            .unwrap();
        ch.check(
            format!("expectation mode labels {kind}"),
            exact.label == class,
            format!(
                "s = {:+.6}, δ = {:.6}, label {}",
                exact.statistic, exact.threshold, exact.label
            ),
        );
        let sampled = d
            .discriminate(
                &coin,
                DiscriminationMode::Sampled { shots: 100_000 },
                &mut rng,
            )
            .unwrap();
        let z = (sampled.statistic - exact.statistic).abs() / sampled.std_error;
        ch.check(
            format!("{kind}: 1e5 shots within 4 SE"),
            z <= 4.0,
            format!(
                "sampled {:+.4} ± {:.4}, {z:.2} SE",
                sampled.statistic, sampled.std_error
            ),
        );
    }
}

fn criterion_10(ch: &mut Checks) {
    let params = OriginalParams::new(0.005).unwrap();
    let cfg = |kind, scheme| ClassicalConfig {
        kind,
        scheme,
        rounds: 10_000,
        trials: 1_000,
        seed: 11,
    };
    let original = ClassicalKind::Original(params);
    let b = run_classical(&cfg(original, GameScheme::PureB)).unwrap();
    let (gb, sb) = (b.final_gain().unwrap(), b.final_stderr());
    ch.check(
        "B losing by 3 SE",
        gb < -3.0 * sb,
        format!("{gb:+.2} ± {sb:.2}"),
    );

    let mix = run_classical(&cfg(original, MIX)).unwrap();
    let (gm, sm) = (mix.final_gain().unwrap(), mix.final_stderr());
    ch.check(
        "A+B winning by 3 SE",
        gm > 3.0 * sm,
        format!("{gm:+.2} ± {sm:.2}"),
    );

    let fair = run_classical(&cfg(
        ClassicalKind::Original(OriginalParams::new(0.0).unwrap()),
        GameScheme::PureA,
    ))
    .unwrap();
    let (ga, sa) = (fair.final_gain().unwrap(), fair.final_stderr());
    ch.check(
        "A fair at ε = 0 within 3 SE",
        ga.abs() <= 3.0 * sa,
        format!("{ga:+.2} ± {sa:.2}"),
    );

    let exact = *common::game_b_expected_capital(params.p1, params.p2, 10_000)
        .last()
        .unwrap();
    ch.check(
        "B drift matches the mod-3 chain within 3 SE",
        (gb - exact).abs() <= 3.0 * sb,
        format!("Monte Carlo {gb:+.2} ± {sb:.2}, exact {exact:+.2}"),
    );
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("exact state identity", criterion_1),
        ("entangler identity", criterion_2),
        ("GHZ fairness of A", criterion_3),
        ("rho4 sign patterns", criterion_4),
        ("entanglement sweep", criterion_5),
        ("phase maps", criterion_6),
        ("oracle equivalence", criterion_7),
        ("property suites", criterion_8),
        ("discriminator", criterion_9),
        ("classical baseline", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let mut checks = Checks::default();
        let t0 = Instant::now();
        run(&mut checks);
        let pass = checks.0.iter().all(|c| c.pass);
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {:<22} {}  ({:.1} s)",
            k + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
        for c in &checks.0 {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                println!("      {mark} {}", c.label);
            } else {
                println!("      {mark} {}: {}", c.label, c.detail);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
