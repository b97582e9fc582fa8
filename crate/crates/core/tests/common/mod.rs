#![allow(dead_code)]

/// Exact expected capital after each of `rounds` plays of a capital-mod-3
/// game, starting from capital 0. `win(t, m)` is the win probability of play
/// `t` at capital residue `m`.
pub fn mod3_expected_capital(rounds: usize, win: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut dist = [1.0, 0.0, 0.0];
    let mut mean = 0.0;
    let mut out = vec![0.0];
    for t in 0..rounds {
        let mut next = [0.0; 3];
        for m in 0..3 {
            let p = win(t, m);
            mean += dist[m] * (2.0 * p - 1.0);
            next[(m + 1) % 3] += dist[m] * p;
            next[(m + 2) % 3] += dist[m] * (1.0 - p);
        }
        dist = next;
        out.push(mean);
    }
    out
}

/// Original game B: `p1` at residue 0, `p2` otherwise.
pub fn game_b_expected_capital(p1: f64, p2: f64, rounds: usize) -> Vec<f64> {
    mod3_expected_capital(rounds, |_, m| if m == 0 { p1 } else { p2 })
}
