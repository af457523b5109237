//! Brute-force and Monte Carlo machinery for the unprojected walk on
//! `{1..n}^d`: exact evolution below a configurable state cap, shell
//! projection, and the checks that tie the full walk to the shell chain.

use num::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainParams, ShellDistribution};
use crate::error::{Error, Result};
use crate::lumped::ShellKernel;
use crate::scalar::{Mode, Scalar};

/// Default ceiling on `n^d` for exact full-chain work.
pub const DEFAULT_STATE_CAP: u64 = 1_000_000;

fn checked_state_count(params: ChainParams, cap: u64) -> Result<usize> {
    let states = params.state_count();
    if states > BigUint::from(cap) {
        return Err(Error::CapExceeded { states, cap });
    }
    let count: u64 = states.try_into().expect("within u64 cap");
    Ok(count as usize)
}

/// A single state of the full walk; coordinates lie in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullState {
    coords: Vec<u32>,
}

impl FullState {
    pub fn new(params: ChainParams, coords: Vec<u32>) -> Result<Self> {
        if coords.len() != params.d() {
            return Err(Error::Domain(format!(
                "state has {} coordinates, expected {}",
                coords.len(),
                params.d()
            )));
        }
        if coords.iter().any(|&c| c < 1 || c as u64 > params.n()) {
            return Err(Error::Domain("coordinate outside 1..=n".into()));
        }
        Ok(FullState { coords })
    }

    pub fn all_ones(params: ChainParams) -> Self {
        FullState { coords: vec![1; params.d()] }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Hamming distance from the all-ones state.
    pub fn shell(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 1).count()
    }

    pub fn hamming(&self, other: &FullState) -> usize {
        self.coords.iter().zip(&other.coords).filter(|(a, b)| a != b).count()
    }
}

/// Coordinatewise translation on the cyclic board, carrying `from` to `to`.
///
/// Shifts coordinate `i` by `(to_i - from_i) mod n`, wrapped back into
/// `1..=n`. Hamming distances, and hence one-step transition probabilities,
/// are invariant under it.
pub fn translate(params: ChainParams, from: &FullState, to: &FullState, v: &FullState) -> FullState {
    let n = params.n() as u32;
    let coords = v
        .coords
        .iter()
        .zip(from.coords.iter().zip(&to.coords))
        .map(|(&vi, (&fi, &ti))| {
            let shift = (ti + n - fi) % n;
            (vi - 1 + shift) % n + 1
        })
        .collect();
    FullState { coords }
}

/// Exact probability vector over all `n^d` states, mixed-radix indexed.
#[derive(Clone, Debug)]
pub struct FullDistribution {
    params: ChainParams,
    mode: Mode,
    weights: Vec<Scalar>,
}

impl FullDistribution {
    pub fn delta(params: ChainParams, state: &FullState, mode: Mode, cap: u64) -> Result<Self> {
        let count = checked_state_count(params, cap)?;
        let mut weights = vec![Scalar::zero(mode); count];
        weights[index_of(params, state)] = Scalar::one(mode);
        Ok(FullDistribution { params, mode, weights })
    }

    pub fn delta_ones(params: ChainParams, mode: Mode, cap: u64) -> Result<Self> {
        Self::delta(params, &FullState::all_ones(params), mode, cap)
    }

    pub fn uniform(params: ChainParams, mode: Mode, cap: u64) -> Result<Self> {
        let count = checked_state_count(params, cap)?;
        let w = Scalar::from_ratio(1, count as i64, mode);
        Ok(FullDistribution { params, mode, weights: vec![w; count] })
    }

    /// The distribution spreading shell `x`'s mass uniformly over that shell.
    pub fn shell_uniform(params: ChainParams, shell: usize, mode: Mode, cap: u64) -> Result<Self> {
        if shell > params.d() {
            return Err(Error::ShellIndex { index: shell, max: params.d() });
        }
        let count = checked_state_count(params, cap)?;
        let size = crate::chain::shell_size(params, shell)?;
        let size_i: u64 = size.try_into().expect("within cap");
        let w = Scalar::from_ratio(1, size_i as i64, mode);
        let zero = Scalar::zero(mode);
        let weights = (0..count)
            .map(|s| if shell_of_index(params, s) == shell { w.clone() } else { zero.clone() })
            .collect();
        Ok(FullDistribution { params, mode, weights })
    }

    pub fn params(&self) -> ChainParams {
        self.params
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn total_mass(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for w in &self.weights {
            acc += w;
        }
        acc
    }

    /// One exact step of the walk, matrix-free: each state spreads its mass
    /// equally over the `d(n-1)` states differing in exactly one coordinate.
    pub fn step(&self) -> Self {
        let params = self.params;
        let d = params.d();
        let n = params.n() as usize;
        let inv_moves = Scalar::from_ratio(1, params.moves_per_state() as i64, self.mode);
        let pows = radix_powers(params);
        let mut out = vec![Scalar::zero(self.mode); self.weights.len()];
        for (s, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let contribution = w * &inv_moves;
            for (_c, pow) in pows.iter().enumerate().take(d) {
                let digit = (s / pow) % n;
                let base = s - digit * pow;
                for g in 0..n {
                    if g != digit {
                        out[base + g * pow] += &contribution;
                    }
                }
            }
        }
        FullDistribution { params: self.params, mode: self.mode, weights: out }
    }

    /// Aggregate weights by Hamming distance from the all-ones state.
    pub fn shell_projection(&self) -> ShellDistribution {
        let d = self.params.d();
        let mut shells = vec![Scalar::zero(self.mode); d + 1];
        for (s, w) in self.weights.iter().enumerate() {
            shells[shell_of_index(self.params, s)] += w;
        }
        ShellDistribution::from_weights_unchecked(self.params, self.mode, shells)
    }

    /// TV distance to another distribution on the same space.
    pub fn tv(&self, other: &FullDistribution) -> Result<Scalar> {
        if self.params != other.params {
            return Err(Error::Domain("tv: mismatched parameters".into()));
        }
        if self.mode != other.mode {
            return Err(Error::ModeMismatch("tv: mixed numeric modes".into()));
        }
        let mut acc = Scalar::zero(self.mode);
        for (a, b) in self.weights.iter().zip(&other.weights) {
            acc += &(a - b).abs();
        }
        Ok(acc * Scalar::from_ratio(1, 2, self.mode))
    }
}

fn radix_powers(params: ChainParams) -> Vec<usize> {
    let n = params.n() as usize;
    let mut pows = Vec::with_capacity(params.d());
    let mut p = 1usize;
    for _ in 0..params.d() {
        pows.push(p);
        p *= n;
    }
    pows
}

pub fn index_of(params: ChainParams, state: &FullState) -> usize {
    let n = params.n() as usize;
    let mut idx = 0usize;
    for &c in state.coords.iter().rev() {
        idx = idx * n + (c as usize - 1);
    }
    idx
}

pub fn state_of_index(params: ChainParams, mut idx: usize) -> FullState {
    let n = params.n() as usize;
    let coords = (0..params.d())
        .map(|_| {
            let digit = idx % n;
            idx /= n;
            digit as u32 + 1
        })
        .collect();
    FullState { coords }
}

fn shell_of_index(params: ChainParams, mut idx: usize) -> usize {
    let n = params.n() as usize;
    let mut shell = 0;
    for _ in 0..params.d() {
        if idx % n != 0 {
            shell += 1;
        }
        idx /= n;
    }
    shell
}

/// Per-step comparison of the full walk's distance to stationarity against
/// the shell chain's.
#[derive(Clone, Debug, Serialize)]
pub struct LumpingRow {
    pub t: u64,
    pub tv_full: Scalar,
    pub tv_lumped: Scalar,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LumpingReport {
    pub n: u64,
    pub d: usize,
    pub mode: String,
    pub rows: Vec<LumpingRow>,
    pub all_equal: bool,
}

/// Evolve both chains from their worst starts and compare `TV(t)` for each
/// `t <= t_max`. Equality is exact in rational mode, 1e-12 in float mode.
pub fn verify_lumping(params: ChainParams, t_max: u64, mode: Mode, cap: u64) -> Result<LumpingReport> {
    let mut full = FullDistribution::delta_ones(params, mode, cap)?;
    let uniform = FullDistribution::uniform(params, mode, cap)?;
    let kernel = ShellKernel::new(params, mode);
    let pi = crate::chain::stationary_shell_distribution(params, mode);
    let mut lumped = ShellDistribution::delta(params, 0, mode)?;
    let mut rows = Vec::with_capacity(t_max as usize + 1);
    let mut all_equal = true;
    for t in 0..=t_max {
        let tv_full = full.tv(&uniform)?;
        let tv_lumped = crate::chain::tv_distance(&lumped, &pi)?;
        let equal = scalars_match(&tv_full, &tv_lumped, 1e-12);
        all_equal &= equal;
        rows.push(LumpingRow { t, tv_full, tv_lumped, equal });
        if t < t_max {
            full = full.step();
            lumped = kernel.step(&lumped);
        }
    }
    Ok(LumpingReport { n: params.n(), d: params.d(), mode: mode.as_str().into(), rows, all_equal })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitivityRow {
    pub start: Vec<u32>,
    pub tv: Scalar,
    pub matches_reference: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitivityReport {
    pub n: u64,
    pub d: usize,
    pub t: u64,
    pub mode: String,
    pub tv_reference: Scalar,
    pub rows: Vec<TransitivityRow>,
    pub translation_pairs_checked: u64,
    pub translation_ok: bool,
    pub all_match: bool,
}

/// Check that the walk looks the same from every start: `TV(P^t delta_x, pi)`
/// equals the value from the all-ones start for random `x`, and the
/// translation bijection preserves Hamming distance (hence one-step
/// probabilities) on random state pairs.
pub fn verify_transitivity(
    params: ChainParams,
    t: u64,
    trials: u64,
    seed: u64,
    mode: Mode,
    cap: u64,
) -> Result<TransitivityReport> {
    if params.d() < 2 {
        return Err(Error::Domain("transitivity check requires d >= 2".into()));
    }
    let uniform = FullDistribution::uniform(params, mode, cap)?;
    let tv_reference = {
        let mut dist = FullDistribution::delta_ones(params, mode, cap)?;
        for _ in 0..t {
            dist = dist.step();
        }
        dist.tv(&uniform)?
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = checked_state_count(params, cap)?;
    let mut rows = Vec::with_capacity(trials as usize);
    let mut all_match = true;
    for _ in 0..trials {
        let start = state_of_index(params, rng.random_range(0..count));
        let mut dist = FullDistribution::delta(params, &start, mode, cap)?;
        for _ in 0..t {
            dist = dist.step();
        }
        let tv = dist.tv(&uniform)?;
        let matches_reference = scalars_match(&tv, &tv_reference, 1e-12);
        all_match &= matches_reference;
        rows.push(TransitivityRow { start: start.coords.clone(), tv, matches_reference });
    }

    // Spot-check the translation map: it carries x to y and preserves
    // Hamming distance between arbitrary pairs.
    let translation_pairs_checked = 100;
    let mut translation_ok = true;
    for _ in 0..translation_pairs_checked {
        let x = state_of_index(params, rng.random_range(0..count));
        let y = state_of_index(params, rng.random_range(0..count));
        let z = state_of_index(params, rng.random_range(0..count));
        let w = state_of_index(params, rng.random_range(0..count));
        translation_ok &= translate(params, &x, &y, &x) == y;
        translation_ok &=
            z.hamming(&w) == translate(params, &x, &y, &z).hamming(&translate(params, &x, &y, &w));
    }

    Ok(TransitivityReport {
        n: params.n(),
        d: params.d(),
        t,
        mode: mode.as_str().into(),
        tv_reference,
        rows,
        translation_pairs_checked,
        translation_ok,
        all_match,
    })
}

fn scalars_match(a: &Scalar, b: &Scalar, float_tol: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= float_tol,
    }
}

/// Empirical shell distribution after `t` steps of the full walk from the
/// all-ones state, from independent seeded trajectories.
#[derive(Clone, Debug, Serialize)]
pub struct ShellHistogram {
    pub n: u64,
    pub d: usize,
    pub t: u64,
    pub samples: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
    pub freqs: Vec<f64>,
    pub stderrs: Vec<f64>,
}

/// Simulate `samples` trajectories (axis uniform in `1..=d`, new value
/// uniform over the `n-1` alternatives) and tally final shells.
///
/// Trajectory `i` draws from stream `i` of a counter-based generator seeded
/// with `seed`, so results are reproducible and independent of scheduling.
pub fn mc_shell_histogram(params: ChainParams, t: u64, samples: u64, seed: u64) -> ShellHistogram {
    let d = params.d();
    let n = params.n() as u32;
    let counts = (0..samples)
        .into_par_iter()
        .fold(
            || vec![0u64; d + 1],
            |mut acc, traj| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(traj);
                let mut coords = vec![1u32; d];
                for _ in 0..t {
                    let axis = rng.random_range(0..d);
                    let hop = rng.random_range(1..n);
                    coords[axis] = (coords[axis] - 1 + hop) % n + 1;
                }
                let shell = coords.iter().filter(|&&c| c != 1).count();
                acc[shell] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; d + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let total = samples as f64;
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let stderrs = freqs.iter().map(|&p| (p * (1.0 - p) / total).sqrt()).collect();
    ShellHistogram {
        n: params.n(),
        d,
        t,
        samples,
        seed,
        counts,
        freqs,
        stderrs,
    }
}
