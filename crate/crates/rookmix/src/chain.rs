//! Chain parameters, Hamming-shell combinatorics, and shell distributions.

use num::bigint::BigInt;
use num::pow::Pow;
use num::{BigUint, One};

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Board length `n` and dimension `d` of the walk on `{1..n}^d`.
///
/// `n >= 3` is required: at `n = 2` the stay rate of the projected chain
/// degenerates to zero and the variance bound's strict inequality fails.
/// `d = 1` is accepted but flagged (see [`ChainParams::warnings`]): the
/// transitivity argument assumes `d >= 2`, though the projected chain is
/// still well defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainParams {
    n: u64,
    d: usize,
}

impl ChainParams {
    pub fn new(n: u64, d: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("board length n = {n} must be >= 3")));
        }
        if d < 1 {
            return Err(Error::InvalidParams("dimension d must be >= 1".into()));
        }
        Ok(ChainParams { n, d })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of equally likely moves from any state: `d(n-1)`.
    pub fn moves_per_state(&self) -> u64 {
        self.d as u64 * (self.n - 1)
    }

    /// `n^d`, exact.
    pub fn state_count(&self) -> BigUint {
        BigUint::from(self.n).pow(self.d as u32)
    }

    /// Caveats that apply to results computed at these parameters.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.d == 1 {
            out.push(
                "d = 1: transitivity-based claims assume d >= 2; the projected chain itself is still well defined"
                    .to_string(),
            );
        }
        out
    }
}

/// Size of the `i`-th Hamming shell: `C(d,i) * (n-1)^i`, exact.
pub fn shell_size(params: ChainParams, i: usize) -> Result<BigUint> {
    if i > params.d {
        return Err(Error::ShellIndex { index: i, max: params.d });
    }
    let binom = num::integer::binomial(BigUint::from(params.d), BigUint::from(i));
    Ok(binom * BigUint::from(params.n - 1).pow(i as u32))
}

/// All shell sizes `0..=d`.
pub fn shell_sizes(params: ChainParams) -> Vec<BigUint> {
    // Incremental ratio phi(i+1)/phi(i) = (d-i)(n-1)/(i+1), always integral
    // step by step only in the combined product, so build multiplicatively.
    let mut out = Vec::with_capacity(params.d + 1);
    let mut cur = BigUint::one();
    out.push(cur.clone());
    for i in 0..params.d {
        cur = cur * BigUint::from((params.d - i) as u64 * (params.n - 1)) / BigUint::from(i as u64 + 1);
        out.push(cur.clone());
    }
    out
}

/// A probability vector over shells `0..=d`, tagged with its numeric mode.
#[derive(Clone, Debug)]
pub struct ShellDistribution {
    params: ChainParams,
    mode: Mode,
    weights: Vec<Scalar>,
}

impl ShellDistribution {
    /// Validating constructor: checks length, nonnegativity, and unit mass
    /// (exact in rational mode, within 1e-12 in float mode).
    pub fn new(params: ChainParams, weights: Vec<Scalar>) -> Result<Self> {
        if weights.len() != params.d + 1 {
            return Err(Error::Domain(format!(
                "weight vector has length {}, expected {}",
                weights.len(),
                params.d + 1
            )));
        }
        let mode = weights[0].mode();
        if weights.iter().any(|w| w.mode() != mode) {
            return Err(Error::ModeMismatch("distribution weights mix numeric modes".into()));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Domain("negative weight in distribution".into()));
        }
        let dist = ShellDistribution { params, mode, weights };
        let mass = dist.total_mass();
        let ok = match &mass {
            Scalar::Exact(r) => r.is_one(),
            Scalar::Float(v) => (v - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(Error::Domain(format!("distribution mass {mass} is not 1")));
        }
        Ok(dist)
    }

    pub(crate) fn from_weights_unchecked(params: ChainParams, mode: Mode, weights: Vec<Scalar>) -> Self {
        debug_assert_eq!(weights.len(), params.d + 1);
        ShellDistribution { params, mode, weights }
    }

    /// Point mass on one shell.
    pub fn delta(params: ChainParams, shell: usize, mode: Mode) -> Result<Self> {
        if shell > params.d {
            return Err(Error::ShellIndex { index: shell, max: params.d });
        }
        let mut weights = vec![Scalar::zero(mode); params.d + 1];
        weights[shell] = Scalar::one(mode);
        Ok(ShellDistribution { params, mode, weights })
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

    pub fn get(&self, shell: usize) -> &Scalar {
        &self.weights[shell]
    }

    pub fn total_mass(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for w in &self.weights {
            acc += w;
        }
        acc
    }
}

/// Stationary distribution of the projected chain: `pi(x) = phi(x) / n^d`.
pub fn stationary_shell_distribution(params: ChainParams, mode: Mode) -> ShellDistribution {
    let weights = match mode {
        Mode::Exact => {
            let total = BigInt::from(params.state_count());
            shell_sizes(params)
                .into_iter()
                .map(|phi| Scalar::from_big_ratio(BigInt::from(phi), total.clone(), Mode::Exact))
                .collect()
        }
        Mode::Float => {
            // Log-space recurrence: raw shell counts overflow f64 long before
            // the normalized weights stop being representable.
            let n = params.n as f64;
            let d = params.d;
            let log_total = d as f64 * n.ln();
            let mut log_phi = 0.0f64;
            let mut weights = Vec::with_capacity(d + 1);
            weights.push(Scalar::Float((-log_total).exp()));
            for x in 0..d {
                log_phi += ((d - x) as f64 * (n - 1.0) / (x as f64 + 1.0)).ln();
                weights.push(Scalar::Float((log_phi - log_total).exp()));
            }
            weights
        }
    };
    ShellDistribution::from_weights_unchecked(params, mode, weights)
}

/// Total-variation distance `1/2 * sum |a_i - b_i|`.
pub fn tv_distance(a: &ShellDistribution, b: &ShellDistribution) -> Result<Scalar> {
    if a.params != b.params {
        return Err(Error::Domain("tv_distance: mismatched parameters".into()));
    }
    if a.mode != b.mode {
        return Err(Error::ModeMismatch("tv_distance: mixed numeric modes".into()));
    }
    let mut acc = Scalar::zero(a.mode);
    for (x, y) in a.weights.iter().zip(&b.weights) {
        acc += &(x - y).abs();
    }
    Ok(acc * Scalar::from_ratio(1, 2, a.mode))
}
