//! Closed-form mixing-time bounds, cutoff constants, and the discrepancy
//! reporter that compares every bound against exact mixing times.
//!
//! Two L² upper bounds are first-class: the "as stated" variant built on the
//! claim `phi_m(0)^2 <= C(d,m)`, and the corrected variant built on the
//! computed normalization `phi_m(0)^2 = C(d,m)(n-1)^m`. The exact oracle
//! shows the first claim is false (already at n=3, d=2), so reports carry
//! validity flags instead of trusting either form.

use num::bigint::BigInt;
use num::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{stationary_shell_distribution, tv_distance, ChainParams, ShellDistribution};
use crate::error::{Error, Result};
use crate::lumped::ShellKernel;
use crate::scalar::{Mode, Scalar};
use crate::spectral::SpectralData;

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} must lie strictly inside (0, 1)")));
    }
    Ok(())
}

/// Eigenfunction lower bound
/// `(log(d(n-1)/2n) + log((1-eps)/eps)) / (2 log(d(n-1)/(d(n-1)-n)))`.
///
/// Requires the degree-one eigenvalue `alpha = 1 - n/(d(n-1))` to exceed
/// 1/2, i.e. `d(n-1) > 2n`.
pub fn wilson_lower(params: ChainParams, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let n = params.n() as f64;
    let dm = params.moves_per_state() as f64;
    let alpha = 1.0 - n / dm;
    if alpha <= 0.5 {
        return Err(Error::WilsonHypothesis { alpha });
    }
    let numerator = (dm / (2.0 * n)).ln() + ((1.0 - eps) / eps).ln();
    let denominator = 2.0 * (dm / (dm - n)).ln();
    Ok(numerator / denominator)
}

/// Largest one-step squared increment of the degree-one eigenfunction:
/// `R = n^2 / (d^2 (n-1)^2)`, attained at shell 0.
pub fn wilson_variance_bound(params: ChainParams) -> f64 {
    let c = params.n() as f64 / params.moves_per_state() as f64;
    c * c
}

/// Exact one-step squared-increment expectation of the degree-one
/// eigenfunction from shell `x`:
/// `n^2 (d(n-1) + x(2-n)) / (d^3 (n-1)^3)`.
pub fn wilson_variance(params: ChainParams, x: usize, mode: Mode) -> Result<Scalar> {
    if x > params.d() {
        return Err(Error::ShellIndex { index: x, max: params.d() });
    }
    let n = BigInt::from(params.n());
    let d = BigInt::from(params.d());
    let n1 = BigInt::from(params.n() - 1);
    let xi = BigInt::from(x);
    let two = BigInt::from(2);
    let numerator = &n * &n * (&d * &n1 + &xi * (&two - &n));
    let denominator = &d * &d * &d * &n1 * &n1 * &n1;
    Ok(Scalar::from_big_ratio(numerator, denominator, mode))
}

/// Monte Carlo estimate of the one-step squared increment from shell `x`.
/// Returns `(mean, standard error)`.
pub fn wilson_variance_mc(params: ChainParams, x: usize, samples: u64, seed: u64) -> Result<(f64, f64)> {
    if x > params.d() {
        return Err(Error::ShellIndex { index: x, max: params.d() });
    }
    if samples == 0 {
        return Err(Error::Domain("samples must be >= 1".into()));
    }
    let n = params.n() as f64;
    let moves = params.moves_per_state() as f64;
    let down = x as f64 / moves;
    let stay = x as f64 * (n - 2.0) / moves;
    let c = n / moves;
    let increment_sq = c * c;

    // Each sample contributes either c^2 (the walk moved) or 0 (it stayed),
    // so tallying moves and scaling once keeps the estimate free of
    // accumulated rounding.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moved = 0u64;
    for _ in 0..samples {
        let u: f64 = rng.random();
        if u < down || u >= down + stay {
            moved += 1;
        }
    }
    let p_hat = moved as f64 / samples as f64;
    let mean = increment_sq * p_hat;
    let stderr = if samples < 2 {
        0.0
    } else {
        increment_sq * (p_hat * (1.0 - p_hat) / (samples as f64 - 1.0)).sqrt()
    };
    Ok((mean, stderr))
}

/// The stated L² upper bound `-(d(n-1)/2n) log((4 eps^2 + 1)^{1/d} - 1)`,
/// reproduced verbatim for comparison; see [`DiscrepancyReport`].
pub fn l2_upper_paper(params: ChainParams, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let n = params.n() as f64;
    let dm = params.moves_per_state() as f64;
    let d = params.d() as f64;
    let inner = (4.0 * eps * eps + 1.0).powf(1.0 / d) - 1.0;
    Ok(-(dm / (2.0 * n)) * inner.ln())
}

/// L² upper bound rebuilt from the verified normalization
/// `phi_m(0)^2 = C(d,m)(n-1)^m`:
/// `-(d(n-1)/2n) log(((4 eps^2 + 1)^{1/d} - 1) / (n-1))`.
///
/// Exceeds the stated bound by exactly `(d(n-1)/2n) log(n-1)`.
pub fn l2_upper_orthonormal(params: ChainParams, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let n = params.n() as f64;
    let dm = params.moves_per_state() as f64;
    let d = params.d() as f64;
    let inner = (4.0 * eps * eps + 1.0).powf(1.0 / d) - 1.0;
    if inner >= n - 1.0 {
        return Err(Error::Domain(format!(
            "(4 eps^2 + 1)^(1/d) - 1 = {inner} must stay below n - 1 = {}",
            n - 1.0
        )));
    }
    Ok(-(dm / (2.0 * n)) * (inner / (n - 1.0)).ln())
}

/// Product-chain bounds: `(d(n-1)/n) log(1/2eps)` and `(d(n-1)/n) log(n^d/eps)`.
pub fn kim_bounds(params: ChainParams, eps: f64) -> Result<(f64, f64)> {
    check_eps(eps)?;
    let n = params.n() as f64;
    let dm = params.moves_per_state() as f64;
    let scale = dm / n;
    let lower = scale * (1.0 / (2.0 * eps)).ln();
    let upper = scale * (params.d() as f64 * n.ln() + (1.0 / eps).ln());
    Ok((lower, upper))
}

/// Path-coupling upper bound
/// `ceil(log(d/eps) / log(d(n-1) / ((d-1)(n-1) + 1)))`. Requires `d >= 2`.
pub fn mcleman_upper(params: ChainParams, eps: f64) -> Result<u64> {
    check_eps(eps)?;
    if params.d() < 2 {
        return Err(Error::Domain("path-coupling bound requires d >= 2".into()));
    }
    let n = params.n() as f64;
    let d = params.d() as f64;
    let dm = params.moves_per_state() as f64;
    let denominator = (dm / ((d - 1.0) * (n - 1.0) + 1.0)).ln();
    Ok(((d / eps).ln() / denominator).ceil() as u64)
}

/// Cutoff center `t_c = (d(n-1)/2n) log d` and window `w = d(n-1)/n`.
pub fn cutoff_time_and_window(params: ChainParams) -> (f64, f64) {
    let n = params.n() as f64;
    let dm = params.moves_per_state() as f64;
    ((dm / (2.0 * n)) * (params.d() as f64).ln(), dm / n)
}

/// Window constants `(c_l, c_u)` with
/// `c_l = (log((1-eps)/eps) - 6 - log 2) / 2` and
/// `c_u = -(1/2) log log(4 eps^2 + 1)`.
pub fn cutoff_constants(eps: f64) -> Result<(f64, f64)> {
    check_eps(eps)?;
    let c_l = (((1.0 - eps) / eps).ln() - 6.0 - 2f64.ln()) / 2.0;
    let c_u = -0.5 * (4.0 * eps * eps + 1.0).ln().ln();
    Ok((c_l, c_u))
}

/// Upper window constant matching the corrected L² bound:
/// `c_u + log(n-1)/2`. Depends on `n`, which is fixed along the sequence
/// indexed by `d`, so it is still a constant for each such sequence.
pub fn corrected_upper_constant(eps: f64, n: u64) -> Result<f64> {
    let (_, c_u) = cutoff_constants(eps)?;
    Ok(c_u + ((n - 1) as f64).ln() / 2.0)
}

/// Verdict of one bound against the exact mixing time, under the convention
/// that a real-valued lower bound `b` holds when `t >= ceil(b) - 1` and an
/// upper bound when `t <= floor(b) + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVerdict {
    Holds,
    Violated,
    Unchecked,
    NotApplicable,
}

fn lower_verdict(bound: Option<f64>, tmix: Option<u64>) -> BoundVerdict {
    match (bound, tmix) {
        (None, _) => BoundVerdict::NotApplicable,
        (_, None) => BoundVerdict::Unchecked,
        (Some(b), Some(t)) => {
            if (t as f64) >= b.ceil() - 1.0 {
                BoundVerdict::Holds
            } else {
                BoundVerdict::Violated
            }
        }
    }
}

fn upper_verdict(bound: Option<f64>, tmix: Option<u64>) -> BoundVerdict {
    match (bound, tmix) {
        (None, _) => BoundVerdict::NotApplicable,
        (_, None) => BoundVerdict::Unchecked,
        (Some(b), Some(t)) => {
            if (t as f64) <= b.floor() + 1.0 {
                BoundVerdict::Holds
            } else {
                BoundVerdict::Violated
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsFlags {
    pub wilson_lower: BoundVerdict,
    pub l2_upper_paper: BoundVerdict,
    pub l2_upper_orthonormal: BoundVerdict,
    pub kim_lower: BoundVerdict,
    pub kim_upper: BoundVerdict,
    pub mcleman_upper: BoundVerdict,
}

/// Every closed-form bound at one `(n, d, eps)`, the exact mixing time when
/// the evolution finishes within the horizon, and per-bound verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    pub d: usize,
    pub eps: f64,
    pub mode: String,
    pub exact_tmix: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_tmix_note: Option<String>,
    pub wilson_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wilson_note: Option<String>,
    pub l2_upper_paper: Option<f64>,
    pub l2_upper_orthonormal: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2_orthonormal_note: Option<String>,
    pub kim_lower: f64,
    pub kim_upper: f64,
    pub mcleman_upper: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mcleman_note: Option<String>,
    pub flags: BoundsFlags,
}

/// Assemble a [`BoundsReport`]. The exact mixing time is searched up to
/// `horizon` steps; `None` leaves it uncomputed only if the scan runs out.
pub fn bounds_report(params: ChainParams, eps: f64, mode: Mode, horizon: u64) -> Result<BoundsReport> {
    check_eps(eps)?;
    let eps_scalar = match mode {
        Mode::Float => Scalar::Float(eps),
        Mode::Exact => {
            // Exact-mode reports interpret eps through its f64 value.
            float_to_exact(eps)
        }
    };
    let (exact_tmix, exact_tmix_note) = match mixing_time_capped(params, &eps_scalar, horizon)? {
        Some(t) => (Some(t), None),
        None => (None, Some(format!("evolution did not reach eps within horizon {horizon}"))),
    };

    let (wilson, wilson_note) = match wilson_lower(params, eps) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let l2_paper = l2_upper_paper(params, eps)?;
    let (l2_orth, l2_orth_note) = match l2_upper_orthonormal(params, eps) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (kim_lower_v, kim_upper_v) = kim_bounds(params, eps)?;
    let (mcleman, mcleman_note) = match mcleman_upper(params, eps) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let flags = BoundsFlags {
        wilson_lower: lower_verdict(wilson, exact_tmix),
        l2_upper_paper: upper_verdict(Some(l2_paper), exact_tmix),
        l2_upper_orthonormal: upper_verdict(l2_orth, exact_tmix),
        kim_lower: lower_verdict(Some(kim_lower_v), exact_tmix),
        kim_upper: upper_verdict(Some(kim_upper_v), exact_tmix),
        mcleman_upper: upper_verdict(mcleman.map(|v| v as f64), exact_tmix),
    };

    Ok(BoundsReport {
        n: params.n(),
        d: params.d(),
        eps,
        mode: mode.as_str().into(),
        exact_tmix,
        exact_tmix_note,
        wilson_lower: wilson,
        wilson_note,
        l2_upper_paper: Some(l2_paper),
        l2_upper_orthonormal: l2_orth,
        l2_orthonormal_note: l2_orth_note,
        kim_lower: kim_lower_v,
        kim_upper: kim_upper_v,
        mcleman_upper: mcleman,
        mcleman_note,
        flags,
    })
}

/// `mixing_time`, but giving up (with `None`) beyond `horizon` steps.
pub fn mixing_time_capped(params: ChainParams, eps: &Scalar, horizon: u64) -> Result<Option<u64>> {
    let mode = eps.mode();
    let zero = Scalar::zero(mode);
    let one = Scalar::one(mode);
    if !(eps > &zero && eps < &one) {
        return Err(Error::Domain(format!("eps = {eps} must lie strictly inside (0, 1)")));
    }
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let mut dist = ShellDistribution::delta(params, 0, mode)?;
    for t in 0..=horizon {
        if &tv_distance(&dist, &pi)? <= eps {
            return Ok(Some(t));
        }
        dist = kernel.step(&dist);
    }
    Ok(None)
}

fn float_to_exact(eps: f64) -> Scalar {
    let r = num::BigRational::from_float(eps).expect("finite eps");
    Scalar::Exact(r)
}

/// Exact reproduction of the L² chain at one `(n, d, t)`: the true
/// `4 TV(t)^2` against both candidate spectral sums.
#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub n: u64,
    pub d: usize,
    pub t: u64,
    /// `4 * TV(t)^2`, exact.
    pub four_tv_sq: Scalar,
    /// `sum_{m>=1} C(d,m) lambda_m^{2t}` — the chain as stated.
    pub as_stated_sum: Scalar,
    /// `sum_{m>=1} C(d,m)(n-1)^m lambda_m^{2t}` — the verified chain.
    pub orthonormal_sum: Scalar,
    pub as_stated_bounds_tv: bool,
    pub orthonormal_bounds_tv: bool,
    /// Computed `phi_m(0)^2` for each m.
    pub phi0_sq_computed: Vec<Scalar>,
    /// The claimed ceiling `C(d,m)` for each m.
    pub phi0_sq_claimed_ceiling: Vec<Scalar>,
    /// Whether `phi_m(0)^2 <= C(d,m)` actually holds, per m.
    pub claim_holds_per_m: Vec<bool>,
    /// Normalization constant certified by the exact Gram matrix.
    pub norm_constant_verified: String,
}

/// Build the discrepancy record in exact arithmetic.
pub fn discrepancy_report(params: ChainParams, t: u64) -> Result<DiscrepancyReport> {
    let mode = Mode::Exact;
    let spectral = SpectralData::new(params, mode);
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let mut dist = ShellDistribution::delta(params, 0, mode)?;
    for _ in 0..t {
        dist = kernel.step(&dist);
    }
    let tv = tv_distance(&dist, &pi)?;
    let four_tv_sq = Scalar::from_int(4, mode) * &tv * &tv;

    let d = params.d();
    let mut as_stated_sum = Scalar::zero(mode);
    let mut orthonormal_sum = Scalar::zero(mode);
    let mut phi0_sq_claimed = Vec::with_capacity(d + 1);
    let mut claim_holds = Vec::with_capacity(d + 1);
    for m in 0..=d {
        let binom = Scalar::from_biguint(
            &num::integer::binomial(BigUint::from(d), BigUint::from(m)),
            mode,
        );
        let lam = &spectral.eigenvalues()[m];
        let mut pow = Scalar::one(mode);
        for _ in 0..(2 * t) {
            pow *= lam;
        }
        if m >= 1 {
            as_stated_sum += &(&binom * &pow);
            orthonormal_sum += &(&spectral.phi0_sq()[m] * &pow);
        }
        claim_holds.push(spectral.phi0_sq()[m] <= binom);
        phi0_sq_claimed.push(binom);
    }

    Ok(DiscrepancyReport {
        n: params.n(),
        d,
        t,
        as_stated_bounds_tv: four_tv_sq <= as_stated_sum,
        orthonormal_bounds_tv: four_tv_sq <= orthonormal_sum,
        four_tv_sq,
        as_stated_sum,
        orthonormal_sum,
        phi0_sq_computed: spectral.phi0_sq().to_vec(),
        phi0_sq_claimed_ceiling: phi0_sq_claimed,
        claim_holds_per_m: claim_holds,
        norm_constant_verified: "<K_m,K_m> = n^d * C(d,m) * (n-1)^m".into(),
    })
}

/// One row of a cutoff profile: exact mixing times for the threshold pair
/// `{eps, 1-eps}` at one dimension, with window-rescaled coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct CutoffRow {
    pub n: u64,
    pub d: usize,
    pub eps: f64,
    /// `t_mix(eps)`.
    pub tmix: u64,
    /// `t_mix(1 - eps)`.
    pub tmix_complement: u64,
    pub t_c: f64,
    pub w: f64,
    /// Rescaled coordinate of the earlier of the two times.
    pub u_low: f64,
    /// Rescaled coordinate of the later of the two times.
    pub u_high: f64,
    /// Later time over earlier time: at least 1, approaching 1 under cutoff.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffProfile {
    pub n: u64,
    pub rows: Vec<CutoffRow>,
}

/// Exact mixing times over a `d`-list and an `eps`-list, each `d` evolved
/// once in float mode with every threshold read off a single sweep. Rows are
/// ordered by `(d, eps)`.
pub fn cutoff_profile(n: u64, d_list: &[usize], eps_list: &[f64]) -> Result<CutoffProfile> {
    for &eps in eps_list {
        check_eps(eps)?;
    }
    let mut ds = d_list.to_vec();
    ds.sort_unstable();
    ds.dedup();
    let mut eps_sorted = eps_list.to_vec();
    eps_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite eps"));
    eps_sorted.dedup();

    let rows: Result<Vec<Vec<CutoffRow>>> = ds
        .par_iter()
        .map(|&d| {
            let params = ChainParams::new(n, d)?;
            // Every threshold needed for this dimension, descending.
            let mut thresholds: Vec<f64> = eps_sorted
                .iter()
                .flat_map(|&e| [e, 1.0 - e])
                .collect();
            thresholds.sort_by(|a, b| b.partial_cmp(a).expect("finite eps"));
            thresholds.dedup();
            let passages = first_passage_times(params, &thresholds)?;
            let lookup = |eps: f64| -> u64 {
                let idx = thresholds.iter().position(|&t| t == eps).expect("present");
                passages[idx]
            };
            let (t_c, w) = cutoff_time_and_window(params);
            Ok(eps_sorted
                .iter()
                .map(|&eps| {
                    let tmix = lookup(eps);
                    let tmix_complement = lookup(1.0 - eps);
                    let early = tmix.min(tmix_complement);
                    let late = tmix.max(tmix_complement);
                    CutoffRow {
                        n,
                        d,
                        eps,
                        tmix,
                        tmix_complement,
                        t_c,
                        w,
                        u_low: (early as f64 - t_c) / w,
                        u_high: (late as f64 - t_c) / w,
                        ratio: late as f64 / early as f64,
                    }
                })
                .collect())
        })
        .collect();

    Ok(CutoffProfile { n, rows: rows?.into_iter().flatten().collect() })
}

/// First time the TV curve drops to each threshold; `thresholds` must be
/// sorted descending. One evolution serves them all.
pub fn first_passage_times(params: ChainParams, thresholds: &[f64]) -> Result<Vec<u64>> {
    debug_assert!(thresholds.windows(2).all(|w| w[0] >= w[1]));
    let mode = Mode::Float;
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let mut dist = ShellDistribution::delta(params, 0, mode)?;
    let mut out = vec![0u64; thresholds.len()];
    let mut next = 0usize;
    let mut t = 0u64;
    while next < thresholds.len() {
        let tv = tv_distance(&dist, &pi)?.to_f64();
        while next < thresholds.len() && tv <= thresholds[next] {
            out[next] = t;
            next += 1;
        }
        if next < thresholds.len() {
            dist = kernel.step(&dist);
            t += 1;
        }
    }
    Ok(out)
}
