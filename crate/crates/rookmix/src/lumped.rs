//! The projected birth-death chain on Hamming shells: kernel construction,
//! exact distribution evolution, TV curves, and mixing times.

use crate::chain::{stationary_shell_distribution, tv_distance, ChainParams, ShellDistribution};
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};
use crate::spectral::SpectralData;

/// Tridiagonal transition kernel of the shell chain.
///
/// From shell `x` the walk moves down with probability `x / (d(n-1))`
/// (a non-one coordinate is reset to one), stays with probability
/// `x(n-2) / (d(n-1))` (a non-one coordinate moves to another non-one
/// value), and moves up with probability `(d-x) / d`.
#[derive(Clone, Debug)]
pub struct ShellKernel {
    params: ChainParams,
    mode: Mode,
    up: Vec<Scalar>,
    down: Vec<Scalar>,
    stay: Vec<Scalar>,
}

impl ShellKernel {
    pub fn new(params: ChainParams, mode: Mode) -> Self {
        let d = params.d() as i64;
        let n = params.n() as i64;
        let moves = d * (n - 1);
        let mut up = Vec::with_capacity(params.d() + 1);
        let mut down = Vec::with_capacity(params.d() + 1);
        let mut stay = Vec::with_capacity(params.d() + 1);
        for x in 0..=d {
            up.push(Scalar::from_ratio(d - x, d, mode));
            down.push(Scalar::from_ratio(x, moves, mode));
            stay.push(Scalar::from_ratio(x * (n - 2), moves, mode));
        }
        ShellKernel { params, mode, up, down, stay }
    }

    pub fn params(&self) -> ChainParams {
        self.params
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn up(&self) -> &[Scalar] {
        &self.up
    }

    pub fn down(&self) -> &[Scalar] {
        &self.down
    }

    pub fn stay(&self) -> &[Scalar] {
        &self.stay
    }

    /// One-step evolution `dist * P`. O(d) work.
    pub fn step(&self, dist: &ShellDistribution) -> ShellDistribution {
        assert_eq!(dist.params(), self.params, "kernel/distribution parameter mismatch");
        assert_eq!(dist.mode(), self.mode, "kernel/distribution mode mismatch");
        let d = self.params.d();
        let w = dist.weights();
        let mut out = Vec::with_capacity(d + 1);
        for y in 0..=d {
            let mut v = &w[y] * &self.stay[y];
            if y > 0 {
                v += &(&w[y - 1] * &self.up[y - 1]);
            }
            if y < d {
                v += &(&w[y + 1] * &self.down[y + 1]);
            }
            out.push(v);
        }
        ShellDistribution::from_weights_unchecked(self.params, self.mode, out)
    }

    /// Expected value of `f` after one step from each shell: `(P f)(x)`.
    pub fn apply_to_function(&self, f: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(f.len(), self.params.d() + 1);
        let d = self.params.d();
        let mut out = Vec::with_capacity(d + 1);
        for x in 0..=d {
            let mut v = &self.stay[x] * &f[x];
            if x > 0 {
                v += &(&self.down[x] * &f[x - 1]);
            }
            if x < d {
                v += &(&self.up[x] * &f[x + 1]);
            }
            out.push(v);
        }
        out
    }

    /// Entry `P(x, y)` of the kernel (zero off the three diagonals).
    pub fn entry(&self, x: usize, y: usize) -> Scalar {
        if y == x {
            self.stay[x].clone()
        } else if y + 1 == x {
            self.down[x].clone()
        } else if y == x + 1 {
            self.up[x].clone()
        } else {
            Scalar::zero(self.mode)
        }
    }
}

/// Distance to stationarity from the worst start (shell 0) for `t = 0..=t_max`.
#[derive(Clone, Debug)]
pub struct TvCurve {
    params: ChainParams,
    points: Vec<(u64, Scalar)>,
}

impl TvCurve {
    pub fn params(&self) -> ChainParams {
        self.params
    }

    pub fn points(&self) -> &[(u64, Scalar)] {
        &self.points
    }

    pub fn value_at(&self, t: u64) -> Option<&Scalar> {
        self.points.get(t as usize).map(|(_, v)| v)
    }
}

/// TV curve by direct evolution of the point mass at shell 0.
pub fn tv_curve(params: ChainParams, t_max: u64, mode: Mode) -> TvCurve {
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let mut dist = ShellDistribution::delta(params, 0, mode).expect("shell 0 exists");
    let mut points = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        let tv = tv_distance(&dist, &pi).expect("same params and mode");
        points.push((t, tv));
        if t < t_max {
            dist = kernel.step(&dist);
        }
    }
    TvCurve { params, points }
}

/// Smallest `t` with distance-to-stationarity at most `eps`.
///
/// Scans forward over a doubling horizon, reusing the evolving vector; the
/// distance is non-increasing in `t`, so the first hit is the answer.
pub fn mixing_time(params: ChainParams, eps: &Scalar) -> Result<u64> {
    let mode = eps.mode();
    let zero = Scalar::zero(mode);
    let one = Scalar::one(mode);
    if !(eps > &zero && eps < &one) {
        return Err(Error::Domain(format!("eps = {eps} must lie strictly inside (0, 1)")));
    }
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let mut dist = ShellDistribution::delta(params, 0, mode).expect("shell 0 exists");
    let mut t = 0u64;
    let mut horizon = 16u64.max(params.d() as u64);
    loop {
        while t < horizon {
            if &tv_distance(&dist, &pi)? <= eps {
                return Ok(t);
            }
            dist = kernel.step(&dist);
            t += 1;
        }
        if &tv_distance(&dist, &pi)? <= eps {
            return Ok(t);
        }
        horizon = horizon.checked_mul(2).ok_or_else(|| {
            Error::Domain("mixing time horizon overflow; chain failed to mix".into())
        })?;
    }
}

/// TV curve through the eigenfunction expansion
/// `P^t(0, y) = pi(y) * sum_m phi_m(0) phi_m(y) lambda_m^t`.
///
/// Cross-validates the direct evolution path: exact equality in rational
/// mode, 1e-10 agreement in float mode. O(d^2) per time step.
pub fn spectral_tv_curve(params: ChainParams, t_max: u64, spectral: &SpectralData) -> TvCurve {
    assert_eq!(spectral.params(), params, "spectral data built for different parameters");
    let mode = spectral.mode();
    let d = params.d();
    let pi = stationary_shell_distribution(params, mode);
    let half = Scalar::from_ratio(1, 2, mode);

    // lambda_m^t, updated incrementally.
    let mut lam_pow: Vec<Scalar> = vec![Scalar::one(mode); d + 1];
    let mut points = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        let mut acc = Scalar::zero(mode);
        for y in 0..=d {
            // P^t(0, y) / pi(y) = sum_m phi_m(0) phi_m(y) lambda_m^t
            let mut ratio = Scalar::zero(mode);
            for m in 0..=d {
                ratio += &(&spectral.phi_prod(m, 0, y) * &lam_pow[m]);
            }
            // |P^t(0,y) - pi(y)| = pi(y) * |ratio - 1|
            acc += &(pi.get(y) * &(ratio - Scalar::one(mode)).abs());
        }
        points.push((t, acc * half.clone()));
        if t < t_max {
            for (p, lam) in lam_pow.iter_mut().zip(spectral.eigenvalues()) {
                *p *= lam;
            }
        }
    }
    TvCurve { params, points }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, d: usize) -> ChainParams {
        ChainParams::new(n, d).unwrap()
    }

    fn exact(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d, Mode::Exact)
    }

    #[test]
    fn kernel_small_board() {
        let k = ShellKernel::new(params(3, 2), Mode::Exact);
        assert_eq!(k.up(), &[exact(1, 1), exact(1, 2), exact(0, 1)]);
        assert_eq!(k.down(), &[exact(0, 1), exact(1, 4), exact(1, 2)]);
        assert_eq!(k.stay(), &[exact(0, 1), exact(1, 4), exact(1, 2)]);
    }

    #[test]
    fn kernel_d1() {
        let k = ShellKernel::new(params(3, 1), Mode::Exact);
        assert_eq!(k.up(), &[exact(1, 1), exact(0, 1)]);
        assert_eq!(k.down(), &[exact(0, 1), exact(1, 2)]);
        assert_eq!(k.stay(), &[exact(0, 1), exact(1, 2)]);
    }

    #[test]
    fn kernel_rows_sum_to_one_and_balance() {
        for (n, d) in [(3u64, 2usize), (3, 7), (4, 5), (5, 11), (10, 4)] {
            let p = params(n, d);
            let k = ShellKernel::new(p, Mode::Exact);
            let pi = stationary_shell_distribution(p, Mode::Exact);
            let one = Scalar::one(Mode::Exact);
            for x in 0..=d {
                let row = &k.up()[x] + &k.down()[x] + &k.stay()[x];
                assert_eq!(row, one, "row {x} of (n={n}, d={d})");
                assert!(!k.up()[x].is_negative() && !k.down()[x].is_negative() && !k.stay()[x].is_negative());
            }
            assert!(k.down()[0].is_zero());
            assert!(k.up()[d].is_zero());
            // Detailed balance: pi(x) up(x) = pi(x+1) down(x+1).
            for x in 0..d {
                let lhs = pi.get(x) * &k.up()[x];
                let rhs = pi.get(x + 1) * &k.down()[x + 1];
                assert_eq!(lhs, rhs, "balance at {x} of (n={n}, d={d})");
            }
        }
    }

    #[test]
    fn step_examples() {
        let p = params(3, 2);
        let k = ShellKernel::new(p, Mode::Exact);
        let delta = ShellDistribution::delta(p, 0, Mode::Exact).unwrap();
        let one_step = k.step(&delta);
        assert_eq!(one_step.weights(), &[exact(0, 1), exact(1, 1), exact(0, 1)]);
        let two_step = k.step(&one_step);
        assert_eq!(two_step.weights(), &[exact(1, 4), exact(1, 4), exact(1, 2)]);
    }

    #[test]
    fn stationarity_is_exact() {
        for (n, d) in [(3u64, 2usize), (4, 3), (5, 6)] {
            let p = params(n, d);
            let k = ShellKernel::new(p, Mode::Exact);
            let pi = stationary_shell_distribution(p, Mode::Exact);
            let stepped = k.step(&pi);
            assert_eq!(stepped.weights(), pi.weights());
        }
    }

    #[test]
    fn step_preserves_mass() {
        let p = params(4, 6);
        let k = ShellKernel::new(p, Mode::Exact);
        let mut dist = ShellDistribution::delta(p, 0, Mode::Exact).unwrap();
        for _ in 0..25 {
            dist = k.step(&dist);
            assert_eq!(dist.total_mass(), Scalar::one(Mode::Exact));
        }
        let kf = ShellKernel::new(p, Mode::Float);
        let mut dist = ShellDistribution::delta(p, 0, Mode::Float).unwrap();
        for _ in 0..25 {
            dist = kf.step(&dist);
            assert!((dist.total_mass().to_f64() - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn tv_curve_small_board() {
        let curve = tv_curve(params(3, 2), 3, Mode::Exact);
        assert_eq!(curve.value_at(0).unwrap(), &exact(8, 9));
        assert_eq!(curve.value_at(1).unwrap(), &exact(5, 9));
        assert_eq!(curve.value_at(2).unwrap(), &exact(7, 36));
        assert_eq!(curve.value_at(3).unwrap(), &exact(17, 144));

        let curve = tv_curve(params(3, 1), 1, Mode::Exact);
        assert_eq!(curve.value_at(1).unwrap(), &exact(1, 3));
    }

    #[test]
    fn tv_curve_monotone_and_vanishing() {
        for (n, d) in [(3u64, 2usize), (3, 5), (4, 4), (5, 3)] {
            let curve = tv_curve(params(n, d), 60, Mode::Exact);
            for pair in curve.points().windows(2) {
                assert!(pair[1].1 <= pair[0].1, "curve rose at t={} (n={n}, d={d})", pair[1].0);
            }
        }
        let curve = tv_curve(params(3, 2), 200, Mode::Float);
        assert!(curve.value_at(200).unwrap().to_f64() < 1e-12);
    }

    #[test]
    fn tv_curve_starts_at_complement_of_pi0() {
        let p = params(5, 4);
        let curve = tv_curve(p, 0, Mode::Exact);
        let pi = stationary_shell_distribution(p, Mode::Exact);
        let want = Scalar::one(Mode::Exact) - pi.get(0);
        assert_eq!(curve.value_at(0).unwrap(), &want);
    }

    #[test]
    fn mixing_time_small_board() {
        let p = params(3, 2);
        assert_eq!(mixing_time(p, &exact(1, 4)).unwrap(), 2);
        assert_eq!(mixing_time(p, &exact(8, 9)).unwrap(), 0);
        assert!(mixing_time(p, &exact(0, 1)).is_err());
        assert!(mixing_time(p, &exact(1, 1)).is_err());
    }

    #[test]
    fn mixing_time_non_increasing_in_eps() {
        let p = params(4, 7);
        let mut last = u64::MAX;
        for eps_num in 1..=19 {
            let t = mixing_time(p, &exact(eps_num, 20)).unwrap();
            assert!(t <= last, "t_mix rose at eps={eps_num}/20");
            last = t;
        }
    }

    #[test]
    fn float_and_exact_mixing_times_agree() {
        for (n, d) in [(3u64, 2usize), (3, 10), (4, 8)] {
            let p = params(n, d);
            let te = mixing_time(p, &exact(1, 4)).unwrap();
            let tf = mixing_time(p, &Scalar::Float(0.25)).unwrap();
            assert_eq!(te, tf, "n={n} d={d}");
        }
    }
}
