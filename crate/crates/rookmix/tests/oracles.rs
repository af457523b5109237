//! Cross-checks of the library against independent oracles: dense rational
//! matrix powers, direct state enumeration, and a dense symmetric
//! eigensolver.

mod common;

use nalgebra::{DMatrix, SymmetricEigen};
use num::ToPrimitive;

use rookmix::chain::{shell_sizes, stationary_shell_distribution, ChainParams};
use rookmix::lumped::{tv_curve, ShellKernel};
use rookmix::scalar::Mode;
use rookmix::spectral::eigenvalues;

fn params(n: u64, d: usize) -> ChainParams {
    ChainParams::new(n, d).unwrap()
}

#[test]
fn shell_sizes_match_enumeration() {
    for (n, d) in [(3u64, 2usize), (3, 5), (4, 4), (5, 3), (6, 2)] {
        let counts = common::enumerate_shell_counts(n, d);
        let sizes = shell_sizes(params(n, d));
        for (i, c) in counts.iter().enumerate() {
            assert_eq!(sizes[i], num::BigUint::from(*c), "shell {i} of (n={n}, d={d})");
        }
    }
}

#[test]
fn stationary_matches_enumeration() {
    for (n, d) in [(3u64, 3usize), (4, 3), (5, 2)] {
        let pi = stationary_shell_distribution(params(n, d), Mode::Exact);
        let oracle = common::dense_stationary(n, d);
        for (w, o) in pi.weights().iter().zip(&oracle) {
            assert_eq!(w.as_exact().unwrap(), o);
        }
    }
}

#[test]
fn tv_curve_matches_dense_matrix_power() {
    for (n, d) in [(3u64, 2usize), (3, 4), (4, 3), (5, 5)] {
        let curve = tv_curve(params(n, d), 25, Mode::Exact);
        let oracle = common::dense_tv_curve(n, d, 25);
        for (t, (_, v)) in curve.points().iter().enumerate() {
            assert_eq!(v.as_exact().unwrap(), &oracle[t], "t={t} at (n={n}, d={d})");
        }
    }
}

#[test]
fn streamed_step_matches_dense_step() {
    let n = 4u64;
    let d = 6usize;
    let p = common::dense_kernel(n, d);
    let kernel = ShellKernel::new(params(n, d), Mode::Exact);
    let mut dense = vec![num::BigRational::from_integer(0.into()); d + 1];
    dense[0] = num::BigRational::from_integer(1.into());
    let mut dist = rookmix::chain::ShellDistribution::delta(params(n, d), 0, Mode::Exact).unwrap();
    for _ in 0..15 {
        dense = common::dense_step(&p, &dense);
        dist = kernel.step(&dist);
        for (w, o) in dist.weights().iter().zip(&dense) {
            assert_eq!(w.as_exact().unwrap(), o);
        }
    }
}

/// The formula eigenvalues must agree with a dense symmetric eigensolver
/// run on the similarity-transformed kernel.
#[test]
fn eigenvalues_match_dense_solver() {
    for (n, d) in [(3u64, 8usize), (4, 12), (5, 20), (10, 30)] {
        let p = params(n, d);
        let kernel = ShellKernel::new(p, Mode::Float);
        let pi = stationary_shell_distribution(p, Mode::Float);
        // S = D^{1/2} P D^{-1/2} is symmetric by detailed balance and shares
        // the kernel's spectrum.
        let mut s = DMatrix::<f64>::zeros(d + 1, d + 1);
        for x in 0..=d {
            for y in 0..=d {
                let pxy = kernel.entry(x, y).to_f64();
                if pxy != 0.0 {
                    let scale = (pi.get(x).to_f64() / pi.get(y).to_f64()).sqrt();
                    s[(x, y)] = scale * pxy;
                }
            }
        }
        let asym = (&s - s.transpose()).abs().max();
        assert!(asym < 1e-12, "symmetrized kernel asymmetry {asym} at (n={n}, d={d})");

        let mut solver_eigs: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
        solver_eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let formula: Vec<f64> = eigenvalues(p, Mode::Float).iter().map(|v| v.to_f64()).collect();
        for (m, (got, want)) in solver_eigs.iter().zip(&formula).enumerate() {
            assert!(
                (got - want).abs() < 1e-10,
                "eigenvalue {m} at (n={n}, d={d}): solver {got} vs formula {want}"
            );
        }
    }
}

/// Krawtchouk values against a plain f64 evaluation of the alternating sum
/// at sizes where cancellation is still harmless.
#[test]
fn krawtchouk_direct_sum_f64_oracle() {
    fn binom_f64(a: f64, b: usize) -> f64 {
        let mut v = 1.0;
        for i in 0..b {
            v *= (a - i as f64) / (i as f64 + 1.0);
        }
        v
    }
    for (n, d) in [(3u64, 6usize), (4, 8), (5, 5)] {
        let table = rookmix::krawtchouk::KrawtchoukTable::new(params(n, d), Mode::Exact);
        for m in 0..=d {
            for x in 0..=d {
                let mut want = 0.0f64;
                for j in 0..=m {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    want += sign
                        * binom_f64(x as f64, j)
                        * binom_f64((d - x) as f64, m - j)
                        * ((n - 1) as f64).powi((m - j) as i32);
                }
                let got = table.value(m, x).to_f64();
                assert!(
                    (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                    "K_{m}({x}) at (n={n}, d={d}): {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn moments_of_shell_chain_match_enumeration() {
    // Mean shell occupancy under the stationary law equals d(n-1)/n; checked
    // against the enumerated state space.
    for (n, d) in [(3u64, 4usize), (4, 3), (5, 3)] {
        let counts = common::enumerate_shell_counts(n, d);
        let total: f64 = counts.iter().map(|&c| c as f64).sum();
        let mean: f64 = counts.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum::<f64>() / total;
        let want = d as f64 * (n as f64 - 1.0) / n as f64;
        assert!((mean - want).abs() < 1e-12);
        let _ = total.to_u64();
    }
}
