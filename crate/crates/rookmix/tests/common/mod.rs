//! Independent oracles for the integration suites. Everything here is built
//! straight from the defining formulas on `num` types, bypassing the crate's
//! own kernel/evolution code paths so the two can disagree.

// Each integration target compiles its own copy and uses a subset.
#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense `(d+1) x (d+1)` transition matrix of the shell chain, entry
/// `[x][y] = P(x -> y)`.
pub fn dense_kernel(n: u64, d: usize) -> Vec<Vec<BigRational>> {
    let moves = (d as i64) * (n as i64 - 1);
    let mut p = vec![vec![BigRational::zero(); d + 1]; d + 1];
    for x in 0..=d {
        let xi = x as i64;
        if x > 0 {
            p[x][x - 1] = ratio(xi, moves);
        }
        p[x][x] = ratio(xi * (n as i64 - 2), moves);
        if x < d {
            p[x][x + 1] = ratio(d as i64 - xi, d as i64);
        }
    }
    p
}

/// Row-vector times matrix: one exact step of a distribution.
pub fn dense_step(p: &[Vec<BigRational>], dist: &[BigRational]) -> Vec<BigRational> {
    let m = dist.len();
    let mut out = vec![BigRational::zero(); m];
    for x in 0..m {
        if dist[x].is_zero() {
            continue;
        }
        for y in 0..m {
            if !p[x][y].is_zero() {
                out[y] += &dist[x] * &p[x][y];
            }
        }
    }
    out
}

/// Stationary weights `C(d,x)(n-1)^x / n^d` from scratch.
pub fn dense_stationary(n: u64, d: usize) -> Vec<BigRational> {
    let counts = enumerate_shell_counts(n, d);
    let total: BigInt = counts.iter().map(|&c| BigInt::from(c)).sum();
    counts
        .iter()
        .map(|c| BigRational::new(BigInt::from(*c), total.clone()))
        .collect()
}

/// Count states of `{1..n}^d` per Hamming distance from all-ones, by direct
/// enumeration of all `n^d` tuples.
pub fn enumerate_shell_counts(n: u64, d: usize) -> Vec<u64> {
    let mut counts = vec![0u64; d + 1];
    let total = (n as u128).pow(d as u32);
    assert!(total <= 10_000_000, "enumeration oracle kept to small boards");
    let mut coords = vec![1u64; d];
    for _ in 0..total {
        let shell = coords.iter().filter(|&&c| c != 1).count();
        counts[shell] += 1;
        // Odometer increment.
        for c in coords.iter_mut() {
            if *c < n {
                *c += 1;
                break;
            }
            *c = 1;
        }
    }
    counts
}

pub fn tv_exact(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let sum: BigRational = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    sum / BigRational::from_integer(BigInt::from(2))
}

/// Exact TV curve from the point mass at shell 0, by dense matrix products.
pub fn dense_tv_curve(n: u64, d: usize, t_max: u64) -> Vec<BigRational> {
    let p = dense_kernel(n, d);
    let pi = dense_stationary(n, d);
    let mut dist = vec![BigRational::zero(); d + 1];
    dist[0] = BigRational::one();
    let mut out = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        out.push(tv_exact(&dist, &pi));
        if t < t_max {
            dist = dense_step(&p, &dist);
        }
    }
    out
}
