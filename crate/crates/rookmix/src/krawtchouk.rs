//! Krawtchouk polynomials for the shell chain's weight `C(d,i)(n-1)^i`,
//! their inner products, and norms.
//!
//! Two evaluation routes are kept deliberately separate: exact mode uses the
//! direct alternating sum (the oracle), float mode uses the three-term
//! recurrence in the degree, which avoids the catastrophic cancellation the
//! alternating sum suffers at moderate dimension. Tests pin the two routes
//! against each other.

use num::bigint::BigInt;
use num::pow::Pow;
use num::BigUint;

use crate::chain::{shell_sizes, ChainParams};
use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Generalized binomial coefficient `x(x-1)...(x-j+1) / j!`, defined for any
/// scalar `x` via falling factorials; equals 1 at `j = 0`.
pub fn generalized_binom(x: &Scalar, j: usize) -> Scalar {
    let mode = x.mode();
    let mut num = Scalar::one(mode);
    for i in 0..j {
        num *= &(x - &Scalar::from_int(i as i64, mode));
    }
    let mut fact = Scalar::one(mode);
    for i in 1..=j {
        fact *= &Scalar::from_int(i as i64, mode);
    }
    num / fact
}

/// Table of values `K_m(x)` for `m, x` in `0..=d`.
#[derive(Clone, Debug)]
pub struct KrawtchoukTable {
    params: ChainParams,
    mode: Mode,
    values: Vec<Vec<Scalar>>,
}

impl KrawtchoukTable {
    /// Build the full table once; reuse it for every spectral computation.
    pub fn new(params: ChainParams, mode: Mode) -> Self {
        let d = params.d();
        let values = match mode {
            Mode::Exact => (0..=d)
                .map(|m| (0..=d).map(|x| Scalar::Exact(direct_sum_exact(params, m, x))).collect())
                .collect(),
            Mode::Float => recurrence_table_f64(params),
        };
        KrawtchoukTable { params, mode, values }
    }

    pub fn params(&self) -> ChainParams {
        self.params
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `K_m(x)`.
    pub fn value(&self, m: usize, x: usize) -> &Scalar {
        &self.values[m][x]
    }

    /// The row of `K_m` over all shells.
    pub fn row(&self, m: usize) -> &[Scalar] {
        &self.values[m]
    }
}

/// `K_m(x)` at a single point; direct sum in exact mode, recurrence in float.
pub fn krawtchouk_eval(params: ChainParams, m: usize, x: usize, mode: Mode) -> Result<Scalar> {
    let d = params.d();
    if m > d {
        return Err(Error::Domain(format!("polynomial degree {m} exceeds d = {d}")));
    }
    if x > d {
        return Err(Error::ShellIndex { index: x, max: d });
    }
    Ok(match mode {
        Mode::Exact => Scalar::Exact(direct_sum_exact(params, m, x)),
        Mode::Float => {
            let n = params.n() as f64;
            let df = d as f64;
            let xf = x as f64;
            let mut prev = 1.0f64;
            if m == 0 {
                return Ok(Scalar::Float(prev));
            }
            let mut cur = df * (n - 1.0) - n * xf;
            for k in 1..m {
                let next = recurrence_step(n, df, xf, k as f64, cur, prev);
                prev = cur;
                cur = next;
            }
            Scalar::Float(cur)
        }
    })
}

/// Inner product `sum_i C(d,i)(n-1)^i A(i) B(i)` over shells.
pub fn weighted_inner(a: &[Scalar], b: &[Scalar], params: ChainParams) -> Result<Scalar> {
    let d = params.d();
    if a.len() != d + 1 || b.len() != d + 1 {
        return Err(Error::Domain(format!(
            "weighted_inner: vectors of length {} and {}, expected {}",
            a.len(),
            b.len(),
            d + 1
        )));
    }
    let mode = a[0].mode();
    if b[0].mode() != mode {
        return Err(Error::ModeMismatch("weighted_inner: mixed numeric modes".into()));
    }
    let mut acc = Scalar::zero(mode);
    for (i, phi) in shell_sizes(params).iter().enumerate() {
        acc += &(&(&a[i] * &b[i]) * &Scalar::from_biguint(phi, mode));
    }
    Ok(acc)
}

/// `K_m(x)` via the alternating sum
/// `sum_j (-1)^j C(x,j) C(d-x, m-j) (n-1)^{m-j}`, in exact integers.
fn direct_sum_exact(params: ChainParams, m: usize, x: usize) -> num::BigRational {
    let d = params.d();
    let n1 = BigUint::from(params.n() - 1);
    let mut acc = BigInt::from(0);
    for j in 0..=m.min(x) {
        if m - j > d - x {
            continue;
        }
        let c1 = num::integer::binomial(BigUint::from(x), BigUint::from(j));
        let c2 = num::integer::binomial(BigUint::from(d - x), BigUint::from(m - j));
        let term = BigInt::from(c1 * c2 * n1.clone().pow((m - j) as u32));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    num::BigRational::from_integer(acc)
}

/// One step of the degree recurrence:
/// `(k+1) K_{k+1}(x) = (k + (n-1)(d-k) - n x) K_k(x) - (n-1)(d-k+1) K_{k-1}(x)`.
fn recurrence_step(n: f64, d: f64, x: f64, k: f64, kk: f64, km1: f64) -> f64 {
    ((k + (n - 1.0) * (d - k) - n * x) * kk - (n - 1.0) * (d - k + 1.0) * km1) / (k + 1.0)
}

fn recurrence_table_f64(params: ChainParams) -> Vec<Vec<Scalar>> {
    let d = params.d();
    let n = params.n() as f64;
    let df = d as f64;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    rows.push(vec![1.0; d + 1]);
    if d >= 1 {
        rows.push((0..=d).map(|x| df * (n - 1.0) - n * x as f64).collect());
    }
    for m in 1..d {
        let next: Vec<f64> = (0..=d)
            .map(|x| recurrence_step(n, df, x as f64, m as f64, rows[m][x], rows[m - 1][x]))
            .collect();
        rows.push(next);
    }
    rows.into_iter().map(|row| row.into_iter().map(Scalar::Float).collect()).collect()
}
