//! Complete eigen-system of the shell kernel: eigenvalues, orthonormalized
//! eigenfunctions, self-adjointness, and the L² identity behind the upper
//! bound.
//!
//! The normalization divides each polynomial by the square root of its
//! stationary-weighted norm. Exact mode never materializes the square roots:
//! everything downstream consumes products `phi_m(x) phi_m(y)`, which stay
//! rational.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{stationary_shell_distribution, tv_distance, ChainParams, ShellDistribution};
use crate::error::Result;
use crate::krawtchouk::{weighted_inner, KrawtchoukTable};
use crate::lumped::ShellKernel;
use crate::scalar::{Mode, Scalar};

/// Eigenvalues `lambda_m = 1 - mn / (d(n-1))` for `m = 0..=d`.
pub fn eigenvalues(params: ChainParams, mode: Mode) -> Vec<Scalar> {
    let d = params.d() as i64;
    let n = params.n() as i64;
    let moves = d * (n - 1);
    (0..=d).map(|m| Scalar::from_ratio(moves - m * n, moves, mode)).collect()
}

/// Eigenvalues, polynomial table, and normalization data for one `(n, d)`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    params: ChainParams,
    mode: Mode,
    eigenvalues: Vec<Scalar>,
    table: KrawtchoukTable,
    /// Stationary-weighted squared norms `<K_m, K_m>_pi`.
    norm_sq: Vec<Scalar>,
    /// `phi_m(0)^2 = K_m(0)^2 / <K_m, K_m>_pi`.
    phi0_sq: Vec<Scalar>,
}

impl SpectralData {
    pub fn new(params: ChainParams, mode: Mode) -> Self {
        let table = KrawtchoukTable::new(params, mode);
        let d = params.d();
        let norm_sq: Vec<Scalar> = match mode {
            Mode::Exact => {
                // Brute-force inner products; the closed form is a theorem
                // the tests check against this, not an input.
                let nd = Scalar::from_biguint(&params.state_count(), Mode::Exact);
                (0..=d)
                    .map(|m| {
                        weighted_inner(table.row(m), table.row(m), params).expect("same length") / &nd
                    })
                    .collect()
            }
            Mode::Float => {
                // Raw inner products square the polynomial values and overflow
                // f64 well before the norms do, so build the norms from the
                // incremental product (d-i)(n-1)/(i+1) instead.
                let n = params.n() as f64;
                let mut cur = 1.0f64;
                let mut out = vec![Scalar::Float(1.0)];
                for i in 0..d {
                    cur *= (d - i) as f64 * (n - 1.0) / (i as f64 + 1.0);
                    out.push(Scalar::Float(cur));
                }
                out
            }
        };
        let phi0_sq: Vec<Scalar> = (0..=d)
            .map(|m| {
                let k0 = table.value(m, 0);
                &(k0 / &norm_sq[m]) * k0
            })
            .collect();
        SpectralData {
            params,
            mode,
            eigenvalues: eigenvalues(params, mode),
            table,
            norm_sq,
            phi0_sq,
        }
    }

    pub fn params(&self) -> ChainParams {
        self.params
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn eigenvalues(&self) -> &[Scalar] {
        &self.eigenvalues
    }

    pub fn table(&self) -> &KrawtchoukTable {
        &self.table
    }

    pub fn norm_sq(&self) -> &[Scalar] {
        &self.norm_sq
    }

    pub fn phi0_sq(&self) -> &[Scalar] {
        &self.phi0_sq
    }

    /// `phi_m(x) phi_m(y)`, rational in exact mode.
    pub fn phi_prod(&self, m: usize, x: usize, y: usize) -> Scalar {
        &(self.table.value(m, x) / &self.norm_sq[m]) * self.table.value(m, y)
    }

    /// `phi_m(x)` itself; float only, since the normalization is a square root.
    pub fn phi_f64(&self, m: usize, x: usize) -> f64 {
        self.table.value(m, x).to_f64() / self.norm_sq[m].to_f64().sqrt()
    }
}

/// Relative eigen-residual `max_x |(P K_m)(x) - lambda_m K_m(x)|` normalized
/// by `max_x |K_m(x)|`. Exactly zero in rational mode.
pub fn eigen_residual(kernel: &ShellKernel, table: &KrawtchoukTable, m: usize) -> Scalar {
    let params = kernel.params();
    let mode = kernel.mode();
    let lambda = &eigenvalues(params, mode)[m];
    let applied = kernel.apply_to_function(table.row(m));
    let mut max_resid = Scalar::zero(mode);
    let mut max_value = Scalar::zero(mode);
    for (x, pk) in applied.iter().enumerate() {
        let resid = (pk - &(lambda * table.value(m, x))).abs();
        if resid > max_resid {
            max_resid = resid;
        }
        let mag = table.value(m, x).abs();
        if mag > max_value {
            max_value = mag;
        }
    }
    max_resid / max_value
}

/// Max over random pairs `(f, g)` of `|<Pf, g>_pi - <f, Pg>_pi|`.
pub fn self_adjoint_check(params: ChainParams, trials: u64, seed: u64, mode: Mode) -> Scalar {
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = params.d();
    let mut worst = Scalar::zero(mode);
    for _ in 0..trials {
        let f = random_function(d, mode, &mut rng);
        let g = random_function(d, mode, &mut rng);
        let asym = pairing_asymmetry(&kernel, &pi, &f, &g);
        if asym > worst {
            worst = asym;
        }
    }
    worst
}

fn random_function(d: usize, mode: Mode, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..=d)
        .map(|_| match mode {
            Mode::Exact => {
                let num = rng.random_range(-9i64..=9);
                let den = rng.random_range(1i64..=9);
                Scalar::from_ratio(num, den, Mode::Exact)
            }
            Mode::Float => Scalar::Float(rng.random_range(-1.0..1.0)),
        })
        .collect()
}

fn pairing_asymmetry(
    kernel: &ShellKernel,
    pi: &ShellDistribution,
    f: &[Scalar],
    g: &[Scalar],
) -> Scalar {
    let mode = kernel.mode();
    let pf = kernel.apply_to_function(f);
    let pg = kernel.apply_to_function(g);
    let mut lhs = Scalar::zero(mode);
    let mut rhs = Scalar::zero(mode);
    for x in 0..f.len() {
        lhs += &(&(&pf[x] * &g[x]) * pi.get(x));
        rhs += &(&(&f[x] * &pg[x]) * pi.get(x));
    }
    (lhs - rhs).abs()
}

/// Both sides of the L² identity at time `t`, plus the TV distance at `t`
/// for the `4 TV^2 <= lhs` comparison.
#[derive(Clone, Debug)]
pub struct L2Identity {
    /// `|| P^t(0,.) / pi - 1 ||^2_{2,pi}` from the evolved distribution.
    pub lhs: Scalar,
    /// `sum_{m>=1} phi_m(0)^2 lambda_m^{2t}` from the spectral data.
    pub rhs: Scalar,
    /// `TV(P^t(0,.), pi)`.
    pub tv: Scalar,
}

pub fn l2_identity_check(spectral: &SpectralData, t: u64) -> Result<L2Identity> {
    let params = spectral.params();
    let mode = spectral.mode();
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let mut dist = ShellDistribution::delta(params, 0, mode)?;
    for _ in 0..t {
        dist = kernel.step(&dist);
    }
    let one = Scalar::one(mode);
    let mut lhs = Scalar::zero(mode);
    for y in 0..=params.d() {
        let ratio = dist.get(y) / pi.get(y) - &one;
        lhs += &(&(&ratio * &ratio) * pi.get(y));
    }
    let mut rhs = Scalar::zero(mode);
    for m in 1..=params.d() {
        let lam = &spectral.eigenvalues()[m];
        let mut pow = Scalar::one(mode);
        for _ in 0..(2 * t) {
            pow *= lam;
        }
        rhs += &(&spectral.phi0_sq()[m] * &pow);
    }
    let tv = tv_distance(&dist, &pi)?;
    Ok(L2Identity { lhs, rhs, tv })
}

/// Worst deviation of the Gram matrix of `phi` from the identity.
///
/// Float mode forms the matrix directly. Exact mode avoids square roots:
/// off-diagonal entries are reported as their squares (zero iff zero) and
/// diagonal entries as `<K_m,K_m>_pi / norm_sq_m - 1`.
pub fn gram_max_deviation(spectral: &SpectralData) -> Scalar {
    let params = spectral.params();
    let d = params.d();
    match spectral.mode() {
        Mode::Exact => {
            let nd = Scalar::from_biguint(&params.state_count(), Mode::Exact);
            let table = spectral.table();
            let mut worst = Scalar::zero(Mode::Exact);
            for m in 0..=d {
                for j in m..=d {
                    let ip = weighted_inner(table.row(m), table.row(j), params).expect("same length") / &nd;
                    let dev = if m == j {
                        (ip / &spectral.norm_sq()[m] - Scalar::one(Mode::Exact)).abs()
                    } else {
                        let g2 = &(&ip * &ip) / &(&spectral.norm_sq()[m] * &spectral.norm_sq()[j]);
                        g2.abs()
                    };
                    if dev > worst {
                        worst = dev;
                    }
                }
            }
            worst
        }
        Mode::Float => {
            let pi = stationary_shell_distribution(params, Mode::Float);
            let mut worst = 0.0f64;
            for m in 0..=d {
                for j in m..=d {
                    let mut acc = 0.0;
                    for x in 0..=d {
                        acc += spectral.phi_f64(m, x) * spectral.phi_f64(j, x) * pi.get(x).to_f64();
                    }
                    let want = if m == j { 1.0 } else { 0.0 };
                    worst = worst.max((acc - want).abs());
                }
            }
            Scalar::Float(worst)
        }
    }
}

/// Worst entrywise deviation of `sum_m lambda_m phi_m(x) phi_m(y) pi(y)`
/// from the kernel entry `P(x, y)`.
pub fn kernel_reconstruction_max_deviation(spectral: &SpectralData) -> Scalar {
    let params = spectral.params();
    let mode = spectral.mode();
    let kernel = ShellKernel::new(params, mode);
    let pi = stationary_shell_distribution(params, mode);
    let d = params.d();
    let mut worst = Scalar::zero(mode);
    for x in 0..=d {
        for y in 0..=d {
            let mut acc = Scalar::zero(mode);
            for m in 0..=d {
                acc += &(&(&spectral.eigenvalues()[m] * &spectral.phi_prod(m, x, y)) * pi.get(y));
            }
            let dev = (acc - kernel.entry(x, y)).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}
