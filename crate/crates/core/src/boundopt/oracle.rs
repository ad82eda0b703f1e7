use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::quasi_newton::bfgs;
use super::simplex::{nelder_mead, SimplexOptions};
use crate::error::{Error, Result};
use crate::matkit::{hermitian_eig, partial_transpose, ComplexMatrix, Party, C64};
use crate::measures::{cross_entropy, relative_entropy, spectrum_entropy, EntropyValue};
use crate::states::{random::ginibre, DensityMatrix};

const LOG_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub starts: usize,
    pub seed: u64,
    /// Penalty weights, applied in order.
    pub schedule: Vec<f64>,
    /// Simplex iterations per penalty stage.
    pub stage_iterations: usize,
    /// Quasi-Newton iterations at the last penalty weight; 0 disables the polish.
    pub polish_iterations: usize,
}

impl OracleOptions {
    pub fn new(starts: usize, seed: u64) -> Self {
        OracleOptions {
            starts,
            seed,
            schedule: vec![10.0, 1e3, 1e5],
            stage_iterations: 400,
            polish_iterations: 500,
        }
    }
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self::new(32, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub sigma_star: DensityMatrix,
    pub value: EntropyValue,
    pub starts: usize,
    pub per_start: Vec<f64>,
    pub best_start: usize,
    pub seed: u64,
}

/// Packs a lower-triangular `G`: per row, the real diagonal entry last,
/// preceded by `(re, im)` of each entry left of it.
fn unpack(x: &[f64], n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in 0..i {
            g[(i, j)] = C64::new(x[k], x[k + 1]);
            k += 2;
        }
        g[(i, i)] = C64::new(x[k], 0.0);
        k += 1;
    }
    g
}

fn pack(g: &ComplexMatrix) -> Vec<f64> {
    let n = g.rows();
    let mut x = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..i {
            x.push(g[(i, j)].re);
            x.push(g[(i, j)].im);
        }
        x.push(g[(i, i)].re);
    }
    x
}

/// Divided difference of `ln` at `a`, `b`.
fn log_divided(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi - lo <= 1e-12 * hi {
        2.0 / (hi + lo)
    } else {
        ((hi - lo) / lo).ln_1p() / (hi - lo)
    }
}

struct Penalized<'a> {
    rho: &'a DensityMatrix,
    entropy: f64,
    mu: f64,
}

impl Penalized<'_> {
    fn sigma(&self, g: &ComplexMatrix) -> (ComplexMatrix, f64) {
        let a = g * &g.adjoint();
        let t = a.trace().re;
        (a.scale(1.0 / t).hermitian_part(), t)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.value_grad(x, false).0
    }

    fn value_grad(&self, x: &[f64], want_grad: bool) -> (f64, Vec<f64>) {
        let n = self.rho.dim();
        let g = unpack(x, n);
        let (sigma, t) = self.sigma(&g);
        if t.is_nan() || t <= 0.0 || !t.is_finite() {
            return (f64::INFINITY, vec![0.0; x.len()]);
        }
        let Ok(eig) = hermitian_eig(&sigma) else {
            return (f64::INFINITY, vec![0.0; x.len()]);
        };
        let Ok(pt) = partial_transpose(&sigma, self.rho.dims(), Party::B) else {
            return (f64::INFINITY, vec![0.0; x.len()]);
        };
        let Ok(pt_eig) = hermitian_eig(&pt) else {
            return (f64::INFINITY, vec![0.0; x.len()]);
        };
        let neg = (-pt_eig.min_value()).max(0.0);
        let f = cross_entropy(self.rho.matrix(), &eig, LOG_FLOOR) - self.entropy
            + self.mu * neg * neg
            + (t - 1.0).powi(2);
        if !want_grad {
            return (f, Vec::new());
        }

        // gradient of the objective with respect to sigma
        let lam: Vec<f64> = eig.values.iter().map(|&v| v.max(LOG_FLOOR)).collect();
        let local = eig.to_eigenbasis(self.rho.matrix());
        let weighted = ComplexMatrix::from_fn(n, n, |i, j| local[(i, j)] * log_divided(lam[i], lam[j]));
        let mut grad_sigma = eig.from_eigenbasis(&weighted).scale(-1.0);
        if neg > 0.0 {
            let v = pt_eig.vector(n - 1);
            let proj = partial_transpose(&ComplexMatrix::outer(&v), self.rho.dims(), Party::B)
                .expect("dims checked");
            grad_sigma = &grad_sigma - &proj.scale(2.0 * self.mu * neg);
        }
        let shift = grad_sigma.trace_product(&sigma).re;
        let grad_a = &(&grad_sigma - &ComplexMatrix::identity(n).scale(shift)).scale(1.0 / t)
            + &ComplexMatrix::identity(n).scale(2.0 * (t - 1.0));
        let m = &g.adjoint() * &grad_a;
        let mut grad = Vec::with_capacity(x.len());
        for i in 0..n {
            for j in 0..i {
                grad.push(2.0 * m[(j, i)].re);
                grad.push(-2.0 * m[(j, i)].im);
            }
            grad.push(2.0 * m[(i, i)].re);
        }
        (f, grad)
    }
}

/// Mixes `sigma` with the maximally mixed state just enough to make its
/// partial transpose PSD.
fn enforce_ppt(sigma: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let pt = partial_transpose(sigma, dims, Party::B)?;
    let lambda = hermitian_eig(&pt)?.min_value();
    if lambda >= 0.0 {
        return Ok(sigma.clone());
    }
    let n = sigma.rows() as f64;
    let eps = -lambda / (1.0 / n - lambda);
    Ok(&sigma.scale(1.0 - eps) + &ComplexMatrix::identity(sigma.rows()).scale(eps / n))
}

fn initial_point(rng: Option<&mut ChaCha8Rng>, n: usize) -> Vec<f64> {
    let g = match rng {
        None => ComplexMatrix::identity(n).scale(1.0 / (n as f64).sqrt()),
        Some(rng) => {
            let raw = ginibre(rng, n, n);
            let lower = ComplexMatrix::from_fn(n, n, |i, j| {
                if j < i {
                    raw[(i, j)]
                } else if i == j {
                    C64::new(raw[(i, j)].norm(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let tr = lower.frobenius_norm();
            lower.scale(1.0 / tr)
        }
    };
    pack(&g)
}

fn run_start(rho: &DensityMatrix, entropy: f64, x0: Vec<f64>, opts: &OracleOptions) -> Result<(DensityMatrix, f64)> {
    let n = rho.dim();
    let mut x = x0;
    let mut mu = opts.schedule.first().copied().unwrap_or(1e5);
    for (k, &stage_mu) in opts.schedule.iter().enumerate() {
        mu = stage_mu;
        let p = Penalized { rho, entropy, mu };
        let step = if k == 0 { 0.1 } else { 0.02 };
        let out = nelder_mead(
            |y| p.value(y),
            &x,
            &SimplexOptions {
                max_iter: opts.stage_iterations,
                diameter_tol: 1e-12,
                step,
            },
        );
        x = out.x;
    }
    if opts.polish_iterations > 0 {
        let p = Penalized { rho, entropy, mu };
        x = bfgs(|y| p.value_grad(y, true), &x, opts.polish_iterations, 1e-12).x;
    }
    let g = unpack(&x, n);
    let (sigma, _) = Penalized { rho, entropy, mu }.sigma(&g);
    let sigma = DensityMatrix::new_unchecked(enforce_ppt(&sigma, rho.dims())?.hermitian_part(), rho.dims());
    let value = relative_entropy(rho, &sigma)?;
    Ok((sigma, value.nats))
}

/// Brute-force closest PPT state: multi-start penalized search over all
/// density matrices `G G^dagger / Tr(G G^dagger)`.
pub fn closest_ppt_oracle(rho: &DensityMatrix, starts: usize, seed: u64) -> Result<OracleResult> {
    closest_ppt_oracle_with(rho, &OracleOptions::new(starts, seed))
}

pub fn closest_ppt_oracle_with(rho: &DensityMatrix, opts: &OracleOptions) -> Result<OracleResult> {
    if opts.starts == 0 {
        return Err(Error::input("oracle needs at least one start"));
    }
    let n = rho.dim();
    let entropy = spectrum_entropy(&rho.eig()?.values);
    let mut master = ChaCha8Rng::seed_from_u64(opts.seed);
    let seeds: Vec<u64> = (0..opts.starts).map(|_| master.random()).collect();
    let outcomes = seeds
        .par_iter()
        .enumerate()
        .map(|(k, &s)| {
            let x0 = if k == 0 {
                initial_point(None, n)
            } else {
                initial_point(Some(&mut ChaCha8Rng::seed_from_u64(s)), n)
            };
            run_start(rho, entropy, x0, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let per_start: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
    let (best_start, _) = per_start
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("starts >= 1");
    let sigma_star = outcomes[best_start].0.clone();
    let value = relative_entropy(rho, &sigma_star)?;
    Ok(OracleResult {
        sigma_star,
        value,
        starts: opts.starts,
        per_start,
        best_start,
        seed: opts.seed,
    })
}
