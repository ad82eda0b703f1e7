use rayon::prelude::*;
use serde::Serialize;

use super::simplex::{nelder_mead, nelder_mead_oriented, SimplexOptions};
use crate::error::Result;
use crate::extremal::{condition_report, ConditionReport, CONDITION_TOL};
use crate::matkit::{hermitian_eig, kron, partial_transpose, ComplexMatrix, Party};
use crate::measures::{cross_entropy, relative_entropy, spectrum_entropy, EntropyValue};
use crate::states::{canonical_form, Canonical, DensityMatrix, HilbertSchmidtForm, Mat3, Vec3};

/// Eigenvalues of `sigma(tau)` and its partial transpose may dip this far below zero.
pub const FEASIBILITY_TOL: f64 = 1e-12;
/// Eigenvalue clip inside the objective.
pub const LOG_FLOOR: f64 = 1e-12;
const OCTAHEDRON_SCALE: f64 = 0.999;
const EXACT_ZERO: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions {
    pub simplex: SimplexOptions,
    /// Rounds of simplex restarts from the best point, each round trying
    /// several orientations with a 10x smaller step than the last.
    pub restarts: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            simplex: SimplexOptions::default(),
            restarts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundDiagnostics {
    /// Starting points that were feasible and therefore optimized.
    pub starts_used: usize,
    pub best_start: usize,
    /// Simplex iterations summed over restarts of the best start.
    pub iterations: usize,
    pub final_simplex_size: f64,
    pub converged: bool,
    /// `false` if no diagonal `tau` was feasible; `sigma_star` is then `rho_A (x) rho_B`.
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// Optimal diagonal correlations in the canonical frame of `rho`.
    pub tau_star: Vec3,
    /// Minimizer in the frame of the input state.
    pub sigma_star: DensityMatrix,
    pub value: EntropyValue,
    /// `(O_A, O_B)` taking the input frame to the canonical one.
    pub rotations: (Mat3, Mat3),
    pub diagnostics: BoundDiagnostics,
    /// Filtering and unitary conditions at `sigma_star` for parties A and B,
    /// absent if `supp rho` is not inside `supp sigma_star`.
    pub conditions: Option<(ConditionReport, ConditionReport)>,
}

/// `sigma(tau)` in the canonical frame, sharing the Bloch vectors of `rho`.
fn sigma_of(form: &HilbertSchmidtForm, tau: &[f64]) -> ComplexMatrix {
    let mut h = *form;
    h.t = [[tau[0], 0.0, 0.0], [0.0, tau[1], 0.0], [0.0, 0.0, tau[2]]];
    h.assemble()
}

/// Smaller of the least eigenvalues of `sigma` and of its partial transpose.
fn margin(sigma: &ComplexMatrix) -> Result<f64> {
    let a = hermitian_eig(sigma)?.min_value();
    let b = hermitian_eig(&partial_transpose(sigma, (2, 2), Party::B)?)?.min_value();
    Ok(a.min(b))
}

struct Problem<'a> {
    canonical: &'a Canonical,
    entropy: f64,
}

impl Problem<'_> {
    fn feasible(&self, tau: &[f64]) -> bool {
        margin(&sigma_of(&self.canonical.form, tau)).is_ok_and(|m| m >= -FEASIBILITY_TOL)
    }

    fn objective(&self, tau: &[f64]) -> f64 {
        let sigma = sigma_of(&self.canonical.form, tau);
        let Ok(eig) = hermitian_eig(&sigma) else {
            return f64::INFINITY;
        };
        if eig.min_value() < -FEASIBILITY_TOL {
            return f64::INFINITY;
        }
        let pt_ok = partial_transpose(&sigma, (2, 2), Party::B)
            .and_then(|pt| hermitian_eig(&pt))
            .map(|e| e.min_value() >= -FEASIBILITY_TOL)
            .unwrap_or(false);
        if !pt_ok {
            return f64::INFINITY;
        }
        cross_entropy(self.canonical.state.matrix(), &eig, LOG_FLOOR) - self.entropy
    }

    /// Feasible point maximizing the smallest eigenvalue of `sigma(tau)` and
    /// of its partial transpose.
    fn center(&self) -> Vec3 {
        if self.feasible(&[0.0; 3]) {
            return [0.0; 3];
        }
        let form = self.canonical.form;
        let found = nelder_mead(
            |tau| margin(&sigma_of(&form, tau)).map_or(f64::INFINITY, |m| -m),
            &[0.0; 3],
            &SimplexOptions {
                max_iter: 2000,
                diameter_tol: 1e-10,
                step: 0.1,
            },
        );
        [found.x[0], found.x[1], found.x[2]]
    }

    /// Point of the segment from `center` to `t` closest to `t` that is still feasible.
    fn clip_toward(&self, center: &Vec3, t: &Vec3) -> Option<Vec3> {
        let at = |s: f64| [0, 1, 2].map(|k| center[k] + s * (t[k] - center[k]));
        if self.feasible(t) {
            return Some(*t);
        }
        if !self.feasible(center) {
            return None;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.feasible(&at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(at(lo))
    }

    /// `tau = 0`, the correlations of `rho`, and the scaled octahedron
    /// vertices, each pulled toward a feasible center as needed.
    fn starts(&self) -> Vec<Vec3> {
        let center = self.center();
        let mut raw = vec![[0.0; 3], self.canonical.form.t_diagonal()];
        for k in 0..3 {
            for sign in [1.0, -1.0] {
                let mut v = [0.0; 3];
                v[k] = sign * OCTAHEDRON_SCALE;
                raw.push(v);
            }
        }
        let mut out: Vec<Vec3> = raw.iter().filter_map(|t| self.clip_toward(&center, t)).collect();
        if !self.feasible(&[0.0; 3]) {
            out.push(center);
        }
        out
    }
}

/// Initial simplex orientations cycled through on restarts.
fn frames() -> Vec<Vec<Vec<f64>>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = 1.0 / 3f64.sqrt();
    let c = 1.0 / 6f64.sqrt();
    vec![
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        vec![vec![h, h, 0.0], vec![h, -h, 0.0], vec![0.0, 0.0, 1.0]],
        vec![vec![h, 0.0, h], vec![h, 0.0, -h], vec![0.0, 1.0, 0.0]],
        vec![vec![0.0, h, h], vec![0.0, h, -h], vec![1.0, 0.0, 0.0]],
        vec![vec![a, a, a], vec![h, -h, 0.0], vec![c, c, -2.0 * c]],
    ]
}

struct StartOutcome {
    tau: Vec3,
    value: f64,
    iterations: usize,
    diameter: f64,
    converged: bool,
}

fn run_start(problem: &Problem, start: &Vec3, opts: &BoundOptions) -> StartOutcome {
    let f = |tau: &[f64]| problem.objective(tau);
    let mut best = nelder_mead(f, start, &opts.simplex);
    let mut iterations = best.iterations;
    let frames = frames();
    let mut step = opts.simplex.step;
    // a simplex can collapse against a constraint face; restarting it in
    // other orientations lets it slide along the face
    for _ in 0..opts.restarts {
        if !best.value.is_finite() {
            break;
        }
        let before = best.value;
        for frame in &frames {
            let again = nelder_mead_oriented(f, &best.x, frame, &SimplexOptions { step, ..opts.simplex });
            iterations += again.iterations;
            if again.value < best.value {
                best = again;
            }
        }
        if best.value >= before {
            break;
        }
        step = (step * 0.1).max(1e-6);
    }
    StartOutcome {
        tau: [best.x[0], best.x[1], best.x[2]],
        value: best.value,
        iterations,
        diameter: best.diameter,
        converged: best.converged,
    }
}

/// Upper bound on the relative entropy of entanglement of a two-qubit state.
///
/// In the canonical frame of `rho` the search runs over
/// `sigma(tau) = (I + r_a.sigma (x) I + I (x) r_b.sigma + sum_n tau_n sigma_n (x) sigma_n)/4`,
/// i.e. states with the reductions of `rho` and diagonal correlations,
/// restricted to PSD and PPT operators.
pub fn upper_bound_ree(rho: &DensityMatrix, opts: &BoundOptions) -> Result<BoundResult> {
    rho.require_two_qubit("upper bound")?;
    let canonical = canonical_form(rho)?;
    let problem = Problem {
        canonical: &canonical,
        entropy: spectrum_entropy(&canonical.state.eig()?.values),
    };
    let starts = problem.starts();
    // the relative entropy is nonnegative, so a start at zero (rho itself
    // when it is PPT) is already optimal
    let zero = starts.iter().position(|s| problem.objective(s) <= EXACT_ZERO);
    let outcomes: Vec<StartOutcome> = starts
        .par_iter()
        .enumerate()
        .map(|(k, s)| match zero {
            Some(z) if z == k => StartOutcome {
                tau: *s,
                value: problem.objective(s),
                iterations: 0,
                diameter: 0.0,
                converged: true,
            },
            Some(_) => StartOutcome {
                tau: *s,
                value: f64::INFINITY,
                iterations: 0,
                diameter: 0.0,
                converged: false,
            },
            None => run_start(&problem, s, opts),
        })
        .collect();
    let starts_used = if zero.is_some() {
        1
    } else {
        starts.iter().filter(|s| problem.feasible(&s[..])).count()
    };
    let (best_start, best) = outcomes
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .expect("at least one start");

    let rotations = (canonical.o_a, canonical.o_b);
    let input_form = crate::states::to_hilbert_schmidt(rho)?;
    let feasible = best.value.is_finite();
    let sigma_star = if feasible {
        let t = [
            [best.tau[0], 0.0, 0.0],
            [0.0, best.tau[1], 0.0],
            [0.0, 0.0, best.tau[2]],
        ];
        let h = HilbertSchmidtForm {
            t: canonical.t_to_input_frame(&t),
            ..input_form
        };
        DensityMatrix::new_unchecked(h.assemble().hermitian_part(), (2, 2))
    } else {
        DensityMatrix::new_unchecked(kron(&rho.reduced(Party::A), &rho.reduced(Party::B)), (2, 2))
    };
    let value = relative_entropy(rho, &sigma_star)?;
    let conditions = match (
        condition_report(rho, &sigma_star, Party::A, CONDITION_TOL),
        condition_report(rho, &sigma_star, Party::B, CONDITION_TOL),
    ) {
        (Ok(a), Ok(b)) => Some((a, b)),
        _ => None,
    };
    Ok(BoundResult {
        tau_star: best.tau,
        sigma_star,
        value,
        rotations,
        diagnostics: BoundDiagnostics {
            starts_used,
            best_start,
            iterations: best.iterations,
            final_simplex_size: best.diameter,
            converged: best.converged,
            feasible,
        },
        conditions,
    })
}
