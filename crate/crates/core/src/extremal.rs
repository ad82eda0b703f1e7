//! First-order optimality conditions for a closest separable (or PPT) state.
//!
//! If `sigma` minimizes `S(rho || sigma)` over a set that is closed under
//! invertible local filtering and local unitaries, the derivative of the
//! relative entropy along `sigma -> F sigma F / Tr(F sigma F)` with
//! `F = I (x) exp(t n.J / 2)` must vanish, and so must the derivative along
//! local unitary rotations. In `sigma`'s eigenbasis `{|i>, lambda_i}` the
//! filtering derivative is
//!
//! ```text
//! d/dt S = n.(s_X - r_X - g_X),   (rho o g)_X = (1/2) g_X . J
//! g_ij = ((lambda_i + lambda_j)/2) (ln lambda_i - ln lambda_j)/(lambda_i - lambda_j) - 1
//! ```
//!
//! where `s_X`, `r_X` are the generalized Bloch vectors of the reductions of
//! `sigma` and `rho` on party `X`. The unitary derivative vanishes iff
//! `([rho, log sigma])_X = 0`.
//!
//! Entries of `g` that touch the null space of `sigma` are stored as zero:
//! with `supp rho` inside `supp sigma` the matching entries of `rho` vanish,
//! so `rho o g` does not depend on them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matkit::{
    hadamard_product, hermitian_eig, lift, partial_trace, spectral_map, ComplexMatrix,
    EigDecomposition, Party, C64, SUPPORT_CUTOFF,
};
use crate::measures::{relative_entropy, support_deficit, SUPPORT_OVERLAP_TOL};
use crate::states::{bloch_vector, generator_basis, DensityMatrix, GeneratorBasis, Mat3, Vec3};

/// Default tolerance for reporting a condition as satisfied.
pub const CONDITION_TOL: f64 = 1e-6;
/// Relative eigenvalue gap below which `g_ij` takes its degenerate value 0.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Norm threshold used by [`category_classify`].
pub const CATEGORY_TOL: f64 = 1e-9;
/// Step of the central difference in [`filter_perturbation_scan`].
pub const SCAN_STEP: f64 = 1e-4;

/// `((a + b)/2) (ln a - ln b)/(a - b) - 1` for positive `a`, `b`.
///
/// Nonnegative (arithmetic mean over logarithmic mean, minus one) and exactly
/// symmetric in its arguments.
pub fn g_entry(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi - lo <= DEGENERACY_TOL * hi {
        return 0.0;
    }
    let u = (hi - lo) / lo;
    if u < 1e-3 {
        // series of ((2+u)/2) ln(1+u)/u - 1; coefficient k is (-1)^k (k-1)/(2k(k+1))
        let u2 = u * u;
        return u2 * (1.0 / 12.0 - u / 12.0 + u2 * (3.0 / 40.0 - u / 15.0));
    }
    0.5 * (hi + lo) * u.ln_1p() / (hi - lo) - 1.0
}

/// The g-matrix of `sigma`, in `sigma`'s eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct GMatrix {
    n: usize,
    entries: Vec<f64>,
    pub basis: EigDecomposition,
    /// `true` where the eigenvalue is at least [`SUPPORT_CUTOFF`].
    pub support: Vec<bool>,
}

impl GMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |i, j| C64::new(self.get(i, j), 0.0))
    }

    /// `rho o g` formed in the eigenbasis and mapped back to the original basis.
    pub fn hadamard_with(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let local = self.basis.to_eigenbasis(rho);
        let prod = hadamard_product(&local, &self.as_matrix()).expect("same shape");
        self.basis.from_eigenbasis(&prod)
    }

    /// `log sigma` restricted to the support.
    pub fn log_sigma(&self) -> ComplexMatrix {
        spectral_map(&self.basis, |x| if x < SUPPORT_CUTOFF { 0.0 } else { x.ln() })
    }
}

fn require_support(rho_eig: &EigDecomposition, sigma_eig: &EigDecomposition) -> Result<()> {
    let deficit = support_deficit(rho_eig, sigma_eig);
    if deficit > SUPPORT_OVERLAP_TOL {
        return Err(Error::Support(format!(
            "supp rho is not contained in supp sigma (overlap deficit {deficit:e})"
        )));
    }
    Ok(())
}

pub fn compute_g(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<GMatrix> {
    rho.require_same_dims(sigma)?;
    let basis = sigma.eig()?;
    require_support(&rho.eig()?, &basis)?;
    Ok(g_from_basis(basis))
}

fn g_from_basis(basis: EigDecomposition) -> GMatrix {
    let n = basis.dim();
    let support: Vec<bool> = basis.values.iter().map(|&x| x >= SUPPORT_CUTOFF).collect();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            if support[i] && support[j] {
                let g = g_entry(basis.values[i], basis.values[j]);
                entries[i * n + j] = g;
                entries[j * n + i] = g;
            }
        }
    }
    GMatrix {
        n,
        entries,
        basis,
        support,
    }
}

/// Residuals of the filtering and local-unitary conditions on one party.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub party: Party,
    /// Bloch vector of `sigma_X`.
    pub s: Vec<f64>,
    /// Bloch vector of `rho_X`.
    pub r: Vec<f64>,
    /// Bloch vector of `(rho o g)_X`.
    pub g_vec: Vec<f64>,
    /// Real vector with `([rho, log sigma])_X = (i/2) h . J`.
    pub h: Vec<f64>,
    /// `|| sigma_X - rho_X - (rho o g)_X ||_F`
    pub filter_residual: f64,
    /// `|| (rho o g)_X ||_F`
    pub g_norm: f64,
    /// `|| ([rho, log sigma])_X ||_F`
    pub unitary_residual: f64,
    pub tolerance: f64,
    pub filter_satisfied: bool,
    pub unitary_satisfied: bool,
}

/// Evaluates both conditions for `party` with a custom tolerance.
pub fn condition_report(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    party: Party,
    tolerance: f64,
) -> Result<ConditionReport> {
    let g = compute_g(rho, sigma)?;
    let dims = rho.dims();
    let other = party.other();
    let basis = generator_basis(rho.party_dim(party))?;

    let rho_x = rho.reduced(party);
    let sigma_x = sigma.reduced(party);
    let rg_x = partial_trace(&g.hadamard_with(rho.matrix()), dims, other)?;
    let residual = &(&sigma_x - &rho_x) - &rg_x;

    let comm = rho.matrix().commutator(&g.log_sigma());
    let comm_x = partial_trace(&comm, dims, other)?;
    let h: Vec<f64> = basis
        .generators()
        .iter()
        .map(|j| comm_x.trace_product(j).im)
        .collect();
    debug_assert!(
        unitary_element_form(rho, &g, party, &basis)
            .iter()
            .zip(&h)
            .all(|(a, b)| (a + b).abs() <= 1e-8 * (1.0 + b.abs())),
        "matrix and element forms of the unitary condition disagree"
    );

    let filter_residual = residual.frobenius_norm();
    let unitary_residual = comm_x.frobenius_norm();
    Ok(ConditionReport {
        party,
        s: bloch_vector(&sigma_x, &basis)?,
        r: bloch_vector(&rho_x, &basis)?,
        g_vec: bloch_vector(&rg_x, &basis)?,
        h,
        filter_residual,
        g_norm: rg_x.frobenius_norm(),
        unitary_residual,
        tolerance,
        filter_satisfied: filter_residual <= tolerance,
        unitary_satisfied: unitary_residual <= tolerance,
    })
}

/// `sum_ij <i|N_a|j><j|rho|i> (ln lambda_j - ln lambda_i)` for each generator,
/// which equals `-h_a`.
fn unitary_element_form(
    rho: &DensityMatrix,
    g: &GMatrix,
    party: Party,
    basis: &GeneratorBasis,
) -> Vec<f64> {
    let local_rho = g.basis.to_eigenbasis(rho.matrix());
    let logs: Vec<f64> = g
        .basis
        .values
        .iter()
        .map(|&x| if x < SUPPORT_CUTOFF { 0.0 } else { x.ln() })
        .collect();
    basis
        .generators()
        .iter()
        .map(|j| {
            let n = g.basis.to_eigenbasis(&lift(j, rho.dims(), party));
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..g.dim() {
                for b in 0..g.dim() {
                    acc += n[(a, b)] * local_rho[(b, a)] * (logs[b] - logs[a]);
                }
            }
            acc.im
        })
        .collect()
}

/// Local-filtering condition on `party` at the default tolerance.
pub fn filter_residual(rho: &DensityMatrix, sigma: &DensityMatrix, party: Party) -> Result<ConditionReport> {
    condition_report(rho, sigma, party, CONDITION_TOL)
}

/// Local-unitary condition on `party` at the default tolerance.
///
/// Shares its report with [`filter_residual`]; the relevant fields are
/// `unitary_residual`, `h` and `unitary_satisfied`.
pub fn unitary_residual(rho: &DensityMatrix, sigma: &DensityMatrix, party: Party) -> Result<ConditionReport> {
    condition_report(rho, sigma, party, CONDITION_TOL)
}

/// Number of scalar equations in the filtering plus unitary conditions for
/// both parties of a `d (x) d` system.
pub const fn condition_equation_count(d: usize) -> usize {
    4 * (d * d - 1)
}

/// The relaxed constraints used by the three-parameter bound: equal
/// reductions and vanishing reductions of `[rho, sigma]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakConstraintReport {
    /// `|s_A - r_A|`
    pub reduction_a: f64,
    /// `|s_B - r_B|`
    pub reduction_b: f64,
    /// `|| ([rho, sigma])_A ||_F`
    pub commutator_a: f64,
    /// `|| ([rho, sigma])_B ||_F`
    pub commutator_b: f64,
    /// `t_ii tau_ij - t_jj tau_ji` and `tau_ij t_jj - tau_ji t_ii` for
    /// `(i, j)` in `(1,2), (1,3), (2,3)`.
    pub tau_t: [f64; 6],
    /// Scalar equations in the full filtering + unitary system, `4(d^2 - 1)`.
    pub equation_count: usize,
}

/// Off-diagonal tolerance for accepting `rho` as canonical.
pub const CANONICAL_TOL: f64 = 1e-8;

pub fn tau_t_residuals(t: &Vec3, tau: &Mat3) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        out[2 * k] = t[i] * tau[i][j] - t[j] * tau[j][i];
        out[2 * k + 1] = tau[i][j] * t[j] - tau[j][i] * t[i];
    }
    out
}

/// Requires `rho` in canonical (diagonal-T) form.
pub fn weak_constraint_residual(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<WeakConstraintReport> {
    rho.require_two_qubit("weak constraint check")?;
    sigma.require_two_qubit("weak constraint check")?;
    let hr = crate::states::to_hilbert_schmidt(rho)?;
    let hs = crate::states::to_hilbert_schmidt(sigma)?;
    if hr.max_off_diagonal() > CANONICAL_TOL {
        return Err(Error::input(format!(
            "rho is not in canonical form (largest off-diagonal T entry {:e})",
            hr.max_off_diagonal()
        )));
    }
    let diff = |a: &Vec3, b: &Vec3| {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    };
    let comm = rho.matrix().commutator(sigma.matrix());
    Ok(WeakConstraintReport {
        reduction_a: diff(&hs.r_a, &hr.r_a),
        reduction_b: diff(&hs.r_b, &hr.r_b),
        commutator_a: partial_trace(&comm, (2, 2), Party::B)?.frobenius_norm(),
        commutator_b: partial_trace(&comm, (2, 2), Party::A)?.frobenius_norm(),
        tau_t: tau_t_residuals(&hr.t_diagonal(), &hs.t),
        equation_count: condition_equation_count(2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// `[rho, sigma] = 0`.
    CategoryI,
    /// Every eigen-coherence `|j><i|` of `sigma` that `rho` populates has
    /// vanishing reductions on both parties, and the per-eigenpair constraint holds.
    CategoryIi,
    /// `(|j><j| [rho, sigma] |i><i|)_X = 0` for all eigenpairs, but neither category.
    ConstraintOnly,
    None,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::CategoryI => "category_i",
            Category::CategoryIi => "category_ii",
            Category::ConstraintOnly => "constraint_only",
            Category::None => "none",
        }
    }
}

pub fn category_classify(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Category> {
    rho.require_same_dims(sigma)?;
    let eig = sigma.eig()?;
    require_support(&rho.eig()?, &eig)?;
    if rho.matrix().commutator(sigma.matrix()).frobenius_norm() <= CATEGORY_TOL {
        return Ok(Category::CategoryI);
    }
    let dims = rho.dims();
    let n = eig.dim();
    let local = eig.to_eigenbasis(rho.matrix());
    let mut constraint = true;
    let mut coherences_local = true;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let rho_ji = local[(j, i)];
            // |j><i|
            let ket = eig.vector(j);
            let bra = eig.vector(i);
            let k = ComplexMatrix::from_fn(n, n, |a, b| ket[a] * bra[b].conj());
            let ka = partial_trace(&k, dims, Party::B)?.frobenius_norm();
            let kb = partial_trace(&k, dims, Party::A)?.frobenius_norm();
            let weight = (eig.values[i] - eig.values[j]).abs() * rho_ji.norm();
            if weight * ka > CATEGORY_TOL || weight * kb > CATEGORY_TOL {
                constraint = false;
            }
            if rho_ji.norm() > CATEGORY_TOL && (ka > CATEGORY_TOL || kb > CATEGORY_TOL) {
                coherences_local = false;
            }
        }
    }
    Ok(match (constraint, coherences_local) {
        (true, true) => Category::CategoryIi,
        (true, false) => Category::ConstraintOnly,
        _ => Category::None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterScan {
    pub party: Party,
    pub direction: Vec<f64>,
    pub t: Vec<f64>,
    /// `S(rho || sigma'(t))` in nats, one per grid point.
    pub values: Vec<f64>,
    /// Central difference of `S(rho || sigma'(t))` at `t = 0`.
    pub derivative: f64,
    /// `n . (s - r - g_vec)` from the closed-form condition.
    pub predicted: f64,
}

/// `F sigma F / Tr(F sigma F)` with `F` the filter `exp(t n.J/2)` on `party`.
pub fn filtered_state(sigma: &DensityMatrix, party: Party, n: &[f64], t: f64) -> Result<DensityMatrix> {
    let basis = generator_basis(sigma.party_dim(party))?;
    let gen_eig = hermitian_eig(&basis.combine(n)?)?;
    let f_local = spectral_map(&gen_eig, |x| (0.5 * t * x).exp());
    let f = lift(&f_local, sigma.dims(), party);
    let m = &(&f * sigma.matrix()) * &f;
    let tr = m.trace().re;
    Ok(DensityMatrix::new_unchecked(m.scale(1.0 / tr).hermitian_part(), sigma.dims()))
}

/// Evaluates the relative entropy along a local-filtering curve through
/// `sigma` and compares its slope at `t = 0` with the closed form.
pub fn filter_perturbation_scan(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    party: Party,
    n: &[f64],
    t_grid: &[f64],
) -> Result<FilterScan> {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::input(format!("filter direction has norm {norm}, expected 1")));
    }
    let report = condition_report(rho, sigma, party, CONDITION_TOL)?;
    let predicted: f64 = n
        .iter()
        .enumerate()
        .map(|(a, na)| na * (report.s[a] - report.r[a] - report.g_vec[a]))
        .sum();

    let along = |t: f64| -> Result<f64> {
        let v = relative_entropy(rho, &filtered_state(sigma, party, n, t)?)?;
        if v.infinite {
            return Err(Error::Support(format!("supp rho leaves supp sigma'(t) at t = {t}")));
        }
        Ok(v.nats)
    };
    let values = t_grid.par_iter().map(|&t| along(t)).collect::<Result<Vec<f64>>>()?;
    let derivative = (along(SCAN_STEP)? - along(-SCAN_STEP)?) / (2.0 * SCAN_STEP);
    Ok(FilterScan {
        party,
        direction: n.to_vec(),
        t: t_grid.to_vec(),
        values,
        derivative,
        predicted,
    })
}

/// Stationarity residual of the Bures-type fidelity functional under local
/// filtering along `n`:
/// `(n.s_X) Tr(sqrt(sigma) rho sqrt(sigma)) - sum_ij ((l_i+l_j)/2) N_ij {rho, sqrt sigma}_ji / (sqrt l_i + sqrt l_j)`
/// where the resolvent integral has been evaluated in closed form.
pub fn bures_residual(rho: &DensityMatrix, sigma: &DensityMatrix, party: Party, n: &[f64]) -> Result<f64> {
    rho.require_same_dims(sigma)?;
    let eig = sigma.eig()?;
    let min = eig.min_value();
    if min <= 1e-12 {
        return Err(Error::Singular { min_eigenvalue: min });
    }
    let basis = generator_basis(sigma.party_dim(party))?;
    let s = bloch_vector(&sigma.reduced(party), &basis)?;
    let n_dot_s: f64 = n.iter().zip(&s).map(|(a, b)| a * b).sum();
    let sqrt_sigma = spectral_map(&eig, f64::sqrt);
    let fidelity_term = (&(&sqrt_sigma * rho.matrix()) * &sqrt_sigma).trace().re;

    let big_n = eig.to_eigenbasis(&lift(&basis.combine(n)?, rho.dims(), party));
    let anti = eig.to_eigenbasis(&rho.matrix().anticommutator(&sqrt_sigma));
    let roots: Vec<f64> = eig.values.iter().map(|x| x.sqrt()).collect();
    let mut rhs = C64::new(0.0, 0.0);
    for i in 0..eig.dim() {
        for j in 0..eig.dim() {
            let w = 0.5 * (eig.values[i] + eig.values[j]) / (roots[i] + roots[j]);
            rhs += big_n[(i, j)] * anti[(j, i)] * w;
        }
    }
    Ok(n_dot_s * fidelity_term - rhs.re)
}
