//! Monotonicity probes, randomized falsification, and the two constructive
//! families: the order-4 counterexample `sI - I_n ⊗ I_n` (a nonsingular
//! M-tensor that is not monotone) and the rank-one Kronecker family, which
//! is monotone by an inequality chain that this module replays numerically.
//!
//! Monotonicity (`A x^{m-1} ≥ 0` implies `x ≥ 0`, even order only) has no
//! general decision procedure here; the contract is three-valued: refuted by
//! a witness, consistent with the probes and sampling, or proven for the
//! rank-one family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{
    classify_m, is_z_tensor, z_split, ClassifyError, MCategory, Verdict,
};
use crate::scalar::Scalar;
use crate::spectral::{spectral_radius, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::tensor::{kron_identity, kron_rank_one, DiagonalTensor, SparseTensor, TensorError};


#[derive(Error, Debug)]
pub enum MonotoneError {
    #[error("monotonicity probes require even order, got {0}")]
    OddOrder(usize),
    #[error("not a Z-tensor")]
    NotZTensor,
    #[error("parameter out of range: {0}")]
    ParameterDomain(String),
    #[error("witness-check precondition violated: A x^{{m-1}} has a negative entry")]
    PreconditionViolated,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A vector refuting monotonicity: `x` has a negative entry while the
/// re-evaluated residual `A x^{m-1}` is nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneWitness<T: Scalar> {
    pub x: Vec<T>,
    pub residual: Vec<T>,
    /// Where the search found it: a structured candidate or a random trial.
    pub source: String,
}

// Sign tests are exact: tolerating slightly negative residuals would accept
// false witnesses on monotone tensors whose residuals pass through zero
// (odd powers of a barely negative entry).
fn is_witness<T: Scalar>(x: &[T], residual: &[T]) -> bool {
    residual.iter().all(|&r| r >= T::zero()) && x.iter().any(|&v| v < T::zero())
}

/// Diagnostic report from the necessary-condition probes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneProbeReport<T: Scalar> {
    pub order: usize,
    pub dim: usize,
    pub nnz: usize,
    /// Basis-vector probes: `(A e_i^{m-1})_i` is the i-th diagonal entry,
    /// which must be positive for a monotone Z-tensor.
    pub diagonal: Vec<T>,
    pub all_diagonal_positive: bool,
    /// All-ones probe: row sums; some row must be strictly dominant.
    pub row_sums: Vec<T>,
    pub dominant_row: Option<usize>,
    /// A monotone Z-tensor of even order must classify nonsingular-M.
    pub classification: Verdict<T>,
    pub probes_pass: bool,
    pub witness: Option<MonotoneWitness<T>>,
}

impl<T: Scalar> MonotoneProbeReport<T> {
    /// True when some necessary condition failed, certifying the tensor is
    /// not monotone even without a witness vector.
    pub fn refuted_by_probe(&self) -> bool {
        !self.probes_pass
    }
}

/// Report accompanying the generated counterexample tensor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport<T: Scalar> {
    pub classification: Verdict<T>,
    /// The probe vector is a witness iff `delta^2 <= (n-1)/(s-1)`.
    pub delta_bound: T,
    pub within_bound: bool,
    pub residual_closed_form: Vec<T>,
    pub residual: Vec<T>,
    pub witness: Option<MonotoneWitness<T>>,
}

/// Builds `A = sI - I_n ⊗ I_n` (order 4) together with the probe vector
/// `x = (1,…,1,-delta)`. For `s > n` the tensor is a nonsingular M-tensor,
/// yet the probe refutes monotonicity whenever `delta^2 ≤ (n-1)/(s-1)`:
/// `A x^3 = s x^{[3]} - (x^T x) x` componentwise.
pub fn counterexample<T: Scalar>(
    n: usize,
    s: T,
    delta: T,
) -> Result<(SparseTensor<T>, Vec<T>, CounterexampleReport<T>), MonotoneError> {
    if n < 2 {
        return Err(MonotoneError::ParameterDomain(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    let nf = T::from_usize(n).unwrap();
    if s <= nf {
        return Err(MonotoneError::ParameterDomain(format!(
            "s must exceed n, got s = {s}"
        )));
    }
    if delta <= T::zero() || delta >= T::one() {
        return Err(MonotoneError::ParameterDomain(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let j = kron_identity::<T>(n)?;
    let a = DiagonalTensor::constant(4, n, s)?
        .to_sparse()
        .try_sum(&j.scaled(-T::one()))?;
    let mut x = vec![T::one(); n];
    x[n - 1] = -delta;

    // closed form: first n-1 components s - n + 1 - delta^2, last
    // (n - 1 + (1 - s) delta^2) * delta
    let body = s - nf + T::one() - delta * delta;
    let tail = (nf - T::one() + (T::one() - s) * delta * delta) * delta;
    let mut residual_closed_form = vec![body; n];
    residual_closed_form[n - 1] = tail;

    let residual = a.apply(&x)?;
    let classification = classify_m(&a, T::from_f64_lossy(DEFAULT_TOL))?;
    let delta_bound = ((nf - T::one()) / (s - T::one())).sqrt();
    let within_bound = delta * delta <= (nf - T::one()) / (s - T::one());
    let witness = if is_witness(&x, &residual) {
        Some(MonotoneWitness {
            x: x.clone(),
            residual: residual.clone(),
            source: "structured probe (1,…,1,-delta)".into(),
        })
    } else {
        None
    };
    let report = CounterexampleReport {
        classification,
        delta_bound,
        within_bound,
        residual_closed_form,
        residual,
        witness,
    };
    Ok((a, x, report))
}

/// Builds `A = sI - B` with `B` the order-`2k` rank-one Kronecker tensor of
/// `a` and `b`. Requires `s > (bᵀa)^{2k-1}`, which makes `A` a nonsingular
/// M-tensor and, by the replayed inequality chain, monotone.
pub fn monotone_family<T: Scalar>(
    a: &[T],
    b: &[T],
    k: usize,
    s: T,
) -> Result<SparseTensor<T>, MonotoneError> {
    let tensor_b = kron_rank_one(a, b, k)?;
    let bta = b.iter().zip(a).map(|(&bi, &ai)| bi * ai).sum::<T>();
    let rho = bta.powi(2 * k as i32 - 1);
    if s <= rho {
        return Err(MonotoneError::ParameterDomain(format!(
            "s must exceed (b^T a)^(2k-1) = {rho}, got {s}"
        )));
    }
    let n = a.len();
    Ok(DiagonalTensor::constant(2 * k, n, s)?
        .to_sparse()
        .try_sum(&tensor_b.scaled(-T::one()))?)
}

/// Numerically replays the monotonicity proof chain for the rank-one family
/// at a vector `x` with `A x^{2k-1} ≥ 0`:
///
/// 1. `s^{1/(2k-1)} x_i ≥ a_i (bᵀx)` componentwise,
/// 2. summing against `b`: `s^{1/(2k-1)} (bᵀx) ≥ (bᵀa)(bᵀx)`,
/// 3. since `s^{1/(2k-1)} > bᵀa`, `bᵀx ≥ 0`, whence `x ≥ 0`.
///
/// Returns whether every step held (it must, for valid inputs).
pub fn check_monotone_witness_family<T: Scalar>(
    a: &[T],
    b: &[T],
    k: usize,
    s: T,
    x: &[T],
) -> Result<bool, MonotoneError> {
    let tensor = monotone_family(a, b, k, s)?;
    let tol = T::from_f64_lossy(1e-9);
    let residual = tensor.apply(x)?;
    if residual.iter().any(|&r| r < -tol) {
        return Err(MonotoneError::PreconditionViolated);
    }
    let root = T::from_usize(2 * k - 1).unwrap();
    let s_root = s.powf(T::one() / root);
    let btx = b.iter().zip(x).map(|(&bi, &xi)| bi * xi).sum::<T>();
    let bta = b.iter().zip(a).map(|(&bi, &ai)| bi * ai).sum::<T>();

    let step1 = x
        .iter()
        .zip(a)
        .all(|(&xi, &ai)| s_root * xi >= ai * btx - tol);
    let step2 = s_root * btx >= bta * btx - tol;
    let step3 = s_root > bta && btx >= -tol;
    let conclusion = x
        .iter()
        .zip(a)
        .all(|(&xi, &ai)| xi >= ai * btx / s_root - tol)
        && x.iter().all(|&xi| xi >= -tol);
    Ok(step1 && step2 && step3 && conclusion)
}

/// Randomized search for a monotonicity violation: structured sign-flip
/// probes, sign patterns over the Perron vector of the nonnegative part (for
/// Z-tensors), then seeded uniform trials. Odd-order tensors yield a witness
/// as soon as any probe has a nonnegative residual, since negating such a
/// vector leaves the residual unchanged. Deterministic for a given seed
/// (ChaCha8 generator); returns the first witness in candidate order.
pub fn falsify_monotone<T: Scalar>(
    t: &SparseTensor<T>,
    trials: usize,
    seed: u64,
) -> Option<MonotoneWitness<T>> {
    let n = t.dim();
    let odd_order = t.order() % 2 == 1;
    let check = |x: Vec<T>, source: String| -> Option<MonotoneWitness<T>> {
        let residual = t.apply(&x).ok()?;
        if is_witness(&x, &residual) {
            return Some(MonotoneWitness { x, residual, source });
        }
        if odd_order {
            // residual is invariant under x -> -x when m-1 is even
            let flipped: Vec<T> = x.iter().map(|&v| -v).collect();
            if is_witness(&flipped, &residual) {
                return Some(MonotoneWitness {
                    x: flipped,
                    residual,
                    source: format!("{source} (negated, odd order)"),
                });
            }
        }
        None
    };

    if odd_order {
        // for the common case a nonnegative probe already qualifies
        if let Some(w) = check(vec![T::one(); n], "all-ones probe".into()) {
            return Some(w);
        }
    }

    // structured probes: all-ones with one entry flipped to -delta, over a
    // geometric delta grid
    for pos in 0..n {
        for step in 1..=64u32 {
            let delta = T::from_f64_lossy(0.5f64.powf(f64::from(step) / 8.0));
            let mut x = vec![T::one(); n];
            x[pos] = -delta;
            if let Some(w) = check(x, format!("sign-flip probe at {} (delta {step}/64)", pos + 1)) {
                return Some(w);
            }
        }
    }

    // sign patterns over the Perron candidate of the z-split
    if n <= 10 && is_z_tensor(t) {
        if let Ok(split) = z_split(t) {
            if let Ok(sr) = spectral_radius(
                &split.b,
                T::from_f64_lossy(DEFAULT_TOL),
                DEFAULT_MAX_ITER,
            ) {
                let v = sr.eigvec;
                for mask in 1..(1u32 << n) {
                    let x: Vec<T> = v
                        .iter()
                        .enumerate()
                        .map(|(i, &vi)| if mask & (1 << i) != 0 { -vi } else { vi })
                        .collect();
                    if let Some(w) = check(x, format!("Perron sign pattern {mask:#b}")) {
                        return Some(w);
                    }
                }
            }
        }
    }

    // seeded random trials, components uniform on [-1, 1]
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let x: Vec<T> = (0..n)
            .map(|_| T::from_f64_lossy(rng.gen_range(-1.0..=1.0)))
            .collect();
        if let Some(w) = check(x, format!("random trial {trial}")) {
            return Some(w);
        }
    }
    None
}

/// Runs the necessary-condition probes for monotonicity of an even-order
/// Z-tensor. A failed probe certifies non-monotonicity; passing probes are
/// consistent with monotonicity but never sufficient.
pub fn monotone_probes<T: Scalar>(
    t: &SparseTensor<T>,
    tol: T,
) -> Result<MonotoneProbeReport<T>, MonotoneError> {
    if t.order() % 2 == 1 {
        return Err(MonotoneError::OddOrder(t.order()));
    }
    if !is_z_tensor(t) {
        return Err(MonotoneError::NotZTensor);
    }
    let diagonal = t.diagonal();
    let all_diagonal_positive = diagonal.iter().all(|&d| d > T::zero());
    let ones = vec![T::one(); t.dim()];
    let row_sums = t.apply(&ones)?;
    let dominant_row = row_sums.iter().position(|&r| r > T::zero());
    let classification = classify_m(t, tol)?;
    let probes_pass = all_diagonal_positive
        && dominant_row.is_some()
        && classification.category == MCategory::NonsingularM;
    Ok(MonotoneProbeReport {
        order: t.order(),
        dim: t.dim(),
        nnz: t.nnz(),
        diagonal,
        all_diagonal_positive,
        row_sums,
        dominant_row,
        classification,
        probes_pass,
        witness: None,
    })
}
