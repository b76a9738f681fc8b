//! Classification of Z-tensors into M / nonsingular-M categories with a
//! certified margin, constructive semi-positivity and semi-nonnegativity
//! certificates, diagonal-dominance scalings, the two splitting forms, and
//! H-tensor classification through the comparison tensor.
//!
//! The workhorse identity: a Z-tensor written as `sI - B` with `B ≥ 0` is a
//! nonsingular M-tensor exactly when `s > ρ(B)`, and that margin is
//! independent of the chosen split. Certificates are strictly positive
//! vectors `x` whose residual `A x^{m-1}` is verified entrywise by direct
//! evaluation.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::spectral::{perron_vector, spectral_radius, SpectralError, DEFAULT_MAX_ITER};
use crate::structure::{weakly_irreducible_partition, PartitionReport};
use crate::tensor::{is_diagonal_tuple, DiagonalTensor, SparseTensor, TensorError};

/// Cap on scale halvings when gluing block certificates.
const MAX_HALVINGS: usize = 200;

#[derive(Error, Debug)]
pub enum ClassifyError {
    #[error("not a Z-tensor: a positive off-diagonal entry exists")]
    NotZTensor,
    #[error("tensor is not a nonsingular M-tensor (category {category})")]
    NotNonsingularM { category: MCategory },
    #[error("diagonal entry {index} is not positive")]
    NonPositiveDiagonal { index: usize },
    #[error("certificate construction failed: {reason}")]
    CertificateConstruction { reason: String },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Z-tensor split `A = sI - B` with `B ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZSplit<T: Scalar> {
    pub s: T,
    pub b: SparseTensor<T>,
}

impl<T: Scalar> ZSplit<T> {
    /// Rebuilds `sI - B`.
    pub fn reconstruct(&self) -> SparseTensor<T> {
        DiagonalTensor::constant(self.b.order(), self.b.dim(), self.s)
            .expect("valid shape")
            .to_sparse()
            .try_sum(&self.b.scaled(-T::one()))
            .expect("shapes match")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MCategory {
    #[serde(rename = "nonsingular-M")]
    NonsingularM,
    #[serde(rename = "boundary-M")]
    BoundaryM,
    #[serde(rename = "M")]
    M,
    #[serde(rename = "not-M")]
    NotM,
}

impl MCategory {
    /// M-tensor or better, within tolerance.
    pub fn is_m(self) -> bool {
        !matches!(self, MCategory::NotM)
    }
}

impl std::fmt::Display for MCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MCategory::NonsingularM => "nonsingular-M",
            MCategory::BoundaryM => "boundary-M",
            MCategory::M => "M",
            MCategory::NotM => "not-M",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HCategory {
    #[serde(rename = "nonsingular-H")]
    NonsingularH,
    #[serde(rename = "boundary-H")]
    BoundaryH,
    #[serde(rename = "H")]
    H,
    #[serde(rename = "not-H")]
    NotH,
}

impl std::fmt::Display for HCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HCategory::NonsingularH => "nonsingular-H",
            HCategory::BoundaryH => "boundary-H",
            HCategory::H => "H",
            HCategory::NotH => "not-H",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    #[serde(rename = "semi-positive")]
    SemiPositive,
    #[serde(rename = "semi-nonnegative")]
    SemiNonnegative,
}

/// Constructive proof object: a strictly positive `x` together with the
/// directly evaluated residual `A x^{m-1}` and its minimum entry. `epsilons`
/// records the per-block scales chosen while gluing a partitioned
/// construction (the first placed block has scale 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate<T: Scalar> {
    pub x: Vec<T>,
    pub residual: Vec<T>,
    pub margin: T,
    pub kind: CertificateKind,
    pub epsilons: Vec<T>,
    pub halvings: usize,
}

/// Classification outcome. `margin = s - ρ(B)` for the canonical split;
/// `rho_bracket` is the certified bracket for `ρ(B)`. When the bracket is
/// too wide to decide, `decided` is false and `category` is the conservative
/// call.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict<T: Scalar> {
    pub is_z: bool,
    pub category: MCategory,
    pub margin: T,
    pub rho_bracket: (T, T),
    pub s: T,
    pub decided: bool,
    pub certificate: Option<Certificate<T>>,
}

/// H-classification through the comparison tensor. `scaling` is the positive
/// vector establishing quasi-strict diagonal dominance when nonsingular.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HVerdict<T: Scalar> {
    pub category: HCategory,
    pub scaling: Option<Vec<T>>,
    pub comparison: Verdict<T>,
}

/// Outcome of the semi-nonnegativity search: the sufficient cases either
/// produce a certificate or decline with a reason. "Unknown" is an answer,
/// not a failure; no general decision procedure exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SemiNonnegativeOutcome<T: Scalar> {
    Certified(Certificate<T>),
    Unknown { reason: String },
}

impl<T: Scalar> SemiNonnegativeOutcome<T> {
    pub fn certificate(&self) -> Option<&Certificate<T>> {
        match self {
            SemiNonnegativeOutcome::Certified(c) => Some(c),
            SemiNonnegativeOutcome::Unknown { .. } => None,
        }
    }
}

/// True iff every stored off-diagonal entry is non-positive.
pub fn is_z_tensor<T: Scalar>(a: &SparseTensor<T>) -> bool {
    a.iter()
        .all(|(idx, v)| is_diagonal_tuple(idx) || v <= T::zero())
}

fn require_z<T: Scalar>(a: &SparseTensor<T>) -> Result<(), ClassifyError> {
    if is_z_tensor(a) {
        Ok(())
    } else {
        Err(ClassifyError::NotZTensor)
    }
}

/// Canonical split `A = sI - B` with `s = max(1, max diagonal entry)`.
/// Any `s` large enough to keep `B` nonnegative is valid and the
/// classification margin does not depend on the choice.
pub fn z_split<T: Scalar>(a: &SparseTensor<T>) -> Result<ZSplit<T>, ClassifyError> {
    require_z(a)?;
    let s = a
        .diagonal()
        .iter()
        .fold(T::one(), |acc, &d| acc.max(d));
    let b = DiagonalTensor::constant(a.order(), a.dim(), s)
        .expect("valid shape")
        .to_sparse()
        .try_sum(&a.scaled(-T::one()))?;
    debug_assert!(b.is_nonnegative());
    Ok(ZSplit { s, b })
}

fn relative_band<T: Scalar>(tol: T, s: T) -> T {
    tol * T::one().max(s.abs())
}

/// Margin-based M-classification without certificate construction.
fn classify_core<T: Scalar>(
    a: &SparseTensor<T>,
    tol: T,
    max_iter: usize,
) -> Result<Verdict<T>, ClassifyError> {
    let split = z_split(a)?;
    let sr = spectral_radius(&split.b, tol, max_iter)?;
    let band = relative_band(tol, split.s);
    let margin = split.s - sr.rho;
    let margin_worst = split.s - sr.upper;
    let margin_best = split.s - sr.lower;
    let (category, decided) = if margin_worst > band {
        (MCategory::NonsingularM, true)
    } else if margin_best < -band {
        (MCategory::NotM, true)
    } else if sr.converged {
        (MCategory::BoundaryM, true)
    } else if margin_worst >= -band {
        // bracket certifies at least an M-tensor but cannot separate
        // nonsingular from boundary
        (MCategory::M, false)
    } else {
        (MCategory::BoundaryM, false)
    };
    Ok(Verdict {
        is_z: true,
        category,
        margin,
        rho_bracket: (sr.lower, sr.upper),
        s: split.s,
        decided,
        certificate: None,
    })
}

/// M-classification with margin, certified bracket, and (for nonsingular
/// verdicts) an attached semi-positivity certificate.
pub fn classify_m<T: Scalar>(a: &SparseTensor<T>, tol: T) -> Result<Verdict<T>, ClassifyError> {
    classify_m_with(a, tol, DEFAULT_MAX_ITER)
}

/// `classify_m` with an explicit per-block iteration budget.
pub fn classify_m_with<T: Scalar>(
    a: &SparseTensor<T>,
    tol: T,
    max_iter: usize,
) -> Result<Verdict<T>, ClassifyError> {
    let mut verdict = classify_core(a, tol, max_iter)?;
    if verdict.category == MCategory::NonsingularM && verdict.decided {
        verdict.certificate = semi_positive_certificate(a, tol).ok();
    }
    Ok(verdict)
}

/// Positions of `values` scattered onto `support` within dimension `dim`.
fn scatter<T: Scalar>(dim: usize, support: &[usize], values: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); dim];
    for (&g, &v) in support.iter().zip(values) {
        out[g] = v;
    }
    out
}

struct GluedVector<T: Scalar> {
    support: Vec<usize>,
    values: Vec<T>,
    epsilons: Vec<T>,
    halvings: usize,
}

/// Builds a strictly positive vector with positive residual for a
/// nonsingular M-tensor, block by block: per weakly irreducible block the
/// Perron vector of the block's nonnegative part, glued in partition order
/// with geometrically shrinking scales so already-placed residuals keep at
/// least half their margin. Blocks whose leading subtensor is weakly
/// reducible are built recursively.
fn build_positive_vector<T: Scalar>(
    a: &SparseTensor<T>,
    tol: T,
) -> Result<GluedVector<T>, ClassifyError> {
    let split = z_split(a)?;
    let partition = weakly_irreducible_partition(&split.b);
    if partition.is_single_block() {
        let pr = perron_vector(&split.b, tol, DEFAULT_MAX_ITER)?;
        return Ok(GluedVector {
            support: (0..a.dim()).collect(),
            values: pr.eigvec,
            epsilons: vec![T::one()],
            halvings: 0,
        });
    }

    let mut support: Vec<usize> = Vec::new();
    let mut values: Vec<T> = Vec::new();
    let mut residual: Vec<T> = Vec::new();
    let mut epsilons: Vec<T> = Vec::new();
    let mut halvings = 0usize;
    let mut prev_scale = T::one();
    let half = T::from_f64_lossy(0.5);

    for (bi, block) in partition.blocks.iter().enumerate() {
        let sub_b = split.b.leading_subtensor(block);
        let block_vec: Vec<T> = if partition.block_weakly_irreducible[bi] {
            perron_vector(&sub_b, tol, DEFAULT_MAX_ITER)?.eigvec
        } else {
            let sub_a = a.leading_subtensor(block);
            let nested = build_positive_vector(&sub_a, tol)?;
            halvings += nested.halvings;
            nested.values
        };

        if support.is_empty() {
            support = block.clone();
            values = block_vec;
            let sub_a = a.leading_subtensor(&support);
            residual = sub_a.apply(&values)?;
            if residual.iter().any(|&r| r <= T::zero()) {
                return Err(ClassifyError::CertificateConstruction {
                    reason: "leading block residual is not strictly positive".into(),
                });
            }
            epsilons.push(T::one());
            continue;
        }

        // merge the new block in, then shrink its scale until the residuals
        // of the already-placed rows keep at least half their margin
        let mut merged_support: Vec<usize> =
            support.iter().chain(block.iter()).copied().collect();
        merged_support.sort_unstable();
        let prefix = a.leading_subtensor(&merged_support);
        let old_pos: Vec<usize> = support
            .iter()
            .map(|g| merged_support.binary_search(g).unwrap())
            .collect();
        let new_pos: Vec<usize> = block
            .iter()
            .map(|g| merged_support.binary_search(g).unwrap())
            .collect();

        let mut eps = prev_scale * half;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mut z = vec![T::zero(); merged_support.len()];
            for (&p, &v) in old_pos.iter().zip(&values) {
                z[p] = v;
            }
            for (&p, &v) in new_pos.iter().zip(&block_vec) {
                z[p] = eps * v;
            }
            let r = prefix.apply(&z)?;
            let placed_ok = old_pos
                .iter()
                .zip(&residual)
                .all(|(&p, &pre)| r[p] > pre * half);
            let fresh_ok = new_pos.iter().all(|&p| r[p] > T::zero());
            if placed_ok && fresh_ok {
                accepted = Some((z, r));
                break;
            }
            eps = eps * half;
            halvings += 1;
        }
        let (z, r) = accepted.ok_or_else(|| ClassifyError::CertificateConstruction {
            reason: format!("scale halving cap of {MAX_HALVINGS} exceeded; margin is too thin"),
        })?;
        support = merged_support;
        values = z;
        residual = r;
        epsilons.push(eps);
        prev_scale = eps;
    }

    Ok(GluedVector {
        support,
        values,
        epsilons,
        halvings,
    })
}

/// Semi-positivity certificate for a nonsingular M-tensor: a strictly
/// positive `x` with `A x^{m-1} > 0` entrywise, verified by evaluation.
/// The all-ones probe is tried first (it succeeds exactly on strictly
/// diagonally dominant input); otherwise the blockwise Perron construction
/// is used. Fails if the classification is not nonsingular-M.
pub fn semi_positive_certificate<T: Scalar>(
    a: &SparseTensor<T>,
    tol: T,
) -> Result<Certificate<T>, ClassifyError> {
    let verdict = classify_core(a, tol, DEFAULT_MAX_ITER)?;
    if verdict.category != MCategory::NonsingularM || !verdict.decided {
        return Err(ClassifyError::NotNonsingularM {
            category: verdict.category,
        });
    }
    let ones = vec![T::one(); a.dim()];
    let residual = a.apply(&ones)?;
    if residual.iter().all(|&r| r > T::zero()) {
        let margin = residual.iter().copied().fold(T::infinity(), T::min);
        return Ok(Certificate {
            x: ones,
            residual,
            margin,
            kind: CertificateKind::SemiPositive,
            epsilons: Vec::new(),
            halvings: 0,
        });
    }
    let glued = build_positive_vector(a, tol)?;
    let x = scatter(a.dim(), &glued.support, &glued.values);
    if x.iter().any(|&v| v <= T::zero()) {
        return Err(ClassifyError::CertificateConstruction {
            reason: "constructed vector is not strictly positive".into(),
        });
    }
    let residual = a.apply(&x)?;
    let margin = residual.iter().copied().fold(T::infinity(), T::min);
    if margin <= T::zero() {
        return Err(ClassifyError::CertificateConstruction {
            reason: "constructed residual is not strictly positive".into(),
        });
    }
    Ok(Certificate {
        x,
        residual,
        margin,
        kind: CertificateKind::SemiPositive,
        epsilons: glued.epsilons,
        halvings: glued.halvings,
    })
}

/// Whether a strictly positive `x` with `A x^{m-1} > 0` exists, by running
/// the certificate construction.
pub fn is_semi_positive<T: Scalar>(a: &SparseTensor<T>, tol: T) -> Result<bool, ClassifyError> {
    match semi_positive_certificate(a, tol) {
        Ok(_) => Ok(true),
        Err(ClassifyError::NotNonsingularM { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Positive scaling `d` making `A D^{m-1}` strictly diagonally dominant;
/// this is exactly the semi-positivity certificate vector.
pub fn dominance_scaling<T: Scalar>(a: &SparseTensor<T>, tol: T) -> Result<Vec<T>, ClassifyError> {
    let cert = semi_positive_certificate(a, tol)?;
    let scaled = a.scale_modes(&cert.x)?;
    if !is_strictly_diagonally_dominant(&scaled) {
        return Err(ClassifyError::CertificateConstruction {
            reason: "certificate vector does not scale to strict dominance".into(),
        });
    }
    Ok(cert.x)
}

fn dominance_rows<T: Scalar>(a: &SparseTensor<T>) -> Vec<(T, T)> {
    let mut rows = vec![(T::zero(), T::zero()); a.dim()];
    for (idx, v) in a.iter() {
        if is_diagonal_tuple(idx) {
            rows[idx[0]].0 = v.abs();
        } else {
            rows[idx[0]].1 += v.abs();
        }
    }
    rows
}

/// Rowwise `|a_{i i ⋯ i}| > Σ |a_{i i_2 ⋯ i_m}|` over off-diagonal tuples.
pub fn is_strictly_diagonally_dominant<T: Scalar>(a: &SparseTensor<T>) -> bool {
    dominance_rows(a).iter().all(|&(d, off)| d > off)
}

/// Weak version of the rowwise dominance comparison.
pub fn is_diagonally_dominant<T: Scalar>(a: &SparseTensor<T>) -> bool {
    dominance_rows(a).iter().all(|&(d, off)| d >= off)
}

/// Splits `A = D C` with `D` the diagonal of `A` and `C = D^{-1} A`
/// (unit diagonal). Requires a strictly positive diagonal.
pub fn split_dc<T: Scalar>(
    a: &SparseTensor<T>,
) -> Result<(DiagonalTensor<T>, SparseTensor<T>), ClassifyError> {
    require_z(a)?;
    let diag = a.diagonal();
    if let Some(index) = diag.iter().position(|&d| d <= T::zero()) {
        return Err(ClassifyError::NonPositiveDiagonal { index });
    }
    let d = DiagonalTensor::from_diag(a.order(), diag)?;
    let c = d.inverse()?.compose(a)?;
    Ok((d, c))
}

/// Splits `A = D - E` with `D` the diagonal of `A` and `E = D - A ≥ 0`.
/// Requires a strictly positive diagonal.
pub fn split_de<T: Scalar>(
    a: &SparseTensor<T>,
) -> Result<(DiagonalTensor<T>, SparseTensor<T>), ClassifyError> {
    require_z(a)?;
    let diag = a.diagonal();
    if let Some(index) = diag.iter().position(|&d| d <= T::zero()) {
        return Err(ClassifyError::NonPositiveDiagonal { index });
    }
    let d = DiagonalTensor::from_diag(a.order(), diag)?;
    let e = d.to_sparse().try_sum(&a.scaled(-T::one()))?;
    debug_assert!(e.is_nonnegative());
    Ok((d, e))
}

/// Block spectral radius, recursing when a leading subtensor is itself
/// weakly reducible.
fn block_rho<T: Scalar>(
    b: &SparseTensor<T>,
    block: &[usize],
    tol: T,
) -> Result<T, ClassifyError> {
    let sub = b.leading_subtensor(block);
    Ok(spectral_radius(&sub, tol, DEFAULT_MAX_ITER)?.rho)
}

/// Searches for a strictly positive `x` with `A x^{m-1} ≥ 0`, trying the
/// sufficient conditions in turn:
///
/// 1. diagonally dominant Z-tensor with nonnegative diagonal (`x = e`);
/// 2. weakly irreducible M-tensor (Perron vector of the nonnegative part);
/// 3. weakly reducible boundary case: blocks at the critical radius must be
///    self-contained, strict blocks are glued around them with shrinking
///    scales. Symmetric M-tensors always land here since their partition has
///    no cross-block entries at all.
///
/// Returns `Unknown` when no case applies.
pub fn semi_nonnegative_certificate<T: Scalar>(
    a: &SparseTensor<T>,
    tol: T,
) -> Result<SemiNonnegativeOutcome<T>, ClassifyError> {
    require_z(a)?;
    let n = a.dim();
    let band_zero = relative_band(tol, T::one());

    // case 1: x = e certifies a diagonally dominant Z-tensor with
    // nonnegative diagonal
    if is_diagonally_dominant(a) && a.diagonal().iter().all(|&d| d >= T::zero()) {
        let ones = vec![T::one(); n];
        let residual = a.apply(&ones)?;
        let margin = residual.iter().copied().fold(T::infinity(), T::min);
        let kind = if margin > band_zero {
            CertificateKind::SemiPositive
        } else {
            CertificateKind::SemiNonnegative
        };
        return Ok(SemiNonnegativeOutcome::Certified(Certificate {
            x: ones,
            residual,
            margin,
            kind,
            epsilons: Vec::new(),
            halvings: 0,
        }));
    }

    let verdict = classify_core(a, tol, DEFAULT_MAX_ITER)?;
    if verdict.category == MCategory::NotM {
        return Ok(SemiNonnegativeOutcome::Unknown {
            reason: "not an M-tensor, hence not semi-nonnegative".into(),
        });
    }
    if !verdict.decided {
        return Ok(SemiNonnegativeOutcome::Unknown {
            reason: "spectral bracket too wide to decide".into(),
        });
    }
    let split = z_split(a)?;
    let band = relative_band(tol, split.s);
    let partition = weakly_irreducible_partition(&split.b);

    // case 2: weakly irreducible M-tensor
    if partition.is_single_block() && partition.block_weakly_irreducible[0] {
        let pr = perron_vector(&split.b, tol, DEFAULT_MAX_ITER)?;
        let residual = a.apply(&pr.eigvec)?;
        let margin = residual.iter().copied().fold(T::infinity(), T::min);
        if margin < -band {
            return Err(ClassifyError::CertificateConstruction {
                reason: "Perron residual fell below the tolerance band".into(),
            });
        }
        let kind = if margin > band {
            CertificateKind::SemiPositive
        } else {
            CertificateKind::SemiNonnegative
        };
        return Ok(SemiNonnegativeOutcome::Certified(Certificate {
            x: pr.eigvec,
            residual,
            margin,
            kind,
            epsilons: Vec::new(),
            halvings: 0,
        }));
    }

    // nonsingular and weakly reducible: the semi-positive construction
    // already yields a nonnegative (indeed positive) residual
    if verdict.category == MCategory::NonsingularM {
        return Ok(match semi_positive_certificate(a, tol) {
            Ok(c) => SemiNonnegativeOutcome::Certified(c),
            Err(ClassifyError::NotNonsingularM { .. }) | Err(ClassifyError::CertificateConstruction { .. }) => {
                SemiNonnegativeOutcome::Unknown {
                    reason: "construction failed near the margin".into(),
                }
            }
            Err(e) => return Err(e),
        });
    }

    // case 3: weakly reducible boundary M-tensor. Critical blocks must be
    // self-contained; strict blocks are placed first.
    semi_nonnegative_case3(a, &split, &partition, tol, band)
}

fn semi_nonnegative_case3<T: Scalar>(
    a: &SparseTensor<T>,
    split: &ZSplit<T>,
    partition: &PartitionReport,
    tol: T,
    band: T,
) -> Result<SemiNonnegativeOutcome<T>, ClassifyError> {
    let n = a.dim();
    let block_of = partition.block_of(n);
    let k = partition.k();
    let mut strict = Vec::new();
    let mut critical = Vec::new();
    for (bi, block) in partition.blocks.iter().enumerate() {
        let rho_t = block_rho(&split.b, block, tol)?;
        if rho_t < split.s - band {
            strict.push(bi);
        } else if (rho_t - split.s).abs() <= band {
            critical.push(bi);
        } else {
            return Ok(SemiNonnegativeOutcome::Unknown {
                reason: format!("block {bi} exceeds the splitting constant"),
            });
        }
    }
    // each critical block must reference only itself
    for &bi in &critical {
        let self_contained = split.b.iter().all(|(idx, _)| {
            block_of[idx[0]] != bi || idx.iter().all(|&j| block_of[j] == bi)
        });
        if !self_contained {
            return Ok(SemiNonnegativeOutcome::Unknown {
                reason: format!(
                    "critical block {bi} carries cross-block entries; no sufficient case applies"
                ),
            });
        }
        if !partition.block_weakly_irreducible[bi] {
            return Ok(SemiNonnegativeOutcome::Unknown {
                reason: format!("critical block {bi} is not weakly irreducible"),
            });
        }
    }

    // place strict blocks in partition order, then critical blocks;
    // critical rows are self-contained so their near-zero residuals never
    // degrade as later blocks arrive
    let order: Vec<usize> = strict.iter().chain(critical.iter()).copied().collect();
    debug_assert_eq!(order.len(), k);
    let is_critical = |bi: usize| critical.contains(&bi);

    let mut support: Vec<usize> = Vec::new();
    let mut values: Vec<T> = Vec::new();
    let mut residual: Vec<T> = Vec::new();
    let mut row_is_critical: Vec<bool> = Vec::new();
    let mut epsilons: Vec<T> = Vec::new();
    let mut halvings = 0usize;
    let mut prev_scale = T::one();
    let half = T::from_f64_lossy(0.5);

    for &bi in &order {
        let block = &partition.blocks[bi];
        let block_vec: Vec<T> = if is_critical(bi) {
            perron_vector(&split.b.leading_subtensor(block), tol, DEFAULT_MAX_ITER)?.eigvec
        } else if partition.block_weakly_irreducible[bi] {
            perron_vector(&split.b.leading_subtensor(block), tol, DEFAULT_MAX_ITER)?.eigvec
        } else {
            build_positive_vector(&a.leading_subtensor(block), tol)?.values
        };

        if support.is_empty() {
            support = block.clone();
            values = block_vec;
            residual = a.leading_subtensor(&support).apply(&values)?;
            row_is_critical = vec![is_critical(bi); support.len()];
            let floor = -band;
            let ok = if is_critical(bi) {
                residual.iter().all(|&r| r >= floor)
            } else {
                residual.iter().all(|&r| r > T::zero())
            };
            if !ok {
                return Ok(SemiNonnegativeOutcome::Unknown {
                    reason: "leading block residual misses its sign requirement".into(),
                });
            }
            epsilons.push(T::one());
            continue;
        }

        let mut merged_support: Vec<usize> =
            support.iter().chain(block.iter()).copied().collect();
        merged_support.sort_unstable();
        let prefix = a.leading_subtensor(&merged_support);
        let old_pos: Vec<usize> = support
            .iter()
            .map(|g| merged_support.binary_search(g).unwrap())
            .collect();
        let new_pos: Vec<usize> = block
            .iter()
            .map(|g| merged_support.binary_search(g).unwrap())
            .collect();

        let mut eps = prev_scale * half;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mut z = vec![T::zero(); merged_support.len()];
            for (&p, &v) in old_pos.iter().zip(&values) {
                z[p] = v;
            }
            for (&p, &v) in new_pos.iter().zip(&block_vec) {
                z[p] = eps * v;
            }
            let r = prefix.apply(&z)?;
            let placed_ok = old_pos.iter().enumerate().all(|(row, &p)| {
                if row_is_critical[row] {
                    r[p] >= -band
                } else {
                    r[p] > residual[row] * half
                }
            });
            let fresh_ok = if is_critical(bi) {
                new_pos.iter().all(|&p| r[p] >= -band)
            } else {
                new_pos.iter().all(|&p| r[p] > T::zero())
            };
            if placed_ok && fresh_ok {
                accepted = Some((z, r));
                break;
            }
            eps = eps * half;
            halvings += 1;
        }
        let Some((z, r)) = accepted else {
            return Ok(SemiNonnegativeOutcome::Unknown {
                reason: format!("scale halving cap of {MAX_HALVINGS} exceeded while gluing"),
            });
        };
        let mut merged_critical = vec![false; merged_support.len()];
        for (row, &p) in old_pos.iter().enumerate() {
            merged_critical[p] = row_is_critical[row];
        }
        for &p in &new_pos {
            merged_critical[p] = is_critical(bi);
        }
        support = merged_support;
        values = z;
        residual = r;
        row_is_critical = merged_critical;
        epsilons.push(eps);
        prev_scale = eps;
    }

    let x = scatter(n, &support, &values);
    let residual = a.apply(&x)?;
    let margin = residual.iter().copied().fold(T::infinity(), T::min);
    if x.iter().any(|&v| v <= T::zero()) || margin < -band {
        return Ok(SemiNonnegativeOutcome::Unknown {
            reason: "glued vector failed re-verification".into(),
        });
    }
    Ok(SemiNonnegativeOutcome::Certified(Certificate {
        x,
        residual,
        margin,
        kind: CertificateKind::SemiNonnegative,
        epsilons,
        halvings,
    }))
}

/// H-classification: classifies the comparison tensor and relabels. For a
/// nonsingular verdict the certificate vector doubles as the quasi-strict
/// dominance scaling of the original tensor.
pub fn classify_h<T: Scalar>(a: &SparseTensor<T>, tol: T) -> Result<HVerdict<T>, ClassifyError> {
    classify_h_with(a, tol, DEFAULT_MAX_ITER)
}

/// `classify_h` with an explicit per-block iteration budget.
pub fn classify_h_with<T: Scalar>(
    a: &SparseTensor<T>,
    tol: T,
    max_iter: usize,
) -> Result<HVerdict<T>, ClassifyError> {
    let comparison = classify_m_with(&a.comparison(), tol, max_iter)?;
    let category = match comparison.category {
        MCategory::NonsingularM => HCategory::NonsingularH,
        MCategory::BoundaryM => HCategory::BoundaryH,
        MCategory::M => HCategory::H,
        MCategory::NotM => HCategory::NotH,
    };
    let scaling = comparison.certificate.as_ref().map(|c| c.x.clone());
    if let Some(d) = &scaling {
        // |a_{i…i}| d_i^{m-1} > Σ |a_{i i_2…i_m}| d_{i_2}⋯d_{i_m} rowwise
        let scaled = a.scale_modes(d)?;
        if !is_strictly_diagonally_dominant(&scaled) {
            return Err(ClassifyError::CertificateConstruction {
                reason: "H-certificate does not satisfy quasi-strict dominance".into(),
            });
        }
    }
    Ok(HVerdict {
        category,
        scaling,
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{identity_tensor, kron_identity};

    fn t64(order: usize, dim: usize, entries: &[(&[usize], f64)]) -> SparseTensor<f64> {
        SparseTensor::from_entries(order, dim, entries.iter().map(|(k, v)| (k.to_vec(), *v)))
            .unwrap()
    }

    const TOL: f64 = 1e-10;

    /// sI - B for a nonnegative B.
    fn si_minus(s: f64, b: &SparseTensor<f64>) -> SparseTensor<f64> {
        DiagonalTensor::constant(b.order(), b.dim(), s)
            .unwrap()
            .to_sparse()
            .try_sum(&b.scaled(-1.0))
            .unwrap()
    }

    fn counterexample_b() -> SparseTensor<f64> {
        t64(
            4,
            2,
            &[(&[0, 0, 0, 0], 2.0), (&[0, 0, 1, 1], 1.0), (&[1, 1, 1, 1], 1.0)],
        )
    }

    fn all_ones(order: usize, dim: usize) -> SparseTensor<f64> {
        let mut entries = Vec::new();
        let mut idx = vec![0usize; order];
        'outer: loop {
            entries.push((idx.clone(), 1.0));
            let mut pos = order;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < dim {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
        SparseTensor::from_entries(order, dim, entries).unwrap()
    }

    #[test]
    fn z_tensor_detection() {
        let i = identity_tensor::<f64>(3, 2).unwrap().to_sparse();
        assert!(is_z_tensor(&i));
        let bad = t64(3, 2, &[(&[0, 1, 1], 0.5)]);
        assert!(!is_z_tensor(&bad));
        let a = si_minus(2.0, &kron_identity::<f64>(2).unwrap());
        assert!(is_z_tensor(&a));
    }

    #[test]
    fn z_split_examples() {
        let i = identity_tensor::<f64>(3, 2).unwrap().to_sparse();
        let split = z_split(&i).unwrap();
        assert_eq!(split.s, 1.0);
        assert_eq!(split.b.nnz(), 0);
        assert_eq!(split.reconstruct(), i);

        let a = t64(3, 2, &[(&[0, 0, 0], 3.0), (&[1, 1, 1], 5.0)]);
        let split = z_split(&a).unwrap();
        assert_eq!(split.s, 5.0);
        assert_eq!(split.b.get(&[0, 0, 0]), 2.0);
        assert_eq!(split.b.get(&[1, 1, 1]), 0.0);
        assert_eq!(split.reconstruct(), a);

        // the counterexample tensor: any valid split reconstructs the input
        let a = si_minus(2.0, &counterexample_b());
        let split = z_split(&a).unwrap();
        assert!(split.b.is_nonnegative());
        assert_eq!(split.reconstruct(), a);
    }

    #[test]
    fn margin_is_split_invariant() {
        // compare the canonical split against a deliberately larger s
        let a = si_minus(5.0, &kron_identity::<f64>(4).unwrap());
        let canonical = z_split(&a).unwrap();
        let rho_c = spectral_radius(&canonical.b, TOL, 10_000).unwrap().rho;
        let s_big = canonical.s + 3.0;
        let b_big = DiagonalTensor::constant(4, 4, s_big)
            .unwrap()
            .to_sparse()
            .try_sum(&a.scaled(-1.0))
            .unwrap();
        assert!(b_big.is_nonnegative());
        let rho_big = spectral_radius(&b_big, TOL, 10_000).unwrap().rho;
        assert!(((canonical.s - rho_c) - (s_big - rho_big)).abs() <= 1e-8);
    }

    #[test]
    fn classify_kron_family_is_nonsingular() {
        let a = si_minus(5.0, &kron_identity::<f64>(4).unwrap());
        let v = classify_m(&a, TOL).unwrap();
        assert_eq!(v.category, MCategory::NonsingularM);
        assert!((v.margin - 1.0).abs() <= 1e-8);
        assert!(v.decided);
        let cert = v.certificate.expect("nonsingular verdict carries a certificate");
        assert_eq!(cert.x, vec![1.0; 4]);
        assert!(cert.residual.iter().all(|&r| (r - 1.0).abs() <= 1e-9));
    }

    #[test]
    fn classify_counterexample_is_boundary() {
        let a = si_minus(2.0, &counterexample_b());
        let v = classify_m(&a, TOL).unwrap();
        assert_eq!(v.category, MCategory::BoundaryM);
        assert!(v.margin.abs() <= 1e-8);
        assert!(v.decided);
        assert!(v.certificate.is_none());
    }

    #[test]
    fn classify_detects_not_m() {
        let a = si_minus(1.0, &all_ones(3, 2).scaled(2.0));
        let v = classify_m(&a, TOL).unwrap();
        assert_eq!(v.category, MCategory::NotM);
        assert!((v.margin - (1.0 - 8.0)).abs() <= 1e-8);
    }

    #[test]
    fn undecided_bracket_reports_conservatively() {
        // mixing tensor that needs iterations; a zero-step budget leaves the
        // initial bracket straddling s
        let b = t64(3, 2, &[(&[0, 1, 1], 1.0), (&[1, 0, 0], 4.0), (&[0, 0, 0], 0.2)]);
        let a = si_minus(1.5, &b);
        let v = classify_m_with(&a, 1e-13, 0).unwrap();
        assert!(!v.decided);
        assert_eq!(v.category, MCategory::BoundaryM);
        assert!(v.certificate.is_none());
        // with the default budget the same tensor is decidedly not-M
        let full = classify_m(&a, TOL).unwrap();
        assert!(full.decided);
        assert_eq!(full.category, MCategory::NotM);
    }

    #[test]
    fn semi_positive_certificate_examples() {
        // strictly diagonally dominant: the all-ones probe wins
        let a = t64(
            3,
            2,
            &[(&[0, 0, 0], 3.0), (&[0, 1, 1], -1.0), (&[1, 1, 1], 2.0), (&[1, 0, 0], -0.5)],
        );
        let cert = semi_positive_certificate(&a, TOL).unwrap();
        assert_eq!(cert.x, vec![1.0, 1.0]);
        assert_eq!(cert.residual, a.apply(&[1.0, 1.0]).unwrap());
        assert!(cert.margin > 0.0);

        // 5I - J at n = 4
        let a = si_minus(5.0, &kron_identity::<f64>(4).unwrap());
        let cert = semi_positive_certificate(&a, TOL).unwrap();
        assert_eq!(cert.x, vec![1.0; 4]);
        assert!(cert.residual.iter().all(|&r| (r - 1.0).abs() <= 1e-9));

        // weakly reducible: 3I - B0 glues x = (1, eps) with eps = 1/2
        let a = si_minus(3.0, &counterexample_b());
        let cert = semi_positive_certificate(&a, TOL).unwrap();
        assert!(cert.x[0] > 0.0 && cert.x[1] > 0.0);
        assert!(cert.residual.iter().all(|&r| r > 0.0));
        assert_eq!(cert.epsilons, vec![1.0, 0.5]);
        let recheck = a.apply(&cert.x).unwrap();
        assert_eq!(recheck, cert.residual);
    }

    #[test]
    fn certificate_recurses_on_straddling_blocks() {
        // the SCC {0,1} of GM(B) is held together by an entry that straddles
        // into block {2}; its leading subtensor is weakly reducible, so the
        // construction must recurse rather than ask for a Perron vector
        let b = t64(
            3,
            3,
            &[(&[0, 1, 2], 3.0), (&[1, 0, 0], 1.0), (&[2, 2, 2], 1.0)],
        );
        let part = crate::structure::weakly_irreducible_partition(&b);
        assert!(part.block_weakly_irreducible.iter().any(|&w| !w));
        // rho(B) = 1: eigenpair (3,3,1) with lambda 1, and the blocks carry
        // radii 0 and 1
        let rho = spectral_radius(&b, TOL, 10_000).unwrap().rho;
        assert!((rho - 1.0).abs() <= 1e-9);
        for s in [1.5, 2.5, 6.0] {
            let a = si_minus(s, &b);
            let v = classify_m(&a, TOL).unwrap();
            assert_eq!(v.category, MCategory::NonsingularM, "s = {s}");
            let cert = semi_positive_certificate(&a, TOL).unwrap();
            assert!(cert.x.iter().all(|&x| x > 0.0));
            assert!(cert.residual.iter().all(|&r| r > 0.0));
            assert_eq!(a.apply(&cert.x).unwrap(), cert.residual);
            if s < 3.0 {
                // the all-ones probe fails on the straddling row, forcing
                // the recursive construction
                assert!(a.apply(&vec![1.0; 3]).unwrap()[0] <= 0.0);
                assert!(!cert.epsilons.is_empty());
            }
        }
    }

    #[test]
    fn semi_positive_fails_off_category() {
        let boundary = si_minus(2.0, &counterexample_b());
        assert!(matches!(
            semi_positive_certificate(&boundary, TOL),
            Err(ClassifyError::NotNonsingularM { .. })
        ));
        assert!(!is_semi_positive(&boundary, TOL).unwrap());
        let a = si_minus(3.0, &counterexample_b());
        assert!(is_semi_positive(&a, TOL).unwrap());
    }

    #[test]
    fn dominance_checks() {
        let i = identity_tensor::<f64>(3, 2).unwrap().to_sparse();
        assert!(is_strictly_diagonally_dominant(&i));
        let boundary = si_minus(2.0, &counterexample_b());
        // row 1 has zero diagonal and off-sum 1
        assert!(!is_strictly_diagonally_dominant(&boundary));
        assert!(!is_diagonally_dominant(&boundary));
        let equality = t64(
            3,
            2,
            &[(&[0, 0, 0], 3.0), (&[0, 1, 1], -3.0), (&[1, 1, 1], 3.0), (&[1, 0, 0], -3.0)],
        );
        assert!(!is_strictly_diagonally_dominant(&equality));
        assert!(is_diagonally_dominant(&equality));
    }

    #[test]
    fn dominance_scaling_examples() {
        let a = si_minus(5.0, &kron_identity::<f64>(4).unwrap());
        let d = dominance_scaling(&a, TOL).unwrap();
        assert_eq!(d, vec![1.0; 4]);
        assert!(is_strictly_diagonally_dominant(&a.scale_modes(&d).unwrap()));
        // the converse direction: strict dominance with positive diagonal
        // certifies nonsingularity
        assert!(is_strictly_diagonally_dominant(&a));
        assert_eq!(classify_m(&a, TOL).unwrap().category, MCategory::NonsingularM);

        let a = si_minus(3.0, &counterexample_b());
        let d = dominance_scaling(&a, TOL).unwrap();
        assert!(is_strictly_diagonally_dominant(&a.scale_modes(&d).unwrap()));
    }

    #[test]
    fn row_scaling_preserves_dominance_verdict() {
        let a = si_minus(5.0, &kron_identity::<f64>(2).unwrap());
        let d1 = DiagonalTensor::from_diag(4, vec![2.0, 0.3]).unwrap();
        let scaled = d1.compose(&a).unwrap();
        for d in [vec![1.0, 1.0], vec![0.5, 2.0], vec![3.0, 0.1]] {
            assert_eq!(
                is_strictly_diagonally_dominant(&a.scale_modes(&d).unwrap()),
                is_strictly_diagonally_dominant(&scaled.scale_modes(&d).unwrap())
            );
        }
    }

    #[test]
    fn split_dc_examples() {
        let i = identity_tensor::<f64>(3, 2).unwrap().to_sparse();
        let (d, c) = split_dc(&i).unwrap();
        assert_eq!(d.diag(), &[1.0, 1.0]);
        assert_eq!(c, i);

        let a2 = i.scaled(2.0);
        let (d, c) = split_dc(&a2).unwrap();
        assert_eq!(d.diag(), &[2.0, 2.0]);
        assert_eq!(c, i);

        let a = si_minus(5.0, &kron_identity::<f64>(2).unwrap());
        let (d, c) = split_dc(&a).unwrap();
        assert_eq!(d.diag(), &[4.0, 4.0]);
        assert_eq!(c.get(&[0, 0, 0, 0]), 1.0);
        assert_eq!(c.get(&[0, 0, 1, 1]), -0.25);
        // exact recomposition on dyadic values
        assert_eq!(d.compose(&c).unwrap(), a);

        let zero_diag = si_minus(2.0, &counterexample_b());
        assert!(matches!(
            split_dc(&zero_diag),
            Err(ClassifyError::NonPositiveDiagonal { index: 0 })
        ));
    }

    #[test]
    fn split_dc_tracks_nonsingularity() {
        // C = D^{-1} A is nonsingular-M exactly when A is
        let a = si_minus(5.0, &kron_identity::<f64>(2).unwrap());
        let (_, c) = split_dc(&a).unwrap();
        assert_eq!(classify_m(&a, TOL).unwrap().category, MCategory::NonsingularM);
        assert_eq!(classify_m(&c, TOL).unwrap().category, MCategory::NonsingularM);

        let bad = t64(
            3,
            2,
            &[(&[0, 0, 0], 0.5), (&[0, 1, 1], -3.0), (&[1, 1, 1], 0.5), (&[1, 0, 0], -3.0)],
        );
        let (_, c) = split_dc(&bad).unwrap();
        assert_eq!(classify_m(&bad, TOL).unwrap().category, MCategory::NotM);
        assert_eq!(classify_m(&c, TOL).unwrap().category, MCategory::NotM);
    }

    #[test]
    fn split_de_examples() {
        let i = identity_tensor::<f64>(3, 2).unwrap().to_sparse();
        let (_, e) = split_de(&i).unwrap();
        assert_eq!(e.nnz(), 0);

        let a = si_minus(5.0, &kron_identity::<f64>(2).unwrap());
        let (d, e) = split_de(&a).unwrap();
        assert_eq!(d.diag(), &[4.0, 4.0]);
        assert!(e.is_nonnegative());
        // (D^{-1}E) x^{m-1} < x^{[m-1]} at the certificate
        let cert = semi_positive_certificate(&a, TOL).unwrap();
        let lhs = d.inverse().unwrap().compose(&e).unwrap().apply(&cert.x).unwrap();
        let rhs = crate::tensor::power_vec(&cert.x, 3.0).unwrap();
        assert!(lhs.iter().zip(&rhs).all(|(l, r)| l < r));
        // and rho(D^{-1} E) < 1
        let de = d.inverse().unwrap().compose(&e).unwrap();
        let rho = spectral_radius(&de, TOL, 10_000).unwrap().rho;
        assert!(rho < 1.0);

        // the boundary tensor has a zero diagonal entry, so the positive
        // diagonal precondition rejects it
        let boundary = si_minus(2.0, &counterexample_b());
        assert!(matches!(
            split_de(&boundary),
            Err(ClassifyError::NonPositiveDiagonal { index: 0 })
        ));
    }

    #[test]
    fn semi_nonnegative_cases() {
        // case 1: diagonally dominant with nonnegative diagonal
        let a = t64(
            3,
            2,
            &[(&[0, 0, 0], 2.0), (&[0, 1, 1], -2.0), (&[1, 1, 1], 1.0)],
        );
        let out = semi_nonnegative_certificate(&a, TOL).unwrap();
        let cert = out.certificate().expect("dominant case certifies");
        assert_eq!(cert.x, vec![1.0, 1.0]);
        assert!(cert.margin >= 0.0);

        // case 2: weakly irreducible boundary M-tensor that is not
        // diagonally dominant, x = Perron vector of the nonnegative part
        let b = t64(3, 2, &[(&[0, 1, 1], 4.0), (&[1, 0, 0], 1.0)]);
        let rho = spectral_radius(&b, TOL, 10_000).unwrap().upper; // = 2
        let a = si_minus(rho, &b);
        assert!(!is_diagonally_dominant(&a));
        let out = semi_nonnegative_certificate(&a, TOL).unwrap();
        let cert = out.certificate().expect("weakly irreducible M certifies");
        assert!(cert.x.iter().all(|&v| v > 0.0));
        assert!(cert.margin.abs() <= 1e-8);
        assert_eq!(cert.kind, CertificateKind::SemiNonnegative);

        // the impossibility instance returns unknown
        let a35 = si_minus(2.0, &counterexample_b());
        let out = semi_nonnegative_certificate(&a35, TOL).unwrap();
        assert!(out.certificate().is_none());
    }

    #[test]
    fn semi_nonnegative_case3_glues_around_critical_block() {
        // strict block {0} (rho 0.5) references the self-contained critical
        // block {1} (rho 2 = s); row 0 is not dominant, so neither of the
        // earlier cases applies
        let b = t64(
            4,
            2,
            &[(&[0, 0, 0, 0], 0.5), (&[0, 0, 1, 1], 2.0), (&[1, 1, 1, 1], 2.0)],
        );
        let a = si_minus(2.0, &b);
        assert!(!is_diagonally_dominant(&a));
        let out = semi_nonnegative_certificate(&a, TOL).unwrap();
        let cert = out.certificate().expect("separable boundary case certifies");
        assert!(cert.x.iter().all(|&v| v > 0.0));
        assert!(cert.margin >= -1e-9);
        // theorem check: certified semi-nonnegative implies M or better
        assert!(classify_m(&a, TOL).unwrap().category.is_m());
    }

    #[test]
    fn symmetric_boundary_tensor_is_certified() {
        // symmetric tensors have no cross-block entries, so their boundary
        // instances always fall into a sufficient case
        let b = t64(4, 3, &[
            (&[0, 0, 0, 0], 3.0),
            (&[1, 1, 1, 1], 1.0),
            (&[2, 2, 2, 2], 3.0),
        ]);
        let a = si_minus(3.0, &b);
        let out = semi_nonnegative_certificate(&a, TOL).unwrap();
        assert!(out.certificate().is_some());
        assert!(classify_m(&a, TOL).unwrap().category.is_m());
    }

    #[test]
    fn classify_h_examples() {
        // a nonsingular M-tensor is its own comparison tensor
        let a = si_minus(5.0, &kron_identity::<f64>(4).unwrap());
        assert_eq!(a.comparison(), a);
        let h = classify_h(&a, TOL).unwrap();
        assert_eq!(h.category, HCategory::NonsingularH);
        let d = h.scaling.expect("nonsingular-H carries a scaling");
        assert!(is_strictly_diagonally_dominant(&a.scale_modes(&d).unwrap()));

        // mixed signs: comparison is a strictly dominant Z-tensor
        let a = t64(
            3,
            2,
            &[(&[0, 0, 0], 4.0), (&[0, 1, 1], 1.0), (&[1, 1, 1], 4.0), (&[1, 0, 0], -1.0)],
        );
        let h = classify_h(&a, TOL).unwrap();
        assert_eq!(h.category, HCategory::NonsingularH);
        let d = h.scaling.unwrap();
        assert!(is_strictly_diagonally_dominant(&a.scale_modes(&d).unwrap()));

        // the nonnegative counterexample tensor: comparison has diagonal
        // (2, 1) and one off entry -1, which is semi-positive at x = e,
        // hence nonsingular-H
        let h = classify_h(&counterexample_b(), TOL).unwrap();
        assert_eq!(h.category, HCategory::NonsingularH);
    }

    #[test]
    fn boundary_h_from_boundary_comparison() {
        // comparison tensor equals 2I - B0 exactly: feed the boundary
        // M-tensor itself through the H pipeline
        let a35 = si_minus(2.0, &counterexample_b());
        let h = classify_h(&a35, TOL).unwrap();
        assert_eq!(h.category, HCategory::BoundaryH);
        assert!(h.scaling.is_none());
    }

    #[test]
    fn epsilon_shift_restores_nonsingularity() {
        let a35 = si_minus(2.0, &counterexample_b());
        let shifted = a35
            .try_sum(&DiagonalTensor::constant(4, 2, 0.5).unwrap().to_sparse())
            .unwrap();
        let v = classify_m(&shifted, TOL).unwrap();
        assert_eq!(v.category, MCategory::NonsingularM);
        assert!((v.margin - 0.5).abs() <= 1e-8);
    }

    #[test]
    fn scale_invariance_of_category() {
        let a = si_minus(5.0, &kron_identity::<f64>(3).unwrap());
        for alpha in [0.5, 1.0, 2.0] {
            let v = classify_m(&a.scaled(alpha), TOL).unwrap();
            assert_eq!(v.category, MCategory::NonsingularM);
        }
        let not_m = si_minus(1.0, &all_ones(3, 2).scaled(2.0));
        for alpha in [0.5, 2.0] {
            assert_eq!(
                classify_m(&not_m.scaled(alpha), TOL).unwrap().category,
                MCategory::NotM
            );
        }
    }

    #[test]
    fn nonsingular_verdicts_have_positive_diagonals() {
        let a = si_minus(3.0, &counterexample_b());
        let v = classify_m(&a, TOL).unwrap();
        assert_eq!(v.category, MCategory::NonsingularM);
        assert!(a.diagonal().iter().all(|&d| d > 0.0));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Z-tensors over the dyadic grid k/16, where the canonical split
        /// subtracts exactly.
        fn arb_dyadic_z() -> impl Strategy<Value = SparseTensor<f64>> {
            let diag = prop::collection::vec(0u32..33, 2);
            let off = prop::collection::vec((prop::collection::vec(0usize..2, 3), 0u32..33), 0..6);
            (diag, off).prop_map(|(diag, off)| {
                let mut entries: Vec<(Vec<usize>, f64)> = diag
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (vec![i; 3], f64::from(v) / 16.0))
                    .collect();
                for (idx, v) in off {
                    if idx.windows(2).all(|w| w[0] == w[1]) {
                        continue;
                    }
                    entries.push((idx, -f64::from(v) / 16.0));
                }
                SparseTensor::from_entries(3, 2, entries).unwrap()
            })
        }

        proptest! {
            #[test]
            fn z_split_reconstructs_exactly_on_dyadic_values(a in arb_dyadic_z()) {
                let split = z_split(&a).unwrap();
                prop_assert!(split.b.is_nonnegative());
                prop_assert_eq!(split.reconstruct(), a);
            }
        }
    }
}
