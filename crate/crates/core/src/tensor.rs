//! Sparse coordinate storage for order-`m` dimension-`n` tensors and the
//! tensor algebra built on it: tensor-vector products, componentwise powers,
//! diagonal composites and inverses, mode scalings, the comparison tensor,
//! and the two Kronecker-product constructors.
//!
//! Index tuples are 0-based in the API; the text format and JSON reports use
//! 1-based indices.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

/// Errors raised by tensor construction and algebra.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("tensor order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("tensor dimension must be at least 1, got {0}")]
    DimTooSmall(usize),
    #[error("index tuple has length {got}, expected order {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("tensor entries must be finite")]
    NonFiniteValue,
    #[error("vector length {got} does not match tensor dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("tensors have mismatched shape: ({m1},{n1}) vs ({m2},{n2})")]
    ShapeMismatch {
        m1: usize,
        n1: usize,
        m2: usize,
        n2: usize,
    },
    #[error("fractional power of a negative entry")]
    FractionalPowerOfNegative,
    #[error("diagonal tensor has a zero entry at position {0}")]
    ZeroDiagonal(usize),
    #[error("input vector must be nonnegative")]
    NegativeInput,
}

/// Order-`m`, dimension-`n` tensor in coordinate form.
///
/// Entries are kept in a map from index tuples to values, in lexicographic
/// order; absent tuples are zero. Duplicate tuples passed to a constructor
/// are summed, and exact zeros are dropped, so equal tensors compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor<T: Scalar> {
    order: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, T>,
}

impl<T: Scalar> SparseTensor<T> {
    /// Empty (all-zero) tensor.
    pub fn zeros(order: usize, dim: usize) -> Result<Self, TensorError> {
        if order < 2 {
            return Err(TensorError::OrderTooSmall(order));
        }
        if dim < 1 {
            return Err(TensorError::DimTooSmall(dim));
        }
        Ok(Self {
            order,
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a tensor from `(index tuple, value)` pairs with 0-based indices.
    /// Duplicates are summed; exact zeros are dropped after summing.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        let mut t = Self::zeros(order, dim)?;
        for (idx, v) in entries {
            t.accumulate(idx, v)?;
        }
        t.entries.retain(|_, v| *v != T::zero());
        Ok(t)
    }

    fn accumulate(&mut self, idx: Vec<usize>, v: T) -> Result<(), TensorError> {
        if idx.len() != self.order {
            return Err(TensorError::WrongArity {
                expected: self.order,
                got: idx.len(),
            });
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(TensorError::IndexOutOfRange {
                index: bad,
                dim: self.dim,
            });
        }
        if !v.is_finite() {
            return Err(TensorError::NonFiniteValue);
        }
        *self.entries.entry(idx).or_insert_with(T::zero) += v;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Entry at a tuple, zero if absent.
    pub fn get(&self, idx: &[usize]) -> T {
        self.entries.get(idx).copied().unwrap_or_else(T::zero)
    }

    /// Stored entries in lexicographic tuple order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], T)> {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|&v| v >= T::zero())
    }

    pub fn max_abs(&self) -> T {
        self.entries
            .values()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    /// The length-`n` vector of entries at repeated tuples `(i,i,…,i)`.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim)
            .map(|i| self.get(&vec![i; self.order]))
            .collect()
    }

    /// Tensor-vector product: `y_i = Σ a_{i i_2 ⋯ i_m} x_{i_2} ⋯ x_{i_m}`.
    ///
    /// Accumulation is compensated (Neumaier) per output row, in tuple order,
    /// so results are deterministic across runs.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>, TensorError> {
        if x.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut sum = vec![T::zero(); self.dim];
        let mut comp = vec![T::zero(); self.dim];
        for (idx, v) in self.iter() {
            let row = idx[0];
            let mut term = v;
            for &j in &idx[1..] {
                term = term * x[j];
            }
            neumaier_add(&mut sum[row], &mut comp[row], term);
        }
        Ok(sum.iter().zip(&comp).map(|(&s, &c)| s + c).collect())
    }

    /// Multiplies every entry by `alpha`.
    pub fn scaled(&self, alpha: T) -> Self {
        let entries: Vec<(Vec<usize>, T)> = self
            .entries
            .iter()
            .map(|(k, &v)| (k.clone(), v * alpha))
            .collect();
        Self::from_entries(self.order, self.dim, entries).expect("rescaling preserves validity")
    }

    /// Entrywise sum of two tensors of identical shape.
    pub fn try_sum(&self, other: &Self) -> Result<Self, TensorError> {
        if self.order != other.order || self.dim != other.dim {
            return Err(TensorError::ShapeMismatch {
                m1: self.order,
                n1: self.dim,
                m2: other.order,
                n2: other.dim,
            });
        }
        let entries = self
            .iter()
            .chain(other.iter())
            .map(|(k, v)| (k.to_vec(), v));
        Self::from_entries(self.order, self.dim, entries)
    }

    /// Comparison tensor: diagonal entries become `+|a|`, off-diagonal `-|a|`.
    pub fn comparison(&self) -> Self {
        let entries = self.entries.iter().map(|(k, &v)| {
            let signed = if is_diagonal_tuple(k) { v.abs() } else { -v.abs() };
            (k.clone(), signed)
        });
        Self::from_entries(self.order, self.dim, entries).expect("comparison preserves validity")
    }

    /// Scales trailing modes: entry `(i_1,…,i_m)` is multiplied by
    /// `d_{i_2} ⋯ d_{i_m}`. Equivalent to the mode products with `diag(d)`
    /// on modes `2..m`, so `scale_modes(A, d).apply(x) = A.apply(d ⊙ x)`.
    pub fn scale_modes(&self, d: &[T]) -> Result<Self, TensorError> {
        if d.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: d.len(),
            });
        }
        let entries = self.entries.iter().map(|(k, &v)| {
            let factor = k[1..].iter().fold(T::one(), |acc, &j| acc * d[j]);
            (k.clone(), v * factor)
        });
        Self::from_entries(self.order, self.dim, entries)
    }

    /// Leading subtensor on a sorted set of indices, relabeled to `0..k`.
    /// Entries with any index outside the set are dropped.
    pub fn leading_subtensor(&self, indices: &[usize]) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        let mut local = vec![usize::MAX; self.dim];
        for (pos, &g) in indices.iter().enumerate() {
            local[g] = pos;
        }
        let entries = self.entries.iter().filter_map(|(k, &v)| {
            let mapped: Option<Vec<usize>> = k
                .iter()
                .map(|&i| (local[i] != usize::MAX).then_some(local[i]))
                .collect();
            mapped.map(|m| (m, v))
        });
        Self::from_entries(self.order, indices.len().max(1), entries)
            .expect("subtensor preserves validity")
    }

    /// Simultaneous relabeling `i ↦ perm[i]` of all modes.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, TensorError> {
        if perm.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; self.dim];
        for &p in perm {
            if p >= self.dim || seen[p] {
                return Err(TensorError::IndexOutOfRange {
                    index: p,
                    dim: self.dim,
                });
            }
            seen[p] = true;
        }
        let entries = self
            .entries
            .iter()
            .map(|(k, &v)| (k.iter().map(|&i| perm[i]).collect(), v));
        Self::from_entries(self.order, self.dim, entries)
    }
}

// JSON form: `{order, dim, entries: [[[i_1,…,i_m], value], …]}` with 1-based
// indices, matching the text format convention.
impl<T: Scalar + Serialize> Serialize for SparseTensor<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SparseTensor", 3)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("dim", &self.dim)?;
        let entries: Vec<(Vec<usize>, T)> = self
            .iter()
            .map(|(k, v)| (k.iter().map(|&i| i + 1).collect(), v))
            .collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

fn neumaier_add<T: Scalar>(sum: &mut T, comp: &mut T, v: T) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

pub(crate) fn is_diagonal_tuple(idx: &[usize]) -> bool {
    idx.windows(2).all(|w| w[0] == w[1])
}

/// Diagonal tensor: nonzeros only at repeated tuples `(i,i,…,i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalTensor<T: Scalar> {
    order: usize,
    dim: usize,
    diag: Vec<T>,
}

impl<T: Scalar> DiagonalTensor<T> {
    pub fn from_diag(order: usize, diag: Vec<T>) -> Result<Self, TensorError> {
        if order < 2 {
            return Err(TensorError::OrderTooSmall(order));
        }
        if diag.is_empty() {
            return Err(TensorError::DimTooSmall(0));
        }
        if diag.iter().any(|v| !v.is_finite()) {
            return Err(TensorError::NonFiniteValue);
        }
        Ok(Self {
            order,
            dim: diag.len(),
            diag,
        })
    }

    /// The unit tensor: all diagonal entries 1.
    pub fn identity(order: usize, dim: usize) -> Result<Self, TensorError> {
        Self::from_diag(order, vec![T::one(); dim])
    }

    /// Constant diagonal `c`.
    pub fn constant(order: usize, dim: usize, c: T) -> Result<Self, TensorError> {
        Self::from_diag(order, vec![c; dim])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    /// `y_i = d_i x_i^{m-1}`.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>, TensorError> {
        if x.len() != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let e = self.order as i32 - 1;
        Ok(self
            .diag
            .iter()
            .zip(x)
            .map(|(&d, &xi)| d * xi.powi(e))
            .collect())
    }

    /// Diagonal composite: `(D A)_{i_1 i_2 ⋯ i_m} = d_{i_1} a_{i_1 i_2 ⋯ i_m}`,
    /// a row scaling of `A`.
    pub fn compose(&self, a: &SparseTensor<T>) -> Result<SparseTensor<T>, TensorError> {
        if self.order != a.order() || self.dim != a.dim() {
            return Err(TensorError::ShapeMismatch {
                m1: self.order,
                n1: self.dim,
                m2: a.order(),
                n2: a.dim(),
            });
        }
        let entries = a.iter().map(|(k, v)| (k.to_vec(), v * self.diag[k[0]]));
        SparseTensor::from_entries(a.order(), a.dim(), entries)
    }

    /// Reciprocal diagonal. Fails on a zero diagonal entry.
    pub fn inverse(&self) -> Result<Self, TensorError> {
        if let Some(pos) = self.diag.iter().position(|&d| d == T::zero()) {
            return Err(TensorError::ZeroDiagonal(pos));
        }
        Self::from_diag(self.order, self.diag.iter().map(|&d| d.recip()).collect())
    }

    pub fn to_sparse(&self) -> SparseTensor<T> {
        let entries = self
            .diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (vec![i; self.order], d));
        SparseTensor::from_entries(self.order, self.dim, entries)
            .expect("diagonal tensor is valid sparse")
    }
}

/// Componentwise `p`-th power `x^{[p]}`. Fractional `p` on a negative entry
/// is rejected rather than producing a complex or NaN result.
pub fn power_vec<T: Scalar>(x: &[T], p: T) -> Result<Vec<T>, TensorError> {
    let fractional = p.fract() != T::zero();
    if fractional && x.iter().any(|&v| v < T::zero()) {
        return Err(TensorError::FractionalPowerOfNegative);
    }
    Ok(x.iter().map(|&v| v.powf(p)).collect())
}

/// The unit tensor `I` of order `m`, dimension `n`.
pub fn identity_tensor<T: Scalar>(order: usize, dim: usize) -> Result<DiagonalTensor<T>, TensorError> {
    DiagonalTensor::identity(order, dim)
}

/// Order-4 tensor `I_n ⊗ I_n`: entry 1 at `(i,i,j,j)` for all `i,j`.
/// Satisfies `apply(J, x) = (xᵀx)·x` and has all row sums equal to `n`.
pub fn kron_identity<T: Scalar>(n: usize) -> Result<SparseTensor<T>, TensorError> {
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push((vec![i, i, j, j], T::one()));
        }
    }
    SparseTensor::from_entries(4, n, entries)
}

/// Order-`2k` rank-one Kronecker tensor with entry
/// `a_i^{2k-1} b_{i_2} ⋯ b_{i_{2k}}` at `(i, i_2, …, i_{2k})`, so that
/// `apply(B, x) = a^{[2k-1]} (bᵀx)^{2k-1}`.
pub fn kron_rank_one<T: Scalar>(
    a: &[T],
    b: &[T],
    k: usize,
) -> Result<SparseTensor<T>, TensorError> {
    if k < 1 {
        return Err(TensorError::OrderTooSmall(2 * k));
    }
    if a.len() != b.len() {
        return Err(TensorError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.iter().chain(b.iter()).any(|&v| v < T::zero()) {
        return Err(TensorError::NegativeInput);
    }
    let n = a.len();
    let order = 2 * k;
    let lead_pow = order as i32 - 1;
    let support: Vec<usize> = (0..n).filter(|&j| b[j] != T::zero()).collect();
    let mut entries = Vec::new();
    for i in 0..n {
        if a[i] == T::zero() {
            continue;
        }
        let lead = a[i].powi(lead_pow);
        // odometer over the trailing modes restricted to the support of b
        let trailing = order - 1;
        let mut counters = vec![0usize; trailing];
        if support.is_empty() {
            continue;
        }
        loop {
            let mut idx = Vec::with_capacity(order);
            idx.push(i);
            let mut value = lead;
            for &c in &counters {
                let j = support[c];
                idx.push(j);
                value = value * b[j];
            }
            entries.push((idx, value));
            let mut pos = trailing;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                counters[pos] += 1;
                if counters[pos] < support.len() {
                    break;
                }
                counters[pos] = 0;
            }
            if counters.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    SparseTensor::from_entries(order, n, entries)
}
