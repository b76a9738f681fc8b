//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)] // each test target uses a subset

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mtensor::{spectral_radius, DiagonalTensor, SparseTensor, Tensor64};

/// Brute-force m-nested-loop tensor-vector product, enumerating the full
/// index space; independent of the sparse iteration order used by `apply`.
pub fn dense_apply(t: &Tensor64, x: &[f64]) -> Vec<f64> {
    let m = t.order();
    let n = t.dim();
    let mut y = vec![0.0; n];
    let mut idx = vec![0usize; m];
    loop {
        let mut prod = t.get(&idx);
        for &j in &idx[1..] {
            prod *= x[j];
        }
        y[idx[0]] += prod;
        let mut pos = m;
        loop {
            if pos == 0 {
                return y;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            return y;
        }
    }
}

pub fn si_minus(s: f64, b: &Tensor64) -> Tensor64 {
    DiagonalTensor::constant(b.order(), b.dim(), s)
        .unwrap()
        .to_sparse()
        .try_sum(&b.scaled(-1.0))
        .unwrap()
}

/// Enumerates every index tuple of the given shape.
pub fn all_tuples(order: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; order];
    loop {
        out.push(idx.clone());
        let mut pos = order;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < dim {
                break;
            }
            idx[pos] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            return out;
        }
    }
}

/// Random nonnegative tensor with positive diagonal entries and moderate
/// off-diagonal density; the positive diagonal keeps the spectral radius
/// bounded away from zero and power iteration well conditioned.
pub fn random_nonneg(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> Tensor64 {
    let mut entries = Vec::new();
    for tuple in all_tuples(m, n) {
        let diagonal = tuple.windows(2).all(|w| w[0] == w[1]);
        if diagonal {
            entries.push((tuple, rng.gen_range(0.5..1.5)));
        } else if rng.gen_bool(density) {
            entries.push((tuple, rng.gen_range(0.2..1.2)));
        }
    }
    SparseTensor::from_entries(m, n, entries).unwrap()
}

/// A random Z-tensor instance `A = sI - B` with a decisive margin of either
/// sign: `s` is drawn as a multiplicative factor of `rho(B)` from
/// `[0.3, 0.9] ∪ [1.1, 2.0]`. Returns `(A, margin)` where the margin is the
/// test's own reference `s - rho(B)`.
pub fn random_z_instance(rng: &mut ChaCha8Rng) -> (Tensor64, f64) {
    let m = if rng.gen_bool(0.5) { 3 } else { 4 };
    let n = rng.gen_range(2..=4);
    let b = random_nonneg(rng, m, n, 0.35);
    let rho = spectral_radius(&b, 1e-10, 10_000).unwrap().rho;
    let factor = if rng.gen_bool(0.5) {
        rng.gen_range(0.3..0.9)
    } else {
        rng.gen_range(1.1..2.0)
    };
    let s = rho * factor;
    (si_minus(s, &b), s - rho)
}

/// Random block-structured nonsingular M-tensor: 2-4 weakly irreducible
/// diagonal blocks, forward-only cross entries, labels shuffled by a random
/// permutation. Returns `(A, expected block count)`.
pub fn random_block_structured(rng: &mut ChaCha8Rng) -> (Tensor64, usize) {
    let m = 3;
    let k = rng.gen_range(2..=4);
    let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
    let n: usize = sizes.iter().sum();
    let mut start = 0usize;
    let mut blocks = Vec::new();
    for &sz in &sizes {
        blocks.push((start..start + sz).collect::<Vec<usize>>());
        start += sz;
    }
    let mut entries = Vec::new();
    // dense positive intra-block entries make each block weakly irreducible
    for block in &blocks {
        for &i in block {
            for &j in block {
                for &l in block {
                    entries.push((vec![i, j, l], rng.gen_range(0.3..1.0)));
                }
            }
        }
    }
    // forward cross entries: rows of block t reference strictly later blocks
    for (t, block) in blocks.iter().enumerate().take(k - 1) {
        let suffix: Vec<usize> = blocks[t + 1..].concat();
        for &i in block {
            for _ in 0..rng.gen_range(1..=2) {
                let j = suffix[rng.gen_range(0..suffix.len())];
                let l = if rng.gen_bool(0.5) {
                    suffix[rng.gen_range(0..suffix.len())]
                } else {
                    block[rng.gen_range(0..block.len())]
                };
                entries.push((vec![i, j, l], rng.gen_range(0.1..0.6)));
            }
        }
    }
    let b = SparseTensor::from_entries(m, n, entries).unwrap();
    let rho = spectral_radius(&b, 1e-10, 10_000).unwrap().rho;
    let a = si_minus(1.1 * rho + 0.1, &b);
    // shuffle labels; classification must be invariant
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    (a.permuted(&perm).unwrap(), k)
}
