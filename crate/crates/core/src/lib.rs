//! Structured classification of higher-order tensors.
//!
//! An order-`m`, dimension-`n` tensor acts on a vector through
//! `(A x^{m-1})_i = Σ a_{i i_2 ⋯ i_m} x_{i_2} ⋯ x_{i_m}`. This crate decides,
//! with constructive certificates, whether such a tensor is a Z-tensor, an
//! (nonsingular) M-tensor, or an (nonsingular) H-tensor; computes spectral
//! radii of nonnegative tensors with certified Collatz-Wielandt brackets and
//! Perron vectors; produces semi-positivity / semi-nonnegativity certificates
//! and diagonal-dominance scalings; and probes monotonicity, including a
//! generator for the classic family that is a nonsingular M-tensor without
//! being monotone.
//!
//! Everything is generic over the [`Scalar`] floating-point type; the
//! `*64`/`*32` aliases below pin the common choices.

pub mod classify;
pub mod io;
pub mod monotone;
pub mod scalar;
pub mod spectral;
pub mod structure;
pub mod tensor;

pub use classify::{
    classify_h, classify_h_with, classify_m, classify_m_with, dominance_scaling,
    is_diagonally_dominant, is_semi_positive, is_strictly_diagonally_dominant, is_z_tensor,
    semi_nonnegative_certificate, semi_positive_certificate, split_dc, split_de, z_split,
    Certificate, CertificateKind, ClassifyError, HCategory, HVerdict, MCategory,
    SemiNonnegativeOutcome, Verdict, ZSplit,
};
pub use io::{read_tensor, read_tensor_file, write_tensor, write_tensor_file, IoError};
pub use monotone::{
    check_monotone_witness_family, counterexample, falsify_monotone, monotone_family,
    monotone_probes, CounterexampleReport, MonotoneError, MonotoneProbeReport, MonotoneWitness,
};
pub use scalar::Scalar;
pub use spectral::{
    collatz_wielandt, perron_vector, rho_oracle, spectral_radius, SpectralError, SpectralResult,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use structure::{
    is_irreducible, is_weakly_irreducible, reducibility_witness, representation_matrix,
    weakly_irreducible_partition, PartitionReport, RepresentationMatrix,
};
pub use tensor::{
    identity_tensor, kron_identity, kron_rank_one, power_vec, DiagonalTensor, SparseTensor,
    TensorError,
};

/// `f64` sparse tensor.
pub type Tensor64 = SparseTensor<f64>;
/// `f32` sparse tensor.
pub type Tensor32 = SparseTensor<f32>;
/// `f64` diagonal tensor.
pub type Diagonal64 = DiagonalTensor<f64>;
/// `f32` diagonal tensor.
pub type Diagonal32 = DiagonalTensor<f32>;
