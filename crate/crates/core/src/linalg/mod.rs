//! Dense complex linear algebra for small Hermitian matrices.

mod eigen;
mod matrix;
mod random;
mod svd;

pub use eigen::{
    eig_hermitian, eigenvalues, exp_skew, JACOBI_MAX_SWEEPS, JACOBI_RELATIVE_THRESHOLD,
};
pub(crate) use matrix::exact_multiplicities;
pub use matrix::{
    commutator, embed_block, unitarity_defect, ComplexMatrix, Hermitian, RealMatrix, SkewHermitian,
    Spectrum, Unitary, UNITARY_TOLERANCE,
};
pub use random::{complex_gaussian, haar_unitary, qr, random_orbit_point};
pub use svd::{singular_values, svd, Svd};

pub use num_complex::Complex64;
