//! Dense complex and Hermitian linear algebra over multipartite systems.
//!
//! Index conventions live here and nowhere else: a system with subsystem
//! dimensions `[d0, d1, ..., dk]` is ordered row-major, so subsystem 0 is the
//! most significant digit of a linear index and `tensor(a, b)` is the usual
//! Kronecker product with `a` outermost.

mod density;
pub mod io;
mod spectral;
mod subsystems;

pub use density::{Bipartition, DensityMatrix};
pub use io::MatrixRecord;
pub(crate) use density::validated_spectrum;
pub use spectral::{
    entropy_of_spectrum, fidelity_with_max_entangled, herm_eig, herm_eigvals, herm_fn,
    matrix_abs, mutual_information, operator_norm, polar, trace_norm, trace_norm_hermitian,
    von_neumann_entropy, HermitianEig, Polar,
};
pub use subsystems::{
    partial_trace, partial_trace_op, partial_trace_of_product, partial_transpose,
    partial_transpose_op, permute_op, permute_subsystems, tensor,
};

use crate::{ComplexMatrix, C64};

/// Maximum entrywise deviation from Hermiticity accepted for a state.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum deviation of a state's trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as zero; anything lower is a
/// validation failure.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues of a reference operator at or below this fraction of its
/// largest eigenvalue are outside its numerical support.
pub const SUPPORT_REL_TOL: f64 = 1e-12;

/// Largest absolute entry.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            best = best.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    best
}

/// Largest entrywise deviation of `m` from `m†`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut best = 0.0f64;
    for j in 0..n {
        for i in j..n {
            best = best.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    best
}

/// Replaces `m` by `(m + m†) / 2`.
pub fn hermitize(m: &mut ComplexMatrix) {
    let n = m.nrows();
    for j in 0..n {
        m[(j, j)] = C64::new(m[(j, j)].re, 0.0);
        for i in (j + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// `a * b` using the global parallelism setting; either side may be a
/// conjugated view such as `x.adjoint()`.
pub fn matmul<L, R>(a: faer::MatRef<'_, L>, b: faer::MatRef<'_, R>) -> ComplexMatrix
where
    L: faer::traits::Conjugate<Canonical = C64>,
    R: faer::traits::Conjugate<Canonical = C64>,
{
    let mut out = ComplexMatrix::zeros(a.nrows(), b.ncols());
    faer::linalg::matmul::matmul(
        out.as_mut(),
        faer::Accum::Replace,
        a,
        b,
        C64::new(1.0, 0.0),
        faer::get_global_parallelism(),
    );
    out
}

/// `f f†` for a factor `f`, computing only the lower triangle and mirroring it.
pub fn gram(f: faer::MatRef<'_, C64>) -> ComplexMatrix {
    use faer::linalg::matmul::triangular::{matmul as tri_matmul, BlockStructure};
    let n = f.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    tri_matmul(
        out.as_mut(),
        BlockStructure::TriangularLower,
        faer::Accum::Replace,
        f,
        BlockStructure::Rectangular,
        f.adjoint(),
        BlockStructure::Rectangular,
        C64::new(1.0, 0.0),
        faer::get_global_parallelism(),
    );
    for j in 0..n {
        out[(j, j)] = C64::new(out[(j, j)].re, 0.0);
        for i in (j + 1)..n {
            out[(j, i)] = out[(i, j)].conj();
        }
    }
    out
}

/// `u m u†`.
pub fn conjugate_by(u: faer::MatRef<'_, C64>, m: faer::MatRef<'_, C64>) -> ComplexMatrix {
    let um = matmul(u, m);
    let mut out = matmul(um.as_ref(), u.adjoint());
    hermitize(&mut out);
    out
}

/// Maximum entrywise deviation of `u†u` from the identity.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let g = matmul(u.adjoint(), u.as_ref());
    max_abs_diff(&g, &ComplexMatrix::identity(u.nrows(), u.ncols()))
}

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
