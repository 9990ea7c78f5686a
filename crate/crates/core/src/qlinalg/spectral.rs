use super::density::{validated_spectrum, Bipartition, DensityMatrix};
use super::{c, hermitize, matmul, partial_trace};
use crate::{ComplexMatrix, Error, Result, C64};
use faer::Side;

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V diag(f(λ)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let s = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        let mut out = matmul(scaled.as_ref(), v.adjoint());
        hermitize(&mut out);
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

fn require_square(m: &ComplexMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::dim(format!("{what} needs a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Only the lower triangle of `h` is read.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    require_square(h, "herm_eig")?;
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigensolver did not converge: {e:?}")))?;
    let eigenvalues = (0..h.nrows()).map(|i| evd.S()[i].re).collect();
    Ok(HermitianEig { eigenvalues, eigenvectors: evd.U().to_owned() })
}

/// Ascending eigenvalues; only the lower triangle of `h` is read.
pub fn herm_eigvals(h: &ComplexMatrix) -> Result<Vec<f64>> {
    require_square(h, "herm_eigvals")?;
    h.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigensolver did not converge: {e:?}")))
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(herm_eig(h)?.reconstruct_with(f))
}

struct SvdParts {
    u: ComplexMatrix,
    s: Vec<f64>,
    v: ComplexMatrix,
}

fn svd(x: &ComplexMatrix) -> Result<SvdParts> {
    let svd = x
        .svd()
        .map_err(|e| Error::Numerical(format!("svd did not converge: {e:?}")))?;
    let k = x.nrows().min(x.ncols());
    Ok(SvdParts {
        u: svd.U().to_owned(),
        s: (0..k).map(|i| svd.S()[i].re).collect(),
        v: svd.V().to_owned(),
    })
}

/// `√(X X†)`, built from the singular value decomposition.
pub fn matrix_abs(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let p = svd(x)?;
    let n = x.nrows();
    let mut us = ComplexMatrix::zeros(n, p.s.len());
    for (j, &s) in p.s.iter().enumerate() {
        for i in 0..n {
            us[(i, j)] = p.u[(i, j)] * s;
        }
    }
    let mut out = matmul(us.as_ref(), p.u.get(.., ..p.s.len()).adjoint());
    hermitize(&mut out);
    Ok(out)
}

/// Left polar decomposition `X = P W`.
#[derive(Clone, Debug)]
pub struct Polar {
    /// `√(X X†)`.
    pub p: ComplexMatrix,
    /// Unitary factor.
    pub w: ComplexMatrix,
    /// Set when `X` was numerically rank deficient and `W` was completed
    /// arbitrarily on the kernel.
    pub completed: bool,
}

/// Left polar decomposition of a square matrix. A rank-deficient `X` has no
/// unique unitary factor; with `allow_completion` the SVD's choice is used and
/// flagged, otherwise the call fails.
pub fn polar(x: &ComplexMatrix, allow_completion: bool) -> Result<Polar> {
    require_square(x, "polar")?;
    let n = x.nrows();
    let p = svd(x)?;
    let smax = p.s.first().copied().unwrap_or(0.0);
    let smin = p.s.last().copied().unwrap_or(0.0);
    let deficient = smax == 0.0 || smin <= 1e-12 * smax;
    if deficient && !allow_completion {
        return Err(Error::Singular(format!(
            "polar decomposition of a rank-deficient matrix (smallest singular value {smin:e})"
        )));
    }
    let mut us = p.u.clone();
    for (j, &s) in p.s.iter().enumerate() {
        for i in 0..n {
            us[(i, j)] *= s;
        }
    }
    let mut pos = matmul(us.as_ref(), p.u.adjoint());
    hermitize(&mut pos);
    let w = matmul(p.u.as_ref(), p.v.adjoint());
    Ok(Polar { p: pos, w, completed: deficient })
}

/// Sum of singular values.
pub fn trace_norm(x: &ComplexMatrix) -> Result<f64> {
    let s = x
        .singular_values()
        .map_err(|e| Error::Numerical(format!("svd did not converge: {e:?}")))?;
    Ok(s.iter().sum())
}

/// Trace norm of a Hermitian matrix via its eigenvalues.
pub fn trace_norm_hermitian(h: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eigvals(h)?.iter().map(|x| x.abs()).sum())
}

/// Largest singular value.
pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    let s = x
        .singular_values()
        .map_err(|e| Error::Numerical(format!("svd did not converge: {e:?}")))?;
    Ok(s.first().copied().unwrap_or(0.0))
}

/// `-Σ λ log₂ λ` with `0 log 0 = 0`; negative entries are treated as zero.
pub fn entropy_of_spectrum(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = validated_spectrum(herm_eigvals(rho.matrix())?)?;
    Ok(entropy_of_spectrum(&eig))
}

/// `S(X) + S(Y) - S(XY)` across the given cut.
pub fn mutual_information(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    if cut.n_subsystems() != rho.dims().len() {
        return Err(Error::dim(format!(
            "cut covers {} subsystems, state has {}",
            cut.n_subsystems(),
            rho.dims().len()
        )));
    }
    let sx = von_neumann_entropy(&partial_trace(rho, cut.left())?)?;
    let sy = von_neumann_entropy(&partial_trace(rho, cut.right())?)?;
    let sxy = von_neumann_entropy(rho)?;
    Ok(sx + sy - sxy)
}

/// `<ψ₊|ρ|ψ₊>` for `ρ` on `d ⊗ d`.
pub fn fidelity_with_max_entangled(rho: &DensityMatrix, d: usize) -> Result<f64> {
    if rho.order() != d * d {
        return Err(Error::dim(format!("state of order {} is not on {d}⊗{d}", rho.order())));
    }
    let m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += m[(i * d + i, j * d + j)];
        }
    }
    Ok((acc / c(d as f64)).re)
}
