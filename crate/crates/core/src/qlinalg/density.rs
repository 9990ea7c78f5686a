use super::{hermiticity_defect, hermitize, trace, HERMITIAN_TOL, TRACE_TOL};
use crate::{ComplexMatrix, Error, Result, C64};

/// Hermitian, positive semidefinite, unit-trace matrix together with the
/// dimensions of the subsystems it acts on.
///
/// Construction checks shape, Hermiticity and trace, all in O(n²).
/// Positivity needs a spectrum, so it is checked by the spectral routines
/// that compute one anyway (entropies, divergences).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

pub(crate) fn check_dims(dims: &[usize], order: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::dim(format!("invalid subsystem dimensions {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod != order {
        return Err(Error::dim(format!(
            "subsystem dimensions {dims:?} multiply to {prod}, matrix order is {order}"
        )));
    }
    Ok(())
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::dim(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        check_dims(&dims, mat.nrows())?;
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                if !(mat[(i, j)].re.is_finite() && mat[(i, j)].im.is_finite()) {
                    return Err(Error::invalid(format!("non-finite entry at ({i}, {j})")));
                }
            }
        }
        let defect = hermiticity_defect(&mat);
        if defect > HERMITIAN_TOL {
            return Err(Error::invalid(format!("matrix is not Hermitian (defect {defect:e})")));
        }
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::invalid(format!("trace is {tr}, expected 1")));
        }
        Ok(Self { mat, dims })
    }

    /// Hermitizes and divides by the trace before validating.
    pub fn from_unnormalized(mut mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::dim("density matrix must be square"));
        }
        hermitize(&mut mat);
        let tr = trace(&mat).re;
        if !(tr > 0.0 && tr.is_finite()) {
            return Err(Error::invalid(format!("cannot normalize matrix with trace {tr}")));
        }
        let inv = 1.0 / tr;
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                mat[(i, j)] *= inv;
            }
        }
        Self::new(mat, dims)
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), mat.nrows());
        Self { mat, dims }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        let mut mat = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            mat[(i, i)] = C64::new(1.0 / n as f64, 0.0);
        }
        Self { mat, dims }
    }

    /// `|ψ><ψ|` for a normalized vector.
    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, psi.len())?;
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("state vector has norm {norm}")));
        }
        let n = psi.len();
        let mat = ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
        Ok(Self { mat, dims })
    }

    /// `|i><i|` on the given dims.
    pub fn basis(index: usize, dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if index >= n {
            return Err(Error::dim(format!("basis index {index} out of range for order {n}")));
        }
        let mut psi = vec![C64::new(0.0, 0.0); n];
        psi[index] = C64::new(1.0, 0.0);
        Self::pure(&psi, dims)
    }

    /// The maximally entangled state `ψ₊ = Σ_ij |ii><jj| / d` on `[d, d]`.
    pub fn max_entangled(d: usize) -> Self {
        let n = d * d;
        let mut mat = ComplexMatrix::zeros(n, n);
        let w = C64::new(1.0 / d as f64, 0.0);
        for i in 0..d {
            for j in 0..d {
                mat[(i * d + i, j * d + j)] = w;
            }
        }
        Self { mat, dims: vec![d, d] }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.mat.nrows()
    }

    /// Same matrix, different subsystem split (the product must not change).
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.order())?;
        Ok(Self { mat: self.mat, dims })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mat = super::tensor(&self.mat, &other.mat);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { mat, dims }
    }

    /// Sorted (ascending) eigenvalues after checking positivity.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = super::herm_eigvals(&self.mat)?;
        validated_spectrum(eig)
    }
}

pub(crate) fn validated_spectrum(mut eig: Vec<f64>) -> Result<Vec<f64>> {
    if let Some(&min) = eig.first() {
        if min < -super::PSD_TOL {
            return Err(Error::invalid(format!("matrix is not positive semidefinite (eigenvalue {min:e})")));
        }
    }
    for x in eig.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    Ok(eig)
}

/// Split of a system's subsystems into two disjoint, covering groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// `left` lists subsystem indices of one side; the rest form the other side.
    pub fn new(left: &[usize], n_subsystems: usize) -> Result<Self> {
        let mut l = left.to_vec();
        l.sort_unstable();
        l.dedup();
        if l.len() != left.len() {
            return Err(Error::dim("bipartition repeats a subsystem"));
        }
        if l.is_empty() || l.len() >= n_subsystems {
            return Err(Error::dim("both sides of a bipartition must be nonempty"));
        }
        if let Some(&bad) = l.iter().find(|&&k| k >= n_subsystems) {
            return Err(Error::dim(format!("subsystem {bad} out of range for {n_subsystems} subsystems")));
        }
        let right = (0..n_subsystems).filter(|k| !l.contains(k)).collect();
        Ok(Self { left: l, right })
    }

    /// Both sides given explicitly; they must partition `0..n_subsystems`.
    pub fn explicit(left: &[usize], right: &[usize], n_subsystems: usize) -> Result<Self> {
        let cut = Self::new(left, n_subsystems)?;
        let mut r = right.to_vec();
        r.sort_unstable();
        if r != cut.right {
            return Err(Error::dim(format!(
                "{left:?} and {right:?} do not partition {n_subsystems} subsystems"
            )));
        }
        Ok(cut)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn n_subsystems(&self) -> usize {
        self.left.len() + self.right.len()
    }
}
