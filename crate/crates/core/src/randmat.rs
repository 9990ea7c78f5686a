//! Seeded samplers for the random matrix ensembles used by the experiments.
//!
//! Every sampler is a pure function of its parameters and a [`RandomStream`].
//! A stream is identified by `(master_seed, experiment label, sample index)`
//! and hashed into a ChaCha12 key, so samples can be drawn in any order or in
//! parallel and still reproduce bit for bit.

use crate::qlinalg::{gram, DensityMatrix};
use crate::{ComplexMatrix, Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Identifies one reproducible random sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    pub master_seed: u64,
    pub experiment: String,
    pub index: u64,
}

impl RandomStream {
    pub fn new(master_seed: u64, experiment: impl Into<String>, index: u64) -> Self {
        Self { master_seed, experiment: experiment.into(), index }
    }

    /// 256-bit stream key: SHA-256 over a domain tag, the seed, the
    /// length-prefixed label and the index.
    pub fn key(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"pbits/stream/v1");
        h.update(self.master_seed.to_le_bytes());
        h.update((self.experiment.len() as u64).to_le_bytes());
        h.update(self.experiment.as_bytes());
        h.update(self.index.to_le_bytes());
        h.finalize().into()
    }

    pub fn rng(&self) -> ChaCha12Rng {
        ChaCha12Rng::from_seed(self.key())
    }

    /// A derived stream for a named sub-draw (same seed and index).
    pub fn child(&self, tag: &str) -> RandomStream {
        RandomStream {
            master_seed: self.master_seed,
            experiment: format!("{}/{}", self.experiment, tag),
            index: self.index,
        }
    }
}

/// Shape and Dyson index of a Ginibre matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GinibreSpec {
    pub rows: usize,
    pub cols: usize,
    pub beta: u8,
}

impl GinibreSpec {
    pub fn new(rows: usize, cols: usize, beta: u8) -> Result<Self> {
        let spec = Self { rows, cols, beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn complex(rows: usize, cols: usize) -> Self {
        Self { rows, cols, beta: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta != 1 && self.beta != 2 {
            return Err(Error::UnsupportedEnsemble(self.beta));
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::dim(format!("Ginibre shape {}x{} is empty", self.rows, self.cols)));
        }
        Ok(())
    }
}

/// Entries filled column by column; real and imaginary parts are
/// independent `N(0, 1/β)` (no imaginary part for `β = 1`).
pub fn ginibre_with<R: Rng + ?Sized>(rng: &mut R, spec: GinibreSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let mut g = ComplexMatrix::zeros(spec.rows, spec.cols);
    match spec.beta {
        1 => {
            for j in 0..spec.cols {
                for i in 0..spec.rows {
                    let x: f64 = StandardNormal.sample(rng);
                    g[(i, j)] = C64::new(x, 0.0);
                }
            }
        }
        _ => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for j in 0..spec.cols {
                for i in 0..spec.rows {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    g[(i, j)] = C64::new(s * re, s * im);
                }
            }
        }
    }
    Ok(g)
}

pub fn ginibre(spec: GinibreSpec, stream: &RandomStream) -> Result<ComplexMatrix> {
    ginibre_with(&mut stream.rng(), spec)
}

/// `W = G G†` for a `d × K·d` Ginibre `G`.
pub fn wishart(d: usize, k: usize, beta: u8, stream: &RandomStream) -> Result<ComplexMatrix> {
    if d == 0 || k == 0 {
        return Err(Error::dim("Wishart needs d >= 1 and K >= 1"));
    }
    let g = ginibre(GinibreSpec::new(d, k * d, beta)?, stream)?;
    Ok(gram(g.as_ref()))
}

/// A Haar unitary `U = Q·diag(r_ii / |r_ii|)` kept in factored form: the
/// Householder reflectors of `Q` plus the column phases.
///
/// Applying `U` to a matrix costs about as much as forming `U`, so large
/// products `U·M` skip the explicit unitary and one dense multiplication.
#[derive(Clone, Debug)]
pub struct HaarFactor {
    basis: ComplexMatrix,
    coeff: ComplexMatrix,
    phases: Vec<C64>,
}

impl HaarFactor {
    /// QR of a complex Ginibre `d × d` matrix; `r_ii = 0` (probability zero)
    /// keeps phase 1.
    pub fn sample_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::dim("unitary dimension must be positive"));
        }
        let z = ginibre_with(rng, GinibreSpec::complex(d, d))?;
        let qr = z.qr();
        let r = qr.R();
        let phases = (0..d)
            .map(|j| {
                let rjj = r[(j, j)];
                let norm = rjj.norm();
                if norm > 0.0 { rjj / norm } else { C64::new(1.0, 0.0) }
            })
            .collect();
        Ok(Self { basis: qr.Q_basis().to_owned(), coeff: qr.Q_coeff().to_owned(), phases })
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// Replaces `m` by `U·m`.
    pub fn apply_left(&self, m: &mut ComplexMatrix) -> Result<()> {
        use faer::dyn_stack::{MemBuffer, MemStack};
        use faer::linalg::householder;
        let d = self.dim();
        if m.nrows() != d {
            return Err(Error::dim(format!("cannot apply a {d}x{d} unitary to {} rows", m.nrows())));
        }
        for (i, p) in self.phases.iter().enumerate() {
            for j in 0..m.ncols() {
                m[(i, j)] *= p;
            }
        }
        let mut buf = MemBuffer::new(
            householder::apply_block_householder_sequence_on_the_left_in_place_scratch::<C64>(
                d,
                self.coeff.nrows(),
                m.ncols(),
            ),
        );
        householder::apply_block_householder_sequence_on_the_left_in_place_with_conj(
            self.basis.as_ref(),
            self.coeff.as_ref(),
            faer::Conj::No,
            m.as_mut(),
            faer::get_global_parallelism(),
            MemStack::new(&mut buf),
        );
        Ok(())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut u = ComplexMatrix::identity(self.dim(), self.dim());
        self.apply_left(&mut u).expect("identity has matching shape");
        u
    }
}

/// Haar unitary from the QR decomposition of a complex Ginibre matrix, with
/// column `i` of `Q` multiplied by `r_ii / |r_ii|`.
pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<ComplexMatrix> {
    Ok(HaarFactor::sample_with(rng, d)?.to_matrix())
}

pub fn haar_unitary(d: usize, stream: &RandomStream) -> Result<ComplexMatrix> {
    haar_unitary_with(&mut stream.rng(), d)
}

pub fn random_pure_state_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<Vec<C64>> {
    if d == 0 {
        return Err(Error::dim("state dimension must be positive"));
    }
    let g = ginibre_with(rng, GinibreSpec::complex(d, 1))?;
    let norm = (0..d).map(|i| g[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
    Ok((0..d).map(|i| g[(i, 0)] / norm).collect())
}

/// Haar-random unit vector.
pub fn random_pure_state(d: usize, stream: &RandomStream) -> Result<Vec<C64>> {
    random_pure_state_with(&mut stream.rng(), d)
}

/// Factor `F = G / ‖G‖_F` of an induced-measure state `ρ = F F†`, with `G`
/// a `d × K·d` complex Ginibre matrix.
pub fn density_factor_with<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Result<ComplexMatrix> {
    if d == 0 || k == 0 {
        return Err(Error::dim("random state needs d >= 1 and K >= 1"));
    }
    let mut g = ginibre_with(rng, GinibreSpec::complex(d, k * d))?;
    let norm = g.norm_l2();
    let inv = 1.0 / norm;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            g[(i, j)] *= inv;
        }
    }
    Ok(g)
}

pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Result<DensityMatrix> {
    let f = density_factor_with(rng, d, k)?;
    DensityMatrix::from_unnormalized(gram(f.as_ref()), vec![d])
}

/// `ρ = G G† / Tr(G G†)`; `K = 1` is the Hilbert-Schmidt ensemble.
pub fn random_density(d: usize, k: usize, stream: &RandomStream) -> Result<DensityMatrix> {
    random_density_with(&mut stream.rng(), d, k)
}

/// Mixture of `m` products of Haar-random pure states with flat-Dirichlet
/// weights, on dims `[dA, dB]`.
pub fn random_separable_with<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize, m: usize) -> Result<DensityMatrix> {
    if m == 0 {
        return Err(Error::dim("separable mixture needs at least one term"));
    }
    let n = da * db;
    let mut factor = ComplexMatrix::zeros(n, m);
    for k in 0..m {
        let a = random_pure_state_with(rng, da)?;
        let b = random_pure_state_with(rng, db)?;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                factor[(i * db + j, k)] = ai * bj;
            }
        }
    }
    let weights: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    for (k, w) in weights.iter().enumerate() {
        let s = (w / total).sqrt();
        for i in 0..n {
            factor[(i, k)] *= s;
        }
    }
    DensityMatrix::from_unnormalized(gram(factor.as_ref()), vec![da, db])
}

pub fn random_separable(da: usize, db: usize, m: usize, stream: &RandomStream) -> Result<DensityMatrix> {
    random_separable_with(&mut stream.rng(), da, db, m)
}

/// [`random_separable`] with the default `dA · dB` product terms.
pub fn random_separable_default(da: usize, db: usize, stream: &RandomStream) -> Result<DensityMatrix> {
    random_separable(da, db, da * db, stream)
}
