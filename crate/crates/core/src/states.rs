//! Private states, independent bits and the transforms acting on them.
//!
//! Layouts: a private state with key dimension `d_k` lives on
//! `[d_k, d_k, shield...]` ordered `A, B, A', B'`; an independent bit lives on
//! `[2, d_s, d_s]` ordered `A, A', B'`.
//!
//! Random and structured states use the gauge `U₀ = I`, `U₁ = U`, so the
//! off-diagonal key block of a pbit is `X/2` with `X = σU†`. A generator
//! `(U₀, U₁, σ)` in any other gauge is the same state as
//! `(I, U₁U₀†, U₀σU₀†)`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::qlinalg::io::MatrixRecord;
use crate::qlinalg::{
    c, conjugate_by, gram, herm_eigvals, matmul, partial_trace_of_product, partial_trace_op, polar,
    trace_norm, unitarity_defect, validated_spectrum, DensityMatrix,
};
use crate::randmat::{density_factor_with, HaarFactor, RandomStream};
use crate::{ComplexMatrix, Error, Result, C64};

const UNITARY_TOL: f64 = 1e-10;
/// Absolute tolerance on block norms for the key-correlated predicate.
pub const KEY_CORRELATED_TOL: f64 = 1e-8;

fn check_unitary(u: &ComplexMatrix, order: usize) -> Result<()> {
    if u.nrows() != order || u.ncols() != order {
        return Err(Error::dim(format!(
            "expected a {order}x{order} unitary, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > UNITARY_TOL {
        return Err(Error::invalid(format!("matrix is not unitary (defect {defect:e})")));
    }
    Ok(())
}

/// Controlled unitary `τ = Σ |ij⟩⟨ij| ⊗ U_ij` on key ⊗ shield.
///
/// A diagonal family only names `U_ii`; off-diagonal labels act as the
/// identity.
#[derive(Clone, Debug)]
pub struct Twisting {
    key_dims: (usize, usize),
    shield_dims: Vec<usize>,
    unitaries: Vec<ComplexMatrix>,
    diagonal: bool,
}

impl Twisting {
    pub fn diagonal(unitaries: Vec<ComplexMatrix>, shield_dims: Vec<usize>) -> Result<Self> {
        let d_k = unitaries.len();
        if d_k == 0 {
            return Err(Error::dim("twisting needs at least one unitary"));
        }
        Self::build((d_k, d_k), unitaries, shield_dims, true)
    }

    /// Family indexed by `(i, j)` at position `i * d_B + j`.
    pub fn full(key_dims: (usize, usize), unitaries: Vec<ComplexMatrix>, shield_dims: Vec<usize>) -> Result<Self> {
        if unitaries.len() != key_dims.0 * key_dims.1 || unitaries.is_empty() {
            return Err(Error::dim(format!(
                "full twisting on {}x{} key labels needs {} unitaries, got {}",
                key_dims.0,
                key_dims.1,
                key_dims.0 * key_dims.1,
                unitaries.len()
            )));
        }
        Self::build(key_dims, unitaries, shield_dims, false)
    }

    pub fn trivial(d_k: usize, shield_dims: Vec<usize>) -> Result<Self> {
        let n: usize = shield_dims.iter().product();
        Self::diagonal(vec![ComplexMatrix::identity(n, n); d_k], shield_dims)
    }

    fn build(
        key_dims: (usize, usize),
        unitaries: Vec<ComplexMatrix>,
        shield_dims: Vec<usize>,
        diagonal: bool,
    ) -> Result<Self> {
        if shield_dims.is_empty() || shield_dims.contains(&0) {
            return Err(Error::dim(format!("invalid shield dimensions {shield_dims:?}")));
        }
        let n: usize = shield_dims.iter().product();
        for u in &unitaries {
            check_unitary(u, n)?;
        }
        Ok(Self { key_dims, shield_dims, unitaries, diagonal })
    }

    pub fn key_dims(&self) -> (usize, usize) {
        self.key_dims
    }

    pub fn shield_dims(&self) -> &[usize] {
        &self.shield_dims
    }

    pub fn shield_order(&self) -> usize {
        self.shield_dims.iter().product()
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// `U_ij`, or `None` where the family acts as the identity.
    pub fn unitary(&self, i: usize, j: usize) -> Option<&ComplexMatrix> {
        if self.diagonal {
            (i == j).then(|| &self.unitaries[i])
        } else {
            Some(&self.unitaries[i * self.key_dims.1 + j])
        }
    }

    fn check_layout(&self, m: &ComplexMatrix) -> Result<()> {
        let order = self.key_dims.0 * self.key_dims.1 * self.shield_order();
        if m.nrows() != order || m.ncols() != order {
            return Err(Error::dim(format!(
                "twisting acts on order {order}, operator has order {}",
                m.nrows()
            )));
        }
        Ok(())
    }

    /// `τ m τ†`, or `τ† m τ` when `inverse` is set.
    pub fn apply(&self, m: &ComplexMatrix, inverse: bool) -> Result<ComplexMatrix> {
        self.check_layout(m)?;
        let n = self.shield_order();
        let (da, db) = self.key_dims;
        let labels: Vec<(usize, usize)> = (0..da).flat_map(|i| (0..db).map(move |j| (i, j))).collect();
        let mut out = ComplexMatrix::zeros(m.nrows(), m.ncols());
        for (r, &(i, j)) in labels.iter().enumerate() {
            for (s, &(k, l)) in labels.iter().enumerate() {
                let block = m.as_ref().submatrix(r * n, s * n, n, n);
                let left = match (self.unitary(i, j), inverse) {
                    (None, _) => block.to_owned(),
                    (Some(u), false) => matmul(u.as_ref(), block),
                    (Some(u), true) => matmul(u.adjoint(), block),
                };
                let full = match (self.unitary(k, l), inverse) {
                    (None, _) => left,
                    (Some(u), false) => matmul(left.as_ref(), u.adjoint()),
                    (Some(u), true) => matmul(left.as_ref(), u.as_ref()),
                };
                out.as_mut().submatrix_mut(r * n, s * n, n, n).copy_from(&full);
            }
        }
        Ok(out)
    }
}

/// `(1/d_k) Σ_ij |ii⟩⟨jj| ⊗ U_i σ U_j†` on `[d_k, d_k, shield...]`.
pub fn private_state(d_k: usize, twisting: &Twisting, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    if !twisting.is_diagonal() || twisting.key_dims() != (d_k, d_k) {
        return Err(Error::dim(format!("private state with d_k = {d_k} needs a diagonal twisting of size {d_k}")));
    }
    if sigma.dims() != twisting.shield_dims() {
        return Err(Error::dim(format!(
            "sigma has dims {:?}, twisting acts on {:?}",
            sigma.dims(),
            twisting.shield_dims()
        )));
    }
    let n = sigma.order();
    let us: Vec<ComplexMatrix> = twisting
        .unitaries()
        .iter()
        .map(|u| matmul(u.as_ref(), sigma.matrix().as_ref()))
        .collect();
    let mut out = ComplexMatrix::zeros(d_k * d_k * n, d_k * d_k * n);
    let scale = c(1.0 / d_k as f64);
    for i in 0..d_k {
        for j in 0..d_k {
            let u_j = &twisting.unitaries()[j];
            let block = matmul(us[i].as_ref(), u_j.adjoint());
            let (r, s) = ((i * d_k + i) * n, (j * d_k + j) * n);
            let mut dst = out.as_mut().submatrix_mut(r, s, n, n);
            for col in 0..n {
                for row in 0..n {
                    dst[(row, col)] = block[(row, col)] * scale;
                }
            }
        }
    }
    let mut dims = vec![d_k, d_k];
    dims.extend_from_slice(sigma.dims());
    DensityMatrix::from_unnormalized(out, dims)
}

/// Dephases the listed subsystems in the computational basis.
pub fn key_attacked(state: &DensityMatrix, key_subsystems: &[usize]) -> Result<DensityMatrix> {
    let dims = state.dims();
    for &k in key_subsystems {
        if k >= dims.len() {
            return Err(Error::dim(format!("subsystem {k} out of range for {} subsystems", dims.len())));
        }
    }
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let order = state.order();
    let signature: Vec<Vec<usize>> = (0..order)
        .map(|i| key_subsystems.iter().map(|&k| (i / strides[k]) % dims[k]).collect())
        .collect();
    let mut m = state.matrix().clone();
    for j in 0..order {
        for i in 0..order {
            if signature[i] != signature[j] {
                m[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(m, dims.to_vec()))
}

/// Inverse twisting followed by the trace over the shield; output on the key
/// dims `[d_A, d_B]`.
pub fn privacy_squeeze(state: &DensityMatrix, twisting: &Twisting) -> Result<DensityMatrix> {
    twisting.check_layout(state.matrix())?;
    let (da, db) = twisting.key_dims();
    let n = twisting.shield_order();
    let labels: Vec<(usize, usize)> = (0..da).flat_map(|i| (0..db).map(move |j| (i, j))).collect();
    let k = labels.len();
    let m = state.matrix();
    let mut out = ComplexMatrix::zeros(k, k);
    // Entry (r, s) is Tr(U_r† M_rs U_s) = Tr(M_rs · U_s U_r†).
    for (r, &(i, j)) in labels.iter().enumerate() {
        for (s, &(p, q)) in labels.iter().enumerate().skip(r) {
            let block = m.as_ref().submatrix(r * n, s * n, n, n);
            let ur = twisting.unitary(i, j);
            let us = twisting.unitary(p, q);
            let value = match (us, ur) {
                (None, None) => (0..n).map(|t| block[(t, t)]).sum(),
                (Some(a), None) => trace_of_product(block, a.as_ref()),
                (None, Some(b)) => {
                    let ad = b.adjoint().to_owned();
                    trace_of_product(block, ad.as_ref())
                }
                (Some(a), Some(b)) => {
                    let prod = matmul(a.as_ref(), b.adjoint());
                    trace_of_product(block, prod.as_ref())
                }
            };
            out[(r, s)] = value;
            out[(s, r)] = value.conj();
        }
    }
    DensityMatrix::from_unnormalized(out, vec![da, db])
}

/// `Tr(a b)` in O(n²).
fn trace_of_product(a: faer::MatRef<'_, C64>, b: faer::MatRef<'_, C64>) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Generating data `(U, σ)` shared by private states and independent bits.
#[derive(Clone, Debug)]
struct Generator {
    d_s: usize,
    sigma: DensityMatrix,
    /// `F` with `σ = F F†`, when the state was sampled.
    factor: Option<ComplexMatrix>,
    haar: Option<HaarFactor>,
    unitary: OnceLock<ComplexMatrix>,
    twisted_factor: OnceLock<ComplexMatrix>,
}

impl Generator {
    fn dense(unitary: ComplexMatrix, sigma: DensityMatrix) -> Result<Self> {
        let d_s = shield_side(&sigma)?;
        check_unitary(&unitary, sigma.order())?;
        Ok(Self {
            d_s,
            sigma,
            factor: None,
            haar: None,
            unitary: OnceLock::from(unitary),
            twisted_factor: OnceLock::new(),
        })
    }

    fn from_generators(u0: &ComplexMatrix, u1: &ComplexMatrix, sigma: &DensityMatrix) -> Result<Self> {
        let n = sigma.order();
        check_unitary(u0, n)?;
        check_unitary(u1, n)?;
        let rotated = conjugate_by(u0.as_ref(), sigma.matrix().as_ref());
        let sigma = DensityMatrix::from_unnormalized(rotated, sigma.dims().to_vec())?;
        Self::dense(matmul(u1.as_ref(), u0.adjoint()), sigma)
    }

    /// Draws `F` (Hilbert-Schmidt factor) first, then the Haar unitary.
    fn sampled(d_s: usize, stream: &RandomStream) -> Result<Self> {
        if d_s < 2 {
            return Err(Error::dim(format!("shield dimension must be at least 2, got {d_s}")));
        }
        let n = d_s * d_s;
        let mut rng = stream.rng();
        let factor = density_factor_with(&mut rng, n, 1)?;
        let haar = HaarFactor::sample_with(&mut rng, n)?;
        let sigma = DensityMatrix::from_unnormalized(gram(factor.as_ref()), vec![d_s, d_s])?;
        Ok(Self {
            d_s,
            sigma,
            factor: Some(factor),
            haar: Some(haar),
            unitary: OnceLock::new(),
            twisted_factor: OnceLock::new(),
        })
    }

    fn unitary(&self) -> &ComplexMatrix {
        self.unitary.get_or_init(|| {
            self.haar
                .as_ref()
                .expect("generator holds either a dense or a factored unitary")
                .to_matrix()
        })
    }

    /// `U F`.
    fn twisted_factor(&self) -> Option<&ComplexMatrix> {
        let f = self.factor.as_ref()?;
        Some(self.twisted_factor.get_or_init(|| match &self.haar {
            Some(h) => {
                let mut uf = f.clone();
                h.apply_left(&mut uf).expect("factor rows match the unitary");
                uf
            }
            None => matmul(self.unitary().as_ref(), f.as_ref()),
        }))
    }

    /// `U σ U†`.
    fn twisted_sigma(&self) -> ComplexMatrix {
        match self.twisted_factor() {
            Some(uf) => gram(uf.as_ref()),
            None => conjugate_by(self.unitary().as_ref(), self.sigma.matrix().as_ref()),
        }
    }

    /// `X = σ U†`.
    fn x(&self) -> ComplexMatrix {
        matmul(self.sigma.matrix().as_ref(), self.unitary().adjoint())
    }

    fn dims(&self) -> [usize; 2] {
        [self.d_s, self.d_s]
    }

    /// `(Tr_other σ, Tr_other UσU†)` keeping shield subsystem `keep`.
    fn shield_marginals(&self, keep: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let dims = self.dims();
        match (self.factor.as_ref(), self.twisted_factor()) {
            (Some(f), Some(uf)) => Ok((
                partial_trace_of_product(f.as_ref(), f.as_ref(), &dims, &[keep])?,
                partial_trace_of_product(uf.as_ref(), uf.as_ref(), &dims, &[keep])?,
            )),
            _ => Ok((
                partial_trace_op(self.sigma.matrix(), &dims, &[keep])?.0,
                partial_trace_op(&self.twisted_sigma(), &dims, &[keep])?.0,
            )),
        }
    }

    /// `Tr_other(σ U†)` keeping shield subsystem `keep`.
    fn cross_marginal(&self, keep: usize) -> Result<ComplexMatrix> {
        let dims = self.dims();
        match (self.factor.as_ref(), self.twisted_factor()) {
            (Some(f), Some(uf)) => partial_trace_of_product(f.as_ref(), uf.as_ref(), &dims, &[keep]),
            _ => Ok(partial_trace_op(&self.x(), &dims, &[keep])?.0),
        }
    }

    fn sigma_spectrum(&self) -> Result<Vec<f64>> {
        validated_spectrum(herm_eigvals(self.sigma.matrix())?)
    }

    fn record(&self, kind: &str, d_k: usize) -> GeneratorRecord {
        GeneratorRecord {
            kind: kind.to_string(),
            d_k,
            d_s: self.d_s,
            unitary: MatrixRecord::from_matrix(self.unitary(), &self.dims()),
            sigma: MatrixRecord::from(&self.sigma),
        }
    }
}

fn shield_side(sigma: &DensityMatrix) -> Result<usize> {
    match sigma.dims() {
        [a, b] if a == b && *a >= 1 => Ok(*a),
        other => Err(Error::dim(format!("sigma must live on d_s ⊗ d_s, got dims {other:?}"))),
    }
}

/// Assembles `[[a, b], [b†, d]]` (each block `n × n`) scaled by `s`.
fn two_by_two(a: &ComplexMatrix, b: Option<&ComplexMatrix>, d: &ComplexMatrix, s: f64) -> ComplexMatrix {
    let n = a.nrows();
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            out[(i, j)] = a[(i, j)] * s;
            out[(n + i, n + j)] = d[(i, j)] * s;
            if let Some(b) = b {
                out[(i, n + j)] = b[(i, j)] * s;
                out[(n + j, i)] = b[(i, j)].conj() * s;
            }
        }
    }
    out
}

/// Serialized form of a pbit or ibit generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub kind: String,
    pub d_k: usize,
    pub d_s: usize,
    pub unitary: MatrixRecord,
    pub sigma: MatrixRecord,
}

impl GeneratorRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn parts(&self, kind: &str) -> Result<(ComplexMatrix, DensityMatrix)> {
        if self.kind != kind || self.d_k != 2 {
            return Err(Error::invalid(format!(
                "expected a {kind} record with d_k = 2, got {} with d_k = {}",
                self.kind, self.d_k
            )));
        }
        let sigma = self.sigma.to_density()?;
        if sigma.dims() != [self.d_s, self.d_s] {
            return Err(Error::dim("sigma dims do not match d_s"));
        }
        Ok((self.unitary.to_matrix()?, sigma))
    }
}

/// A private bit (`d_k = 2`) generated by `(U, σ)`.
///
/// Reduced states and the mutual information are computed from `σ` and `U`
/// without building the full `4 d_s² × 4 d_s²` state, which is only formed
/// on first call to [`PrivateState::state`].
#[derive(Clone, Debug)]
pub struct PrivateState {
    gen: Generator,
    state: OnceLock<DensityMatrix>,
}

impl PrivateState {
    pub fn new(unitary: ComplexMatrix, sigma: DensityMatrix) -> Result<Self> {
        Ok(Self { gen: Generator::dense(unitary, sigma)?, state: OnceLock::new() })
    }

    /// Pbit with twisting `{U₀, U₁}`, brought to the `U₀ = I` gauge.
    pub fn from_generators(u0: &ComplexMatrix, u1: &ComplexMatrix, sigma: &DensityMatrix) -> Result<Self> {
        Ok(Self { gen: Generator::from_generators(u0, u1, sigma)?, state: OnceLock::new() })
    }

    pub fn d_k(&self) -> usize {
        2
    }

    pub fn d_s(&self) -> usize {
        self.gen.d_s
    }

    pub fn sigma(&self) -> &DensityMatrix {
        &self.gen.sigma
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        self.gen.unitary()
    }

    /// `X = σ U†`, the off-diagonal key block times two.
    pub fn x(&self) -> ComplexMatrix {
        self.gen.x()
    }

    pub fn twisting(&self) -> Twisting {
        let n = self.gen.sigma.order();
        Twisting {
            key_dims: (2, 2),
            shield_dims: self.gen.dims().to_vec(),
            unitaries: vec![ComplexMatrix::identity(n, n), self.unitary().clone()],
            diagonal: true,
        }
    }

    /// Full state on `[2, 2, d_s, d_s]`.
    pub fn state(&self) -> &DensityMatrix {
        self.state.get_or_init(|| {
            let n = self.gen.sigma.order();
            let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
            let sigma = self.gen.sigma.matrix();
            let x = self.gen.x();
            let twisted = self.gen.twisted_sigma();
            let (o, t) = (0, 3 * n);
            for j in 0..n {
                for i in 0..n {
                    m[(o + i, o + j)] = sigma[(i, j)] * 0.5;
                    m[(o + i, t + j)] = x[(i, j)] * 0.5;
                    m[(t + j, o + i)] = x[(i, j)].conj() * 0.5;
                    m[(t + i, t + j)] = twisted[(i, j)] * 0.5;
                }
            }
            DensityMatrix::new_unchecked(m, vec![2, 2, self.gen.d_s, self.gen.d_s])
        })
    }

    /// `γ_AA'` on `[2, d_s]`.
    pub fn reduced_aa(&self) -> Result<DensityMatrix> {
        let (s0, s1) = self.gen.shield_marginals(0)?;
        DensityMatrix::from_unnormalized(two_by_two(&s0, None, &s1, 0.5), vec![2, self.gen.d_s])
    }

    /// `γ_BB'` on `[2, d_s]`.
    pub fn reduced_bb(&self) -> Result<DensityMatrix> {
        let (s0, s1) = self.gen.shield_marginals(1)?;
        DensityMatrix::from_unnormalized(two_by_two(&s0, None, &s1, 0.5), vec![2, self.gen.d_s])
    }

    /// `γ̂ = ½(|00⟩⟨00| ⊗ σ + |11⟩⟨11| ⊗ UσU†)` on `[2, 2, d_s, d_s]`.
    pub fn key_attacked(&self) -> DensityMatrix {
        let n = self.gen.sigma.order();
        let mut m = ComplexMatrix::zeros(4 * n, 4 * n);
        let sigma = self.gen.sigma.matrix();
        let twisted = self.gen.twisted_sigma();
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = sigma[(i, j)] * 0.5;
                m[(3 * n + i, 3 * n + j)] = twisted[(i, j)] * 0.5;
            }
        }
        DensityMatrix::new_unchecked(m, vec![2, 2, self.gen.d_s, self.gen.d_s])
    }

    /// Eigenvalues of `σ`, which are also the nonzero eigenvalues of `γ`.
    pub fn sigma_spectrum(&self) -> Result<Vec<f64>> {
        self.gen.sigma_spectrum()
    }

    /// `S(γ) = S(σ)`.
    pub fn entropy(&self) -> Result<f64> {
        Ok(crate::qlinalg::entropy_of_spectrum(&self.sigma_spectrum()?))
    }

    /// `I(AA':BB') = S(AA') + S(BB') − S(σ)`.
    pub fn mutual_information(&self) -> Result<f64> {
        let s_aa = crate::qlinalg::von_neumann_entropy(&self.reduced_aa()?)?;
        let s_bb = crate::qlinalg::von_neumann_entropy(&self.reduced_bb()?)?;
        Ok(s_aa + s_bb - self.entropy()?)
    }

    pub fn to_record(&self) -> GeneratorRecord {
        self.gen.record("pbit", 2)
    }

    pub fn from_record(record: &GeneratorRecord) -> Result<Self> {
        let (u, sigma) = record.parts("pbit")?;
        Self::new(u, sigma)
    }
}

/// Rebuilds the pbit of an operator `X` with `‖X‖₁ = 1` via `X = σ U†`
/// (`σ = √(XX†)`, `U†` the unitary polar factor).
pub fn pbit_from_x(x: &ComplexMatrix) -> Result<PrivateState> {
    let n = x.nrows();
    if x.ncols() != n {
        return Err(Error::dim("X must be square"));
    }
    let d_s = (n as f64).sqrt().round() as usize;
    if d_s * d_s != n {
        return Err(Error::dim(format!("order {n} of X is not a square d_s²")));
    }
    let norm = trace_norm(x)?;
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::invalid(format!("X has trace norm {norm}, expected 1")));
    }
    let p = polar(x, true)?;
    let sigma = DensityMatrix::from_unnormalized(p.p, vec![d_s, d_s])?;
    PrivateState::new(p.w.adjoint().to_owned(), sigma)
}

/// Pbit with Hilbert-Schmidt `σ` on `d_s ⊗ d_s` and Haar `U`.
pub fn random_pbit(d_s: usize, stream: &RandomStream) -> Result<PrivateState> {
    Ok(PrivateState { gen: Generator::sampled(d_s, stream)?, state: OnceLock::new() })
}

/// Independent bit `α = ½ Σ_ij |i⟩⟨j| ⊗ U_i σ U_j†` with `U₀ = I`, `U₁ = U`.
#[derive(Clone, Debug)]
pub struct IndependentBit {
    gen: Generator,
    state: OnceLock<DensityMatrix>,
}

/// Entropies of an ibit needed by the rate formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IbitEntropies {
    /// `S(AA')`
    pub s_aa: f64,
    /// `S(B')`
    pub s_b: f64,
    /// `S(AA'B') = S(σ)`
    pub s_aab: f64,
}

impl IndependentBit {
    pub fn new(unitary: ComplexMatrix, sigma: DensityMatrix) -> Result<Self> {
        Ok(Self { gen: Generator::dense(unitary, sigma)?, state: OnceLock::new() })
    }

    pub fn from_generators(u0: &ComplexMatrix, u1: &ComplexMatrix, sigma: &DensityMatrix) -> Result<Self> {
        Ok(Self { gen: Generator::from_generators(u0, u1, sigma)?, state: OnceLock::new() })
    }

    pub fn d_s(&self) -> usize {
        self.gen.d_s
    }

    pub fn sigma(&self) -> &DensityMatrix {
        &self.gen.sigma
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        self.gen.unitary()
    }

    pub fn x(&self) -> ComplexMatrix {
        self.gen.x()
    }

    /// Full state on `[2, d_s, d_s]`.
    pub fn state(&self) -> &DensityMatrix {
        self.state.get_or_init(|| {
            let m = two_by_two(self.gen.sigma.matrix(), Some(&self.gen.x()), &self.gen.twisted_sigma(), 0.5);
            DensityMatrix::new_unchecked(m, vec![2, self.gen.d_s, self.gen.d_s])
        })
    }

    /// `α_AA' = Tr_B' α` on `[2, d_s]`.
    pub fn reduced_aa(&self) -> Result<DensityMatrix> {
        let (s0, s1) = self.gen.shield_marginals(0)?;
        let cross = self.gen.cross_marginal(0)?;
        DensityMatrix::from_unnormalized(two_by_two(&s0, Some(&cross), &s1, 0.5), vec![2, self.gen.d_s])
    }

    /// `α_B'` on `[d_s]`.
    pub fn reduced_b(&self) -> Result<DensityMatrix> {
        let (s0, s1) = self.gen.shield_marginals(1)?;
        let mut m = s0;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                m[(i, j)] = (m[(i, j)] + s1[(i, j)]) * 0.5;
            }
        }
        DensityMatrix::from_unnormalized(m, vec![self.gen.d_s])
    }

    pub fn sigma_spectrum(&self) -> Result<Vec<f64>> {
        self.gen.sigma_spectrum()
    }

    pub fn entropies(&self) -> Result<IbitEntropies> {
        use crate::qlinalg::{entropy_of_spectrum, von_neumann_entropy};
        Ok(IbitEntropies {
            s_aa: von_neumann_entropy(&self.reduced_aa()?)?,
            s_b: von_neumann_entropy(&self.reduced_b()?)?,
            s_aab: entropy_of_spectrum(&self.sigma_spectrum()?),
        })
    }

    pub fn to_record(&self) -> GeneratorRecord {
        self.gen.record("ibit", 2)
    }

    pub fn from_record(record: &GeneratorRecord) -> Result<Self> {
        let (u, sigma) = record.parts("ibit")?;
        Self::new(u, sigma)
    }
}

/// Ibit with Hilbert-Schmidt `σ` on `d_s ⊗ d_s` and Haar `U`.
pub fn random_ibit(d_s: usize, stream: &RandomStream) -> Result<IndependentBit> {
    Ok(IndependentBit { gen: Generator::sampled(d_s, stream)?, state: OnceLock::new() })
}

/// Decomposition `ρ = Σ_{μν} |φ_μ⟩⟨φ_ν| ⊗ M^(μ,ν)` in the generalized Bell
/// basis `φ_(m,n) = (X^m Z^n ⊗ I)|ψ₊⟩` of the key part. Label `(m, n)` sits
/// at index `m * d_k + n`; the key-correlated family is `m = 0`.
#[derive(Clone, Debug)]
pub struct BellBlocks {
    d_k: usize,
    dims: Vec<usize>,
    blocks: Vec<ComplexMatrix>,
}

impl BellBlocks {
    pub fn d_k(&self) -> usize {
        self.d_k
    }

    pub fn labels(&self) -> Vec<(usize, usize)> {
        (0..self.d_k).flat_map(|m| (0..self.d_k).map(move |n| (m, n))).collect()
    }

    /// `M^(μ,ν)` for label indices `μ`, `ν`.
    pub fn block(&self, mu: usize, nu: usize) -> &ComplexMatrix {
        &self.blocks[mu * self.d_k * self.d_k + nu]
    }

    /// Largest Frobenius norm among blocks with `m ≠ 0` on either side.
    pub fn off_family_norm(&self) -> f64 {
        let k = self.d_k * self.d_k;
        let mut best = 0.0f64;
        for mu in 0..k {
            for nu in 0..k {
                if mu / self.d_k != 0 || nu / self.d_k != 0 {
                    best = best.max(self.block(mu, nu).norm_l2());
                }
            }
        }
        best
    }

    pub fn is_key_correlated(&self) -> bool {
        self.off_family_norm() <= KEY_CORRELATED_TOL
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.d_k;
        let n = self.blocks[0].nrows();
        let coeff = bell_coefficients(d);
        let mut out = ComplexMatrix::zeros(d * d * n, d * d * n);
        for (mu, cm) in coeff.iter().enumerate() {
            for (nu, cn) in coeff.iter().enumerate() {
                let block = self.block(mu, nu);
                for &(r, a) in cm {
                    for &(s, b) in cn {
                        let w = a * b.conj();
                        let mut dst = out.as_mut().submatrix_mut(r * n, s * n, n, n);
                        for j in 0..n {
                            for i in 0..n {
                                dst[(i, j)] += block[(i, j)] * w;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

/// Nonzero amplitudes `(key index, value)` of each `φ_(m,n)`.
fn bell_coefficients(d: usize) -> Vec<Vec<(usize, C64)>> {
    let norm = 1.0 / (d as f64).sqrt();
    let mut out = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            out.push(
                (0..d)
                    .map(|i| {
                        let phase = 2.0 * std::f64::consts::PI * ((n * i) % d) as f64 / d as f64;
                        (((i + m) % d) * d + i, C64::from_polar(norm, phase))
                    })
                    .collect(),
            );
        }
    }
    out
}

pub fn bell_block_decompose(state: &DensityMatrix, d_k: usize) -> Result<BellBlocks> {
    let dims = state.dims();
    if dims.len() < 2 || dims[0] != d_k || dims[1] != d_k {
        return Err(Error::dim(format!("state dims {dims:?} do not start with a {d_k}⊗{d_k} key")));
    }
    let n = state.order() / (d_k * d_k);
    let coeff = bell_coefficients(d_k);
    let m = state.matrix();
    let mut blocks = Vec::with_capacity(coeff.len() * coeff.len());
    for cm in &coeff {
        for cn in &coeff {
            let mut acc = ComplexMatrix::zeros(n, n);
            for &(r, a) in cm {
                for &(s, b) in cn {
                    let w = a.conj() * b;
                    let src = m.as_ref().submatrix(r * n, s * n, n, n);
                    for j in 0..n {
                        for i in 0..n {
                            acc[(i, j)] += src[(i, j)] * w;
                        }
                    }
                }
            }
            blocks.push(acc);
        }
    }
    Ok(BellBlocks { d_k, dims: dims.to_vec(), blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{max_abs_diff, tensor};
    use crate::randmat::{haar_unitary, random_density};

    fn stream(i: u64) -> RandomStream {
        RandomStream::new(3, "states-test", i)
    }

    fn dense_pbit(d_s: usize, i: u64) -> PrivateState {
        let sigma = random_density(d_s * d_s, 1, &stream(i)).unwrap().with_dims(vec![d_s, d_s]).unwrap();
        PrivateState::new(haar_unitary(d_s * d_s, &stream(1000 + i)).unwrap(), sigma).unwrap()
    }

    #[test]
    fn trivial_twisting_gives_max_entangled_times_sigma() {
        let sigma = random_density(4, 1, &stream(0)).unwrap().with_dims(vec![2, 2]).unwrap();
        let tw = Twisting::trivial(2, vec![2, 2]).unwrap();
        let gamma = private_state(2, &tw, &sigma).unwrap();
        let expected = tensor(DensityMatrix::max_entangled(2).matrix(), sigma.matrix());
        assert!(max_abs_diff(gamma.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn structured_state_matches_generic_constructor() {
        let p = dense_pbit(2, 1);
        let generic = private_state(2, &p.twisting(), p.sigma()).unwrap();
        assert!(max_abs_diff(generic.matrix(), p.state().matrix()) < 1e-14);
    }

    #[test]
    fn sampled_and_dense_paths_agree() {
        let p = random_pbit(3, &stream(5)).unwrap();
        let q = PrivateState::new(p.unitary().clone(), p.sigma().clone()).unwrap();
        assert!(max_abs_diff(p.reduced_aa().unwrap().matrix(), q.reduced_aa().unwrap().matrix()) < 1e-13);
        assert!(max_abs_diff(p.reduced_bb().unwrap().matrix(), q.reduced_bb().unwrap().matrix()) < 1e-13);
        assert!(max_abs_diff(p.state().matrix(), q.state().matrix()) < 1e-13);
        let a = random_ibit(3, &stream(6)).unwrap();
        let b = IndependentBit::new(a.unitary().clone(), a.sigma().clone()).unwrap();
        assert!(max_abs_diff(a.reduced_aa().unwrap().matrix(), b.reduced_aa().unwrap().matrix()) < 1e-13);
        assert!(max_abs_diff(a.reduced_b().unwrap().matrix(), b.reduced_b().unwrap().matrix()) < 1e-13);
    }

    #[test]
    fn privacy_squeeze_recovers_singlet() {
        let p = dense_pbit(2, 2);
        let squeezed = privacy_squeeze(p.state(), &p.twisting()).unwrap();
        let psi = DensityMatrix::max_entangled(2);
        assert!(max_abs_diff(squeezed.matrix(), psi.matrix()) < 1e-10);
    }

    #[test]
    fn twisting_apply_inverts() {
        let p = dense_pbit(2, 3);
        let tw = p.twisting();
        let back = tw.apply(&tw.apply(p.state().matrix(), true).unwrap(), false).unwrap();
        assert!(max_abs_diff(&back, p.state().matrix()) < 1e-13);
    }

    #[test]
    fn gauge_reduction_preserves_state() {
        let sigma = random_density(4, 1, &stream(7)).unwrap().with_dims(vec![2, 2]).unwrap();
        let u0 = haar_unitary(4, &stream(8)).unwrap();
        let u1 = haar_unitary(4, &stream(9)).unwrap();
        let tw = Twisting::diagonal(vec![u0.clone(), u1.clone()], vec![2, 2]).unwrap();
        let direct = private_state(2, &tw, &sigma).unwrap();
        let p = PrivateState::from_generators(&u0, &u1, &sigma).unwrap();
        assert!(max_abs_diff(direct.matrix(), p.state().matrix()) < 1e-13);
    }

    #[test]
    fn bell_blocks_of_trivial_pbit() {
        let sigma = random_density(4, 1, &stream(10)).unwrap().with_dims(vec![2, 2]).unwrap();
        let rho = DensityMatrix::max_entangled(2).tensor(&sigma);
        let bb = bell_block_decompose(&rho, 2).unwrap();
        assert!(max_abs_diff(bb.block(0, 0), sigma.matrix()) < 1e-14);
        for mu in 0..4 {
            for nu in 0..4 {
                if (mu, nu) != (0, 0) {
                    assert!(bb.block(mu, nu).norm_l2() < 1e-14);
                }
            }
        }
        assert!(bb.is_key_correlated());
    }
}
