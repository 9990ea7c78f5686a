use super::DivergenceValue;
use crate::qlinalg::{
    entropy_of_spectrum, herm_eig, herm_eigvals, partial_transpose_op, trace_norm_hermitian,
    validated_spectrum, Bipartition, DensityMatrix, SUPPORT_REL_TOL,
};
use crate::{ComplexMatrix, Error, Result, C64};

/// Weight of `ρ` outside the support of `σ` tolerated before a divergence is
/// declared infinite.
const SUPPORT_WEIGHT_TOL: f64 = 1e-10;
/// `Tr[Pσ]` at or below this value counts as perfect discrimination.
const ZERO_TYPE_II: f64 = 1e-14;

fn same_order(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.order() != sigma.order() {
        return Err(Error::dim(format!(
            "states have orders {} and {}",
            rho.order(),
            sigma.order()
        )));
    }
    Ok(())
}

/// `ρ` expressed in the eigenbasis of `σ` and restricted to its numerical
/// support. Every divergence against a fixed `σ` is a function of this data,
/// so a sweep over Rényi orders needs one eigendecomposition per order.
#[derive(Clone, Debug)]
pub struct RenyiContext {
    support_ok: bool,
    /// Eigenvalues of `σ` on its support.
    s: Vec<f64>,
    /// `V† ρ V` restricted to the support.
    rho: ComplexMatrix,
    /// Spectrum of the restricted `ρ` when `σ` is flat on its support.
    flat_spectrum: Option<Vec<f64>>,
}

impl RenyiContext {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        same_order(rho, sigma)?;
        if let Some(level) = flat_diagonal(sigma.matrix()) {
            let spectrum = validated_spectrum(herm_eigvals(rho.matrix())?)?;
            return Ok(Self {
                support_ok: true,
                s: vec![level; rho.order()],
                rho: rho.matrix().clone(),
                flat_spectrum: Some(spectrum),
            });
        }
        let eig = herm_eig(sigma.matrix())?;
        let values = validated_spectrum(eig.eigenvalues)?;
        let smax = values.last().copied().unwrap_or(0.0);
        let supp: Vec<usize> = (0..values.len()).filter(|&i| values[i] > SUPPORT_REL_TOL * smax).collect();
        let v = &eig.eigenvectors;
        let rotated = crate::qlinalg::matmul(v.adjoint(), crate::qlinalg::matmul(rho.matrix().as_ref(), v.as_ref()).as_ref());
        let total: f64 = (0..rotated.nrows()).map(|i| rotated[(i, i)].re).sum();
        let inside: f64 = supp.iter().map(|&i| rotated[(i, i)].re).sum();
        let support_ok = total - inside <= SUPPORT_WEIGHT_TOL;
        let k = supp.len();
        let mut restricted = ComplexMatrix::zeros(k, k);
        for (b, &j) in supp.iter().enumerate() {
            for (a, &i) in supp.iter().enumerate() {
                restricted[(a, b)] = rotated[(i, j)];
            }
        }
        let s: Vec<f64> = supp.iter().map(|&i| values[i]).collect();
        let smin = s.first().copied().unwrap_or(0.0);
        let flat_spectrum = if k > 0 && smax - smin <= 1e-14 * smax {
            Some(validated_spectrum(herm_eigvals(&restricted)?)?)
        } else {
            None
        };
        Ok(Self { support_ok, s, rho: restricted, flat_spectrum })
    }

    pub fn support_ok(&self) -> bool {
        self.support_ok
    }

    /// Sandwiched Rényi divergence of order `alpha ∈ (1, ∞]`.
    pub fn renyi(&self, alpha: f64) -> Result<DivergenceValue> {
        if alpha.is_nan() || alpha <= 1.0 {
            return Err(Error::domain(format!("Rényi order must exceed 1, got {alpha}")));
        }
        if alpha == f64::INFINITY {
            return self.dmax();
        }
        if !self.support_ok {
            return Ok(DivergenceValue::infinite(Some(alpha)));
        }
        let p = (1.0 - alpha) / (2.0 * alpha);
        let q = match &self.flat_spectrum {
            Some(spec) => {
                let scale = self.s[0].powf(2.0 * p);
                spec.iter().map(|x| x * scale).collect::<Vec<_>>()
            }
            None => {
                let w: Vec<f64> = self.s.iter().map(|x| x.powf(p)).collect();
                let k = w.len();
                let mut m = ComplexMatrix::zeros(k, k);
                for j in 0..k {
                    for i in 0..k {
                        m[(i, j)] = self.rho[(i, j)] * (w[i] * w[j]);
                    }
                }
                herm_eigvals(&m)?
            }
        };
        let qmax = q.iter().copied().fold(0.0f64, f64::max);
        let qmin = q.iter().copied().fold(f64::INFINITY, f64::min);
        if qmin < -1e-9 * qmax {
            return Err(Error::invalid("first argument is not positive semidefinite"));
        }
        if qmax <= 0.0 {
            return Err(Error::invalid("first argument has no weight on the reference support"));
        }
        let tail: f64 = q.iter().filter(|&&x| x > 0.0).map(|x| (x / qmax).powf(alpha)).sum();
        let value = (alpha * qmax.log2() + tail.log2()) / (alpha - 1.0);
        Ok(DivergenceValue::finite(value, Some(alpha)))
    }

    /// `log₂ λ_max(σ^{-1/2} ρ σ^{-1/2})` on the support of `σ`.
    pub fn dmax(&self) -> Result<DivergenceValue> {
        if !self.support_ok {
            return Ok(DivergenceValue::infinite(Some(f64::INFINITY)));
        }
        let lmax = match &self.flat_spectrum {
            Some(spec) => spec.last().copied().unwrap_or(0.0) / self.s[0],
            None => {
                let inv: Vec<f64> = self.s.iter().map(|x| 1.0 / x.sqrt()).collect();
                let k = inv.len();
                let mut m = ComplexMatrix::zeros(k, k);
                for j in 0..k {
                    for i in 0..k {
                        m[(i, j)] = self.rho[(i, j)] * (inv[i] * inv[j]);
                    }
                }
                herm_eigvals(&m)?.last().copied().unwrap_or(0.0)
            }
        };
        Ok(DivergenceValue::finite(lmax.log2(), Some(f64::INFINITY)))
    }

    /// `−Tr ρ log₂ σ` on the support.
    fn cross_entropy(&self) -> f64 {
        self.s
            .iter()
            .enumerate()
            .map(|(i, x)| -self.rho[(i, i)].re * x.log2())
            .sum()
    }
}

/// Common value of the diagonal when `m` is a multiple of the identity.
fn flat_diagonal(m: &ComplexMatrix) -> Option<f64> {
    let n = m.nrows();
    let level = m[(0, 0)].re;
    for j in 0..n {
        for i in 0..n {
            let expected = if i == j { level } else { 0.0 };
            if m[(i, j)] != C64::new(expected, 0.0) {
                return None;
            }
        }
    }
    (level > 0.0).then_some(level)
}

/// `D(ρ‖σ) = Tr ρ (log₂ ρ − log₂ σ)`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    let ctx = RenyiContext::new(rho, sigma)?;
    if !ctx.support_ok {
        return Ok(DivergenceValue::infinite(None));
    }
    let s_rho = entropy_of_spectrum(&validated_spectrum(herm_eigvals(rho.matrix())?)?);
    // Klein's inequality; the clamp only removes rounding noise.
    let value = (ctx.cross_entropy() - s_rho).max(0.0);
    Ok(DivergenceValue::finite(value, None))
}

/// `D̃_α(ρ‖σ) = log₂ Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α] / (α − 1)`, `α ∈ (1, ∞]`.
pub fn sandwiched_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<DivergenceValue> {
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::domain(format!("Rényi order must exceed 1, got {alpha}")));
    }
    RenyiContext::new(rho, sigma)?.renyi(alpha)
}

pub fn dmax(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    RenyiContext::new(rho, sigma)?.dmax()
}

/// `D_h^ε(ρ‖σ) = −log₂ min{Tr Pσ : 0 ≤ P ≤ I, Tr Pρ ≥ 1 − ε}`.
///
/// The minimum equals `max_{μ ≥ 0} μ(1 − ε) − Tr(μρ − σ)₊`, a concave
/// function of `μ` maximized on `[0, 1/ε]` by golden-section search. At
/// `ε = 0` the optimal test is the support projector of `ρ`.
pub fn hypothesis_testing(rho: &DensityMatrix, sigma: &DensityMatrix, epsilon: f64) -> Result<DivergenceValue> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::domain(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    same_order(rho, sigma)?;
    let beta = if epsilon == 0.0 {
        let eig = herm_eig(rho.matrix())?;
        let values = validated_spectrum(eig.eigenvalues)?;
        let lmax = values.last().copied().unwrap_or(0.0);
        let v = &eig.eigenvectors;
        let sv = crate::qlinalg::matmul(sigma.matrix().as_ref(), v.as_ref());
        let mut acc = 0.0;
        for (k, &lam) in values.iter().enumerate() {
            if lam > SUPPORT_REL_TOL * lmax {
                acc += (0..v.nrows()).map(|i| (v[(i, k)].conj() * sv[(i, k)]).re).sum::<f64>();
            }
        }
        acc
    } else {
        let objective = dual_objective(rho, sigma, epsilon)?;
        let mut lo = 0.0f64;
        let mut hi = 1.0 / epsilon;
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let mut f1 = objective(x1)?;
        let mut f2 = objective(x2)?;
        let mut best = objective(0.0)?.max(objective(hi)?).max(f1).max(f2);
        while hi - lo > 1e-13 * (1.0 / epsilon) {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = objective(x2)?;
                best = best.max(f2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = objective(x1)?;
                best = best.max(f1);
            }
        }
        best
    };
    if beta <= ZERO_TYPE_II {
        return Ok(DivergenceValue::infinite(None));
    }
    Ok(DivergenceValue::finite(-beta.min(1.0).log2() + 0.0, None))
}

/// `μ ↦ μ(1 − ε) − Tr(μρ − σ)₊`. When `σ` is a multiple of the identity the
/// spectrum of `ρ` is reused for every `μ`.
fn dual_objective<'a>(
    rho: &'a DensityMatrix,
    sigma: &'a DensityMatrix,
    epsilon: f64,
) -> Result<Box<dyn Fn(f64) -> Result<f64> + 'a>> {
    if let Some(level) = flat_diagonal(sigma.matrix()) {
        let spec = validated_spectrum(herm_eigvals(rho.matrix())?)?;
        return Ok(Box::new(move |mu: f64| {
            let pos: f64 = spec.iter().map(|l| (mu * l - level).max(0.0)).sum();
            Ok(mu * (1.0 - epsilon) - pos)
        }));
    }
    Ok(Box::new(move |mu: f64| {
        let n = rho.order();
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = rho.matrix()[(i, j)] * mu - sigma.matrix()[(i, j)];
            }
        }
        let pos: f64 = herm_eigvals(&m)?.iter().filter(|&&x| x > 0.0).sum();
        Ok(mu * (1.0 - epsilon) - pos)
    }))
}

/// `log₂(D · λ_max(ρ)) = D_max(ρ‖I/D)`, an upper bound on the max-relative
/// entropy of entanglement.
pub fn emax_mixed_proxy(rho: &DensityMatrix) -> Result<f64> {
    let spec = validated_spectrum(herm_eigvals(rho.matrix())?)?;
    let lmax = spec.last().copied().unwrap_or(0.0);
    Ok((rho.order() as f64 * lmax).log2())
}

/// `log₂ ‖ρ^{T_B}‖₁`, transposing the right side of the cut.
pub fn log_negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    if cut.n_subsystems() != rho.dims().len() {
        return Err(Error::dim(format!(
            "cut covers {} subsystems, state has {}",
            cut.n_subsystems(),
            rho.dims().len()
        )));
    }
    let pt = partial_transpose_op(rho.matrix(), rho.dims(), cut.right())?;
    Ok(trace_norm_hermitian(&pt)?.log2().max(0.0))
}
