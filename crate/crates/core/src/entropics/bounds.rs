use serde::{Deserialize, Serialize};

use super::divergences::{log_negativity, relative_entropy, RenyiContext};
use super::{extended, extended_vec};
use crate::qlinalg::{Bipartition, DensityMatrix};
use crate::states::{key_attacked, PrivateState};
use crate::{Error, Result};

/// Rényi orders in `(1, ∞]` at which a bound is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlphaGrid {
    #[serde(with = "extended_vec")]
    values: Vec<f64>,
}

impl AlphaGrid {
    /// `α = 1 + t` for 40 values of `t` log-spaced over `[10⁻³, 10³]`, then `∞`.
    pub fn default_grid() -> Self {
        let mut values: Vec<f64> = (0..40)
            .map(|k| 1.0 + 10f64.powf(-3.0 + 6.0 * k as f64 / 39.0))
            .collect();
        values.push(f64::INFINITY);
        Self { values }
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("alpha grid is empty"));
        }
        if let Some(bad) = values.iter().find(|a| a.is_nan() || **a <= 1.0) {
            return Err(Error::domain(format!("Rényi order must exceed 1, got {bad}")));
        }
        Ok(Self { values })
    }

    /// Comma-separated orders; `inf` denotes the `α → ∞` endpoint.
    pub fn parse(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.eq_ignore_ascii_case("inf") {
                    Ok(f64::INFINITY)
                } else {
                    t.parse::<f64>().map_err(|_| Error::invalid(format!("bad alpha value {t:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.values.clone()).map(|_| ())
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self::default_grid()
    }
}

/// `α/(α−1)`, equal to 1 at `α = ∞`.
fn coefficient(alpha: f64) -> f64 {
    if alpha.is_infinite() {
        1.0
    } else {
        alpha / (alpha - 1.0)
    }
}

#[derive(Clone, Debug)]
pub enum SepProxyKind {
    /// `I/D` on whatever system it is compared against.
    MaximallyMixed,
    /// `a ⊗ b`, with `a` on the first state's system and `b` on the second.
    Product(DensityMatrix, DensityMatrix),
    /// A state on the full (joint) system.
    Joint(DensityMatrix),
}

/// A state the caller asserts to be separable. Separability is never checked.
#[derive(Clone, Debug)]
pub struct SepProxy {
    pub kind: SepProxyKind,
    pub attestation: String,
}

impl SepProxy {
    pub fn maximally_mixed() -> Self {
        Self {
            kind: SepProxyKind::MaximallyMixed,
            attestation: "maximally mixed state, separable".into(),
        }
    }

    pub fn product(a: DensityMatrix, b: DensityMatrix, attestation: impl Into<String>) -> Self {
        Self { kind: SepProxyKind::Product(a, b), attestation: attestation.into() }
    }

    pub fn joint(state: DensityMatrix, attestation: impl Into<String>) -> Self {
        Self { kind: SepProxyKind::Joint(state), attestation: attestation.into() }
    }

    fn description(&self) -> String {
        let what = match &self.kind {
            SepProxyKind::MaximallyMixed => "I/D".to_string(),
            SepProxyKind::Product(a, b) => format!("product of states of order {} and {}", a.order(), b.order()),
            SepProxyKind::Joint(s) => format!("joint state of order {}", s.order()),
        };
        format!("separable proxy: {what}; caller attestation: {}", self.attestation)
    }

    /// The proxy as a single state on a system with dims `dims`.
    fn as_state(&self, dims: &[usize]) -> Result<DensityMatrix> {
        let order: usize = dims.iter().product();
        let s = match &self.kind {
            SepProxyKind::MaximallyMixed => DensityMatrix::maximally_mixed(dims.to_vec()),
            SepProxyKind::Product(a, b) => a.tensor(b),
            SepProxyKind::Joint(s) => s.clone(),
        };
        if s.order() != order {
            return Err(Error::dim(format!("separable proxy has order {}, expected {order}", s.order())));
        }
        Ok(s)
    }
}

/// Upper proxy for the one-way distillable entanglement.
#[derive(Clone, Debug)]
pub enum EdProxy {
    /// Log-negativity across the cut, summed over the tensor factors.
    LogNegativity(Bipartition),
    Supplied { value: f64, description: String },
}

impl EdProxy {
    fn evaluate(&self, states: &[&DensityMatrix]) -> Result<(f64, String)> {
        match self {
            EdProxy::LogNegativity(cut) => {
                let mut total = 0.0;
                for s in states {
                    total += log_negativity(s, cut)?;
                }
                Ok((total, format!("E_D proxy: log-negativity across {:?} | {:?}, additive over copies", cut.left(), cut.right())))
            }
            EdProxy::Supplied { value, description } => Ok((*value, format!("E_D proxy: supplied value ({description})"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundComponents {
    #[serde(rename = "ED_proxy", with = "extended")]
    pub ed_proxy: f64,
    /// Divergence term at the order attaining the infimum.
    #[serde(with = "extended")]
    pub divergence_term: f64,
}

/// Per-order evaluation of a relaxed bound `(α/(α−1))·E + D̃_α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "extended_vec")]
    pub alpha_grid: Vec<f64>,
    #[serde(with = "extended_vec")]
    pub per_alpha_values: Vec<f64>,
    #[serde(with = "extended")]
    pub infimum: f64,
    pub components: BoundComponents,
    pub proxy_descriptions: Vec<String>,
    /// Divergence term at every grid order (not serialized).
    #[serde(skip)]
    pub per_alpha_divergence: Vec<f64>,
}

impl BoundReport {
    fn assemble(grid: &AlphaGrid, first: f64, divergence: Vec<f64>, proxy_descriptions: Vec<String>) -> Self {
        let alpha_grid = grid.values().to_vec();
        let per_alpha_values: Vec<f64> = alpha_grid
            .iter()
            .zip(&divergence)
            .map(|(&a, &d)| if first == 0.0 { d } else { coefficient(a) * first + d })
            .collect();
        let mut best = 0;
        for (i, v) in per_alpha_values.iter().enumerate() {
            if *v < per_alpha_values[best] {
                best = i;
            }
        }
        Self {
            infimum: per_alpha_values[best],
            components: BoundComponents { ed_proxy: first, divergence_term: divergence[best] },
            alpha_grid,
            per_alpha_values,
            proxy_descriptions,
            per_alpha_divergence: divergence,
        }
    }

    /// Value at the `α = ∞` endpoint, if the grid has one.
    pub fn infinity_endpoint(&self) -> Option<f64> {
        self.alpha_grid
            .iter()
            .position(|a| a.is_infinite())
            .map(|i| self.per_alpha_values[i])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn sweep(contexts: &[RenyiContext], grid: &AlphaGrid) -> Result<Vec<f64>> {
    grid.values()
        .iter()
        .map(|&a| {
            let mut total = 0.0;
            for ctx in contexts {
                total += ctx.renyi(a)?.value;
            }
            Ok(total)
        })
        .collect()
}

/// Relaxed repeater bound for `ρ ⊗ ρ′`:
/// `(α/(α−1))·E_D-proxy(ρ⊗ρ′) + D̃_α(ρ̂⊗ρ̂′ ‖ sep)`, where `ρ̂` dephases the
/// key subsystems.
///
/// With a maximally mixed or product proxy the divergence term is evaluated
/// as the sum of single-copy terms (both `D̃_α` and `D_max` are additive on
/// tensor products), so the joint state is never formed.
pub fn repeater_bound(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    key_subsystems: &[usize],
    sep_proxy: &SepProxy,
    ed_proxy: &EdProxy,
    grid: &AlphaGrid,
) -> Result<BoundReport> {
    let hat = key_attacked(rho, key_subsystems)?;
    let hat_prime = key_attacked(rho_prime, key_subsystems)?;
    let (ed, ed_desc) = ed_proxy.evaluate(&[rho, rho_prime])?;
    let contexts = match &sep_proxy.kind {
        SepProxyKind::MaximallyMixed => vec![
            RenyiContext::new(&hat, &DensityMatrix::maximally_mixed(hat.dims().to_vec()))?,
            RenyiContext::new(&hat_prime, &DensityMatrix::maximally_mixed(hat_prime.dims().to_vec()))?,
        ],
        SepProxyKind::Product(a, b) => vec![RenyiContext::new(&hat, a)?, RenyiContext::new(&hat_prime, b)?],
        SepProxyKind::Joint(s) => vec![RenyiContext::new(&hat.tensor(&hat_prime), s)?],
    };
    let divergence = sweep(&contexts, grid)?;
    Ok(BoundReport::assemble(
        grid,
        ed,
        divergence,
        vec![
            ed_desc,
            sep_proxy.description(),
            format!("key subsystems dephased: {key_subsystems:?}"),
        ],
    ))
}

/// Relaxed key bound `(α/(α−1))·D(ρ‖σ_proxy) + D̃_α(σ_proxy ‖ sep)`. The
/// `ED_proxy` component holds `D(ρ‖σ_proxy)`.
pub fn key_bound_relaxed(
    rho: &DensityMatrix,
    sigma_proxy: &DensityMatrix,
    sep_proxy: &SepProxy,
    grid: &AlphaGrid,
) -> Result<BoundReport> {
    let first = relative_entropy(rho, sigma_proxy)?.value;
    let sep = sep_proxy.as_state(rho.dims())?;
    let ctx = RenyiContext::new(sigma_proxy, &sep)?;
    let divergence = sweep(std::slice::from_ref(&ctx), grid)?;
    Ok(BoundReport::assemble(
        grid,
        first,
        divergence,
        vec![
            "first term: relative entropy D(rho || sigma_proxy)".into(),
            sep_proxy.description(),
        ],
    ))
}

/// `I(AA':BB')/2`, the squashed-entanglement relaxation of the key rate.
pub fn mutual_info_key_bound(gamma: &PrivateState) -> Result<f64> {
    Ok(gamma.mutual_information()? / 2.0)
}
