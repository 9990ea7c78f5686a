use serde_json::json;

use super::{par_samples, Experiment, ExperimentOutput, ExperimentRecord};
use crate::entropics::{
    emax_mixed_proxy, hypothesis_testing, key_bound_relaxed, log_negativity, rate_region_from_entropies,
    repeater_bound, AlphaGrid, EdProxy, SepProxy,
};
use crate::qlinalg::{c, herm_eigvals, operator_norm, von_neumann_entropy, Bipartition, DensityMatrix};
use crate::randmat::{random_density, random_separable_default, RandomStream};
use crate::states::{random_ibit, random_pbit};
use crate::{ComplexMatrix, Result};

const HALF_LN2_INV: f64 = 1.0 / (2.0 * std::f64::consts::LN_2);

fn stream(seed: u64, e: Experiment, role: &str, dim: usize, k: usize) -> RandomStream {
    RandomStream::new(seed, format!("{}/{role}/{dim}", e.name()), k as u64)
}

/// `0.0, 0.1, ..., 3.0`.
pub fn default_lambda_grid() -> Vec<f64> {
    (0..=30).map(|k| k as f64 / 10.0).collect()
}

/// Cut `AA' | BB'` of a pbit on `[2, 2, d_s, d_s]`.
fn pbit_cut() -> Bipartition {
    Bipartition::new(&[0, 2], 4).expect("valid cut")
}

fn min_eig_shifted(sigma: &DensityMatrix, rho: &DensityMatrix, lambda: f64) -> Result<f64> {
    let n = rho.order();
    let t = 2f64.powf(lambda);
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = sigma.matrix()[(i, j)] * t - rho.matrix()[(i, j)];
        }
    }
    Ok(herm_eigvals(&m)?[0])
}

/// Minimal eigenvalue of `2^λ σ − ρ` for one Hilbert-Schmidt `ρ` of order
/// `d²` per dimension and `n_sigma` random separable `σ`.
pub fn cmd_fig1(dims: &[usize], lambda_grid: &[f64], n_sigma: usize, seed: u64) -> Result<ExperimentOutput> {
    let e = Experiment::Fig1;
    let mut records = Vec::new();
    let mut bottom = Vec::new();
    let mut negative_at_zero = Vec::new();
    let mut monotone_violations = Vec::new();
    let at_two = lambda_grid.iter().position(|&l| (l - 2.0).abs() < 1e-12);
    for &d in dims {
        let rho = random_density(d * d, 1, &stream(seed, e, "rho", d, 0))?.with_dims(vec![d, d])?;
        let curves = par_samples(n_sigma, |k| {
            let sigma = random_separable_default(d, d, &stream(seed, e, "sigma", d, k))?;
            lambda_grid
                .iter()
                .map(|&l| min_eig_shifted(&sigma, &rho, l))
                .collect::<Result<Vec<f64>>>()
        })?;
        for (k, curve) in curves.iter().enumerate() {
            for (l, v) in lambda_grid.iter().zip(curve) {
                records.push(ExperimentRecord::new(e.name(), d, k, format!("min_eig_lambda={l}"), *v));
            }
        }
        if let Some(i) = at_two {
            let worst = curves.iter().map(|c| c[i]).fold(f64::NEG_INFINITY, f64::max);
            let min_at_two = curves.iter().map(|c| c[i]).fold(f64::INFINITY, f64::min);
            bottom.push(json!({
                "d": d,
                "max_over_sigma_min_eig_at_lambda_2": worst,
                "log10_abs_max_over_sigma": worst.abs().log10(),
                "min_over_sigma_min_eig_at_lambda_2": min_at_two,
            }));
        }
        let zero = lambda_grid.iter().position(|&l| l == 0.0);
        negative_at_zero.push(json!({
            "d": d,
            "count": zero.map(|i| curves.iter().filter(|c| c[i] < 0.0).count()),
        }));
        let order: Vec<usize> = {
            let mut idx: Vec<usize> = (0..lambda_grid.len()).collect();
            idx.sort_by(|&a, &b| lambda_grid[a].total_cmp(&lambda_grid[b]));
            idx
        };
        let violations = curves
            .iter()
            .filter(|c| order.windows(2).any(|w| c[w[1]] < c[w[0]] - 1e-12))
            .count();
        monotone_violations.push(json!({ "d": d, "curves_not_monotone": violations }));
    }
    let extra = json!({
        "lambda_grid": lambda_grid,
        "bottom_series": bottom,
        "negative_at_lambda_0": negative_at_zero,
        "monotonicity": monotone_violations,
    });
    Ok(ExperimentOutput::new(e, seed, dims, n_sigma, records, extra))
}

/// Entropy of Hilbert-Schmidt states against `log₂ d − 1/(2 ln 2)`.
pub fn cmd_entropy_asymptotics(dims: &[usize], n: usize, seed: u64) -> Result<ExperimentOutput> {
    let e = Experiment::EntropyAsymptotics;
    let mut records = Vec::new();
    let mut targets = Vec::new();
    for &d in dims {
        let target = (d as f64).log2() - HALF_LN2_INV;
        let values = par_samples(n, |k| von_neumann_entropy(&random_density(d, 1, &stream(seed, e, "rho", d, k))?))?;
        for (k, s) in values.into_iter().enumerate() {
            records.push(ExperimentRecord::new(e.name(), d, k, "entropy", s));
            records.push(ExperimentRecord::new(e.name(), d, k, "deviation", s - target));
        }
        targets.push(json!({ "d": d, "asymptotic_mean": target }));
    }
    Ok(ExperimentOutput::new(e, seed, dims, n, records, json!({ "targets": targets })))
}

/// `I(AA':BB')` of random pbits and the key bound `I/2`.
pub fn cmd_mutual_info(dims: &[usize], n: usize, seed: u64) -> Result<ExperimentOutput> {
    let e = Experiment::MutualInfo;
    let mut records = Vec::new();
    for &d in dims {
        let values = par_samples(n, |k| random_pbit(d, &stream(seed, e, "pbit", d, k))?.mutual_information())?;
        for (k, mi) in values.into_iter().enumerate() {
            records.push(ExperimentRecord::new(e.name(), d, k, "mutual_information", mi));
            records.push(ExperimentRecord::new(e.name(), d, k, "half_mutual_information", mi / 2.0));
        }
    }
    let extra = json!({ "limit_mutual_information": 2.0 + HALF_LN2_INV, "limit_half": 1.0 + HALF_LN2_INV / 2.0 });
    Ok(ExperimentOutput::new(e, seed, dims, n, records, extra))
}

/// Least-squares slope of `ln y` against `ln x`.
pub(crate) fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// `‖2 d_s Tr_B' α − I‖∞` for random ibits, with the log-log slope of the
/// per-dimension means.
pub fn cmd_pt_concentration(dims: &[usize], n: usize, seed: u64) -> Result<ExperimentOutput> {
    let e = Experiment::PtConcentration;
    let mut records = Vec::new();
    let mut means = Vec::new();
    for &d in dims {
        let values = par_samples(n, |k| {
            let ibit = random_ibit(d, &stream(seed, e, "ibit", d, k))?;
            let mut m = ibit.reduced_aa()?.into_matrix();
            let scale = 2.0 * d as f64;
            for j in 0..m.ncols() {
                for i in 0..m.nrows() {
                    m[(i, j)] *= scale;
                }
                m[(j, j)] -= c(1.0);
            }
            operator_norm(&m)
        })?;
        means.push(values.iter().sum::<f64>() / n as f64);
        for (k, v) in values.into_iter().enumerate() {
            records.push(ExperimentRecord::new(e.name(), d, k, "pt_norm", v));
        }
    }
    let slope = if dims.len() >= 2 {
        let x: Vec<f64> = dims.iter().map(|&d| d as f64).collect();
        Some(loglog_slope(&x, &means))
    } else {
        None
    };
    Ok(ExperimentOutput::new(e, seed, dims, n, records, json!({ "mean_norms": means, "loglog_slope": slope })))
}

/// Rates of all four scenarios for random ibits.
pub fn cmd_rate_regions(dims: &[usize], n: usize, seed: u64) -> Result<ExperimentOutput> {
    let e = Experiment::RateRegions;
    let mut records = Vec::new();
    for &d in dims {
        let rows = par_samples(n, |k| {
            let ent = random_ibit(d, &stream(seed, e, "ibit", d, k))?.entropies()?;
            let mut rows = vec![
                ("S(AA')".to_string(), ent.s_aa),
                ("S(B')".to_string(), ent.s_b),
                ("S(AA'B')".to_string(), ent.s_aab),
            ];
            for scenario in 1..=4u8 {
                let r = rate_region_from_entropies(d, &ent, scenario)?;
                if scenario == 1 {
                    rows.push(("R_G".to_string(), r.r_g));
                    for (name, flag) in &r.condition_flags {
                        rows.push((format!("flag:{name}"), if *flag { 1.0 } else { 0.0 }));
                    }
                }
                rows.push((format!("R_A_scenario{scenario}"), r.r_a));
                rows.push((format!("R_B_scenario{scenario}"), r.r_b));
            }
            Ok(rows)
        })?;
        for (k, rows) in rows.into_iter().enumerate() {
            for (q, v) in rows {
                records.push(ExperimentRecord::new(e.name(), d, k, q, v));
            }
        }
    }
    Ok(ExperimentOutput::new(e, seed, dims, n, records, json!({ "limit_R_G": 1.0 + HALF_LN2_INV })))
}

/// Repeater and key bounds for pairs of random pbits.
pub fn cmd_bound_report(dims: &[usize], n: usize, seed: u64, grid: &AlphaGrid, epsilon: f64) -> Result<ExperimentOutput> {
    let e = Experiment::BoundReport;
    let mut records = Vec::new();
    let mut reports = Vec::new();
    for &d in dims {
        let rows = par_samples(n, |k| {
            let rho = random_pbit(d, &stream(seed, e, "rho", d, k))?;
            let rho_prime = random_pbit(d, &stream(seed, e, "rho_prime", d, k))?;
            let cut = pbit_cut();
            let gamma = rho.state();
            let hat = rho.key_attacked();
            let mixed = DensityMatrix::maximally_mixed(gamma.dims().to_vec());
            let repeater = repeater_bound(
                gamma,
                rho_prime.state(),
                &[0, 1],
                &SepProxy::maximally_mixed(),
                &EdProxy::LogNegativity(cut.clone()),
                grid,
            )?;
            let sigma_is_rho = key_bound_relaxed(gamma, gamma, &SepProxy::maximally_mixed(), grid)?;
            let sigma_is_sep = key_bound_relaxed(gamma, &mixed, &SepProxy::maximally_mixed(), grid)?;
            let ln = log_negativity(gamma, &cut)?;
            let ln_prime = log_negativity(rho_prime.state(), &cut)?;
            let rows = vec![
                ("log_negativity", ln),
                ("log_negativity_prime", ln_prime),
                ("emax_proxy_key_attacked", emax_mixed_proxy(&hat)?),
                ("repeater_ed_proxy", repeater.components.ed_proxy),
                ("repeater_infimum", repeater.infimum),
                ("repeater_infinity_endpoint", repeater.infinity_endpoint().unwrap_or(f64::INFINITY)),
                ("key_bound_sigma_is_rho", sigma_is_rho.infimum),
                ("key_bound_sigma_is_sep", sigma_is_sep.infimum),
                ("key_bound_min", sigma_is_rho.infimum.min(sigma_is_sep.infimum)),
                ("half_mutual_information", rho.mutual_information()? / 2.0),
                ("hypothesis_testing_key_attacked", hypothesis_testing(&hat, &mixed, epsilon)?.value),
            ];
            let json = json!({
                "sample": k,
                "repeater": repeater,
                "key_bound_sigma_is_rho": sigma_is_rho,
                "key_bound_sigma_is_sep": sigma_is_sep,
            });
            Ok((rows, json))
        })?;
        for (k, (rows, json)) in rows.into_iter().enumerate() {
            for (q, v) in rows {
                records.push(ExperimentRecord::new(e.name(), d, k, q, v));
            }
            if k == 0 {
                reports.push(json!({ "d": d, "reports": json }));
            }
        }
    }
    let extra = json!({ "epsilon": epsilon, "alpha_grid": grid, "first_sample_reports": reports });
    Ok(ExperimentOutput::new(e, seed, dims, n, records, extra))
}

/// Residual between the nonzero spectrum of a random pbit and `spec(σ)`.
pub fn cmd_pbit_spectrum(dims: &[usize], n: usize, seed: u64) -> Result<ExperimentOutput> {
    let e = Experiment::PbitSpectrum;
    let mut records = Vec::new();
    for &d in dims {
        let rows = par_samples(n, |k| {
            let p = random_pbit(d, &stream(seed, e, "pbit", d, k))?;
            let gamma = herm_eigvals(p.state().matrix())?;
            let sigma = p.sigma_spectrum()?;
            let zeros = gamma.len() - sigma.len();
            let residual = gamma[zeros..]
                .iter()
                .zip(&sigma)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let near_zero = gamma.iter().filter(|x| x.abs() <= 1e-9).count();
            let s_gamma = crate::qlinalg::entropy_of_spectrum(&gamma);
            let s_sigma = crate::qlinalg::entropy_of_spectrum(&sigma);
            Ok(vec![
                ("spectrum_residual", residual),
                ("near_zero_count", near_zero as f64),
                ("expected_zero_count", zeros as f64),
                ("entropy_gap", (s_gamma - s_sigma).abs()),
            ])
        })?;
        for (k, rows) in rows.into_iter().enumerate() {
            for (q, v) in rows {
                records.push(ExperimentRecord::new(e.name(), d, k, q, v));
            }
        }
    }
    Ok(ExperimentOutput::new(e, seed, dims, n, records, json!({})))
}

/// Largest eigenvalue of Hilbert-Schmidt states of order `d²` against `4/d²`.
pub fn cmd_lambda_max(dims: &[usize], n: usize, seed: u64) -> Result<ExperimentOutput> {
    let e = Experiment::LambdaMax;
    let mut records = Vec::new();
    let mut violations = Vec::new();
    for &d in dims {
        let order = d * d;
        let values = par_samples(n, |k| {
            let rho = random_density(order, 1, &stream(seed, e, "rho", d, k))?;
            Ok(*herm_eigvals(rho.matrix())?.last().expect("nonempty spectrum"))
        })?;
        let bound = 4.0 / order as f64;
        let mut count = 0;
        for (k, l) in values.into_iter().enumerate() {
            let violated = l > bound;
            count += violated as usize;
            records.push(ExperimentRecord::new(e.name(), d, k, "lambda_max", l));
            records.push(ExperimentRecord::new(e.name(), d, k, "scaled_lambda_max", l * order as f64));
            records.push(ExperimentRecord::new(e.name(), d, k, "violation", if violated { 1.0 } else { 0.0 }));
        }
        violations.push(json!({ "d": d, "order": order, "bound": bound, "violations": count }));
    }
    Ok(ExperimentOutput::new(e, seed, dims, n, records, json!({ "violations": violations })))
}
