mod common;

use common::{
    classical_renyi, commuting_pair, cx, diag, kl, lp_hypothesis_testing, random_pair, rotated, stream,
};
use faer::Mat;
use pbits::entropics::{
    dmax, emax_mixed_proxy, hypothesis_testing, key_bound_relaxed, log_negativity, mutual_info_key_bound,
    rate_region, relative_entropy, repeater_bound, sandwiched_renyi, AlphaGrid, DivergenceValue, EdProxy,
    RateRegion, RenyiContext, SepProxy,
};
use pbits::qlinalg::{herm_eigvals, partial_trace, Bipartition, DensityMatrix};
use pbits::randmat::{haar_unitary, random_density, random_separable_default};
use pbits::states::{random_ibit, random_pbit, IndependentBit, PrivateState};
use pbits::{ComplexMatrix, Error, C64};

fn identity(n: usize) -> ComplexMatrix {
    Mat::<C64>::identity(n, n)
}

fn pbit_cut() -> Bipartition {
    Bipartition::new(&[0, 2], 4).unwrap()
}

#[test]
fn relative_entropy_basics() {
    let (rho, _) = random_pair("re", 0, 5);
    assert!(relative_entropy(&rho, &rho).unwrap().value.abs() < 1e-12);
    let zero = DensityMatrix::basis(0, vec![2]).unwrap();
    let mixed = DensityMatrix::maximally_mixed(vec![2]);
    assert!((relative_entropy(&zero, &mixed).unwrap().value - 1.0).abs() < 1e-14);
    let one = DensityMatrix::basis(1, vec![2]).unwrap();
    let d = relative_entropy(&zero, &one).unwrap();
    assert!(d.value.is_infinite() && !d.support_ok);
    assert!(relative_entropy(&rho, &mixed).is_err());
}

#[test]
fn relative_entropy_of_commuting_pairs_is_kl_divergence() {
    for k in 0..20 {
        let (rho, sigma, p, q) = commuting_pair("kl", k, 2 + (k as usize % 5));
        assert!((relative_entropy(&rho, &sigma).unwrap().value - kl(&p, &q)).abs() < 1e-10);
    }
}

#[test]
fn renyi_basics() {
    let (rho, sigma) = random_pair("renyi", 0, 4);
    for alpha in [1.01, 2.0, 50.0] {
        let v = sandwiched_renyi(&rho, &rho, alpha).unwrap();
        assert!(v.value.abs() < 1e-10);
        assert_eq!(v.alpha, Some(alpha));
    }
    for alpha in [1.0, 0.5, f64::NAN] {
        assert!(matches!(sandwiched_renyi(&rho, &sigma, alpha), Err(Error::Domain(_))));
    }
}

#[test]
fn renyi_of_commuting_pairs_is_classical() {
    for k in 0..20 {
        let (rho, sigma, p, q) = commuting_pair("cr", k, 2 + (k as usize % 5));
        for alpha in [1.1, 2.0, 7.5] {
            let got = sandwiched_renyi(&rho, &sigma, alpha).unwrap().value;
            assert!((got - classical_renyi(&p, &q, alpha)).abs() < 1e-8, "{got}");
        }
    }
}

#[test]
fn renyi_tends_to_dmax() {
    for k in 0..10 {
        let (rho, sigma) = random_pair("to-dmax", k, 4);
        let big = sandwiched_renyi(&rho, &sigma, 1e6).unwrap().value;
        let max = dmax(&rho, &sigma).unwrap().value;
        assert!((big - max).abs() < 1e-4, "{big} vs {max}");
        let inf = sandwiched_renyi(&rho, &sigma, f64::INFINITY).unwrap().value;
        assert_eq!(inf, max);
    }
}

#[test]
fn renyi_is_monotone_in_alpha() {
    let grid = AlphaGrid::default_grid();
    for k in 0..10 {
        let (rho, sigma) = random_pair("mono", k, 4);
        let ctx = RenyiContext::new(&rho, &sigma).unwrap();
        let values: Vec<f64> = grid.values().iter().map(|&a| ctx.renyi(a).unwrap().value).collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0] - 1e-8), "{values:?}");
    }
}

#[test]
fn divergence_ordering_chain() {
    for k in 0..20 {
        let (rho, sigma) = random_pair("chain", k, 5);
        let d = relative_entropy(&rho, &sigma).unwrap().value;
        let max = dmax(&rho, &sigma).unwrap().value;
        for alpha in [1.001, 1.5, 3.0, 100.0] {
            let r = sandwiched_renyi(&rho, &sigma, alpha).unwrap().value;
            assert!(d <= r + 1e-8 && r <= max + 1e-8, "{d} {r} {max}");
        }
    }
}

#[test]
fn renyi_satisfies_data_processing_under_partial_trace() {
    for k in 0..10 {
        let (rho, sigma) = random_pair("dpi", k, 6);
        let (rho, sigma) = (rho.with_dims(vec![2, 3]).unwrap(), sigma.with_dims(vec![2, 3]).unwrap());
        let (ra, sa) = (partial_trace(&rho, &[0]).unwrap(), partial_trace(&sigma, &[0]).unwrap());
        for alpha in [1.5, 2.0, 5.0] {
            let full = sandwiched_renyi(&rho, &sigma, alpha).unwrap().value;
            let reduced = sandwiched_renyi(&ra, &sa, alpha).unwrap().value;
            assert!(reduced <= full + 1e-8);
        }
    }
}

#[test]
fn renyi_respects_supports() {
    let v = haar_unitary(3, &stream("supp", 0)).unwrap();
    let rho = rotated(&[0.5, 0.5, 0.0], &v);
    let sigma = rotated(&[0.3, 0.3, 0.4], &v);
    let narrow = rotated(&[0.6, 0.0, 0.4], &v);
    assert!(sandwiched_renyi(&rho, &sigma, 2.0).unwrap().is_finite());
    let inf = sandwiched_renyi(&rho, &narrow, 2.0).unwrap();
    assert!(inf.value.is_infinite() && !inf.support_ok);
    assert!(dmax(&rho, &narrow).unwrap().value.is_infinite());
    // Rank-deficient σ containing ρ's support stays finite.
    let sub = rotated(&[0.25, 0.75, 0.0], &v);
    let got = sandwiched_renyi(&rho, &sub, 2.0).unwrap().value;
    assert!((got - classical_renyi(&[0.5, 0.5], &[0.25, 0.75], 2.0)).abs() < 1e-9);
}

#[test]
fn dmax_basics_and_tightness() {
    let (rho, sigma) = random_pair("dmax", 0, 4);
    assert!(dmax(&rho, &rho).unwrap().value.abs() < 1e-10);
    let zero = DensityMatrix::basis(0, vec![2]).unwrap();
    assert!((dmax(&zero, &DensityMatrix::maximally_mixed(vec![2])).unwrap().value - 1.0).abs() < 1e-14);
    for k in 0..10 {
        let (rho, sigma) = random_pair("dmax-tight", k, 4);
        let lambda = dmax(&rho, &sigma).unwrap().value;
        let t = 2f64.powf(lambda);
        let m = Mat::from_fn(4, 4, |i, j| sigma.matrix()[(i, j)] * cx(t) - rho.matrix()[(i, j)]);
        let min = herm_eigvals(&m).unwrap()[0];
        assert!((-1e-8..=1e-8).contains(&min), "{min}");
    }
    let _ = sigma;
}

#[test]
fn hypothesis_testing_basics() {
    let (rho, sigma) = random_pair("dh", 0, 4);
    for eps in [0.0, 0.01, 0.3] {
        let v = hypothesis_testing(&rho, &rho, eps).unwrap().value;
        assert!((v + (1.0 - eps).log2()).abs() < 1e-9, "{eps}: {v}");
    }
    let zero = DensityMatrix::basis(0, vec![2]).unwrap();
    let one = DensityMatrix::basis(1, vec![2]).unwrap();
    assert!(hypothesis_testing(&zero, &one, 0.1).unwrap().value.is_infinite());
    for eps in [-0.1, 1.0, 2.0] {
        assert!(matches!(hypothesis_testing(&rho, &sigma, eps), Err(Error::Domain(_))));
    }
}

#[test]
fn hypothesis_testing_of_commuting_pairs_matches_linear_program() {
    for k in 0..20 {
        let (rho, sigma, p, q) = commuting_pair("dh-lp", k, 2 + (k as usize % 5));
        for eps in [0.0, 0.01, 0.1, 0.5] {
            let got = hypothesis_testing(&rho, &sigma, eps).unwrap().value;
            let want = lp_hypothesis_testing(&p, &q, eps);
            assert!((got - want).abs() < 1e-6, "k={k} eps={eps}: {got} vs {want}");
        }
    }
}

#[test]
fn hypothesis_testing_handles_rank_deficient_pairs() {
    let v = haar_unitary(4, &stream("dh-rank", 0)).unwrap();
    let p = [0.5, 0.3, 0.2, 0.0];
    let q = [0.1, 0.1, 0.2, 0.6];
    for eps in [0.0, 0.05, 0.25] {
        let got = hypothesis_testing(&rotated(&p, &v), &rotated(&q, &v), eps).unwrap().value;
        assert!((got - lp_hypothesis_testing(&p, &q, eps)).abs() < 1e-6);
    }
}

#[test]
fn hypothesis_testing_is_monotone_in_epsilon() {
    for k in 0..10 {
        let (rho, sigma) = random_pair("dh-mono", k, 4);
        let values: Vec<f64> = [0.0, 0.01, 0.05, 0.1, 0.3, 0.6]
            .iter()
            .map(|&e| hypothesis_testing(&rho, &sigma, e).unwrap().value)
            .collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{values:?}");
    }
}

#[test]
fn hypothesis_testing_is_bounded_by_renyi() {
    for k in 0..20 {
        let (rho, sigma) = random_pair("chain-dh", k, 4);
        for alpha in [1.5, 2.0, 10.0] {
            let r = sandwiched_renyi(&rho, &sigma, alpha).unwrap().value;
            for eps in [0.01, 0.1] {
                let h = hypothesis_testing(&rho, &sigma, eps).unwrap().value;
                assert!(h <= r + alpha / (alpha - 1.0) * (1.0 / (1.0 - eps)).log2() + 1e-6);
            }
        }
    }
}

#[test]
fn emax_proxy_values() {
    assert!(emax_mixed_proxy(&DensityMatrix::maximally_mixed(vec![3, 3])).unwrap().abs() < 1e-14);
    assert!((emax_mixed_proxy(&DensityMatrix::basis(3, vec![8]).unwrap()).unwrap() - 3.0).abs() < 1e-14);
    let rho = random_density(6, 1, &stream("emax", 0)).unwrap();
    let via_dmax = dmax(&rho, &DensityMatrix::maximally_mixed(vec![6])).unwrap().value;
    assert!((emax_mixed_proxy(&rho).unwrap() - via_dmax).abs() < 1e-12);
}

#[test]
fn log_negativity_values() {
    let cut = Bipartition::new(&[0], 2).unwrap();
    for k in 0..20 {
        let sep = random_separable_default(2, 3, &stream("ln-sep", k)).unwrap();
        assert!(log_negativity(&sep, &cut).unwrap() <= 1e-8);
    }
    for d in [2, 3, 4] {
        // Partial transpose of Φ+ is SWAP/d, whose trace norm is d.
        let ln = log_negativity(&DensityMatrix::max_entangled(d), &cut).unwrap();
        assert!((ln - (d as f64).log2()).abs() < 1e-12);
    }
}

#[test]
fn log_negativity_decreases_under_admixed_noise() {
    let cut = Bipartition::new(&[0], 2).unwrap();
    let rho = random_density(9, 1, &stream("ln-noise", 0)).unwrap().with_dims(vec![3, 3]).unwrap();
    let mixed = DensityMatrix::maximally_mixed(vec![3, 3]);
    let values: Vec<f64> = (0..=10)
        .map(|i| {
            let w = i as f64 / 10.0;
            let m = Mat::from_fn(9, 9, |a, b| rho.matrix()[(a, b)] * cx(1.0 - w) + mixed.matrix()[(a, b)] * cx(w));
            log_negativity(&DensityMatrix::new(m, vec![3, 3]).unwrap(), &cut).unwrap()
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{values:?}");
}

#[test]
fn repeater_bound_with_self_proxy_reduces_to_distillation_term() {
    let a = random_density(2, 1, &stream("rep-triv-a", 0)).unwrap();
    let b = random_density(2, 1, &stream("rep-triv-b", 0)).unwrap();
    let gamma = PrivateState::new(identity(4), a.tensor(&b)).unwrap();
    let hat = gamma.key_attacked();
    let proxy = SepProxy::joint(hat.tensor(&hat), "key-attacked trivially twisted pbit is separable");
    let grid = AlphaGrid::default_grid();
    let report =
        repeater_bound(gamma.state(), gamma.state(), &[0, 1], &proxy, &EdProxy::LogNegativity(pbit_cut()), &grid)
            .unwrap();
    assert!(report.components.divergence_term.abs() < 1e-8);
    assert!(report.per_alpha_divergence.iter().all(|d| d.abs() < 1e-8));
    assert!((report.components.ed_proxy - 2.0).abs() < 1e-10);
    assert!((report.infinity_endpoint().unwrap() - 2.0).abs() < 1e-8);
}

#[test]
fn repeater_bound_report_structure() {
    let rho = random_pbit(2, &stream("rep", 0)).unwrap();
    let rho2 = random_pbit(2, &stream("rep", 1)).unwrap();
    let grid = AlphaGrid::default_grid();
    let ed = EdProxy::LogNegativity(pbit_cut());
    let report = repeater_bound(rho.state(), rho2.state(), &[0, 1], &SepProxy::maximally_mixed(), &ed, &grid).unwrap();
    assert_eq!(report.per_alpha_values.len(), 41);
    assert!(report.per_alpha_values.iter().all(|v| v.is_finite()));
    assert!(report.per_alpha_values.iter().all(|v| report.infimum <= *v));
    assert!(report.per_alpha_values.contains(&report.infimum));
    let ln = log_negativity(rho.state(), &pbit_cut()).unwrap() + log_negativity(rho2.state(), &pbit_cut()).unwrap();
    assert!((report.components.ed_proxy - ln).abs() < 1e-12);
    let hat_dmax = emax_mixed_proxy(&rho.key_attacked()).unwrap() + emax_mixed_proxy(&rho2.key_attacked()).unwrap();
    assert!((report.infinity_endpoint().unwrap() - (ln + hat_dmax)).abs() < 1e-10);

    // The additive evaluation agrees with the joint one.
    let joint_proxy = SepProxy::joint(DensityMatrix::maximally_mixed(vec![2, 2, 2, 2, 2, 2, 2, 2]), "I/D");
    let small = AlphaGrid::parse("1.5,3,inf").unwrap();
    let a = repeater_bound(rho.state(), rho2.state(), &[0, 1], &SepProxy::maximally_mixed(), &ed, &small).unwrap();
    let b = repeater_bound(rho.state(), rho2.state(), &[0, 1], &joint_proxy, &ed, &small).unwrap();
    for (x, y) in a.per_alpha_values.iter().zip(&b.per_alpha_values) {
        assert!((x - y).abs() < 1e-9);
    }
    let supplied = EdProxy::Supplied { value: 0.25, description: "test".into() };
    let c = repeater_bound(rho.state(), rho2.state(), &[0, 1], &SepProxy::maximally_mixed(), &supplied, &small).unwrap();
    assert_eq!(c.components.ed_proxy, 0.25);
}

#[test]
fn key_bound_extremes() {
    let gamma = random_pbit(2, &stream("kb", 0)).unwrap();
    let rho = gamma.state();
    let grid = AlphaGrid::default_grid();
    let mixed = DensityMatrix::maximally_mixed(rho.dims().to_vec());
    let sep = SepProxy::maximally_mixed();

    let first = key_bound_relaxed(rho, rho, &sep, &grid).unwrap();
    assert!(first.components.ed_proxy.abs() < 1e-10);
    let ctx = RenyiContext::new(rho, &mixed).unwrap();
    let direct = grid.values().iter().map(|&a| ctx.renyi(a).unwrap().value).fold(f64::INFINITY, f64::min);
    assert!((first.infimum - direct).abs() < 1e-10);

    let second = key_bound_relaxed(rho, &mixed, &sep, &grid).unwrap();
    assert!(second.per_alpha_divergence.iter().all(|d| d.abs() < 1e-12));
    let d = relative_entropy(rho, &mixed).unwrap().value;
    assert!((second.infinity_endpoint().unwrap() - d).abs() < 1e-10);

    let sep_state = random_separable_default(4, 4, &stream("kb-sep", 0)).unwrap();
    let sep_state = pbits::qlinalg::permute_subsystems(
        &sep_state.with_dims(vec![2, 2, 2, 2]).unwrap(),
        &[0, 2, 1, 3],
    )
    .unwrap();
    let third = key_bound_relaxed(rho, &sep_state, &SepProxy::joint(sep_state.clone(), "mixture of products"), &grid)
        .unwrap();
    assert!(third.per_alpha_divergence.iter().all(|d| d.abs() < 1e-9));
    assert!((third.components.ed_proxy - relative_entropy(rho, &sep_state).unwrap().value).abs() < 1e-10);
}

#[test]
fn mutual_information_key_bound() {
    let a = random_density(2, 1, &stream("mikb-a", 0)).unwrap();
    let b = random_density(2, 1, &stream("mikb-b", 0)).unwrap();
    let gamma = PrivateState::new(identity(4), a.tensor(&b)).unwrap();
    assert!((mutual_info_key_bound(&gamma).unwrap() - 1.0).abs() < 1e-8);
    for k in 0..5 {
        assert!(mutual_info_key_bound(&random_pbit(3, &stream("mikb", k)).unwrap()).unwrap() >= 0.0);
    }
}

#[test]
fn rate_region_of_pure_untwisted_ibit() {
    let d_s = 3;
    let psi = DensityMatrix::basis(0, vec![d_s, d_s]).unwrap();
    let alpha = IndependentBit::new(identity(d_s * d_s), psi).unwrap();
    for scenario in 1..=4 {
        let r = rate_region(&alpha, scenario).unwrap();
        assert!((r.r_g - (2.0 * (d_s * d_s) as f64).log2()).abs() < 1e-10);
    }
    assert!(rate_region(&alpha, 5).is_err());
    assert!(rate_region(&alpha, 0).is_err());
}

#[test]
fn rate_region_scenario_relations() {
    for k in 0..5 {
        let alpha = random_ibit(4, &stream("rates", k)).unwrap();
        let r1 = rate_region(&alpha, 1).unwrap();
        let r2 = rate_region(&alpha, 2).unwrap();
        let r3 = rate_region(&alpha, 3).unwrap();
        assert!(r3.r_a <= r3.r_g + 1e-8 && r3.r_b <= r3.r_g + 1e-8);
        assert!(r1.r_a <= r2.r_a + 1e-12 && r1.r_b <= r2.r_b + 1e-12);
        if r1.condition_flags["S(AA'|B')>=0"] {
            assert_eq!(r1.r_a, r2.r_a);
        }
        let e = alpha.entropies().unwrap();
        assert!((r1.r_g - ((2.0 * 16.0f64).log2() - e.s_aab)).abs() < 1e-12);
    }
}

#[test]
fn infinite_values_serialize_as_inf() {
    let v = DivergenceValue::infinite(Some(2.0));
    let json = serde_json::to_string(&v).unwrap();
    assert!(json.contains("\"inf\""), "{json}");
    let back: DivergenceValue = serde_json::from_str(&json).unwrap();
    assert!(back.value.is_infinite());
    assert_eq!(back.alpha, Some(2.0));

    let grid = AlphaGrid::parse("2, inf").unwrap();
    assert_eq!(serde_json::to_string(&grid).unwrap(), "[2.0,\"inf\"]");
    assert!(AlphaGrid::parse("1.0").is_err());
    assert!(AlphaGrid::parse("abc").is_err());
}

#[test]
fn reports_serialize_with_documented_fields() {
    let rho = random_pbit(2, &stream("json", 0)).unwrap();
    let grid = AlphaGrid::parse("2,inf").unwrap();
    let report = repeater_bound(
        rho.state(),
        rho.state(),
        &[0, 1],
        &SepProxy::maximally_mixed(),
        &EdProxy::LogNegativity(pbit_cut()),
        &grid,
    )
    .unwrap();
    let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    for key in ["alpha_grid", "per_alpha_values", "infimum", "components", "proxy_descriptions"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert!(json["components"].get("ED_proxy").is_some());
    assert!(json["components"].get("divergence_term").is_some());
    assert_eq!(json["alpha_grid"][1], "inf");

    let r = rate_region(&random_ibit(2, &stream("json-rate", 0)).unwrap(), 1).unwrap();
    let json: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in ["scenario", "R_A", "R_B", "R_G", "condition_flags"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    let back: RateRegion = serde_json::from_value(json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn diagonal_helper_is_a_state() {
    assert!(DensityMatrix::new(diag(&[0.25, 0.75]), vec![2]).is_ok());
}
