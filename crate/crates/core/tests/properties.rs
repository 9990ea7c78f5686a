mod common;

use common::{cx, max_diff};
use faer::Mat;
use pbits::entropics::{hypothesis_testing, rate_region, relative_entropy, sandwiched_renyi, dmax};
use pbits::experiments::ExperimentRecord;
use pbits::qlinalg::{
    herm_eigvals, matmul, partial_trace, polar, trace, trace_norm, von_neumann_entropy, DensityMatrix,
};
use pbits::randmat::{ginibre, haar_unitary, random_density, GinibreSpec, RandomStream};
use pbits::states::{pbit_from_x, random_ibit};
use proptest::prelude::*;

fn s(seed: u64, label: &str) -> RandomStream {
    RandomStream::new(seed, label, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn entropy_is_bounded_by_log_dimension(seed in any::<u64>(), d in 1usize..12, k in 1usize..3) {
        let rho = random_density(d, k, &s(seed, "bound")).unwrap();
        let e = von_neumann_entropy(&rho).unwrap();
        prop_assert!(e >= 0.0 && e <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn entropy_is_additive(seed in any::<u64>(), a in 1usize..5, b in 1usize..5) {
        let rho = random_density(a, 1, &s(seed, "add-a")).unwrap();
        let tau = random_density(b, 1, &s(seed, "add-b")).unwrap();
        let joint = von_neumann_entropy(&rho.tensor(&tau)).unwrap();
        let sum = von_neumann_entropy(&rho).unwrap() + von_neumann_entropy(&tau).unwrap();
        prop_assert!((joint - sum).abs() <= 1e-8);
    }

    #[test]
    fn partial_trace_is_trace_preserving_and_linear(seed in any::<u64>(), w in 0.0f64..1.0) {
        let dims = vec![2, 3, 2];
        let r1 = random_density(12, 1, &s(seed, "lin-1")).unwrap().with_dims(dims.clone()).unwrap();
        let r2 = random_density(12, 1, &s(seed, "lin-2")).unwrap().with_dims(dims.clone()).unwrap();
        let mix = Mat::from_fn(12, 12, |i, j| r1.matrix()[(i, j)] * cx(w) + r2.matrix()[(i, j)] * cx(1.0 - w));
        let mix = DensityMatrix::new(mix, dims).unwrap();
        for keep in [vec![0], vec![1, 2], vec![0, 2]] {
            let p = partial_trace(&mix, &keep).unwrap();
            prop_assert!((trace(p.matrix()).re - 1.0).abs() <= 1e-12);
            let p1 = partial_trace(&r1, &keep).unwrap();
            let p2 = partial_trace(&r2, &keep).unwrap();
            let combo = Mat::from_fn(p.order(), p.order(), |i, j| p1.matrix()[(i, j)] * cx(w) + p2.matrix()[(i, j)] * cx(1.0 - w));
            prop_assert!(max_diff(p.matrix(), &combo) <= 1e-14);
        }
    }

    #[test]
    fn polar_reconstructs(seed in any::<u64>(), n in 1usize..8) {
        let x = ginibre(GinibreSpec::complex(n, n), &s(seed, "polar")).unwrap();
        let p = polar(&x, true).unwrap();
        let scale = pbits::qlinalg::max_abs(&x);
        prop_assert!(max_diff(&matmul(p.p.as_ref(), p.w.as_ref()), &x) <= 1e-9 * scale);
    }

    #[test]
    fn trace_norm_dominates_trace(seed in any::<u64>(), n in 1usize..8) {
        let x = ginibre(GinibreSpec::complex(n, n), &s(seed, "tn")).unwrap();
        prop_assert!(trace_norm(&x).unwrap() >= trace(&x).norm() - 1e-12);
        let rho = random_density(n, 1, &s(seed, "tn-psd")).unwrap();
        prop_assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pbit_spectrum_is_shield_spectrum(seed in any::<u64>(), d_s in 2usize..5) {
        let n = d_s * d_s;
        let u = haar_unitary(n, &s(seed, "spec-u")).unwrap();
        let sigma = random_density(n, 1, &s(seed, "spec-s")).unwrap();
        let x = matmul(sigma.matrix().as_ref(), u.adjoint());
        let gamma = pbit_from_x(&x).unwrap();
        let e = herm_eigvals(gamma.state().matrix()).unwrap();
        let zeros = 3 * n;
        prop_assert_eq!(e.iter().filter(|v| v.abs() <= 1e-9).count(), zeros);
        let sig = herm_eigvals(sigma.matrix()).unwrap();
        for (a, b) in e[zeros..].iter().zip(&sig) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn streams_are_deterministic(seed in any::<u64>(), label in "[a-z]{1,8}", idx in any::<u64>()) {
        let a = RandomStream::new(seed, label.clone(), idx);
        let b = RandomStream::new(seed, label, idx);
        prop_assert_eq!(a.key(), b.key());
        let (ra, rb) = (random_density(3, 1, &a).unwrap(), random_density(3, 1, &b).unwrap());
        prop_assert_eq!(ra.matrix(), rb.matrix());
    }

    #[test]
    fn divergence_chain_holds(seed in any::<u64>(), n in 2usize..6, alpha in 1.01f64..20.0, eps in 0.0f64..0.5) {
        let rho = random_density(n, 1, &s(seed, "ch-r")).unwrap();
        let sigma = random_density(n, 2, &s(seed, "ch-s")).unwrap();
        let d = relative_entropy(&rho, &sigma).unwrap().value;
        let r = sandwiched_renyi(&rho, &sigma, alpha).unwrap().value;
        let r2 = sandwiched_renyi(&rho, &sigma, alpha + 1.0).unwrap().value;
        let m = dmax(&rho, &sigma).unwrap().value;
        prop_assert!(d >= 0.0);
        prop_assert!(d <= r + 1e-8 && r <= r2 + 1e-8 && r2 <= m + 1e-8);
        let h = hypothesis_testing(&rho, &sigma, eps).unwrap().value;
        let h2 = hypothesis_testing(&rho, &sigma, (eps + 0.1).min(0.99)).unwrap().value;
        prop_assert!(h <= h2 + 1e-9);
        prop_assert!(h <= r + alpha / (alpha - 1.0) * (1.0 / (1.0 - eps)).log2() + 1e-6);
    }

    #[test]
    fn rate_regions_respect_global_purity(seed in any::<u64>(), d_s in 2usize..5) {
        let alpha = random_ibit(d_s, &s(seed, "rr")).unwrap();
        let r3 = rate_region(&alpha, 3).unwrap();
        prop_assert!(r3.r_a <= r3.r_g + 1e-8 && r3.r_b <= r3.r_g + 1e-8);
        let r1 = rate_region(&alpha, 1).unwrap();
        let r2 = rate_region(&alpha, 2).unwrap();
        prop_assert!(r1.r_a <= r2.r_a + 1e-12 && r1.r_b <= r2.r_b + 1e-12);
        if r1.condition_flags["S(AA'|B')>=0"] {
            prop_assert_eq!(r1.r_a, r2.r_a);
        }
        if r1.condition_flags["S(B'|AA')>=0"] {
            prop_assert_eq!(r1.r_b, r2.r_b);
        }
    }

    #[test]
    fn csv_rows_round_trip(dim in 1usize..1000, sample in 0usize..1000, q in "[a-z_=0-9.]{1,16}", v in any::<f64>()) {
        prop_assume!(v.is_finite());
        let r = ExperimentRecord::new("exp", dim, sample, q, v);
        let back = ExperimentRecord::parse_csv_row(&r.to_csv_row()).unwrap();
        prop_assert_eq!(back.value.to_bits(), v.to_bits());
        prop_assert_eq!(back, r);
    }
}
