use proptest::prelude::*;
use thzmc::analysis::{
    build_switch_chain, closest_shares, conn_prob_mc, conn_prob_sc, conn_prob_sc_quadrature, reactive_shares,
    reactive_shares_from_chain, AnalysisOptions,
};
use thzmc::blockage::{los_probability, mean_los_duration, mean_nlos_duration, SystemParams};
use thzmc::channel::{synthetic, ChannelModel, LinkBudget, TransmissionWindow};

fn ordered(raw: Vec<f64>, r0: f64) -> Vec<f64> {
    let mut xs: Vec<f64> = raw.into_iter().map(|v| r0 + v).collect();
    xs.sort_by(f64::total_cmp);
    xs
}

fn params_with(lambda_b: f64, lambda_a: f64) -> SystemParams {
    SystemParams::default().with_lambda_b(lambda_b).with_lambda_a(lambda_a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weights_are_distributions(
        raw in prop::collection::vec(0.0f64..60.0, 1..7),
        lambda_b in 0.0f64..1.0,
    ) {
        let p = params_with(lambda_b, 1e-2);
        let xs = ordered(raw, p.r0);
        for g in [closest_shares(&xs, &p), reactive_shares(&xs, &p)] {
            let s: f64 = g.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12, "sum {}", s);
            prop_assert!(g.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn chain_invariants(
        raw in prop::collection::vec(0.0f64..60.0, 2..7),
        lambda_b in 0.01f64..1.0,
    ) {
        let p = params_with(lambda_b, 1e-2);
        let xs = ordered(raw, p.r0);
        let chain = build_switch_chain(&xs, &p).unwrap();
        let n = chain.degree();
        let b_sum: f64 = chain.b().iter().sum();
        prop_assert!((b_sum - 1.0).abs() < 1e-12);
        prop_assert!(chain.b().iter().all(|&v| v >= 0.0));
        for i in 0..n {
            prop_assert_eq!(chain.u(i, i), 0.0);
            let row: f64 = (0..n).map(|j| chain.u(i, j)).sum();
            prop_assert!(row <= 1.0 + 1e-15);
            prop_assert!(chain.absorption(i) >= -1e-15);
            prop_assert!(chain.d(i, i) >= 1.0 - 1e-12);
            for j in 0..n {
                prop_assert!((0.0..=1.0).contains(&chain.u(i, j)));
                prop_assert!(chain.d(i, j) >= -1e-12);
                // U D = D - I
                let ud: f64 = (0..n).map(|k| chain.u(i, k) * chain.d(k, j)).sum();
                let eye = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ud - (chain.d(i, j) - eye)).abs() < 1e-10);
            }
        }
        let g = reactive_shares_from_chain(&chain, &xs, &p);
        prop_assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn los_probability_decreases_with_distance(x in 0.0f64..200.0, dx in 1e-3f64..50.0, lambda_b in 0.01f64..1.0) {
        let p = params_with(lambda_b, 1e-2);
        let a = los_probability(x, &p);
        let b = los_probability(x + dx, &p);
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!(b < a);
    }

    #[test]
    fn renewal_identity_everywhere(x in 0.0f64..100.0, lambda_b in 0.01f64..1.0, v_b in 0.1f64..3.0) {
        let p = SystemParams { v_b, ..params_with(lambda_b, 1e-2) };
        let t_los = mean_los_duration(x, &p).mean().unwrap();
        let t_nlos = mean_nlos_duration(x, &p).unwrap();
        let lhs = los_probability(x, &p) * (t_los + t_nlos);
        prop_assert!(((lhs - t_los) / t_los).abs() < 1e-12);
    }

    #[test]
    fn single_precision_tracks_double(x in 0.0f64..50.0, lambda_b in 0.01f64..1.0) {
        let p64 = params_with(lambda_b, 1e-2);
        let p32 = SystemParams::<f32> {
            lambda_b: lambda_b as f32,
            ..SystemParams::default()
        };
        let a = f64::from(los_probability(x as f32, &p32));
        prop_assert!((a - los_probability(x, &p64)).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closed_form_matches_quadrature(lambda_a in 1e-3f64..2e-2, lambda_b in 0.05f64..0.5) {
        let p = params_with(lambda_b, lambda_a);
        let a = conn_prob_sc(&p).value;
        let b = conn_prob_sc_quadrature(&p, &AnalysisOptions::default()).value;
        prop_assert!(((a - b) / a).abs() < 1e-6);
    }

    #[test]
    fn connection_grows_with_degree_and_density(lambda_a in 1e-3f64..2e-2, bump in 1.05f64..2.0, lambda_b in 0.05f64..0.5) {
        let opts = AnalysisOptions::default();
        let p = params_with(lambda_b, lambda_a);
        let q = params_with(lambda_b, lambda_a * bump);
        let sc = conn_prob_mc(1, &p, &opts).value;
        let mc = conn_prob_mc(2, &p, &opts).value;
        prop_assert!(mc >= sc);
        prop_assert!(conn_prob_mc(1, &q, &opts).value >= sc);
        prop_assert!(conn_prob_mc(2, &q, &opts).value >= mc);
    }

    #[test]
    fn usable_band_shrinks_with_distance(x in 1.0f64..40.0, dx in 0.5f64..20.0) {
        for (spec, window) in [
            (synthetic::bundled_w1(), TransmissionWindow::w1()),
            (synthetic::bundled_w2(), TransmissionWindow::w2()),
        ] {
            let m = ChannelModel::new(spec, window, LinkBudget::indoor(20.0), 1.8).unwrap();
            let near = m.usable_band(x).unwrap();
            let far = m.usable_band(x + dx).unwrap();
            prop_assert!(far.count <= near.count);
            prop_assert!(m.capacity(x + dx).unwrap() < m.capacity(x).unwrap());
        }
    }
}

#[test]
fn higher_degrees_keep_growing() {
    let opts = AnalysisOptions::default().with_samples(200_000);
    for lambda_a in [2e-3, 1e-2, 2e-2] {
        let p = params_with(0.2, lambda_a);
        let values: Vec<f64> = (1..=4).map(|n| conn_prob_mc(n, &p, &opts).value).collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0]), "{values:?}");
    }
}
