use combwalk::exact::{dk_limit_cdf, KernelSweep};
use combwalk::harness::ExperimentConfig;
use combwalk::lab::{lil_profile, series_classify, Family, Graph, LilSpec, SeriesCriterion, Statistic};
use combwalk::lattice::CombVertex;
use combwalk::metrics::{comb_graph_distance, max_pairwise_comb, max_pairwise_distance, EnsembleSnapshot};
use combwalk::stats::EmpiricalCdf;
use proptest::prelude::*;

fn vertex() -> impl Strategy<Value = CombVertex> {
    (-40i64..40, -40i64..40).prop_map(|(x, y)| CombVertex::new(x, y))
}

proptest! {
    #[test]
    fn comb_distance_is_a_metric(u in vertex(), v in vertex(), w in vertex()) {
        prop_assert_eq!(comb_graph_distance(u, v), comb_graph_distance(v, u));
        prop_assert_eq!(comb_graph_distance(u, v) == 0, u == v);
        prop_assert!(comb_graph_distance(u, w) <= comb_graph_distance(u, v) + comb_graph_distance(v, w));
    }

    #[test]
    fn max_distance_ignores_walker_order(mut states in prop::collection::vec(vertex(), 2..8), seed in any::<u64>()) {
        let d = max_pairwise_comb(&states);
        let snap = EnsembleSnapshot::new(0, states.clone()).unwrap();
        prop_assert_eq!(max_pairwise_distance(&snap).unwrap(), d as f64);
        let n = states.len();
        states.swap(seed as usize % n, (seed >> 32) as usize % n);
        states.reverse();
        prop_assert_eq!(max_pairwise_comb(&states), d);
    }

    #[test]
    fn max_distance_grows_with_the_ensemble(states in prop::collection::vec(vertex(), 3..8)) {
        for k in 2..states.len() {
            prop_assert!(max_pairwise_comb(&states[..k]) <= max_pairwise_comb(&states[..k + 1]));
        }
    }

    #[test]
    fn kernel_respects_parity(x in -3i64..3, y in -3i64..3, n in 0u64..40) {
        let start = CombVertex::new(x, y);
        let mut s = KernelSweep::new(start, n).unwrap();
        s.advance_to(n).unwrap();
        let t = s.table();
        prop_assert!((t.total() - 1.0).abs() < 1e-12);
        prop_assert_eq!(t.parity_violation(), 0.0);
        prop_assert!(t.support_radius() <= n);
    }

    #[test]
    fn chapman_kolmogorov(y in -2i64..3, m in 1u64..12, n in 1u64..12, tx in -4i64..5, ty in -4i64..5) {
        let start = CombVertex::new(0, y);
        let target = CombVertex::new(tx, ty);
        let mut direct = KernelSweep::new(start, m + n).unwrap();
        direct.advance_to(m + n).unwrap();
        let mut first = KernelSweep::new(start, m).unwrap();
        first.advance_to(m).unwrap();
        let mut composed = 0.0;
        for (&mid, &p) in &first.table().probs {
            let mut second = KernelSweep::new(mid, n).unwrap();
            second.advance_to(n).unwrap();
            composed += p * second.prob(target);
        }
        prop_assert!((composed - direct.prob(target)).abs() < 1e-13);
    }

    #[test]
    fn empirical_cdf_is_a_step_cdf(xs in prop::collection::vec(-1e3f64..1e3, 1..200)) {
        let e = EmpiricalCdf::new(xs.clone()).unwrap();
        let mut prev = 0.0;
        for (v, before, after) in e.jumps() {
            prop_assert!(before >= prev && after > before);
            prop_assert_eq!(e.eval(v), after);
            prev = after;
        }
        prop_assert_eq!(prev, 1.0);
        prop_assert_eq!(e.eval(-1e9), 0.0);
    }

    #[test]
    fn limit_cdf_is_monotone(z in 0.0f64..5.0, dz in 0.01f64..1.0, k in 2usize..5) {
        let a = dk_limit_cdf(z, k).unwrap();
        let b = dk_limit_cdf(z + dz, k).unwrap();
        prop_assert!(a <= b + 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
        // more walkers spread further
        prop_assert!(dk_limit_cdf(z, k + 1).unwrap() <= a + 1e-12);
    }

    #[test]
    fn config_round_trips(k in 2u64..9, n in 1000u64..100_000, seed in any::<u64>(), eps in 0.001f64..0.12) {
        let text = format!("experiment = \"lower_class\"\nk = {k}\nn_max = {n}\nmaster_seed = {}\neps = {eps}\nwindow_start = 100\n", seed as i64 & i64::MAX);
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let again = ExperimentConfig::parse(&cfg.canonical()).unwrap();
        prop_assert_eq!(cfg.hash(), again.hash());
        prop_assert_eq!(cfg, again);
    }

    #[test]
    fn series_verdict_is_stable_under_scaling(alpha in 0.01f64..2.0, p in 1i64..4) {
        // a and c·a share a verdict
        let v = series_classify(&SeriesCriterion::comb(Family::Power { alpha }, p + 2)).unwrap();
        let w = series_classify(&SeriesCriterion::zd(Family::Power { alpha }, p + 3, 1)).unwrap();
        prop_assert_eq!(v, w);
    }
}

#[test]
fn running_max_profiles_are_monotone_and_coupled_in_k() {
    let spec = |k| LilSpec { graph: Graph::Comb, k, n_max: 1 << 14, replicates: 24, seed: 5, burn_in: 16 };
    let two = lil_profile(&spec(2), Statistic::MaxDistance).unwrap();
    let three = lil_profile(&spec(3), Statistic::MaxDistance).unwrap();
    for (a, b) in two.running_max.iter().zip(&three.running_max) {
        assert!(a.windows(2).all(|w| w[0] <= w[1]));
        // walker i follows the same path in both ensembles, so D_3 >= D_2
        assert!(a.iter().zip(b).all(|(x, y)| x <= y));
    }
    for p in [&two, &three] {
        assert!(p.ensemble_max.iter().zip(&p.ensemble_median).all(|(m, med)| m >= med));
    }
}
