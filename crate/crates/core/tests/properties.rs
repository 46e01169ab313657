use pairrank_core::aggregate::{
    bt_fit, bt_fit_traced, bt_two, elo_fit, mean_scores, trueskill_fit, AggregateResult,
};
use pairrank_core::analysis::{
    disagreement, geometric_criterion, iia_scan, kendall_tau, pair_plot_data,
};
use pairrank_core::aggregate::AggregateConfig;
use pairrank_core::stats::{
    median, moods_median_test, paired_t_test, sign_test, wilcoxon_signed_rank, Alternative,
};
use pairrank_core::synth::{fixed_marginal_pairings, inject_outliers};
use pairrank_core::{
    decide, paired_differences, rank_systems, win_counts, BtConfig, DecideConfig, EloConfig,
    Mechanism, ScoreMatrix, TiePolicy, TrueSkillConfig, WinCountMatrix,
};
use proptest::prelude::*;

fn names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("sys{i}")).collect()
}

/// Matrices with small integer scores, so ties are frequent.
fn matrix(max_k: usize, max_n: usize) -> impl Strategy<Value = ScoreMatrix> {
    (2..=max_k, 1..=max_n).prop_flat_map(|(k, n)| {
        prop::collection::vec(prop::collection::vec(0i32..6, n), k).prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(f64::from).collect())
                .collect();
            ScoreMatrix::new(names(k), None, rows).unwrap()
        })
    })
}

/// Two-system matrices with odd `n` and no tied pairs.
fn odd_tie_free_pair() -> impl Strategy<Value = ScoreMatrix> {
    (0usize..15).prop_flat_map(|h| {
        let n = 2 * h + 1;
        (
            prop::collection::vec(-100.0f64..100.0, n),
            prop::collection::vec((0.01f64..50.0, any::<bool>()), n),
        )
            .prop_map(|(b, deltas)| {
                let a: Vec<f64> = b
                    .iter()
                    .zip(&deltas)
                    .map(|(x, (d, up))| if *up { x + d } else { x - d })
                    .collect();
                ScoreMatrix::new(vec!["a".into(), "b".into()], None, vec![a, b]).unwrap()
            })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn permute_instances(m: &ScoreMatrix, perm: &[usize]) -> ScoreMatrix {
    let rows = m.rows().map(|r| perm.iter().map(|&l| r[l]).collect()).collect();
    ScoreMatrix::new(m.systems().to_vec(), None, rows).unwrap()
}

fn winner(r: &AggregateResult) -> Option<String> {
    (r.ranking[0].len() == 1).then(|| r.ranking[0][0].clone())
}

/// Win matrix where each pair meets `games` times with at least one result
/// each way, so the MLE exists.
fn connected_omega() -> impl Strategy<Value = WinCountMatrix> {
    (2usize..7).prop_flat_map(|k| {
        prop::collection::vec(1u32..9, k * k).prop_map(move |cells| {
            let mut omega = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        omega[i][j] = f64::from(cells[i * k + j]);
                    }
                }
            }
            WinCountMatrix::from_omega(names(k), omega).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bt_prefers_a_iff_median_difference_positive(m in odd_tie_free_pair()) {
        let bt = bt_two(&m, "a", "b", TiePolicy::HalfWin).unwrap();
        let d = paired_differences(&m, "a", "b").unwrap().diffs;
        let med = median(&d);
        prop_assert_eq!(bt.values["a"] > bt.values["b"], med > 0.0);
        prop_assert_eq!(bt.values["a"] < bt.values["b"], med < 0.0);
    }

    #[test]
    fn mean_prefers_a_iff_mean_difference_positive(m in matrix(2, 30)) {
        let r = mean_scores(&m);
        let d = paired_differences(&m, "sys0", "sys1").unwrap().diffs;
        let md = d.iter().sum::<f64>() / d.len() as f64;
        prop_assert_eq!(r.values["sys0"] > r.values["sys1"], md > 0.0);
    }

    #[test]
    fn paired_differences_are_antisymmetric(m in matrix(4, 20)) {
        let ab = paired_differences(&m, "sys0", "sys1").unwrap().diffs;
        let ba = paired_differences(&m, "sys1", "sys0").unwrap().diffs;
        prop_assert!(ab.iter().zip(&ba).all(|(x, y)| x + y == 0.0));
    }

    #[test]
    fn win_count_invariants(m in matrix(5, 20), perm_seed in any::<u64>()) {
        let n = m.n_instances() as f64;
        let k = m.n_systems();
        let half = win_counts(&m, TiePolicy::HalfWin);
        let drop = win_counts(&m, TiePolicy::Drop);
        let mut total = 0.0;
        for i in 0..k {
            prop_assert_eq!(half.omega(i, i), 0.0);
            for j in 0..k {
                if i != j {
                    prop_assert_eq!(half.omega(i, j) + half.omega(j, i), n);
                    prop_assert_eq!(drop.omega(i, j) + drop.omega(j, i) + drop.ties(i, j) as f64, n);
                    total += half.omega(i, j);
                }
            }
        }
        prop_assert_eq!(total, n * (k * (k - 1)) as f64 / 2.0);
        // Reversing plus rotating the instance axis is a joint permutation.
        let len = m.n_instances();
        let shift = (perm_seed as usize) % len;
        let perm: Vec<usize> = (0..len).rev().map(|l| (l + shift) % len).collect();
        prop_assert_eq!(win_counts(&permute_instances(&m, &perm), TiePolicy::HalfWin), half);
    }

    #[test]
    fn mm_log_likelihood_never_decreases(w in connected_omega()) {
        let (_, trace) = bt_fit_traced(&w, &BtConfig::default()).unwrap();
        for pair in trace.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12 * pair[0].abs().max(1.0));
        }
    }

    #[test]
    fn bt_fit_sums_to_one_and_matches_closed_form(w in connected_omega()) {
        let r = bt_fit(&w, &BtConfig::default()).unwrap();
        prop_assert!(r.values.values().all(|&v| v > 0.0));
        prop_assert!((r.values.values().sum::<f64>() - 1.0).abs() < 1e-9);
        if w.k() == 2 {
            let p = w.omega(0, 1) / (w.omega(0, 1) + w.omega(1, 0));
            prop_assert!((r.values["sys0"] - p).abs() < 1e-9);
        }
    }

    #[test]
    fn bt_two_and_bt_fit_agree_for_two_systems(m in matrix(2, 25)) {
        let two = bt_two(&m, "sys0", "sys1", TiePolicy::HalfWin).unwrap();
        let w = win_counts(&m, TiePolicy::HalfWin);
        if let Ok(fit) = bt_fit(&w, &BtConfig::default()) {
            for s in ["sys0", "sys1"] {
                prop_assert!((fit.values[s] - two.values[s]).abs() < 1e-9);
            }
            let lead = w.omega(0, 1) - w.omega(1, 0);
            let top = rank_systems(&fit);
            if lead > 0.0 {
                prop_assert_eq!(&top[0], &vec!["sys0".to_string()]);
            } else if lead < 0.0 {
                prop_assert_eq!(&top[0], &vec!["sys1".to_string()]);
            }
        }
    }

    #[test]
    fn bt_fit_is_invariant_to_relabeling_and_instance_order(
        m in matrix(5, 25),
        sys_perm in permutation(5),
        inst_seed in any::<u64>(),
    ) {
        let k = m.n_systems();
        let cfg = BtConfig::default();
        let Ok(base) = bt_fit(&win_counts(&m, TiePolicy::HalfWin), &cfg) else { return Ok(()) };
        let order: Vec<usize> = sys_perm.into_iter().filter(|&i| i < k).collect();
        let relabeled = m.select_systems(&order).unwrap();
        let len = m.n_instances();
        let shift = (inst_seed as usize) % len;
        let perm: Vec<usize> = (0..len).map(|l| (l + shift) % len).rev().collect();
        let moved = permute_instances(&relabeled, &perm);
        let other = bt_fit(&win_counts(&moved, TiePolicy::HalfWin), &cfg).unwrap();
        for (name, v) in &base.values {
            prop_assert!((other.values[name] - v).abs() < 10.0 * cfg.epsilon);
        }
    }

    #[test]
    fn instance_offsets_leave_paired_quantities_unchanged(
        m in matrix(4, 20),
        offsets in prop::collection::vec(-50i32..50, 20),
    ) {
        let rows = m
            .rows()
            .map(|r| r.iter().enumerate().map(|(l, x)| x + f64::from(offsets[l])).collect())
            .collect();
        let shifted = ScoreMatrix::new(m.systems().to_vec(), None, rows).unwrap();
        for policy in [TiePolicy::HalfWin, TiePolicy::Drop] {
            prop_assert_eq!(win_counts(&shifted, policy), win_counts(&m, policy));
        }
        prop_assert_eq!(
            bt_two(&shifted, "sys0", "sys1", TiePolicy::HalfWin).unwrap(),
            bt_two(&m, "sys0", "sys1", TiePolicy::HalfWin).unwrap()
        );
        let cfg = BtConfig::default();
        match (bt_fit(&win_counts(&m, TiePolicy::HalfWin), &cfg), bt_fit(&win_counts(&shifted, TiePolicy::HalfWin), &cfg)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
        let dc = DecideConfig::default();
        for mech in [Mechanism::Bt, Mechanism::Mean] {
            if m.n_instances() >= 2 {
                let d1 = decide(&m, "sys0", "sys1", mech, 0.05, &dc).unwrap();
                let d2 = decide(&shifted, "sys0", "sys1", mech, 0.05, &dc).unwrap();
                prop_assert_eq!(d1.decision, d2.decision);
            }
        }
    }

    #[test]
    fn ratings_are_equivariant_under_relabeling(m in matrix(4, 15), perm in permutation(4)) {
        let k = m.n_systems();
        let order: Vec<usize> = perm.into_iter().filter(|&i| i < k).collect();
        let relabeled = m.select_systems(&order).unwrap();
        let elo_a = elo_fit(&m, &EloConfig::default()).unwrap();
        let elo_b = elo_fit(&relabeled, &EloConfig::default()).unwrap();
        let ts_a = trueskill_fit(&m, &TrueSkillConfig::default()).unwrap();
        let ts_b = trueskill_fit(&relabeled, &TrueSkillConfig::default()).unwrap();
        for name in m.systems() {
            prop_assert!((elo_a.values[name] - elo_b.values[name]).abs() < 1e-9);
            prop_assert_eq!(ts_a.values[name], ts_b.values[name]);
        }
        prop_assert_eq!(elo_a.ranking, elo_b.ranking);
        prop_assert_eq!(ts_a.ranking, ts_b.ranking);
    }

    #[test]
    fn decisions_follow_p_values(m in matrix(3, 25), alpha in 0.01f64..0.5) {
        prop_assume!(m.n_instances() >= 2);
        let cfg = DecideConfig { bootstrap: pairrank_core::stats::BootstrapConfig { resamples: 200, ..Default::default() }, ..Default::default() };
        for mech in [Mechanism::Mean, Mechanism::Median, Mechanism::Bt] {
            let d = decide(&m, "sys0", "sys1", mech, alpha, &cfg).unwrap();
            prop_assert!((0.0..=1.0).contains(&d.p_value));
            let inconclusive = d.decision == pairrank_core::Decision::Inconclusive;
            prop_assert_eq!(inconclusive, d.p_value >= alpha);
            if !inconclusive {
                prop_assert_eq!(d.decision == pairrank_core::Decision::First, d.statistic > 0.0);
            }
        }
    }

    #[test]
    fn tests_ignore_instance_order(m in matrix(2, 25), seed in any::<u64>()) {
        let len = m.n_instances();
        let shift = (seed as usize) % len;
        let perm: Vec<usize> = (0..len).map(|l| (l + shift) % len).rev().collect();
        let p = permute_instances(&m, &perm);
        let d1 = paired_differences(&m, "sys0", "sys1").unwrap().diffs;
        let d2 = paired_differences(&p, "sys0", "sys1").unwrap().diffs;
        prop_assert_eq!(sign_test(&d1, Alternative::TwoSided).unwrap(), sign_test(&d2, Alternative::TwoSided).unwrap());
        prop_assert_eq!(
            wilcoxon_signed_rank(&d1, Alternative::TwoSided).unwrap(),
            wilcoxon_signed_rank(&d2, Alternative::TwoSided).unwrap()
        );
        prop_assert_eq!(
            moods_median_test(m.row(0), m.row(1), false).unwrap(),
            moods_median_test(p.row(0), p.row(1), false).unwrap()
        );
        if len >= 2 {
            let (t1, t2) = (paired_t_test(&d1, Alternative::TwoSided).unwrap(), paired_t_test(&d2, Alternative::TwoSided).unwrap());
            prop_assert!((t1.p_value - t2.p_value).abs() < 1e-12);
        }
    }

    #[test]
    fn sign_test_depends_on_counts_only(diffs in prop::collection::vec(-5i32..5, 1..40), c in 1i32..10) {
        let d: Vec<f64> = diffs.iter().map(|&x| f64::from(x)).collect();
        let k = d.iter().filter(|&&x| x > 0.0).count();
        let n = d.iter().filter(|&&x| x != 0.0).count();
        let canon: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else { -1.0 }).collect();
        let r = sign_test(&d, Alternative::TwoSided).unwrap();
        if n > 0 {
            prop_assert_eq!(r.p_value, sign_test(&canon, Alternative::TwoSided).unwrap().p_value);
        }
        let up: Vec<f64> = d.iter().map(|x| x + f64::from(c)).collect();
        prop_assert!(sign_test(&up, Alternative::TwoSided).unwrap().statistic >= r.statistic);
    }

    #[test]
    fn mood_ignores_monotone_transforms(xs in prop::collection::vec(-20.0f64..20.0, 1..20), ys in prop::collection::vec(-20.0f64..20.0, 1..20)) {
        let f = |v: &[f64]| v.iter().map(|x| x.exp() * 3.0 + x).collect::<Vec<_>>();
        let a = moods_median_test(&xs, &ys, false).unwrap();
        let b = moods_median_test(&f(&xs), &f(&ys), false).unwrap();
        prop_assert!((a.statistic - b.statistic).abs() < 1e-9);
        prop_assert_eq!(moods_median_test(&ys, &xs, false).unwrap().statistic, a.statistic);
    }

    #[test]
    fn kendall_is_symmetric_and_bounded(x in prop::collection::vec(0i32..5, 2..15), y in prop::collection::vec(0i32..5, 2..15)) {
        let n = x.len().min(y.len());
        let xs: Vec<f64> = x[..n].iter().map(|&v| f64::from(v)).collect();
        let ys: Vec<f64> = y[..n].iter().map(|&v| f64::from(v)).collect();
        match (kendall_tau(&xs, &ys), kendall_tau(&ys, &xs)) {
            (Ok(a), Ok(b)) => {
                prop_assert!((a - b).abs() < 1e-15);
                prop_assert!((-1.0..=1.0).contains(&a));
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
        if let Ok(t) = kendall_tau(&xs, &xs) {
            prop_assert_eq!(t, 1.0);
        }
    }

    #[test]
    fn self_disagreement_is_zero(m in matrix(5, 12)) {
        for mech in [Mechanism::Mean, Mechanism::Median, Mechanism::Bt] {
            let r = disagreement(&m, mech, mech, &AggregateConfig::default()).unwrap();
            prop_assert_eq!((r.pair_disagreement, r.sota_differs, r.top3_differs), (0.0, false, false));
        }
    }

    #[test]
    fn pair_plot_matches_win_counts(m in matrix(2, 30)) {
        let p = pair_plot_data(&m, "sys0", "sys1", 5).unwrap();
        let n = m.n_instances() as f64;
        let w = win_counts(&m, TiePolicy::Drop);
        prop_assert_eq!(p.points.len(), m.n_instances());
        prop_assert_eq!(p.mass_above_diagonal, w.omega(1, 0) / n);
        prop_assert!((p.mass_above_diagonal + p.mass_below_diagonal + p.mass_on_diagonal - 1.0).abs() < 1e-12);
        let bt = bt_two(&m, "sys0", "sys1", TiePolicy::Drop).unwrap();
        prop_assert_eq!(geometric_criterion(&p)[&Mechanism::Bt].clone(), winner(&bt));
    }

    #[test]
    fn two_system_iia_scan_is_empty(m in matrix(2, 10)) {
        let scan = iia_scan(&m, &BtConfig::default(), TiePolicy::HalfWin).unwrap();
        prop_assert!(scan.violations.is_empty() && scan.skipped.is_empty());
    }

    #[test]
    fn outliers_preserve_instance_multisets(m in matrix(5, 30), f in 0.0f64..0.99, seed in any::<u64>()) {
        let (out, chosen) = inject_outliers(&m, f, seed).unwrap();
        prop_assert_eq!(chosen.len(), (f * m.n_instances() as f64).round() as usize);
        for l in 0..m.n_instances() {
            let mut a: Vec<f64> = (0..m.n_systems()).map(|s| m.score(s, l)).collect();
            let mut b: Vec<f64> = (0..m.n_systems()).map(|s| out.score(s, l)).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn pairings_keep_marginals(
        means in prop::collection::vec(prop::collection::vec(0.0f64..100.0, 5), 3),
        perms in prop::collection::vec(permutation(5), 1..4),
        sample in any::<bool>(),
    ) {
        let sampling = sample.then_some(pairrank_core::synth::PairingSampling { instances_per_type: 3, sigma2: 1.0, seed: 4 });
        let out = fixed_marginal_pairings(&names(3), &means, &perms, sampling).unwrap();
        let sorted = |r: &[f64]| { let mut v = r.to_vec(); v.sort_by(f64::total_cmp); v };
        for m in &out {
            for s in 0..3 {
                prop_assert_eq!(sorted(m.row(s)), sorted(out[0].row(s)));
            }
        }
    }
}
