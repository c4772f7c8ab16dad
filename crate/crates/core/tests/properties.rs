use proptest::prelude::*;

use randlab_core::cexp::{run_experiment, Algorithm, Design, TrialTable};
use randlab_core::kolmolab::{vm_run, BitString, ExecOutcome, ToyProgram};
use randlab_core::prng::{find_period, generate, lcg_next, normalize, LcgParams};
use randlab_core::randtests::{
    chi_square_pvalue, frequency_test, poker_probabilities, runs_z_score, SampleSeq,
};

fn lcg_params() -> impl Strategy<Value = LcgParams> {
    (2u64..5000)
        .prop_flat_map(|m| (0..m, 0..m, Just(m), 0..m))
        .prop_map(|(a, b, m, r0)| LcgParams::new(a, b, m, r0).unwrap())
}

proptest! {
    #[test]
    fn normalize_is_monotone_and_in_range(mut xs in prop::collection::vec(0u64..1000, 0..200)) {
        xs.sort_unstable();
        let u = normalize(&xs, 1000).unwrap();
        prop_assert!(u.iter().all(|v| (0.0..1.0).contains(v)));
        prop_assert!(u.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn generated_values_stay_below_modulus(p in lcg_params()) {
        let xs = generate(&p, 300).unwrap();
        prop_assert_eq!(xs[0], lcg_next(p.r0(), &p));
        prop_assert!(xs.iter().all(|&x| x < p.m()));
    }

    #[test]
    fn sequence_is_periodic_after_tail(p in lcg_params()) {
        let r = find_period(&p);
        prop_assert!(r.period >= 1 && r.period + r.tail <= p.m());
        let xs = generate(&p, (r.tail + 2 * r.period) as usize).unwrap();
        let (t, per) = (r.tail as usize, r.period as usize);
        prop_assert_eq!(xs[t], xs[t + per]);
    }

    #[test]
    fn chi_square_pvalue_in_unit_interval_and_decreasing(
        df in 1u32..200,
        x in 0.0f64..400.0,
        dx in 0.0f64..50.0,
    ) {
        let p1 = chi_square_pvalue(x, df).unwrap();
        let p2 = chi_square_pvalue(x + dx, df).unwrap();
        prop_assert!((0.0..=1.0).contains(&p1));
        prop_assert!(p2 <= p1 + 1e-15);
    }

    #[test]
    fn frequency_statistic_ignores_order(
        xs in prop::collection::vec(0.0f64..1.0, 100..300),
        seed in any::<u64>(),
    ) {
        let mut ys = xs.clone();
        let mut rng = randlab_core::cexp::SplitMix64::new(seed);
        for i in (1..ys.len()).rev() {
            ys.swap(i, rng.below(i as u64 + 1) as usize);
        }
        let a = frequency_test(&SampleSeq::new(xs).unwrap(), 8).unwrap();
        let b = frequency_test(&SampleSeq::new(ys).unwrap(), 8).unwrap();
        prop_assert_eq!(a.statistic, b.statistic);
        prop_assert_eq!(a.p_value, b.p_value);
    }

    #[test]
    fn runs_z_increases_with_run_count(n0 in 2u64..500, n1 in 2u64..500, r in 2u64..1000) {
        let max = 2 * n0.min(n1) + u64::from(n0 != n1);
        prop_assume!(r < max);
        let z1 = runs_z_score(r, n0, n1).unwrap();
        let z2 = runs_z_score(r + 1, n0, n1).unwrap();
        prop_assert!(z2 > z1);
    }

    #[test]
    fn bit_string_text_round_trip(bits in prop::collection::vec(any::<bool>(), 0..100)) {
        let b = BitString::new(bits);
        let text = b.to_string();
        prop_assert!(text.bytes().all(|c| c == b'0' || c == b'1'));
        prop_assert_eq!(text.parse::<BitString>().unwrap(), b);
    }

    #[test]
    fn literal_programs_print_their_target(bits in prop::collection::vec(any::<bool>(), 0..64)) {
        let target = BitString::new(bits);
        let prog = ToyProgram::literal(&target);
        prop_assert_eq!(prog.len(), 2 * target.len() + 2);
        match vm_run(&prog, target.len() as u64 + 1).unwrap() {
            ExecOutcome::Halted { output, steps_used, bits_read } => {
                prop_assert_eq!(output, target.clone());
                prop_assert_eq!(steps_used, target.len() as u64 + 1);
                prop_assert_eq!(bits_read, prog.len());
            }
            other => prop_assert!(false, "unexpected outcome {:?}", other),
        }
    }

    #[test]
    fn vm_never_reads_past_the_program(bits in prop::collection::vec(any::<bool>(), 0..40), fuel in 1u64..50) {
        let prog = ToyProgram::new(BitString::new(bits));
        if let ExecOutcome::Halted { bits_read, steps_used, .. } = vm_run(&prog, fuel).unwrap() {
            prop_assert_eq!(bits_read, prog.len());
            prop_assert!(steps_used <= fuel);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trial_table_csv_round_trip(
        points in prop::collection::btree_set(2u64..24, 1..4),
        reps in 1u32..4,
        seed in any::<u64>(),
        winograd in any::<bool>(),
    ) {
        let alg = if winograd { Algorithm::Winograd } else { Algorithm::ReplacementSort };
        let d = Design::new(points.into_iter().collect(), reps, seed).unwrap();
        let t = run_experiment(alg, &d, false).unwrap();
        let csv = t.to_csv_string();
        let back = TrialTable::read_csv(csv.as_bytes()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_csv_string(), csv);
    }
}

#[test]
fn poker_probabilities_sum_to_one() {
    for d in 5..=64 {
        let s: f64 = poker_probabilities(d).iter().sum();
        assert!((s - 1.0).abs() < 1e-12, "d = {d}: {s}");
    }
}
