//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Independent oracles used here (exhaustive hand enumeration, numerical
//! integration, a separate TOYVM-1 interpreter) live in this file and do not
//! call into the code paths they check.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use randlab_core::cexp::{
    classify, fit_surrogate, predict, run_experiment, Algorithm, BasisFn, Design, NoiseLabel,
    Response, SplitMix64, TrialTable,
};
use randlab_core::kolmolab::{
    census, compress_demo, dovetail, enumerate_programs, fuel_catalog, k_upper, omega_lower,
    BitString, ExecOutcome,
};
use randlab_core::prng::{
    check_full_period_conditions, find_period, generate, normalize, LcgParams,
};
use randlab_core::randtests::{
    battery, chi_square_pvalue, poker_probabilities, poker_probability_exact, runs_test, Overall,
    SampleSeq,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------------------
// Oracles

/// Exact `Γ(k/2)` for integer `k >= 1`.
fn gamma_half_integer(k: u32) -> f64 {
    let mut g = if k.is_multiple_of(2) {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut s = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    while s < k as f64 / 2.0 {
        g *= s;
        s += 1.0;
    }
    g
}

fn chi_square_density(t: f64, k: u32) -> f64 {
    let h = k as f64 / 2.0;
    t.powf(h - 1.0) * (-t / 2.0).exp() / (2f64.powf(h) * gamma_half_integer(k))
}

/// Interval endpoints and function values at both ends and the midpoint.
#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
}

impl Panel {
    fn new(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Self {
        Panel {
            a,
            b,
            fa: f(a),
            fm: f(0.5 * (a + b)),
            fb: f(b),
        }
    }

    fn simpson(&self) -> f64 {
        (self.b - self.a) / 6.0 * (self.fa + 4.0 * self.fm + self.fb)
    }

    fn halves(&self, f: &dyn Fn(f64) -> f64) -> (Panel, Panel) {
        let m = 0.5 * (self.a + self.b);
        let left = Panel {
            a: self.a,
            b: m,
            fa: self.fa,
            fm: f(0.5 * (self.a + m)),
            fb: self.fm,
        };
        let right = Panel {
            a: m,
            b: self.b,
            fa: self.fm,
            fm: f(0.5 * (m + self.b)),
            fb: self.fb,
        };
        (left, right)
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, p: Panel, whole: f64, eps: f64, depth: u32) -> f64 {
    let (l, r) = p.halves(f);
    let (left, right) = (l.simpson(), r.simpson());
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, l, left, eps / 2.0, depth - 1)
            + adaptive_simpson(f, r, right, eps / 2.0, depth - 1)
    }
}

/// `∫_x^∞` of the chi-square density, by adaptive Simpson over unit-width
/// panels out to where the remaining mass is far below `1e-15`.
fn chi_square_tail_by_quadrature(x: f64, k: u32) -> f64 {
    let f = |t: f64| chi_square_density(t, k);
    let end = x.max(k as f64) + 60.0 + 12.0 * (k as f64).sqrt() * 4.0;
    let mut total = 0.0;
    let mut a = x;
    while a < end {
        let b = (a + 1.0).min(end);
        let p = Panel::new(&f, a, b);
        total += adaptive_simpson(&f, p, p.simpson(), 1e-15, 40);
        a = b;
    }
    total
}

/// Independent TOYVM-1 interpreter over an ASCII program. Returns the
/// output of a valid halt within `fuel` steps.
fn oracle_run(program: &str, fuel: u64) -> Option<String> {
    let bits = program.as_bytes();
    let mut pos = 0;
    let mut out = String::new();
    let mut steps = 0;
    let take = |pos: &mut usize, n: usize| -> Option<u32> {
        if *pos + n > bits.len() {
            return None;
        }
        let v = bits[*pos..*pos + n]
            .iter()
            .fold(0, |acc, &b| acc * 2 + (b - b'0') as u32);
        *pos += n;
        Some(v)
    };
    loop {
        if steps == fuel {
            return None;
        }
        steps += 1;
        match take(&mut pos, 2)? {
            0 => out.push('0'),
            1 => out.push('1'),
            2 => match take(&mut pos, 3)? {
                0 => return None,
                k => {
                    if out.len() * (k as usize + 1) > 1 << 20 {
                        return None;
                    }
                    out = out.repeat(k as usize + 1);
                }
            },
            _ => return (pos == bits.len()).then_some(out),
        }
    }
}

fn all_bit_strings(max_len: usize) -> Vec<String> {
    let mut v = Vec::new();
    for len in 1..=max_len {
        for x in 0..1u32 << len {
            v.push(format!("{x:0len$b}"));
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Criteria

fn c01_full_period_theorem() -> Outcome {
    let start = Instant::now();
    let mut checked = 0u64;
    for m in 2..=64u64 {
        for a in 0..m {
            for b in 0..m {
                let p = LcgParams::new(a, b, m, 0).unwrap();
                let predicted = check_full_period_conditions(&p).predicted_full;
                let measured = find_period(&p).period == m;
                ensure(
                    predicted == measured,
                    format!("mismatch at a={a} b={b} m={m}"),
                )?;
                checked += 1;
            }
        }
    }
    let mut rng = SplitMix64::new(0x5eed_0001);
    for _ in 0..10_000 {
        let m = 65 + rng.below(192);
        let (a, b) = (rng.below(m), rng.below(m));
        let p = LcgParams::new(a, b, m, 0).unwrap();
        let predicted = check_full_period_conditions(&p).predicted_full;
        let measured = find_period(&p).period == m;
        ensure(
            predicted == measured,
            format!("mismatch at a={a} b={b} m={m}"),
        )?;
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("{checked} triples, 0 mismatches, {elapsed:.2?}"))
}

fn c02_unit_step_pathology() -> Outcome {
    let mut notes = Vec::new();
    for m in [256u64, 4096, 65536] {
        let p = LcgParams::new(1, 1, m, 0).unwrap();
        let period = find_period(&p).period;
        ensure(period == m, format!("m={m}: period {period}"))?;
        let seq =
            SampleSeq::new(normalize(&generate(&p, m as usize).unwrap(), m).unwrap()).unwrap();
        let b = battery(&seq).map_err(|e| e.to_string())?;
        ensure(
            b.overall == Overall::Patterned,
            format!("m={m}: battery {:?}", b.overall),
        )?;
        let z = runs_test(&seq).map_err(|e| e.to_string())?.statistic;
        ensure(z.abs() > 3.0, format!("m={m}: runs z = {z}"))?;
        notes.push(format!("m={m} z={z:.1}"));
    }
    Ok(notes.join(", "))
}

fn c03_poker_probabilities() -> Outcome {
    let mut counts = [0u64; 5];
    for hand in 0..100_000u32 {
        let mut seen = [false; 10];
        let mut h = hand;
        for _ in 0..5 {
            seen[(h % 10) as usize] = true;
            h /= 10;
        }
        counts[seen.iter().filter(|&&s| s).count() - 1] += 1;
    }
    let probs = poker_probabilities(10);
    for r in 0..5 {
        let oracle = counts[r] as f64 / 100_000.0;
        ensure(
            (probs[r] - oracle).abs() <= 1e-12,
            format!("P({}) = {} vs enumeration {}", r + 1, probs[r], oracle),
        )?;
        ensure(
            poker_probability_exact(10, r + 1) == (counts[r], 100_000),
            format!("exact ratio mismatch at r={}", r + 1),
        )?;
    }
    ensure(counts[4] == 30_240, "P(5 distinct) != 30240/100000")?;
    Ok(format!("counts {counts:?}, P(5) = 30240/100000"))
}

fn c04_chi_square_kernel() -> Outcome {
    let ks = [1u32, 2, 3, 4, 5, 7, 10, 15, 20, 30];
    let factors = [0.2, 0.6, 1.0, 1.7, 3.0];
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for &k in &ks {
        for &f in &factors {
            let x = f * k as f64 + 0.05;
            let got = chi_square_pvalue(x, k).map_err(|e| e.to_string())?;
            let oracle = chi_square_tail_by_quadrature(x, k);
            worst = worst.max((got - oracle).abs());
            points += 1;
        }
    }
    ensure(points == 50, "grid is not 50 points")?;
    ensure(worst <= 1e-8, format!("max abs error {worst:e}"))?;
    Ok(format!("{points} points, max abs error {worst:.1e}"))
}

fn c05_prefix_freeness() -> Outcome {
    let start = Instant::now();
    let candidates = enumerate_programs(12).map_err(|e| e.to_string())?.count();
    ensure(candidates == 8190, format!("{candidates} candidates"))?;
    let catalog = dovetail(12, 1000).map_err(|e| e.to_string())?;
    let progs: Vec<String> = catalog.programs().map(|p| p.to_string()).collect();
    for p in &progs {
        for q in &progs {
            ensure(
                !(p.len() < q.len() && q.starts_with(p.as_str())),
                format!("{p} is a prefix of {q}"),
            )?;
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(10),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "{} halting programs of {candidates}, {elapsed:.2?}",
        progs.len()
    ))
}

fn c06_counting_bound() -> Outcome {
    let mut notes = Vec::new();
    for n in 2..=12 {
        let c = census(n, 1000).map_err(|e| e.to_string())?;
        ensure(
            c.bound == (1 << (n - 1)) - 1,
            format!("n={n}: bound {}", c.bound),
        )?;
        ensure(
            c.producible <= c.bound,
            format!("n={n}: {} > {}", c.producible, c.bound),
        )?;
        ensure(c.at_least_half_incompressible, format!("n={n}: flag false"))?;
        notes.push(c.producible.to_string());
    }
    // programs of at most n-2 bits first reach length-n outputs at n = 14
    let c14 = census(14, 1000).map_err(|e| e.to_string())?;
    ensure(
        c14.producible > 0 && c14.producible <= c14.bound,
        "n=14 census",
    )?;
    Ok(format!(
        "producible for n=2..12: [{}], n=14: {}",
        notes.join(","),
        c14.producible
    ))
}

fn c07_omega() -> Outcome {
    // exhaustive oracle values: count valid halts per length
    let oracle_sum = |max_len: usize, fuel: u64| -> (u64, u32) {
        let num = all_bit_strings(max_len)
            .iter()
            .filter(|p| oracle_run(p, fuel).is_some())
            .map(|p| 1u64 << (max_len - p.len()))
            .sum();
        (num, max_len as u32)
    };
    ensure(oracle_sum(2, 10) == (1, 2), "oracle: Ω(2,10) != 1/4")?;
    ensure(oracle_sum(4, 10) == (6, 4), "oracle: Ω(4,10) != 3/8")?;

    let o2 = omega_lower(2, 10).map_err(|e| e.to_string())?;
    let o4 = omega_lower(4, 10).map_err(|e| e.to_string())?;
    ensure(o2.equals_dyadic(1, 2), format!("Ω(2,10) = {}", o2.to_f64()))?;
    ensure(o4.equals_dyadic(3, 3), format!("Ω(4,10) = {}", o4.to_f64()))?;
    ensure(o4.binary_digits() == "0110", "binary digits of Ω(4,10)")?;

    let ls = [2usize, 4, 6, 8, 10, 12, 14];
    let ts = [10u64, 100, 1000];
    let grid: Vec<Vec<_>> = ls
        .iter()
        .map(|&l| ts.iter().map(|&t| omega_lower(l, t).unwrap()).collect())
        .collect();
    let one = randlab_core::kolmolab::OmegaEstimate {
        numerator: 1u8.into(),
        scale: 0,
        max_len: 0,
        max_steps: 0,
    };
    for i in 0..ls.len() {
        for j in 0..ts.len() {
            let v = &grid[i][j];
            ensure(v.cmp_value(&one) != Ordering::Greater, "Ω > 1")?;
            if i > 0 {
                ensure(
                    v.cmp_value(&grid[i - 1][j]) != Ordering::Less,
                    "not monotone in L",
                )?;
            }
            if j > 0 {
                ensure(
                    v.cmp_value(&grid[i][j - 1]) != Ordering::Less,
                    "not monotone in T",
                )?;
            }
        }
    }
    let top = &grid[ls.len() - 1][ts.len() - 1];
    Ok(format!(
        "Ω(2,10)=1/4, Ω(4,10)=3/8, Ω(14,1000)=0.{} ≈ {:.6}",
        top.binary_digits(),
        top.to_f64()
    ))
}

fn c08_dovetail_fidelity() -> Outcome {
    let mut pairs = 0;
    for l in 0..=10 {
        for t in 1..=100 {
            let d = dovetail(l, t).map_err(|e| e.to_string())?;
            let f = fuel_catalog(l, t).map_err(|e| e.to_string())?;
            ensure(d == f, format!("L={l} T={t}: catalogs differ"))?;
            pairs += 1;
        }
    }
    // the L=10 catalog also matches the standalone interpreter
    let d = dovetail(10, 100).map_err(|e| e.to_string())?;
    let from_dovetail: BTreeSet<(String, String)> = d
        .entries
        .iter()
        .map(|e| (e.program.to_string(), e.output.to_string()))
        .collect();
    let from_oracle: BTreeSet<(String, String)> = all_bit_strings(10)
        .into_iter()
        .filter_map(|p| oracle_run(&p, 100).map(|o| (p, o)))
        .collect();
    ensure(
        from_dovetail == from_oracle,
        "L=10 catalog differs from oracle interpreter",
    )?;
    Ok(format!(
        "{pairs} (L, T) pairs identical; {} programs at L=10",
        d.entries.len()
    ))
}

fn c09_compressibility() -> Outcome {
    let pattern: BitString = "01".parse().unwrap();
    let rows = compress_demo(&pattern, 2).map_err(|e| e.to_string())?;
    let row = &rows[2];
    ensure(
        row.k_upper_constructive == 16,
        format!("program length {}", row.k_upper_constructive),
    )?;
    ensure(row.target_length == 128, "target length")?;
    let target = "01".repeat(64);
    ensure(
        oracle_run(&row.program.to_string(), 1000).as_deref() == Some(target.as_str()),
        "constructed program does not print the target",
    )?;
    let rec = k_upper(&target.parse().unwrap(), 16, 1000).map_err(|e| e.to_string())?;
    let k = rec.k_upper.ok_or("no witness within (16, 1000)")?;
    ensure(k <= 16, format!("k_upper = {k}"))?;
    let w = rec.witness.unwrap();
    ensure(
        matches!(randlab_core::kolmolab::vm_run(&w, 1000).unwrap(), ExecOutcome::Halted { ref output, bits_read, .. } if output.to_string() == target && bits_read == w.len()),
        "witness does not reproduce the target",
    )?;
    ensure(row.literal_length == 258, "literal length")?;
    Ok(format!("K̂ <= {k} (witness {w}) vs literal 258 bits"))
}

fn c10_sort_invariants() -> Outcome {
    use rayon::prelude::*;
    let sizes = [8u64, 16, 32, 64, 128, 256, 512, 1024];
    let trials: Vec<(u64, u64)> = (0..10_000u64)
        .map(|i| (sizes[(i % 8) as usize], i))
        .collect();
    trials
        .par_iter()
        .try_for_each(|&(n, i)| -> Result<(), String> {
            let mut rng = SplitMix64::new(0xace0_0000 + i);
            let input: Vec<i64> = (0..n).map(|_| rng.uniform_int(-1000, 1000)).collect();
            let run = randlab_core::cexp::replacement_sort_instrumented(&input).unwrap();
            ensure(
                run.counters.comparisons == Some(n * (n - 1) / 2),
                format!("n={n}: comparisons"),
            )?;
            ensure(
                run.output.windows(2).all(|w| w[0] <= w[1]),
                format!("n={n}: not sorted"),
            )?;
            let mut expected = input.clone();
            expected.sort_unstable();
            ensure(
                run.output == expected,
                format!("n={n}: not a permutation of the input"),
            )
        })?;
    Ok("10000 trials, n in {8..1024}".into())
}

fn taxonomy_design() -> Design {
    Design::new(vec![16, 32, 64, 128], 50, 20_240_601).unwrap()
}

fn c11_taxonomy() -> Outcome {
    let d = taxonomy_design();
    let sort = run_experiment(Algorithm::ReplacementSort, &d, false).map_err(|e| e.to_string())?;
    let swaps = classify(&sort, Response::Swaps, Some(0.0)).map_err(|e| e.to_string())?;
    ensure(
        matches!(
            swaps.label,
            NoiseLabel::NoisyRandomlike | NoiseLabel::NoisyPatterned
        ),
        format!("swaps labelled {:?}", swaps.label),
    )?;
    let wino = run_experiment(Algorithm::Winograd, &d, false).map_err(|e| e.to_string())?;
    let mults = classify(&wino, Response::Multiplications, Some(0.0)).map_err(|e| e.to_string())?;
    ensure(
        mults.label == NoiseLabel::DeterministicDegenerate,
        format!("winograd labelled {:?}", mults.label),
    )?;
    ensure(
        mults.per_point.iter().all(|p| p.variance == 0.0),
        "winograd variance nonzero",
    )?;
    Ok(format!(
        "swaps -> {:?}, winograd mults -> {:?}",
        swaps.label, mults.label
    ))
}

fn c12_surrogate() -> Outcome {
    let d = taxonomy_design();
    let sort = run_experiment(Algorithm::ReplacementSort, &d, false).map_err(|e| e.to_string())?;
    let fit = fit_surrogate(
        &sort,
        Response::Comparisons,
        &[BasisFn::One, BasisFn::N, BasisFn::NSquared],
    )
    .map_err(|e| e.to_string())?;
    for (got, want) in fit.coefficients.iter().zip([0.0, -0.5, 0.5]) {
        let err = if want == 0.0 {
            got.abs()
        } else {
            ((got - want) / want).abs()
        };
        ensure(err <= 1e-9, format!("coefficient {got} vs {want}"))?;
    }
    ensure(fit.r_squared == 1.0, format!("R² = {}", fit.r_squared))?;

    let train = Design::new((1..=16).map(|i| 16 * i).collect(), 50, 7).unwrap();
    let table =
        run_experiment(Algorithm::ReplacementSort, &train, false).map_err(|e| e.to_string())?;
    let swaps_fit = fit_surrogate(
        &table,
        Response::Swaps,
        &[BasisFn::One, BasisFn::N, BasisFn::NSquared],
    )
    .map_err(|e| e.to_string())?;
    let predicted = predict(&swaps_fit, 512).map_err(|e| e.to_string())?.mean;

    let held_out = Design::new(vec![512], 200, 8).unwrap();
    let measured_table =
        run_experiment(Algorithm::ReplacementSort, &held_out, false).map_err(|e| e.to_string())?;
    let measured = mean_response(&measured_table, Response::Swaps);
    let rel = ((predicted - measured) / measured).abs();
    ensure(
        rel <= 0.10,
        format!("predicted {predicted:.1} vs measured {measured:.1} ({rel:.3})"),
    )?;
    Ok(format!(
        "comparisons exact; swaps@512 predicted {predicted:.0} vs measured {measured:.0} (rel err {:.2}%)",
        rel * 100.0
    ))
}

fn mean_response(t: &TrialTable, r: Response) -> f64 {
    t.rows
        .iter()
        .map(|row| r.value(row).unwrap() as f64)
        .sum::<f64>()
        / t.rows.len() as f64
}

fn c13_reproducibility() -> Outcome {
    let run_all = |threads: usize| -> Vec<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let d = taxonomy_design();
            let sort = run_experiment(Algorithm::ReplacementSort, &d, false).unwrap();
            let wino = run_experiment(
                Algorithm::Winograd,
                &Design::new(vec![3, 8], 5, 1).unwrap(),
                false,
            )
            .unwrap();
            let cls = classify(&sort, Response::Swaps, None).unwrap();
            let fit = fit_surrogate(
                &sort,
                Response::Swaps,
                &[BasisFn::One, BasisFn::N, BasisFn::NSquared],
            )
            .unwrap();
            let p = LcgParams::new(69069, 1, 1 << 32, 12345).unwrap();
            let seq = SampleSeq::new(normalize(&generate(&p, 20_000).unwrap(), 1 << 32).unwrap())
                .unwrap();
            vec![
                sort.to_csv_string(),
                wino.to_csv_string(),
                serde_json::to_string(&cls).unwrap(),
                serde_json::to_string(&fit).unwrap(),
                serde_json::to_string(&battery(&seq).unwrap()).unwrap(),
                serde_json::to_string(&dovetail(10, 50).unwrap()).unwrap(),
                serde_json::to_string(&omega_lower(12, 100).unwrap()).unwrap(),
                serde_json::to_string(&census(10, 100).unwrap()).unwrap(),
            ]
        })
    };
    let first = run_all(1);
    let second = run_all(4);
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        ensure(a == b, format!("artifact {i} differs between runs"))?;
    }
    let bytes: usize = first.iter().map(String::len).sum();
    Ok(format!(
        "{} artifacts, {bytes} bytes, identical with 1 and 4 workers",
        first.len()
    ))
}

fn main() {
    let criteria: [Criterion; 13] = [
        (
            "AC01 full-period theorem equivalence",
            c01_full_period_theorem,
        ),
        (
            "AC02 a=b=1 period maximal yet patterned",
            c02_unit_step_pathology,
        ),
        ("AC03 poker null probabilities", c03_poker_probabilities),
        (
            "AC04 chi-square upper tail vs quadrature",
            c04_chi_square_kernel,
        ),
        (
            "AC05 prefix-free halting programs (len <= 12)",
            c05_prefix_freeness,
        ),
        ("AC06 counting bound census (n = 2..12)", c06_counting_bound),
        ("AC07 omega exactness, Kraft bound, monotonicity", c07_omega),
        (
            "AC08 dovetail equals fuel-run catalog",
            c08_dovetail_fidelity,
        ),
        ("AC09 repeat-program compression", c09_compressibility),
        ("AC10 replacement sort invariants", c10_sort_invariants),
        ("AC11 noisy sort vs degenerate winograd", c11_taxonomy),
        ("AC12 surrogate recovery and extrapolation", c12_surrogate),
        ("AC13 byte-identical reruns", c13_reproducibility),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome =
            std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{:.2?}]  {detail}", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  [{:.2?}]  {why}", start.elapsed());
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
