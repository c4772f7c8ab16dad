//! A small battery of classical empirical tests for sequences in `[0, 1)`.
//!
//! Passing the battery means a sequence *looks* random to these particular
//! statistics and nothing more. Verdicts are two-sided: a statistic that is
//! too good (p-value near 1) fails just like one that is too bad, which is
//! what catches over-regular sequences such as `r' = r + 1 mod m`.

use serde::{Deserialize, Serialize};
use statrs::function::{erf::erfc, gamma::gamma_ur};

use crate::error::{Error, Result};

/// Minimum expected count per chi-square category.
pub const MIN_EXPECTED: f64 = 5.0;

/// Validated sample: nonempty, every value finite and in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SampleSeq(Vec<f64>);

impl SampleSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientSample("empty sequence".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..1.0).contains(*v))
        {
            return Err(Error::InvalidParameter(format!(
                "value {v} at index {i} is outside [0, 1)"
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Cell index `floor(v * d)`, clamped against rounding up to `d`.
    fn digit(v: f64, d: usize) -> usize {
        ((v * d as f64) as usize).min(d - 1)
    }
}

impl<'de> Deserialize<'de> for SampleSeq {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(de)?;
        SampleSeq::new(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Suspect,
    Fail,
}

impl Verdict {
    pub fn from_p_value(p: f64) -> Self {
        if !(0.001..=0.999).contains(&p) {
            Verdict::Fail
        } else if !(0.01..=0.99).contains(&p) {
            Verdict::Suspect
        } else {
            Verdict::Pass
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Suspect => "SUSPECT",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test_name: String,
    pub statistic: f64,
    /// Zero for z-tests.
    pub df: u32,
    pub p_value: f64,
    pub verdict: Verdict,
}

impl TestReport {
    fn new(test_name: &str, statistic: f64, df: u32, p_value: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self {
            test_name: test_name.to_string(),
            statistic,
            df,
            p_value,
            verdict: Verdict::from_p_value(p_value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Overall {
    LooksRandom,
    Patterned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedTest {
    pub test_name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub reports: Vec<TestReport>,
    pub overall: Overall,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedTest>,
}

impl BatteryReport {
    pub fn from_reports(reports: Vec<TestReport>, skipped: Vec<SkippedTest>) -> Self {
        let overall = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
            Overall::Patterned
        } else {
            Overall::LooksRandom
        };
        Self {
            reports,
            overall,
            skipped,
        }
    }

    pub fn report(&self, test_name: &str) -> Option<&TestReport> {
        self.reports.iter().find(|r| r.test_name == test_name)
    }
}

/// Upper tail `P(X >= statistic)` of a chi-square variable with `df`
/// degrees of freedom, i.e. the regularized upper incomplete gamma
/// `Q(df/2, statistic/2)`.
pub fn chi_square_pvalue(statistic: f64, df: u32) -> Result<f64> {
    if df == 0 {
        return Err(Error::InvalidParameter("chi-square needs df >= 1".into()));
    }
    if statistic.is_nan() || statistic < 0.0 {
        return Err(Error::Precondition(format!(
            "chi-square statistic must be nonnegative, got {statistic}"
        )));
    }
    if statistic == 0.0 {
        return Ok(1.0);
    }
    if statistic.is_infinite() {
        return Ok(0.0);
    }
    Ok(gamma_ur(df as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0))
}

/// Two-sided standard normal tail `P(|Z| >= |z|)`.
pub fn normal_two_sided_pvalue(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

fn chi_square_statistic(observed: &[f64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum()
}

/// Merges adjacent categories until every expected count reaches
/// [`MIN_EXPECTED`]. Categories are accumulated left to right; an
/// under-filled remainder is folded into the last emitted category.
pub fn merge_sparse_categories(observed: &[f64], expected: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut obs = Vec::new();
    let mut exp = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(expected) {
        o_acc += o;
        e_acc += e;
        if e_acc >= MIN_EXPECTED {
            obs.push(o_acc);
            exp.push(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        match (obs.last_mut(), exp.last_mut()) {
            (Some(lo), Some(le)) => {
                *lo += o_acc;
                *le += e_acc;
            }
            _ => {
                obs.push(o_acc);
                exp.push(e_acc);
            }
        }
    }
    (obs, exp)
}

fn merged_chi_square(test: &str, observed: &[f64], expected: &[f64]) -> Result<TestReport> {
    let (obs, exp) = merge_sparse_categories(observed, expected);
    if obs.len() < 2 || exp.iter().any(|&e| e < MIN_EXPECTED) {
        return Err(Error::InsufficientSample(format!(
            "{test}: fewer than two categories with expected count >= {MIN_EXPECTED}"
        )));
    }
    let stat = chi_square_statistic(&obs, &exp);
    let df = (obs.len() - 1) as u32;
    Ok(TestReport::new(
        test,
        stat,
        df,
        chi_square_pvalue(stat, df)?,
    ))
}

/// Equidistribution over `d` equal bins.
pub fn frequency_test(seq: &SampleSeq, d: usize) -> Result<TestReport> {
    if d < 2 {
        return Err(Error::InvalidParameter(
            "frequency test needs d >= 2".into(),
        ));
    }
    let n = seq.len();
    if (n as f64) < MIN_EXPECTED * d as f64 {
        return Err(Error::InsufficientSample(format!(
            "frequency test with d = {d} needs at least {} values, got {n}",
            5 * d
        )));
    }
    let mut counts = vec![0.0; d];
    for &v in seq.values() {
        counts[SampleSeq::digit(v, d)] += 1.0;
    }
    let expected = vec![n as f64 / d as f64; d];
    let stat = chi_square_statistic(&counts, &expected);
    let df = (d - 1) as u32;
    Ok(TestReport::new(
        "frequency",
        stat,
        df,
        chi_square_pvalue(stat, df)?,
    ))
}

/// Non-overlapping pairs binned on a `d × d` grid. A trailing unpaired
/// value is ignored.
pub fn serial_test(seq: &SampleSeq, d: usize) -> Result<TestReport> {
    if d < 2 {
        return Err(Error::InvalidParameter("serial test needs d >= 2".into()));
    }
    let pairs = seq.len() / 2;
    let cells = d * d;
    if pairs == 0 || (pairs as f64) < MIN_EXPECTED * cells as f64 {
        return Err(Error::InsufficientSample(format!(
            "serial test with d = {d} needs at least {} pairs, got {pairs}",
            5 * cells
        )));
    }
    let mut counts = vec![0.0; cells];
    for pair in seq.values().chunks_exact(2) {
        let i = SampleSeq::digit(pair[0], d);
        let j = SampleSeq::digit(pair[1], d);
        counts[i * d + j] += 1.0;
    }
    let expected = vec![pairs as f64 / cells as f64; cells];
    let stat = chi_square_statistic(&counts, &expected);
    let df = (cells - 1) as u32;
    Ok(TestReport::new(
        "serial",
        stat,
        df,
        chi_square_pvalue(stat, df)?,
    ))
}

/// Category probabilities `p(1-p)^r` for `r < t` and `(1-p)^t` for the tail.
pub fn gap_probabilities(p: f64, t: usize) -> Vec<f64> {
    let q = 1.0 - p;
    let mut probs: Vec<f64> = (0..t).map(|r| p * q.powi(r as i32)).collect();
    probs.push(q.powi(t as i32));
    probs
}

/// Lengths of the runs of misses between consecutive hits in `[alpha, beta)`.
pub fn gap_lengths(seq: &SampleSeq, alpha: f64, beta: f64) -> Vec<usize> {
    let mut gaps = Vec::new();
    let mut current: Option<usize> = None;
    for &v in seq.values() {
        let hit = alpha <= v && v < beta;
        match (hit, current.as_mut()) {
            (true, Some(len)) => {
                gaps.push(*len);
                *len = 0;
            }
            (true, None) => current = Some(0),
            (false, Some(len)) => *len += 1,
            (false, None) => {}
        }
    }
    gaps
}

pub const MIN_GAPS: usize = 30;

pub fn gap_test(seq: &SampleSeq, alpha: f64, beta: f64, t: usize) -> Result<TestReport> {
    if !(0.0 <= alpha && alpha < beta && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gap interval needs 0 <= alpha < beta <= 1, got [{alpha}, {beta})"
        )));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("gap test needs t >= 1".into()));
    }
    let gaps = gap_lengths(seq, alpha, beta);
    if gaps.len() < MIN_GAPS {
        return Err(Error::InsufficientSample(format!(
            "gap test needs at least {MIN_GAPS} completed gaps, found {}",
            gaps.len()
        )));
    }
    let mut counts = vec![0.0; t + 1];
    for g in &gaps {
        counts[(*g).min(t)] += 1.0;
    }
    let total = gaps.len() as f64;
    let expected: Vec<f64> = gap_probabilities(beta - alpha, t)
        .into_iter()
        .map(|p| p * total)
        .collect();
    merged_chi_square("gap", &counts, &expected)
}

/// Stirling numbers of the second kind `S(5, r)` for `r = 1..=5`.
pub const STIRLING_5: [u64; 5] = [1, 15, 25, 10, 1];

pub const POKER_HAND: usize = 5;

/// Exact `P(r distinct digits)` in a hand of five as `(numerator, denominator)`:
/// `d(d-1)...(d-r+1) · S(5, r) / d^5`.
pub fn poker_probability_exact(d: u64, r: usize) -> (u64, u64) {
    assert!((1..=POKER_HAND).contains(&r));
    let falling: u64 = (0..r as u64).map(|i| d.saturating_sub(i)).product();
    (falling * STIRLING_5[r - 1], d.pow(POKER_HAND as u32))
}

/// `P(r)` for `r = 1..=5`.
pub fn poker_probabilities(d: u64) -> Vec<f64> {
    (1..=POKER_HAND)
        .map(|r| {
            let (num, den) = poker_probability_exact(d, r);
            num as f64 / den as f64
        })
        .collect()
}

/// Number of distinct values in a hand.
pub fn distinct_in_hand(hand: &[usize]) -> usize {
    let mut h = hand.to_vec();
    h.sort_unstable();
    h.dedup();
    h.len()
}

pub fn poker_test(seq: &SampleSeq, d: usize) -> Result<TestReport> {
    if !(5..=64).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "poker test needs d in [5, 64], got {d}"
        )));
    }
    let hands = seq.len() / POKER_HAND;
    if hands < 5 {
        return Err(Error::InsufficientSample(format!(
            "poker test needs at least 5 hands of 5 values, got {hands}"
        )));
    }
    let mut counts = vec![0.0; POKER_HAND];
    let mut hand = [0usize; POKER_HAND];
    for chunk in seq.values().chunks_exact(POKER_HAND) {
        for (slot, &v) in hand.iter_mut().zip(chunk) {
            *slot = SampleSeq::digit(v, d);
        }
        counts[distinct_in_hand(&hand) - 1] += 1.0;
    }
    let expected: Vec<f64> = poker_probabilities(d as u64)
        .into_iter()
        .map(|p| p * hands as f64)
        .collect();
    merged_chi_square("poker", &counts, &expected)
}

/// Runs above and below the sample median. Values equal to the median are
/// dropped before counting runs.
pub fn runs_test(seq: &SampleSeq) -> Result<TestReport> {
    let n = seq.len();
    if n < 20 {
        return Err(Error::InsufficientSample(format!(
            "runs test needs at least 20 values, got {n}"
        )));
    }
    let mut sorted = seq.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };

    let sides: Vec<bool> = seq
        .values()
        .iter()
        .filter(|&&v| v != median)
        .map(|&v| v > median)
        .collect();
    let n_above = sides.iter().filter(|&&s| s).count();
    let n_below = sides.len() - n_above;
    if n_above == 0 || n_below == 0 {
        return Err(Error::Precondition(
            "runs test: no dichotomy about the median".into(),
        ));
    }
    let runs = 1 + sides.windows(2).filter(|w| w[0] != w[1]).count();
    let z = runs_z_score(runs as u64, n_below as u64, n_above as u64)
        .ok_or_else(|| Error::Precondition("runs test: zero variance under the null".into()))?;
    Ok(TestReport::new("runs", z, 0, normal_two_sided_pvalue(z)))
}

/// Null mean and variance of the number of runs for `n0` and `n1` items.
pub fn runs_null_moments(n0: u64, n1: u64) -> (f64, f64) {
    let (n0, n1) = (n0 as f64, n1 as f64);
    let n = n0 + n1;
    let two = 2.0 * n0 * n1;
    let mean = two / n + 1.0;
    let var = two * (two - n) / (n * n * (n - 1.0));
    (mean, var)
}

pub fn runs_z_score(runs: u64, n0: u64, n1: u64) -> Option<f64> {
    let (mean, var) = runs_null_moments(n0, n1);
    (var > 0.0).then(|| (runs as f64 - mean) / var.sqrt())
}

/// Which tests the battery runs, and with which parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryConfig {
    pub frequency: Option<usize>,
    pub serial: Option<usize>,
    pub gap: Option<(f64, f64, usize)>,
    pub poker: Option<usize>,
    pub runs: bool,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            frequency: Some(16),
            serial: Some(4),
            gap: Some((0.0, 0.5, 7)),
            poker: Some(10),
            runs: true,
        }
    }
}

/// Runs the default battery: frequency (d=16), serial (d=4), gap
/// ([0, 0.5), t=7), poker (d=10) and runs.
pub fn battery(seq: &SampleSeq) -> Result<BatteryReport> {
    battery_with(seq, &BatteryConfig::default())
}

type PlannedTest<'a> = Box<dyn Fn() -> Result<TestReport> + 'a>;

/// Runs the configured tests in fixed order. A test whose sample
/// precondition fails is skipped and listed; if every test is skipped the
/// whole battery fails with [`Error::InsufficientSample`].
pub fn battery_with(seq: &SampleSeq, config: &BatteryConfig) -> Result<BatteryReport> {
    let mut planned: Vec<(&str, PlannedTest<'_>)> = Vec::new();
    if let Some(d) = config.frequency {
        planned.push(("frequency", Box::new(move || frequency_test(seq, d))));
    }
    if let Some(d) = config.serial {
        planned.push(("serial", Box::new(move || serial_test(seq, d))));
    }
    if let Some((alpha, beta, t)) = config.gap {
        planned.push(("gap", Box::new(move || gap_test(seq, alpha, beta, t))));
    }
    if let Some(d) = config.poker {
        planned.push(("poker", Box::new(move || poker_test(seq, d))));
    }
    if config.runs {
        planned.push(("runs", Box::new(|| runs_test(seq))));
    }

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (name, run) in planned {
        match run() {
            Ok(r) => reports.push(r),
            Err(e) if e.is_precondition() => skipped.push(SkippedTest {
                test_name: name.to_string(),
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    if reports.is_empty() {
        return Err(Error::InsufficientSample(format!(
            "no test in the battery could run on {} values",
            seq.len()
        )));
    }
    Ok(BatteryReport::from_reports(reports, skipped))
}
