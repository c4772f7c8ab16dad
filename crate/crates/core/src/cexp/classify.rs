use serde::{Deserialize, Serialize};

use super::harness::{Response, TrialTable};
use crate::error::{Error, Result};
use crate::randtests::{battery_with, BatteryConfig, Overall, SampleSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NoiseLabel {
    /// No variation at any design point: fixing `n` fixes the response.
    DeterministicDegenerate,
    /// Varies at fixed `n` and the standardized residuals pass the battery.
    NoisyRandomlike,
    /// Varies at fixed `n` but the residuals show structure.
    NoisyPatterned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub response: Response,
    pub per_point: Vec<PointSummary>,
    pub label: NoiseLabel,
}

/// Rows needed before the residual battery is attempted.
pub const MIN_RESIDUAL_ROWS: usize = 20;

/// Default tolerance: exact zero for counters, `1e-9 × mean` for wall time.
pub fn default_epsilon(response: Response, overall_mean: f64) -> f64 {
    if response.is_counter() {
        0.0
    } else {
        1e-9 * overall_mean.abs()
    }
}

fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Maps values to `rank / (count + 1)` in their original order. Ties are
/// ranked by position.
pub fn empirical_pit(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let denom = values.len() as f64 + 1.0;
    let mut out = vec![0.0; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = (rank + 1) as f64 / denom;
    }
    out
}

/// Tests used on residuals. Equidistribution is left out: the empirical
/// PIT makes the marginal uniform by construction.
pub fn residual_battery_config() -> BatteryConfig {
    BatteryConfig {
        frequency: None,
        ..BatteryConfig::default()
    }
}

/// Labels a response as deterministic or noisy at fixed `n`.
///
/// If every per-point variance is at most `epsilon` the response is
/// degenerate. Otherwise each value is standardized within its point
/// (points with zero spread are dropped), mapped to `(0, 1)` by its
/// empirical rank and handed to the randomness battery.
pub fn classify(
    table: &TrialTable,
    response: Response,
    epsilon: Option<f64>,
) -> Result<ClassificationReport> {
    let groups = table.grouped(response)?;
    if groups.is_empty() {
        return Err(Error::InsufficientSample("trial table is empty".into()));
    }
    if let Some((n, vals)) = groups.iter().find(|(_, v)| v.len() < 2) {
        return Err(Error::InsufficientSample(format!(
            "need at least 2 replications per point, n = {n} has {}",
            vals.len()
        )));
    }
    let per_point: Vec<PointSummary> = groups
        .iter()
        .map(|(n, vals)| {
            let (mean, variance) = mean_and_variance(vals);
            PointSummary {
                n: *n,
                mean,
                variance,
            }
        })
        .collect();

    let epsilon = match epsilon {
        Some(e) if e < 0.0 || e.is_nan() => {
            return Err(Error::InvalidParameter(
                "epsilon must be nonnegative".into(),
            ))
        }
        Some(e) => e,
        None => {
            let overall = per_point.iter().map(|p| p.mean).sum::<f64>() / per_point.len() as f64;
            default_epsilon(response, overall)
        }
    };

    let max_var = per_point.iter().map(|p| p.variance).fold(0.0, f64::max);
    if max_var <= epsilon {
        return Ok(ClassificationReport {
            response,
            per_point,
            label: NoiseLabel::DeterministicDegenerate,
        });
    }

    let residuals: Vec<f64> = groups
        .iter()
        .zip(&per_point)
        .filter(|(_, s)| s.variance > 0.0)
        .flat_map(|((_, vals), s)| {
            let sd = s.variance.sqrt();
            vals.iter().map(move |v| (v - s.mean) / sd)
        })
        .collect();
    if residuals.len() < MIN_RESIDUAL_ROWS {
        return Err(Error::InsufficientSample(format!(
            "residual battery needs at least {MIN_RESIDUAL_ROWS} rows with spread, got {}",
            residuals.len()
        )));
    }
    let seq = SampleSeq::new(empirical_pit(&residuals))?;
    let battery = battery_with(&seq, &residual_battery_config())?;
    let label = match battery.overall {
        Overall::LooksRandom => NoiseLabel::NoisyRandomlike,
        Overall::Patterned => NoiseLabel::NoisyPatterned,
    };
    Ok(ClassificationReport {
        response,
        per_point,
        label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cexp::algorithms::CounterSet;
    use crate::cexp::harness::{run_experiment, Algorithm, Design, TrialRow};

    fn constant_table(value: u64, points: &[u64], reps: u32) -> TrialTable {
        let rows = points
            .iter()
            .flat_map(|&n| {
                (0..reps).map(move |rep| TrialRow {
                    n,
                    rep,
                    seed: 0,
                    counters: CounterSet {
                        swaps: Some(value),
                        ..Default::default()
                    },
                    wall_ns: None,
                })
            })
            .collect();
        TrialTable {
            algorithm: Algorithm::ReplacementSort,
            rows,
        }
    }

    #[test]
    fn constant_forty_is_degenerate() {
        let r = classify(
            &constant_table(40, &[1, 2, 3], 5),
            Response::Swaps,
            Some(0.0),
        )
        .unwrap();
        assert_eq!(r.label, NoiseLabel::DeterministicDegenerate);
        assert!(r
            .per_point
            .iter()
            .all(|p| p.mean == 40.0 && p.variance == 0.0));
    }

    #[test]
    fn winograd_is_degenerate() {
        let d = Design::new(vec![2, 3, 5], 4, 77).unwrap();
        let t = run_experiment(Algorithm::Winograd, &d, false).unwrap();
        for resp in [Response::Multiplications, Response::Additions] {
            let r = classify(&t, resp, None).unwrap();
            assert_eq!(r.label, NoiseLabel::DeterministicDegenerate);
        }
    }

    #[test]
    fn swaps_are_noisy() {
        let d = Design::new(vec![16, 32, 64], 30, 5).unwrap();
        let t = run_experiment(Algorithm::ReplacementSort, &d, false).unwrap();
        let r = classify(&t, Response::Swaps, Some(0.0)).unwrap();
        assert!(r.per_point.iter().all(|p| p.variance > 0.0));
        assert_ne!(r.label, NoiseLabel::DeterministicDegenerate);
    }

    #[test]
    fn insufficient_replications() {
        let t = constant_table(40, &[1, 2], 1);
        assert!(matches!(
            classify(&t, Response::Swaps, None),
            Err(Error::InsufficientSample(_))
        ));
    }

    #[test]
    fn missing_response_column() {
        let t = constant_table(40, &[1], 3);
        assert!(classify(&t, Response::Multiplications, None).is_err());
    }

    #[test]
    fn too_few_noisy_rows_for_battery() {
        let mut t = constant_table(40, &[1, 2], 3);
        t.rows[0].counters.swaps = Some(41);
        assert!(matches!(
            classify(&t, Response::Swaps, Some(0.0)),
            Err(Error::InsufficientSample(_))
        ));
    }

    #[test]
    fn epsilon_absorbs_small_variance() {
        let mut t = constant_table(40, &[1, 2], 3);
        t.rows[0].counters.swaps = Some(41);
        let r = classify(&t, Response::Swaps, Some(1.0)).unwrap();
        assert_eq!(r.label, NoiseLabel::DeterministicDegenerate);
        assert!(classify(&t, Response::Swaps, Some(-1.0)).is_err());
    }

    #[test]
    fn pit_ranks() {
        assert_eq!(empirical_pit(&[0.3, -1.0, 2.0]), vec![0.5, 0.25, 0.75]);
        assert_eq!(empirical_pit(&[1.0, 1.0]), vec![1.0 / 3.0, 2.0 / 3.0]);
    }
}
