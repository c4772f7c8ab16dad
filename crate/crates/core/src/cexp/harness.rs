use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algorithms::{
    replacement_sort_instrumented, winograd_multiply_instrumented, CounterSet, Matrix,
};
use super::seed::{mix64, SplitMix64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    ReplacementSort,
    Winograd,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::ReplacementSort => "replacement_sort",
            Algorithm::Winograd => "winograd",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replacement_sort" => Ok(Algorithm::ReplacementSort),
            "winograd" => Ok(Algorithm::Winograd),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

/// Input sizes, replications per size, and the seed everything derives from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design {
    points: Vec<u64>,
    replications: u32,
    base_seed: u64,
}

impl Design {
    pub fn new(points: Vec<u64>, replications: u32, base_seed: u64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter(
                "design needs at least one point".into(),
            ));
        }
        if points[0] == 0 {
            return Err(Error::InvalidParameter(
                "design points must be positive".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "design points must be strictly increasing".into(),
            ));
        }
        if replications == 0 {
            return Err(Error::InvalidParameter(
                "replications must be at least 1".into(),
            ));
        }
        Ok(Self {
            points,
            replications,
            base_seed,
        })
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn replications(&self) -> u32 {
        self.replications
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub n: u64,
    pub rep: u32,
    pub seed: u64,
    pub counters: CounterSet,
    pub wall_ns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialTable {
    pub algorithm: Algorithm,
    pub rows: Vec<TrialRow>,
}

/// A column of a [`TrialTable`] that can be analysed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Response {
    #[serde(rename = "comparisons")]
    Comparisons,
    #[serde(rename = "swaps")]
    Swaps,
    #[serde(rename = "mults")]
    Multiplications,
    #[serde(rename = "adds")]
    Additions,
    #[serde(rename = "wall_ns")]
    WallTime,
}

impl Response {
    pub fn as_str(&self) -> &'static str {
        match self {
            Response::Comparisons => "comparisons",
            Response::Swaps => "swaps",
            Response::Multiplications => "mults",
            Response::Additions => "adds",
            Response::WallTime => "wall_ns",
        }
    }

    pub fn is_counter(&self) -> bool {
        !matches!(self, Response::WallTime)
    }

    pub fn value(&self, row: &TrialRow) -> Option<u64> {
        match self {
            Response::Comparisons => row.counters.comparisons,
            Response::Swaps => row.counters.swaps,
            Response::Multiplications => row.counters.multiplications,
            Response::Additions => row.counters.additions,
            Response::WallTime => row.wall_ns,
        }
    }
}

impl fmt::Display for Response {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Response {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "comparisons" => Ok(Response::Comparisons),
            "swaps" | "interchanges" => Ok(Response::Swaps),
            "mults" | "multiplications" => Ok(Response::Multiplications),
            "adds" | "additions" => Ok(Response::Additions),
            "wall_ns" | "wall_time" => Ok(Response::WallTime),
            other => Err(Error::InvalidParameter(format!(
                "unknown response {other:?}"
            ))),
        }
    }
}

fn run_trial(algorithm: Algorithm, n: u64, rep: u32, seed: u64, timed: bool) -> Result<TrialRow> {
    let mut rng = SplitMix64::new(seed);
    let size = usize::try_from(n)
        .map_err(|_| Error::ResourceBound(format!("design point {n} is too large")))?;
    let (counters, wall_ns) = match algorithm {
        Algorithm::ReplacementSort => {
            let input = rng.permutation(size);
            let start = Instant::now();
            let run = replacement_sort_instrumented(&input)?;
            (run.counters, start.elapsed().as_nanos() as u64)
        }
        Algorithm::Winograd => {
            let a = Matrix::from_fn(size, |_, _| rng.uniform_int(-100, 100));
            let b = Matrix::from_fn(size, |_, _| rng.uniform_int(-100, 100));
            let start = Instant::now();
            let run = winograd_multiply_instrumented(&a, &b)?;
            (run.counters, start.elapsed().as_nanos() as u64)
        }
    };
    Ok(TrialRow {
        n,
        rep,
        seed,
        counters,
        wall_ns: timed.then_some(wall_ns),
    })
}

/// Runs every `(point, replication)` trial of the design.
///
/// Trial `(n, r)` draws its input from `mix64(base_seed, n, r)`: a uniform
/// permutation of `1..=n` for the sort, two `n × n` matrices with entries
/// uniform on `[-100, 100]` (filled row-major, `A` then `B`) for Winograd.
/// Trials may run in parallel; rows come back ordered by point, then
/// replication. Counter columns are reproducible bit for bit; `wall_ns` is
/// only filled when `timed` is set.
pub fn run_experiment(algorithm: Algorithm, design: &Design, timed: bool) -> Result<TrialTable> {
    let cells: Vec<(u64, u32)> = design
        .points
        .iter()
        .flat_map(|&n| (0..design.replications).map(move |r| (n, r)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(n, r)| run_trial(algorithm, n, r, mix64(design.base_seed, n, r as u64), timed))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialTable { algorithm, rows })
}

/// CSV header of a trial table.
pub const TRIAL_CSV_HEADER: [&str; 9] = [
    "algorithm",
    "n",
    "rep",
    "seed",
    "comparisons",
    "swaps",
    "mults",
    "adds",
    "wall_ns",
];

#[derive(Debug, Serialize, Deserialize)]
struct CsvTrialRow {
    algorithm: Algorithm,
    n: u64,
    rep: u32,
    seed: u64,
    comparisons: Option<u64>,
    swaps: Option<u64>,
    mults: Option<u64>,
    adds: Option<u64>,
    wall_ns: Option<u64>,
}

impl TrialTable {
    /// Writes the table as CSV with [`TRIAL_CSV_HEADER`]; absent counters are
    /// empty cells. LF line endings.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .has_headers(false)
            .from_writer(writer);
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(TRIAL_CSV_HEADER).map_err(io)?;
        for row in &self.rows {
            w.serialize(CsvTrialRow {
                algorithm: self.algorithm,
                n: row.n,
                rep: row.rep,
                seed: row.seed,
                comparisons: row.counters.comparisons,
                swaps: row.counters.swaps,
                mults: row.counters.multiplications,
                adds: row.counters.additions,
                wall_ns: row.wall_ns,
            })
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    /// Parses a table written by [`TrialTable::write_csv`]. Every row must
    /// name the same algorithm and there must be at least one row.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(reader);
        let headers = r.headers().map_err(|e| Error::Parse(e.to_string()))?;
        if headers.iter().ne(TRIAL_CSV_HEADER) {
            return Err(Error::Parse(format!(
                "expected header {}",
                TRIAL_CSV_HEADER.join(",")
            )));
        }
        let mut algorithm = None;
        let mut rows = Vec::new();
        for rec in r.deserialize::<CsvTrialRow>() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            match algorithm {
                None => algorithm = Some(rec.algorithm),
                Some(a) if a != rec.algorithm => {
                    return Err(Error::Parse(format!(
                        "mixed algorithms in one table: {a} and {}",
                        rec.algorithm
                    )))
                }
                Some(_) => {}
            }
            rows.push(TrialRow {
                n: rec.n,
                rep: rec.rep,
                seed: rec.seed,
                counters: CounterSet {
                    comparisons: rec.comparisons,
                    swaps: rec.swaps,
                    multiplications: rec.mults,
                    additions: rec.adds,
                },
                wall_ns: rec.wall_ns,
            });
        }
        let algorithm = algorithm.ok_or_else(|| Error::Parse("trial table has no rows".into()))?;
        Ok(Self { algorithm, rows })
    }

    /// Response values grouped by design point in ascending `n`, preserving
    /// row order within each point.
    pub fn grouped(&self, response: Response) -> Result<Vec<(u64, Vec<f64>)>> {
        let mut groups: Vec<(u64, Vec<f64>)> = Vec::new();
        for row in &self.rows {
            let v = response.value(row).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "response {response} is not recorded for {} (n = {}, rep = {})",
                    self.algorithm, row.n, row.rep
                ))
            })?;
            match groups.iter_mut().find(|(n, _)| *n == row.n) {
                Some((_, vals)) => vals.push(v as f64),
                None => groups.push((row.n, vec![v as f64])),
            }
        }
        groups.sort_by_key(|(n, _)| *n);
        Ok(groups)
    }
}
