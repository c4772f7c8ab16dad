//! Bounded Kolmogorov complexity on TOYVM-1, a tiny prefix-free machine.
//!
//! A TOYVM-1 program is a bit string read left to right on demand, two bits
//! per opcode:
//!
//! | opcode | effect                                                        |
//! |--------|---------------------------------------------------------------|
//! | `00`   | append `0` to the output                                      |
//! | `01`   | append `1` to the output                                      |
//! | `10`   | read a 3-bit operand `k`; `k = 0` loops forever, otherwise the |
//! |        | output becomes `k + 1` copies of itself                       |
//! | `11`   | halt                                                          |
//!
//! Every opcode execution (and every iteration of the `k = 0` loop) costs
//! one step. A run only counts as a valid halt if the `11` opcode is reached
//! with every program bit consumed. Any extension of a halting program is
//! therefore invalid, so the set of halting programs is prefix-free and the
//! sum of `2^-|p|` over it obeys Kraft's inequality.
//!
//! Halting for TOYVM-1 is decidable, so every quantity here is computable;
//! the point is the construction (enumeration, dovetailing, dyadic sums),
//! not a universal machine.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output length limit in bits.
pub const OUTPUT_CAP: usize = 1 << 20;

/// Longest program length that may be enumerated.
pub const MAX_ENUM_LEN: usize = 24;

/// Largest `n` accepted by [`census`].
pub const MAX_CENSUS_N: usize = 14;

/// Bit string rendered as ASCII `0`/`1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` repeated `times` times.
    pub fn repeat(&self, times: usize) -> Self {
        Self(self.0.repeat(times))
    }

    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        self.len() < other.len() && other.0.starts_with(&self.0)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.pad(&s)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "bit strings may only contain '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An immutable TOYVM-1 program.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToyProgram(BitString);

impl ToyProgram {
    pub fn new(bits: BitString) -> Self {
        Self(bits)
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Emits each bit of `target` literally, then halts: `2|target| + 2` bits.
    pub fn literal(target: &BitString) -> Self {
        let mut bits = Vec::with_capacity(2 * target.len() + 2);
        for &b in target.bits() {
            bits.extend([false, b]);
        }
        bits.extend([true, true]);
        Self(BitString(bits))
    }

    /// Emits `pattern`, applies `doublings` repeat-×8 instructions and halts:
    /// `2|pattern| + 5·doublings + 2` bits.
    pub fn repeated(pattern: &BitString, doublings: usize) -> Self {
        let mut bits = Vec::with_capacity(2 * pattern.len() + 5 * doublings + 2);
        for &b in pattern.bits() {
            bits.extend([false, b]);
        }
        for _ in 0..doublings {
            bits.extend([true, false, true, true, true]);
        }
        bits.extend([true, true]);
        Self(BitString(bits))
    }
}

impl fmt::Display for ToyProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for ToyProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse().map(ToyProgram)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InvalidReason {
    /// An opcode or operand needed bits past the end of the program.
    Underrun,
    /// Halted with program bits left unread.
    Unconsumed,
    /// The output grew past [`OUTPUT_CAP`].
    OutputCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExecOutcome {
    Halted {
        output: BitString,
        steps_used: u64,
        bits_read: usize,
    },
    /// Fuel ran out first.
    Running,
    Invalid {
        reason: InvalidReason,
    },
}

impl ExecOutcome {
    /// Output of a run that halted having read exactly `program_len` bits.
    pub fn valid_output(&self, program_len: usize) -> Option<&BitString> {
        match self {
            ExecOutcome::Halted {
                output, bits_read, ..
            } if *bits_read == program_len => Some(output),
            _ => None,
        }
    }
}

trait BitSource {
    fn len(&self) -> usize;
    fn bit(&self, i: usize) -> bool;
}

impl BitSource for &[bool] {
    fn len(&self) -> usize {
        <[bool]>::len(self)
    }

    fn bit(&self, i: usize) -> bool {
        self[i]
    }
}

/// An enumerated candidate of at most [`MAX_ENUM_LEN`] bits, most
/// significant bit first.
#[derive(Debug, Clone, Copy)]
struct PackedProgram {
    value: u32,
    len: u8,
}

impl PackedProgram {
    fn to_program(self) -> ToyProgram {
        let len = self.len as usize;
        ToyProgram(BitString((0..len).map(|i| self.bit(i)).collect()))
    }
}

impl BitSource for PackedProgram {
    fn len(&self) -> usize {
        self.len as usize
    }

    fn bit(&self, i: usize) -> bool {
        (self.value >> (self.len as usize - 1 - i)) & 1 == 1
    }
}

/// Resumable TOYVM-1 interpreter.
struct Machine<S> {
    program: S,
    pos: usize,
    output: Vec<bool>,
    steps: u64,
    looping: bool,
}

impl<S: BitSource> Machine<S> {
    fn new(program: S) -> Self {
        Self {
            program,
            pos: 0,
            output: Vec::new(),
            steps: 0,
            looping: false,
        }
    }

    fn read(&mut self, width: usize) -> Option<u32> {
        if self.pos + width > self.program.len() {
            return None;
        }
        let mut v = 0;
        for _ in 0..width {
            v = v << 1 | self.program.bit(self.pos) as u32;
            self.pos += 1;
        }
        Some(v)
    }

    /// Executes one step. Returns the final outcome once the run ends.
    fn step(&mut self) -> Option<ExecOutcome> {
        self.steps += 1;
        if self.looping {
            return None;
        }
        let invalid = |reason| Some(ExecOutcome::Invalid { reason });
        match self.read(2) {
            None => invalid(InvalidReason::Underrun),
            Some(op @ (0 | 1)) => {
                if self.output.len() >= OUTPUT_CAP {
                    return invalid(InvalidReason::OutputCap);
                }
                self.output.push(op == 1);
                None
            }
            Some(2) => match self.read(3) {
                None => invalid(InvalidReason::Underrun),
                Some(0) => {
                    self.looping = true;
                    None
                }
                Some(k) => {
                    let copies = k as usize + 1;
                    if self.output.len() * copies > OUTPUT_CAP {
                        return invalid(InvalidReason::OutputCap);
                    }
                    self.output = self.output.repeat(copies);
                    None
                }
            },
            Some(_) => {
                if self.pos == self.program.len() {
                    Some(ExecOutcome::Halted {
                        output: BitString(std::mem::take(&mut self.output)),
                        steps_used: self.steps,
                        bits_read: self.pos,
                    })
                } else {
                    invalid(InvalidReason::Unconsumed)
                }
            }
        }
    }
}

/// Runs `program` for at most `fuel` steps.
pub fn vm_run(program: &ToyProgram, fuel: u64) -> Result<ExecOutcome> {
    if fuel == 0 {
        return Err(Error::InvalidParameter("fuel must be at least 1".into()));
    }
    let mut m = Machine::new(program.bits().bits());
    while m.steps < fuel {
        if let Some(done) = m.step() {
            return Ok(done);
        }
        if m.looping {
            // no further step can change the state
            return Ok(ExecOutcome::Running);
        }
    }
    Ok(ExecOutcome::Running)
}

fn check_enum_len(max_len: usize) -> Result<()> {
    if max_len > MAX_ENUM_LEN {
        return Err(Error::ResourceBound(format!(
            "program length bound {max_len} exceeds {MAX_ENUM_LEN}"
        )));
    }
    Ok(())
}

fn packed_candidates(max_len: usize) -> impl Iterator<Item = PackedProgram> {
    (1..=max_len).flat_map(|len| {
        (0..1u32 << len).map(move |value| PackedProgram {
            value,
            len: len as u8,
        })
    })
}

/// Number of bit strings of length `1..=max_len`.
pub fn candidate_count(max_len: usize) -> u64 {
    (1u64 << (max_len + 1)) - 2
}

/// Every bit string of length `1..=max_len`, ordered by length and then
/// lexicographically.
pub fn enumerate_programs(max_len: usize) -> Result<impl Iterator<Item = ToyProgram>> {
    check_enum_len(max_len)?;
    Ok(packed_candidates(max_len).map(PackedProgram::to_program))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub program: ToyProgram,
    pub output: BitString,
    pub steps: u64,
}

/// Valid-halting programs found within the bounds, in (length,
/// lexicographic) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaltingCatalog {
    pub max_len: usize,
    pub max_steps: u64,
    pub entries: Vec<CatalogEntry>,
}

impl HaltingCatalog {
    pub fn programs(&self) -> impl Iterator<Item = &ToyProgram> {
        self.entries.iter().map(|e| &e.program)
    }

    /// Number of halting programs per length, index = length.
    pub fn length_histogram(&self) -> Vec<u64> {
        let mut h = vec![0; self.max_len + 1];
        for e in &self.entries {
            h[e.program.len()] += 1;
        }
        h
    }
}

const DOVETAIL_CHUNK: usize = 1 << 14;

/// Runs one chunk of candidates under the round-robin schedule: in round
/// `t` every live machine is advanced by one step, so each survivor has
/// run exactly `t` steps.
fn dovetail_chunk(chunk: &[PackedProgram], max_steps: u64) -> Vec<(usize, CatalogEntry)> {
    let mut live: Vec<(usize, Machine<PackedProgram>)> = chunk
        .iter()
        .enumerate()
        .map(|(i, &p)| (i, Machine::new(p)))
        .collect();
    let mut found = Vec::new();
    for _round in 1..=max_steps {
        if live.is_empty() {
            break;
        }
        live.retain_mut(|(i, m)| match m.step() {
            None => true,
            Some(ExecOutcome::Halted {
                output, steps_used, ..
            }) => {
                found.push((
                    *i,
                    CatalogEntry {
                        program: m.program.to_program(),
                        output,
                        steps: steps_used,
                    },
                ));
                false
            }
            Some(_) => false,
        });
    }
    found.sort_by_key(|(i, _)| *i);
    found
}

/// Dovetailed enumeration of halting programs: every candidate of length
/// `1..=max_len` runs one step, the survivors a second step, and so on up
/// to `max_steps`.
///
/// Candidates are split into independent chunks that may run on the rayon
/// pool; entries are reassembled in enumeration order, so the result does
/// not depend on the number of workers.
pub fn dovetail(max_len: usize, max_steps: u64) -> Result<HaltingCatalog> {
    check_enum_len(max_len)?;
    if max_steps == 0 {
        return Err(Error::InvalidParameter(
            "max_steps must be at least 1".into(),
        ));
    }
    let candidates: Vec<PackedProgram> = packed_candidates(max_len).collect();
    let chunks: Vec<Vec<(usize, CatalogEntry)>> = candidates
        .par_chunks(DOVETAIL_CHUNK)
        .map(|c| dovetail_chunk(c, max_steps))
        .collect();
    let entries = chunks
        .into_iter()
        .flat_map(|c| c.into_iter().map(|(_, e)| e))
        .collect();
    Ok(HaltingCatalog {
        max_len,
        max_steps,
        entries,
    })
}

/// Catalog built by running each candidate once with `fuel = max_steps`.
/// Equal to [`dovetail`] for the same bounds; kept as the reference path.
pub fn fuel_catalog(max_len: usize, max_steps: u64) -> Result<HaltingCatalog> {
    check_enum_len(max_len)?;
    let mut entries = Vec::new();
    for program in enumerate_programs(max_len)? {
        if let ExecOutcome::Halted {
            output,
            steps_used,
            bits_read,
        } = vm_run(&program, max_steps)?
        {
            if bits_read == program.len() {
                entries.push(CatalogEntry {
                    program,
                    output,
                    steps: steps_used,
                });
            }
        }
    }
    Ok(HaltingCatalog {
        max_len,
        max_steps,
        entries,
    })
}

/// Upper estimate of the Kolmogorov complexity of `target` on TOYVM-1
/// within the search bounds. `k_upper` is never claimed to be exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityRecord {
    pub target: BitString,
    pub k_upper: Option<usize>,
    pub witness: Option<ToyProgram>,
}

pub fn k_upper(target: &BitString, max_len: usize, max_steps: u64) -> Result<ComplexityRecord> {
    if target.len() > OUTPUT_CAP {
        return Err(Error::ResourceBound(format!(
            "target of {} bits exceeds the output cap of {OUTPUT_CAP}",
            target.len()
        )));
    }
    let catalog = dovetail(max_len, max_steps)?;
    Ok(k_upper_in(&catalog, target))
}

/// Shortest, then lexicographically least, catalog program printing `target`.
pub fn k_upper_in(catalog: &HaltingCatalog, target: &BitString) -> ComplexityRecord {
    let witness = catalog
        .entries
        .iter()
        .find(|e| &e.output == target)
        .map(|e| e.program.clone());
    ComplexityRecord {
        target: target.clone(),
        k_upper: witness.as_ref().map(ToyProgram::len),
        witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    /// Distinct length-`n` strings printed by halting programs of length
    /// at most `n - 2`.
    pub producible: u64,
    /// `2^(n-1) - 1`, the number of programs of length at most `n - 2`.
    pub bound: u64,
    pub at_least_half_incompressible: bool,
}

pub fn census(n: usize, max_steps: u64) -> Result<CensusReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("census needs n >= 2".into()));
    }
    if n > MAX_CENSUS_N {
        return Err(Error::ResourceBound(format!(
            "census is limited to n <= {MAX_CENSUS_N}, got {n}"
        )));
    }
    let catalog = dovetail(n - 2, max_steps)?;
    let mut outputs: Vec<&BitString> = catalog
        .entries
        .iter()
        .map(|e| &e.output)
        .filter(|o| o.len() == n)
        .collect();
    outputs.sort_unstable();
    outputs.dedup();
    let producible = outputs.len() as u64;
    Ok(CensusReport {
        n,
        producible,
        bound: (1u64 << (n - 1)) - 1,
        at_least_half_incompressible: (1u64 << n) - producible >= 1u64 << (n - 1),
    })
}

/// Exact dyadic lower bound `numerator / 2^scale` on the halting
/// probability of TOYVM-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaEstimate {
    pub numerator: BigUint,
    pub scale: u32,
    pub max_len: usize,
    pub max_steps: u64,
}

impl OmegaEstimate {
    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.scale as i32)
    }

    /// The first `scale` binary digits after the point.
    pub fn binary_digits(&self) -> String {
        let one = BigUint::from(1u8) << self.scale;
        if self.numerator >= one {
            // only reachable for a complete prefix code
            return "1".repeat(self.scale as usize);
        }
        if self.scale == 0 {
            return String::new();
        }
        let digits = if self.numerator.is_zero() {
            String::new()
        } else {
            self.numerator.to_str_radix(2)
        };
        format!("{digits:0>width$}", width = self.scale as usize)
    }

    /// Exact comparison of the represented values.
    pub fn cmp_value(&self, other: &OmegaEstimate) -> Ordering {
        let scale = self.scale.max(other.scale);
        let lhs = &self.numerator << (scale - self.scale);
        let rhs = &other.numerator << (scale - other.scale);
        lhs.cmp(&rhs)
    }

    /// True when the value equals `num / 2^scale` exactly.
    pub fn equals_dyadic(&self, num: u64, scale: u32) -> bool {
        let other = OmegaEstimate {
            numerator: BigUint::from(num),
            scale,
            max_len: 0,
            max_steps: 0,
        };
        self.cmp_value(&other) == Ordering::Equal
    }
}

#[derive(Serialize, Deserialize)]
struct OmegaWire {
    numerator: String,
    scale: u32,
    max_len: usize,
    max_steps: u64,
    value: f64,
    binary: String,
}

impl Serialize for OmegaEstimate {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        OmegaWire {
            numerator: self.numerator.to_string(),
            scale: self.scale,
            max_len: self.max_len,
            max_steps: self.max_steps,
            value: self.to_f64(),
            binary: self.binary_digits(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OmegaEstimate {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = OmegaWire::deserialize(de)?;
        let numerator = w
            .numerator
            .parse::<BigUint>()
            .map_err(serde::de::Error::custom)?;
        if w.scale as usize != w.max_len || w.max_len > MAX_ENUM_LEN {
            return Err(serde::de::Error::custom(format!(
                "scale must equal max_len and be at most {MAX_ENUM_LEN}"
            )));
        }
        if numerator > BigUint::from(1u8) << w.scale {
            return Err(serde::de::Error::custom("estimate exceeds 1"));
        }
        Ok(OmegaEstimate {
            numerator,
            scale: w.scale,
            max_len: w.max_len,
            max_steps: w.max_steps,
        })
    }
}

/// `Σ 2^-|p|` over the halting catalog, in exact integer arithmetic with
/// `scale = max_len`.
pub fn omega_lower(max_len: usize, max_steps: u64) -> Result<OmegaEstimate> {
    let catalog = dovetail(max_len, max_steps)?;
    Ok(omega_from_catalog(&catalog))
}

pub fn omega_from_catalog(catalog: &HaltingCatalog) -> OmegaEstimate {
    let scale = catalog.max_len as u32;
    // x_y / 2^y summed over lengths y, with x_y halting programs of length y
    let numerator = catalog
        .length_histogram()
        .into_iter()
        .enumerate()
        .fold(BigUint::zero(), |acc, (len, count)| {
            acc + (BigUint::from(count) << (catalog.max_len - len))
        });
    OmegaEstimate {
        numerator,
        scale,
        max_len: catalog.max_len,
        max_steps: catalog.max_steps,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoRow {
    pub doublings: usize,
    pub target_length: usize,
    pub k_upper_constructive: usize,
    pub literal_length: usize,
    pub program: ToyProgram,
}

pub const MAX_DEMO_PATTERN: usize = 8;
pub const MAX_DEMO_DOUBLINGS: usize = 6;

/// For `d = 0..=doublings`, builds the program "emit `pattern`, repeat ×8
/// `d` times, halt", runs it, and checks it prints `pattern` repeated
/// `8^d` times with every bit consumed.
pub fn compress_demo(pattern: &BitString, doublings: usize) -> Result<Vec<DemoRow>> {
    if pattern.len() > MAX_DEMO_PATTERN {
        return Err(Error::InvalidParameter(format!(
            "pattern length is limited to {MAX_DEMO_PATTERN} bits"
        )));
    }
    if doublings > MAX_DEMO_DOUBLINGS {
        return Err(Error::InvalidParameter(format!(
            "doublings are limited to {MAX_DEMO_DOUBLINGS}"
        )));
    }
    (0..=doublings)
        .map(|d| {
            let program = ToyProgram::repeated(pattern, d);
            let target_length = pattern.len() * 8usize.pow(d as u32);
            let fuel = (pattern.len() + d + 1) as u64;
            match vm_run(&program, fuel)? {
                ExecOutcome::Invalid {
                    reason: InvalidReason::OutputCap,
                } => Err(Error::ResourceBound(format!(
                    "target of {target_length} bits exceeds the output cap of {OUTPUT_CAP}"
                ))),
                outcome => {
                    let expected = pattern.repeat(8usize.pow(d as u32));
                    match outcome.valid_output(program.len()) {
                        Some(out) if *out == expected => Ok(DemoRow {
                            doublings: d,
                            target_length,
                            k_upper_constructive: program.len(),
                            literal_length: 2 * target_length + 2,
                            program,
                        }),
                        _ => unreachable!("constructed program {program} did not print its target"),
                    }
                }
            }
        })
        .collect()
}
