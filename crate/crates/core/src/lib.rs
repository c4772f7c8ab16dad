//! A small randomness laboratory.
//!
//! * [`prng`]: linear congruential and shift-register generators, cycle
//!   detection, and the full-period conditions.
//! * [`randtests`]: frequency, serial, gap, poker and runs tests with a
//!   two-sided verdict.
//! * [`kolmolab`]: a prefix-free toy machine, dovetailed enumeration of its
//!   halting programs, bounded complexity estimates and an exact lower bound
//!   on its halting probability.
//! * [`cexp`]: instrumented sorting and matrix multiplication experiments,
//!   noise classification and least-squares surrogates.
//! * [`io`]: the CSV and JSON formats shared with the command line tool.

pub mod cexp;
pub mod error;
pub mod io;
pub mod kolmolab;
pub mod prng;
pub mod randtests;

pub use error::{Error, Result};
