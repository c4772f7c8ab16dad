//! Instrumented computer experiments.
//!
//! Two algorithms are run over a design of input sizes: a replacement sort,
//! whose interchange count varies with the input at fixed `n`, and
//! Winograd's matrix product, whose operation counts are fixed by `n`. The
//! responses are then classified as degenerate or noisy and modelled by a
//! least-squares surrogate in `n`.

pub mod algorithms;
pub mod classify;
pub mod harness;
pub mod seed;
pub mod surrogate;

pub use algorithms::{
    naive_multiply, replacement_sort_instrumented, winograd_multiply_instrumented, CounterSet,
    Matrix, SortRun, WinogradRun,
};
pub use classify::{classify, ClassificationReport, NoiseLabel, PointSummary};
pub use harness::{run_experiment, Algorithm, Design, Response, TrialRow, TrialTable};
pub use seed::{mix64, SplitMix64};
pub use surrogate::{fit_surrogate, predict, BasisFn, Prediction, SurrogateFit};
