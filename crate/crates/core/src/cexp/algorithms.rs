use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact operation counts for one run. Only the counters relevant to the
/// algorithm are populated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterSet {
    pub comparisons: Option<u64>,
    pub swaps: Option<u64>,
    pub multiplications: Option<u64>,
    pub additions: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortRun {
    pub output: Vec<i64>,
    pub counters: CounterSet,
}

/// Simplified replacement sort: for every `i`, each later element smaller
/// than `a[i]` is swapped into position `i`. Always makes exactly
/// `n(n-1)/2` comparisons; the number of interchanges depends on the input.
pub fn replacement_sort_instrumented(input: &[i64]) -> Result<SortRun> {
    if input.is_empty() {
        return Err(Error::InvalidParameter("cannot sort an empty input".into()));
    }
    let mut a = input.to_vec();
    let n = a.len();
    let mut comparisons = 0u64;
    let mut swaps = 0u64;
    for i in 0..n.saturating_sub(1) {
        for j in i + 1..n {
            comparisons += 1;
            if a[j] < a[i] {
                a.swap(i, j);
                swaps += 1;
            }
        }
    }
    Ok(SortRun {
        output: a,
        counters: CounterSet {
            comparisons: Some(comparisons),
            swaps: Some(swaps),
            ..Default::default()
        },
    })
}

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "matrix must have at least one row".into(),
            ));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix must be square".into()));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| (i == j) as i64)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(<[i64]>::to_vec).collect()
    }
}

fn check_same_order(a: &Matrix, b: &Matrix) -> Result<usize> {
    if a.n != b.n || a.n == 0 {
        return Err(Error::InvalidParameter(format!(
            "dimension mismatch: {}x{} and {}x{}",
            a.n, a.n, b.n, b.n
        )));
    }
    Ok(a.n)
}

/// Textbook triple loop.
pub fn naive_multiply(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = check_same_order(a, b)?;
    Ok(Matrix::from_fn(n, |i, j| {
        (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum()
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinogradRun {
    pub product: Matrix,
    pub counters: CounterSet,
}

/// Winograd's inner-product multiplication.
///
/// With `h = n / 2`, row terms `u_i = Σ a[i][2k]·a[i][2k+1]` and column
/// terms `v_j = Σ b[2k][j]·b[2k+1][j]` are precomputed, and
/// `c[i][j] = Σ (a[i][2k] + b[2k+1][j])·(a[i][2k+1] + b[2k][j]) - u_i - v_j`,
/// plus `a[i][n-1]·b[n-1][j]` when `n` is odd.
///
/// Every multiplication and every addition or subtraction is counted.
/// Nothing branches on the data, so the counts depend on `n` only.
pub fn winograd_multiply_instrumented(a: &Matrix, b: &Matrix) -> Result<WinogradRun> {
    let n = check_same_order(a, b)?;
    let h = n / 2;
    let mut mults = 0u64;
    let mut adds = 0u64;

    let row_terms: Vec<i64> = (0..n)
        .map(|i| {
            let mut u = 0;
            for k in 0..h {
                u += a.get(i, 2 * k) * a.get(i, 2 * k + 1);
                mults += 1;
                adds += 1;
            }
            u
        })
        .collect();
    let col_terms: Vec<i64> = (0..n)
        .map(|j| {
            let mut v = 0;
            for k in 0..h {
                v += b.get(2 * k, j) * b.get(2 * k + 1, j);
                mults += 1;
                adds += 1;
            }
            v
        })
        .collect();

    let mut data = Vec::with_capacity(n * n);
    for (i, u) in row_terms.iter().enumerate() {
        for (j, v) in col_terms.iter().enumerate() {
            let mut s = -u - v;
            adds += 2;
            for k in 0..h {
                s += (a.get(i, 2 * k) + b.get(2 * k + 1, j))
                    * (a.get(i, 2 * k + 1) + b.get(2 * k, j));
                mults += 1;
                adds += 3;
            }
            if n % 2 == 1 {
                s += a.get(i, n - 1) * b.get(n - 1, j);
                mults += 1;
                adds += 1;
            }
            data.push(s);
        }
    }

    Ok(WinogradRun {
        product: Matrix { n, data },
        counters: CounterSet {
            multiplications: Some(mults),
            additions: Some(adds),
            ..Default::default()
        },
    })
}
