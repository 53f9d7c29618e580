//! Numerical side of the construction: `ζ(k) − 1`, the row/column identities
//! of the density table, empirical density scans and the powerfree classes.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::descriptor::SetDescriptor;
use crate::numeral::{left_factorial, Natural};
use crate::partition::{Selector, MAX_COLUMN};

/// Smallest tolerance accepted by [`zeta_minus_one`].
pub const MIN_ZETA_EPS: f64 = 1e-12;
/// Default tolerance for zeta values used as density targets.
pub const DEFAULT_ZETA_EPS: f64 = 1e-12;
/// Upper end of the powerfree scan (trial division stays cheap below this).
pub const MAX_POWERFREE_SCAN: Natural = 1_000_000_000;

const SCAN_CHUNK: Natural = 1 << 16;
const MIN_ZETA_TERMS: u64 = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{0}")]
    Domain(String),
    #[error("scan of {n} exceeds the supported bound {bound}")]
    ScanTooLarge { n: Natural, bound: Natural },
}

/// `B_{2j}/(2j)!` for `j = 1..=7`.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

/// A value of `ζ(k) − 1` with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEstimate {
    pub value: f64,
    pub error_bound: f64,
    /// Explicit terms `2..terms` summed before the tail correction.
    pub terms: u64,
}

/// Euler–Maclaurin tail `Σ_{i ≥ t} i^{−k}` with six correction terms, and the
/// magnitude of the seventh (which bounds the remainder, since `x^{−k}` is
/// completely monotone).
fn zeta_tail(k: u32, t: u64) -> (f64, f64) {
    let kf = k as f64;
    let tf = t as f64;
    let lead = tf.powf(1.0 - kf);
    let mut tail = lead / (kf - 1.0) + 0.5 * tf.powf(-kf);
    // rising factorial (k)_{2j−1} · t^{−k−2j+1}
    let mut derivative = kf * tf.powf(-kf - 1.0);
    let mut next = 0.0;
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coeff * derivative;
        if j + 1 == BERNOULLI_OVER_FACTORIAL.len() {
            next = term.abs();
        } else {
            tail += term;
        }
        let r = (2 * j + 1) as f64;
        derivative *= (kf + r) * (kf + r + 1.0) / (tf * tf);
    }
    (tail, next)
}

/// `ζ(k) − 1` from `terms − 2` explicit terms plus the corrected tail.
pub fn zeta_minus_one_with_terms(k: u32, terms: u64) -> Result<ZetaEstimate, AnalysisError> {
    if k < 2 {
        return Err(AnalysisError::Domain(format!(
            "zeta({k}) - 1: the series diverges for k < 2"
        )));
    }
    if terms < 2 {
        return Err(AnalysisError::Domain("zeta needs at least 2 terms".into()));
    }
    let (tail, remainder) = zeta_tail(k, terms);
    // smallest terms first
    let value = (2..terms)
        .rev()
        .fold(tail, |acc, i| acc + (i as f64).powi(-(k as i32)));
    let rounding = 4.0 * f64::EPSILON * value * (terms as f64).log2().max(1.0);
    Ok(ZetaEstimate { value, error_bound: remainder + rounding, terms })
}

/// `Σ_{i ≥ 2} i^{−k}` with absolute error below `eps`.
///
/// The number of explicit terms doubles from 16 until the Euler–Maclaurin
/// remainder bound drops below `eps`; for `eps ≥ 1e−12` the first attempt
/// almost always suffices.
pub fn zeta_minus_one(k: u32, eps: f64) -> Result<ZetaEstimate, AnalysisError> {
    if !(eps >= MIN_ZETA_EPS) {
        return Err(AnalysisError::Domain(format!(
            "tolerance {eps} below the supported {MIN_ZETA_EPS}"
        )));
    }
    let mut terms = MIN_ZETA_TERMS;
    loop {
        let estimate = zeta_minus_one_with_terms(k, terms)?;
        if estimate.error_bound < eps {
            return Ok(estimate);
        }
        terms *= 2;
    }
}

/// `ζ(k) − 1` at the default tolerance.
pub fn zeta_value(k: u32) -> Result<f64, AnalysisError> {
    Ok(zeta_minus_one(k, DEFAULT_ZETA_EPS)?.value)
}

/// Compensated sum.
fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// `Σ_{k=2}^{K} (ζ(k) − 1)`, which tends to 1 with a tail near `2^{−K}`.
pub fn zeta_row_sum(max_k: u32) -> Result<f64, AnalysisError> {
    zeta_row_sum_with(max_k, |k| zeta_value(k))
}

/// Row sum with a caller-chosen evaluator for each `ζ(k) − 1`.
pub fn zeta_row_sum_with(
    max_k: u32,
    mut zeta: impl FnMut(u32) -> Result<f64, AnalysisError>,
) -> Result<f64, AnalysisError> {
    if max_k < 2 {
        return Err(AnalysisError::Domain(format!("row sum needs K >= 2, got {max_k}")));
    }
    let values = (2..=max_k).rev().map(&mut zeta).collect::<Result<Vec<_>, _>>()?;
    Ok(neumaier_sum(values))
}

/// `1/ζ(s)` with `1/ζ(1) = 0`.
pub fn reciprocal_zeta(s: u32) -> Result<f64, AnalysisError> {
    match s {
        0 => Err(AnalysisError::Domain("1/zeta(0) is not used here".into())),
        1 => Ok(0.0),
        s => Ok(1.0 / (1.0 + zeta_value(s)?)),
    }
}

fn check_column(m: u32) -> Result<(), AnalysisError> {
    if m < 2 {
        return Err(AnalysisError::Domain(format!("column index {m} < 2")));
    }
    Ok(())
}

/// Density of the column `B_m`: `Σ_{k≥2} m^{−k} = 1/(m(m−1))`.
pub fn column_sum_identity(m: u32) -> Result<Ratio<u64>, AnalysisError> {
    check_column(m)?;
    let m = m as u64;
    Ok(Ratio::new(1, m * (m - 1)))
}

/// `Σ_{k=2}^{K} m^{−k}` exactly.
pub fn column_partial_sum(m: u32, max_k: u32) -> Result<BigRational, AnalysisError> {
    check_column(m)?;
    let base = BigInt::from(m);
    let mut sum = BigRational::zero();
    let mut denom = base.clone();
    for _ in 2..=max_k {
        denom *= &base;
        sum += BigRational::new(BigInt::one(), denom.clone());
    }
    Ok(sum)
}

/// `Σ_{m=2}^{M} 1/(m(m−1))`, which telescopes to `1 − 1/M`.
pub fn column_telescoping(max_m: u32) -> Result<BigRational, AnalysisError> {
    check_column(max_m)?;
    Ok((2..=max_m as u64).fold(BigRational::zero(), |acc, m| {
        acc + BigRational::new(BigInt::one(), BigInt::from(m * (m - 1)))
    }))
}

/// Which asymptotic density a set is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityTarget {
    /// `B_{m,k}`: `1/m^k`
    Cell { m: u32, k: u32 },
    /// `B_m`: `1/(m(m−1))`
    Column(u32),
    /// `A_k`: `ζ(k) − 1`
    Row(u32),
    /// All of ℕ.
    Total,
    /// Largest prime exponent exactly `k`: `1/ζ(k+1) − 1/ζ(k)`.
    Powerfree(u32),
    /// Density-zero sets such as the missed set.
    Zero,
}

impl DensityTarget {
    pub fn value(self) -> Result<f64, AnalysisError> {
        match self {
            DensityTarget::Cell { m, k } => {
                check_column(m)?;
                Ok((m as f64).powi(-(k as i32)))
            }
            DensityTarget::Column(m) => {
                let r = column_sum_identity(m)?;
                Ok(*r.numer() as f64 / *r.denom() as f64)
            }
            DensityTarget::Row(k) => zeta_value(k),
            DensityTarget::Total => Ok(1.0),
            DensityTarget::Powerfree(k) => {
                if k == 0 {
                    return Err(AnalysisError::Domain("powerfree class 0 is empty".into()));
                }
                Ok(reciprocal_zeta(k + 1)? - reciprocal_zeta(k)?)
            }
            DensityTarget::Zero => Ok(0.0),
        }
    }
}

/// Empirical density of a set over `[1, N]` against its asymptotic target.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub set: SetDescriptor,
    pub n: Natural,
    pub count: Natural,
    pub empirical: f64,
    pub target: f64,
    pub abs_error: f64,
    /// For rows `A_k`: the first column with no member in `[1, N]`. Columns
    /// from here on contribute to the target but not yet to the count.
    pub first_empty_column: Option<u32>,
}

impl DensityReport {
    pub fn new(set: SetDescriptor, n: Natural, count: Natural) -> Result<Self, AnalysisError> {
        if n == 0 {
            return Err(AnalysisError::Domain("density over an empty range".into()));
        }
        let target = set.target().value()?;
        let empirical = count as f64 / n as f64;
        let first_empty_column = match set {
            SetDescriptor::Partition(Selector::Row(_)) => first_empty_column(n),
            _ => None,
        };
        Ok(Self {
            set,
            n,
            count,
            empirical,
            target,
            abs_error: (empirical - target).abs(),
            first_empty_column,
        })
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} = {} (target {}, error {})",
            self.set, self.count, self.n, self.empirical, self.target, self.abs_error
        )
    }
}

/// Smallest `m` whose least member `!(m−1)` exceeds `n`.
fn first_empty_column(n: Natural) -> Option<u32> {
    (2..=MAX_COLUMN + 2).find(|&m| left_factorial(m - 1).map_or(true, |lf| lf > n))
}

fn check_scan(set: &SetDescriptor, n: Natural) -> Result<(), AnalysisError> {
    if let SetDescriptor::Powerfree(_) = set {
        if n > MAX_POWERFREE_SCAN {
            return Err(AnalysisError::ScanTooLarge { n, bound: MAX_POWERFREE_SCAN });
        }
    }
    Ok(())
}

/// Members of `set` in `range`, counted sequentially.
pub fn count_sequential(set: &SetDescriptor, range: RangeInclusive<Natural>) -> Natural {
    range.filter(|&x| set.contains(x)).count() as Natural
}

/// Members of `set` in `range`, counted over parallel chunks of `chunk` numbers.
/// The result does not depend on the chunk size or thread count.
pub fn count_chunked(set: &SetDescriptor, range: RangeInclusive<Natural>, chunk: Natural) -> Natural {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return 0;
    }
    let chunk = chunk.max(1);
    let chunks = (hi - lo) / chunk + 1;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = lo + c * chunk;
            let end = start.saturating_add(chunk - 1).min(hi);
            count_sequential(set, start..=end)
        })
        .sum()
}

/// Parallel count of members in `range`.
pub fn count_range(set: &SetDescriptor, range: RangeInclusive<Natural>) -> Natural {
    count_chunked(set, range, SCAN_CHUNK)
}

/// Counts members of `set` in `[1, N]` and compares with the target density.
pub fn empirical_density(set: SetDescriptor, n: Natural) -> Result<DensityReport, AnalysisError> {
    check_scan(&set, n)?;
    let count = count_range(&set, 1..=n);
    DensityReport::new(set, n, count)
}

/// Largest exponent in the prime factorisation of `x`; `1` counts as
/// squarefree, so `max_exponent(1) = 1`.
///
/// Trial division by 2, 3 and then `6i ± 1` up to `√x`.
pub fn max_exponent(x: Natural) -> Result<u32, AnalysisError> {
    if x == 0 {
        return Err(AnalysisError::Domain("max_exponent(0) is undefined".into()));
    }
    let mut rest = x;
    let mut best = 1;
    let mut strip = |p: Natural, rest: &mut Natural| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        best = best.max(e);
    };
    strip(2, &mut rest);
    strip(3, &mut rest);
    let mut p: Natural = 5;
    while p <= rest / p {
        strip(p, &mut rest);
        strip(p + 2, &mut rest);
        p += 6;
    }
    Ok(best)
}

/// Density of `{x ≤ N : max_exponent(x) = k}` against `1/ζ(k+1) − 1/ζ(k)`.
pub fn powerfree_density(k: u32, n: Natural) -> Result<DensityReport, AnalysisError> {
    if k == 0 {
        return Err(AnalysisError::Domain("powerfree class index must be >= 1".into()));
    }
    empirical_density(SetDescriptor::Powerfree(k), n)
}
