//! Python bindings: `import zeta_partition_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use zeta_partition::analysis::{self, DensityReport};
use zeta_partition::numeral::{self, FactorialDigits};
use zeta_partition::oracle::{self, CheckStatus, FirstAvailable, LastAvailable, SeededRandom};
use zeta_partition::partition::{self, ResidueClassSet};
use zeta_partition::SetDescriptor;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn descriptor(set: &str) -> PyResult<SetDescriptor> {
    set.parse().map_err(value_error)
}

#[pyfunction]
fn factorial(n: u32) -> PyResult<u64> {
    numeral::factorial(n).map_err(value_error)
}

#[pyfunction]
fn left_factorial(n: u32) -> PyResult<u64> {
    numeral::left_factorial(n).map_err(value_error)
}

/// Factorial-base digits, least significant (coefficient of 1!) first.
#[pyfunction]
fn to_factorial(x: u64) -> Vec<u32> {
    // u32 rather than u8 so Python sees a list, not bytes
    numeral::to_factorial(x).digits().iter().map(|&d| d as u32).collect()
}

#[pyfunction]
fn from_factorial(digits: Vec<u32>) -> PyResult<u64> {
    let digits = digits
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            u8::try_from(d).map_err(|_| value_error(format!("digit {d} at position {} too large", i + 1)))
        })
        .collect::<PyResult<Vec<u8>>>()?;
    let digits = FactorialDigits::new(digits).map_err(value_error)?;
    numeral::from_factorial(&digits).map_err(value_error)
}

#[pyfunction]
fn classify_b(x: u64) -> PyResult<u32> {
    partition::classify_b(x).map_err(value_error)
}

/// `(m, k)` with `x` in `B_{m,k}`, a subset of `A_k`.
#[pyfunction]
fn classify_a(x: u64) -> PyResult<(u32, u32)> {
    let c = partition::classify_a(x).map_err(value_error)?;
    Ok((c.m, c.k))
}

/// `(x0, [b_0, b_1, ...])`.
#[pyfunction]
fn subclass_digits(x: u64, m: u32) -> PyResult<(u64, Vec<u32>)> {
    let q = partition::subclass_digits(x, m).map_err(value_error)?;
    Ok((q.x0, q.digits))
}

#[pyclass(name = "ResidueClassSet", frozen)]
struct PyResidueClassSet {
    inner: ResidueClassSet,
}

#[pymethods]
impl PyResidueClassSet {
    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    #[getter]
    fn residues(&self) -> Vec<u64> {
        self.inner.residues().to_vec()
    }

    fn __contains__(&self, x: u64) -> bool {
        self.inner.contains(x)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Density as `(numerator, denominator)`.
    fn density(&self) -> (u64, u64) {
        let d = self.inner.density();
        (*d.numer(), *d.denom())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ResidueClassSet({})", self.inner)
    }
}

#[pyfunction]
fn b_residues(m: u32) -> PyResult<PyResidueClassSet> {
    let inner = partition::b_residues(m).map_err(value_error)?;
    Ok(PyResidueClassSet { inner })
}

#[pyfunction]
fn bmk_residues(m: u32, k: u32) -> PyResult<PyResidueClassSet> {
    let inner = partition::bmk_residues(m, k).map_err(value_error)?;
    Ok(PyResidueClassSet { inner })
}

/// Members of a set such as `"A3"`, `"B5"`, `"B3,2"`, `"missed"` or
/// `"powerfree2"` up to `limit`.
#[pyfunction]
fn sequence(set: &str, limit: u64) -> PyResult<Vec<u64>> {
    Ok(descriptor(set)?.members(limit))
}

#[pyclass(name = "Assignment", frozen)]
struct PyAssignment {
    inner: oracle::Assignment,
}

#[pymethods]
impl PyAssignment {
    #[getter]
    fn depth(&self) -> u32 {
        self.inner.depth()
    }

    fn level(&self, j: u32) -> Option<PyResidueClassSet> {
        self.inner
            .level(j)
            .map(|s| PyResidueClassSet { inner: s.clone() })
    }

    fn owner(&self, x: u64) -> Option<u32> {
        self.inner.owner(x)
    }

    /// `(level, residue, modulus)` of the first chosen class meeting `x mod y`.
    fn progression_hit(&self, x: u64, y: u64) -> PyResult<Option<(u32, u64, u64)>> {
        if x == 0 || y == 0 {
            return Err(value_error("progression needs x, y >= 1"));
        }
        Ok(self
            .inner
            .progression_hit(x, y)
            .map(|h| (h.level, h.residue, h.modulus)))
    }
}

/// Greedy construction with strategy `"first"`, `"last"` or `"random"`
/// (the latter seeded by `seed`).
#[pyfunction]
#[pyo3(signature = (strategy, depth, seed = 0))]
fn greedy_assign(strategy: &str, depth: u32, seed: u64) -> PyResult<PyAssignment> {
    let inner = match strategy {
        "first" => oracle::greedy_assign(&mut FirstAvailable, depth),
        "last" => oracle::greedy_assign(&mut LastAvailable, depth),
        "random" => oracle::greedy_assign(&mut SeededRandom::new(seed), depth),
        other => return Err(value_error(format!("unknown strategy {other:?}"))),
    }
    .map_err(value_error)?;
    Ok(PyAssignment { inner })
}

#[pyfunction]
fn oracle_equivalence(depth: u32) -> PyResult<bool> {
    Ok(oracle::oracle_equivalence(depth).map_err(value_error)?.holds)
}

#[pyfunction]
fn missed_predicate(x: u64) -> bool {
    oracle::missed_predicate(x)
}

/// `(status, missed)` where status is `"confirmed"`, `"mismatch"` or
/// `"inconclusive"`.
#[pyfunction]
fn missed_set_check(n: u64, depth: u32) -> PyResult<(String, Vec<u64>)> {
    let check = oracle::missed_set_check(n, depth).map_err(value_error)?;
    let status = match check.status {
        CheckStatus::Confirmed => "confirmed",
        CheckStatus::Mismatch(_) => "mismatch",
        CheckStatus::Inconclusive(_) => "inconclusive",
    };
    Ok((status.to_string(), check.missed))
}

#[pyfunction]
fn missed_density(n: u32) -> PyResult<(u64, u64)> {
    let r = oracle::missed_density(n).map_err(value_error)?;
    Ok((*r.numer(), *r.denom()))
}

/// `(value, error_bound)`.
#[pyfunction]
#[pyo3(signature = (k, eps = analysis::DEFAULT_ZETA_EPS))]
fn zeta_minus_one(k: u32, eps: f64) -> PyResult<(f64, f64)> {
    let z = analysis::zeta_minus_one(k, eps).map_err(value_error)?;
    Ok((z.value, z.error_bound))
}

#[pyfunction]
fn zeta_row_sum(k: u32) -> PyResult<f64> {
    analysis::zeta_row_sum(k).map_err(value_error)
}

#[pyfunction]
fn column_sum_identity(m: u32) -> PyResult<(u64, u64)> {
    let r = analysis::column_sum_identity(m).map_err(value_error)?;
    Ok((*r.numer(), *r.denom()))
}

#[pyfunction]
fn max_exponent(x: u64) -> PyResult<u32> {
    analysis::max_exponent(x).map_err(value_error)
}

#[pyclass(name = "DensityReport", frozen, get_all)]
struct PyDensityReport {
    set: String,
    n: u64,
    count: u64,
    empirical: f64,
    target: f64,
    abs_error: f64,
    first_empty_column: Option<u32>,
}

impl From<DensityReport> for PyDensityReport {
    fn from(r: DensityReport) -> Self {
        Self {
            set: r.set.to_string(),
            n: r.n,
            count: r.count,
            empirical: r.empirical,
            target: r.target,
            abs_error: r.abs_error,
            first_empty_column: r.first_empty_column,
        }
    }
}

#[pymethods]
impl PyDensityReport {
    fn __repr__(&self) -> String {
        format!(
            "DensityReport(set={:?}, n={}, count={}, empirical={}, target={}, abs_error={})",
            self.set, self.n, self.count, self.empirical, self.target, self.abs_error
        )
    }
}

#[pyfunction]
fn empirical_density(set: &str, n: u64) -> PyResult<PyDensityReport> {
    let report = analysis::empirical_density(descriptor(set)?, n).map_err(value_error)?;
    Ok(report.into())
}

#[pyfunction]
fn powerfree_density(k: u32, n: u64) -> PyResult<PyDensityReport> {
    Ok(analysis::powerfree_density(k, n).map_err(value_error)?.into())
}

/// Runs the command line in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zeta-partition".to_string()).chain(args);
    let code = zeta_partition::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
fn zeta_partition_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyResidueClassSet>()?;
    m.add_class::<PyAssignment>()?;
    m.add_class::<PyDensityReport>()?;
    m.add_function(wrap_pyfunction!(factorial, m)?)?;
    m.add_function(wrap_pyfunction!(left_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(to_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(from_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(classify_b, m)?)?;
    m.add_function(wrap_pyfunction!(classify_a, m)?)?;
    m.add_function(wrap_pyfunction!(subclass_digits, m)?)?;
    m.add_function(wrap_pyfunction!(b_residues, m)?)?;
    m.add_function(wrap_pyfunction!(bmk_residues, m)?)?;
    m.add_function(wrap_pyfunction!(sequence, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_assign, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(missed_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(missed_set_check, m)?)?;
    m.add_function(wrap_pyfunction!(missed_density, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_minus_one, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_row_sum, m)?)?;
    m.add_function(wrap_pyfunction!(column_sum_identity, m)?)?;
    m.add_function(wrap_pyfunction!(max_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_density, m)?)?;
    m.add_function(wrap_pyfunction!(powerfree_density, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
