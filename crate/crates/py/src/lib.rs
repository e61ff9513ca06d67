//! Python bindings over the core crate. Patterns and inversion sequences
//! travel as digit strings (comma form above 9), permutations and raw words
//! as lists of ints; counts come back as Python ints of arbitrary size.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use invseq::equivalence::{self, Level};
use invseq::permgate::{self, Permutation};
use invseq::word::{ConsecutivePattern, InversionSequence};

fn err(e: invseq::Error) -> PyErr {
    match e {
        invseq::Error::Verification(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn pattern(s: &str) -> PyResult<ConsecutivePattern> {
    s.parse().map_err(err)
}

fn sequence(s: &str) -> PyResult<InversionSequence> {
    s.parse().map_err(err)
}

/// Order-isomorphic relabeling of a word onto 0, 1, ...
#[pyfunction]
fn reduce(word: Vec<usize>) -> PyResult<Vec<usize>> {
    invseq::word::reduce(&word).map_err(err)
}

/// Number of inversion sequences of length n avoiding the pattern.
#[pyfunction]
#[pyo3(signature = (p, n, method = "brute"))]
fn count_avoiders(p: &str, n: usize, method: &str) -> PyResult<BigUint> {
    let p = pattern(p)?;
    match method {
        "brute" => invseq::enumerate::brute_count_avoiders(&p, n).map_err(err),
        "recurrence" => {
            let table = invseq::recurrences::rec_table_len3(&p, n).map_err(err)?;
            Ok(table.total(n))
        }
        other => Err(PyValueError::new_err(format!(
            "method must be \"brute\" or \"recurrence\", got {other:?}"
        ))),
    }
}

/// Avoiders of length n ending in the letter k.
#[pyfunction]
fn count_refined(p: &str, n: usize, k: usize) -> PyResult<BigUint> {
    invseq::enumerate::brute_count_refined(&pattern(p)?, n, k).map_err(err)
}

/// Avoider counts for n = 1..n_max.
#[pyfunction]
fn count_sequence(p: &str, n_max: usize) -> PyResult<Vec<BigUint>> {
    let table = invseq::enumerate::count_table_brute(&pattern(p)?, n_max).map_err(err)?;
    Ok(table.totals_vec())
}

/// 1-based start positions of occurrences of p in e.
#[pyfunction]
fn occurrences(e: &str, p: &str) -> PyResult<Vec<usize>> {
    Ok(invseq::word::find_occurrences(&sequence(e)?, &pattern(p)?)
        .positions()
        .to_vec())
}

/// Inversion sequence of a permutation: e_i counts earlier larger entries.
#[pyfunction]
fn theta(perm: Vec<usize>) -> PyResult<Vec<usize>> {
    let pi = Permutation::new(perm).map_err(err)?;
    Ok(permgate::theta(&pi).entries().to_vec())
}

/// Inverse of theta, back to a one-line permutation.
#[pyfunction]
fn theta_inverse(e: Vec<usize>) -> PyResult<Vec<usize>> {
    let e = InversionSequence::new(e).map_err(err)?;
    Ok(permgate::theta_inverse(&e).values().to_vec())
}

/// Rewrite every occurrence of p into q and vice versa.
#[pyfunction]
fn switch_all(e: &str, p: &str, q: &str) -> PyResult<String> {
    equivalence::switch_all(&sequence(e)?, &pattern(p)?, &pattern(q)?)
        .map(|f| f.to_string())
        .map_err(err)
}

/// (p -> q, q -> p) changeability verdicts.
#[pyfunction]
fn changeable(p: &str, q: &str) -> PyResult<(bool, bool)> {
    let report = equivalence::is_changeable(&pattern(p)?, &pattern(q)?).map_err(err)?;
    Ok((report.changeable_forward, report.changeable_backward))
}

/// Equivalence classes of the given patterns, as sorted lists of strings.
#[pyfunction]
#[pyo3(signature = (patterns, n_max, level = "wilf"))]
fn classify(patterns: Vec<String>, n_max: usize, level: &str) -> PyResult<Vec<Vec<String>>> {
    let level: Level = level.parse().map_err(err)?;
    let patterns: PyResult<Vec<ConsecutivePattern>> =
        patterns.iter().map(|s| pattern(s)).collect();
    let partition = equivalence::classify(&patterns?, n_max, level).map_err(err)?;
    Ok(partition.classes)
}

/// All reduced patterns of the given length, lexicographically.
#[pyfunction]
fn all_patterns(length: usize) -> PyResult<Vec<String>> {
    let patterns = equivalence::enumerate_patterns(length).map_err(err)?;
    Ok(patterns.iter().map(|p| p.to_string()).collect())
}

#[pymodule]
fn invseq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(count_avoiders, m)?)?;
    m.add_function(wrap_pyfunction!(count_refined, m)?)?;
    m.add_function(wrap_pyfunction!(count_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(occurrences, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(theta_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(switch_all, m)?)?;
    m.add_function(wrap_pyfunction!(changeable, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(all_patterns, m)?)?;
    Ok(())
}
