//! Brute-force generation of `I_n` and `I_{n,k}`, avoider counting, and
//! occurrence-statistics tables. This module is the oracle every recurrence
//! and bijection is checked against.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{limit, usage, Result};
use crate::word::{reduce_small, ConsecutivePattern, InversionSequence, PositionSet};

/// Desk-scale ceiling for full enumeration (counting).
pub const DEFAULT_COUNT_LIMIT: usize = 12;
/// Desk-scale ceiling for position-set (`by_set`) profiles.
pub const DEFAULT_PROFILE_LIMIT: usize = 8;

pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Exact integer counts `|I_{n,k}(p)|` indexed by `(n, k)`, with per-`n`
/// totals. `totals[0] = 1` by convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pattern: String,
    method: String,
    rows: BTreeMap<(usize, usize), BigUint>,
    totals: BTreeMap<usize, BigUint>,
}

impl CountTable {
    pub fn new(pattern: impl Into<String>, method: impl Into<String>) -> Self {
        let mut totals = BTreeMap::new();
        totals.insert(0, BigUint::one());
        Self {
            pattern: pattern.into(),
            method: method.into(),
            rows: BTreeMap::new(),
            totals,
        }
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn set(&mut self, n: usize, k: usize, value: BigUint) {
        debug_assert!(k < n, "I_(n,k) requires k < n");
        self.rows.insert((n, k), value);
    }

    /// Cell `|I_{n,k}(p)|`; absent cells (including all `k >= n`) are zero.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows.get(&(n, k)).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Row total `|I_n(p)|`.
    pub fn total(&self, n: usize) -> BigUint {
        self.totals.get(&n).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn n_max(&self) -> usize {
        self.totals.keys().max().copied().unwrap_or(0)
    }

    /// Recompute `totals[n]` as the sum over `k` of the stored row cells,
    /// for every `n` that has cells.
    pub fn refresh_totals(&mut self) {
        let mut sums: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (&(n, _), v) in &self.rows {
            *sums.entry(n).or_insert_with(BigUint::zero) += v;
        }
        for (n, s) in sums {
            self.totals.insert(n, s);
        }
    }

    pub fn set_total(&mut self, n: usize, value: BigUint) {
        self.totals.insert(n, value);
    }

    /// CSV export with header `n,k,count`; metadata as `#` comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# pattern={} method={}\n",
            self.pattern, self.method
        ));
        out.push_str("n,k,count\n");
        for (&(n, k), v) in &self.rows {
            out.push_str(&format!("{n},{k},{v}\n"));
        }
        out
    }

    /// OEIS b-file export: one `n count` line per n, starting at `offset`.
    pub fn to_bfile(&self, offset: usize) -> String {
        let mut out = String::new();
        let n_max = self.n_max();
        for n in 1..=n_max {
            out.push_str(&format!("{} {}\n", n + offset - 1, self.total(n)));
        }
        out
    }

    /// Totals as a vector `[|I_1(p)|, .., |I_{n_max}(p)|]`.
    pub fn totals_vec(&self) -> Vec<BigUint> {
        (1..=self.n_max()).map(|n| self.total(n)).collect()
    }
}

fn check_limit(n: usize, cap: usize, what: &str) -> Result<()> {
    if n > cap {
        Err(limit(format!(
            "n = {n} exceeds the {what} limit {cap}; raise the limit explicitly if you mean it"
        )))
    } else {
        Ok(())
    }
}

/// Lexicographic iterator over all of `I_n` (`n!` sequences; `I_0` is the
/// singleton empty sequence).
pub struct Sequences {
    current: Option<Vec<usize>>,
}

impl Iterator for Sequences {
    type Item = InversionSequence;

    fn next(&mut self) -> Option<InversionSequence> {
        let cur = self.current.as_mut()?;
        let item = InversionSequence::new(cur.clone()).expect("generated sequences are valid");
        // advance the odometer: entry at 0-based index i ranges over 0..=i
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < i {
                cur[i] += 1;
                for v in cur[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
        Some(item)
    }
}

pub fn generate_all(n: usize) -> Result<Sequences> {
    generate_all_with_limit(n, DEFAULT_COUNT_LIMIT)
}

pub fn generate_all_with_limit(n: usize, cap: usize) -> Result<Sequences> {
    check_limit(n, cap, "enumeration")?;
    Ok(Sequences {
        current: Some(vec![0; n]),
    })
}

/// Serial visitor over all of `I_n`, reusing one buffer.
pub(crate) fn visit_all(n: usize, f: &mut impl FnMut(&[usize])) {
    let mut e = vec![0usize; n];
    loop {
        f(&e);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if e[i] < i {
                e[i] += 1;
                for v in e[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Visit every sequence in `I_n` extending the given prefix.
fn visit_with_prefix(n: usize, prefix: &[usize], f: &mut impl FnMut(&[usize])) {
    let m = prefix.len();
    debug_assert!(m <= n);
    let mut e = vec![0usize; n];
    e[..m].copy_from_slice(prefix);
    loop {
        f(&e);
        let mut i = n;
        loop {
            if i == m {
                return;
            }
            i -= 1;
            if e[i] < i {
                e[i] += 1;
                for v in e[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Partition `I_n` by a short prefix and fold the parts in parallel.
/// Partial results are merged in lexicographic prefix order, so the outcome
/// is identical to the serial fold regardless of schedule.
pub(crate) fn par_fold_sequences<T, F, B, M>(n: usize, make: F, body: B, merge: M) -> T
where
    T: Send,
    F: Fn() -> T + Sync,
    B: Fn(&mut T, &[usize]) + Sync,
    M: Fn(&mut T, T),
{
    let depth = n.min(3);
    let mut prefixes: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..depth {
        let mut next = Vec::new();
        for p in &prefixes {
            for v in 0..=i {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        prefixes = next;
    }
    let parts: Vec<T> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = make();
            visit_with_prefix(n, prefix, &mut |e| body(&mut acc, e));
            acc
        })
        .collect();
    let mut out = make();
    for part in parts {
        merge(&mut out, part);
    }
    out
}

/// Pruned depth-first fill of the whole refined table `|I_{n,k}(p)|` for
/// `1 <= n <= n_max`. A branch is cut as soon as the newest `r` entries form
/// `p`, so only avoiding prefixes are visited.
fn brute_table_with(p: &ConsecutivePattern, n_max: usize, parallel: bool) -> CountTable {
    let r = p.len();
    let pat = p.letters();
    let mut rows = vec![vec![0u128; n_max]; n_max + 1]; // rows[n][k]

    // subtree visitor: e holds a valid avoiding prefix of length `depth`
    fn dfs(
        e: &mut Vec<usize>,
        n_max: usize,
        pat: &[usize],
        buf: &mut [usize],
        rows: &mut [Vec<u128>],
    ) {
        let m = e.len();
        if m > 0 {
            rows[m][e[m - 1]] += 1;
        }
        if m == n_max {
            return;
        }
        for v in 0..=m {
            e.push(v);
            let ok = if e.len() >= pat.len() {
                reduce_small(&e[e.len() - pat.len()..], buf);
                buf != pat
            } else {
                true
            };
            if ok {
                dfs(e, n_max, pat, buf, rows);
            }
            e.pop();
        }
    }

    if !parallel || n_max < 4 {
        let mut e = Vec::with_capacity(n_max);
        let mut buf = vec![0usize; r];
        dfs(&mut e, n_max, pat, &mut buf, &mut rows);
    } else {
        // rows 1 and 2 are filled once, serially, then each depth-3 subtree
        // records only its own cells
        {
            let mut e = Vec::with_capacity(2);
            let mut buf = vec![0usize; r];
            dfs(&mut e, n_max.min(2), pat, &mut buf, &mut rows);
        }
        let mut starts = Vec::new();
        for v2 in 0..2usize {
            for v3 in 0..3usize {
                starts.push(vec![0, v2, v3]);
            }
        }
        let partials: Vec<Vec<Vec<u128>>> = starts
            .par_iter()
            .map(|prefix| {
                let mut local = vec![vec![0u128; n_max]; n_max + 1];
                let mut buf = vec![0usize; r];
                // check the prefix itself is avoiding; count its cells locally
                let mut e: Vec<usize> = Vec::with_capacity(n_max);
                let mut alive = true;
                for &v in prefix {
                    e.push(v);
                    if e.len() >= r {
                        reduce_small(&e[e.len() - r..], &mut buf);
                        if buf == pat {
                            alive = false;
                            break;
                        }
                    }
                }
                if alive {
                    local[e.len()][e[e.len() - 1]] += 1;
                    if e.len() < n_max {
                        let keep = e.len();
                        for v in 0..=keep {
                            e.push(v);
                            let ok = if e.len() >= r {
                                reduce_small(&e[e.len() - r..], &mut buf);
                                buf != pat
                            } else {
                                true
                            };
                            if ok {
                                dfs(&mut e, n_max, pat, &mut buf, &mut local);
                            }
                            e.pop();
                        }
                    }
                }
                local
            })
            .collect();
        for part in partials {
            for (n, row) in part.into_iter().enumerate() {
                for (k, v) in row.into_iter().enumerate() {
                    rows[n][k] += v;
                }
            }
        }
    }

    let mut table = CountTable::new(p.to_string(), "brute");
    for n in 1..=n_max {
        for (k, &v) in rows[n].iter().enumerate().take(n) {
            if v > 0 {
                table.set(n, k, BigUint::from(v));
            }
        }
    }
    table.refresh_totals();
    for n in 1..=n_max {
        table.totals.entry(n).or_insert_with(BigUint::zero);
    }
    table
}

/// Full refined count table for `p`, by pruned brute-force search.
pub fn count_table_brute(p: &ConsecutivePattern, n_max: usize) -> Result<CountTable> {
    count_table_brute_with_limit(p, n_max, DEFAULT_COUNT_LIMIT)
}

pub fn count_table_brute_with_limit(
    p: &ConsecutivePattern,
    n_max: usize,
    cap: usize,
) -> Result<CountTable> {
    check_limit(n_max, cap, "counting")?;
    Ok(brute_table_with(p, n_max, false))
}

/// Parallel variant of [`count_table_brute`]; bit-identical output.
pub fn count_table_brute_par(p: &ConsecutivePattern, n_max: usize) -> Result<CountTable> {
    check_limit(n_max, DEFAULT_COUNT_LIMIT, "counting")?;
    Ok(brute_table_with(p, n_max, true))
}

/// `|I_n(p)| = |{e in I_n : e avoids p}|`.
pub fn brute_count_avoiders(p: &ConsecutivePattern, n: usize) -> Result<BigUint> {
    Ok(count_table_brute(p, n)?.total(n))
}

/// `|I_{n,k}(p)|`; zero whenever `k >= n`.
pub fn brute_count_refined(p: &ConsecutivePattern, n: usize, k: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(usage("refined counts need n >= 1"));
    }
    if k >= n {
        return Ok(BigUint::zero());
    }
    Ok(count_table_brute(p, n)?.get(n, k))
}

/// Occurrence statistics of `p` over all of `I_n`: `by_count[m]` counts
/// sequences with exactly `m` occurrences, `by_set` refines by the exact
/// position set `Em(p, e)` (keys are canonical comma-joined position lists).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceProfile {
    pub pattern: ConsecutivePattern,
    pub n: usize,
    pub by_count: BTreeMap<usize, BigUint>,
    pub by_set: BTreeMap<String, BigUint>,
}

pub fn occurrence_profile(p: &ConsecutivePattern, n: usize) -> Result<OccurrenceProfile> {
    occurrence_profile_with_limit(p, n, DEFAULT_PROFILE_LIMIT)
}

pub fn occurrence_profile_with_limit(
    p: &ConsecutivePattern,
    n: usize,
    cap: usize,
) -> Result<OccurrenceProfile> {
    check_limit(n, cap, "profile")?;
    let r = p.len();
    let pat = p.letters().to_vec();

    type Acc = (BTreeMap<usize, u128>, BTreeMap<Vec<usize>, u128>);
    let (by_count_raw, by_set_raw) = par_fold_sequences(
        n,
        || (BTreeMap::new(), BTreeMap::new()) as Acc,
        |acc: &mut Acc, e: &[usize]| {
            let mut positions = Vec::new();
            if r <= e.len() {
                let mut buf = vec![0usize; r];
                for i in 0..=(e.len() - r) {
                    reduce_small(&e[i..i + r], &mut buf);
                    if buf == pat {
                        positions.push(i + 1);
                    }
                }
            }
            *acc.0.entry(positions.len()).or_insert(0) += 1;
            *acc.1.entry(positions).or_insert(0) += 1;
        },
        |a: &mut Acc, b: Acc| {
            for (k, v) in b.0 {
                *a.0.entry(k).or_insert(0) += v;
            }
            for (k, v) in b.1 {
                *a.1.entry(k).or_insert(0) += v;
            }
        },
    );

    let by_count = by_count_raw
        .into_iter()
        .map(|(m, c)| (m, BigUint::from(c)))
        .collect();
    let by_set = by_set_raw
        .into_iter()
        .map(|(set, c)| {
            let key = set
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",");
            (key, BigUint::from(c))
        })
        .collect();
    Ok(OccurrenceProfile {
        pattern: p.clone(),
        n,
        by_count,
        by_set,
    })
}

/// `Em(p, e)` as a [`PositionSet`] (convenience re-export used by callers
/// that already hold an [`InversionSequence`]).
pub fn occurrence_set(e: &InversionSequence, p: &ConsecutivePattern) -> PositionSet {
    crate::word::find_occurrences(e, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> ConsecutivePattern {
        s.parse().unwrap()
    }

    #[test]
    fn generate_all_small() {
        let one: Vec<_> = generate_all(1).unwrap().collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "0");

        let three: Vec<_> = generate_all(3).unwrap().collect();
        assert_eq!(three.len(), 6);

        let four: Vec<_> = generate_all(4).unwrap().collect();
        assert_eq!(four.len(), 24);
        assert_eq!(four.first().unwrap().to_string(), "0000");
        assert_eq!(four.last().unwrap().to_string(), "0123");
    }

    #[test]
    fn generate_all_is_exactly_i_n() {
        for n in 0..=6 {
            let all: Vec<_> = generate_all(n).unwrap().collect();
            assert_eq!(BigUint::from(all.len()), factorial(n));
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len(), "duplicates at n={n}");
            assert_eq!(sorted, all, "not lexicographic at n={n}");
        }
    }

    #[test]
    fn limit_is_enforced() {
        assert!(generate_all(13).is_err());
        assert!(generate_all_with_limit(13, 13).is_ok());
    }

    #[test]
    fn avoider_counts_examples() {
        assert_eq!(brute_count_avoiders(&pat("001"), 3).unwrap(), 4u32.into());
        assert_eq!(
            brute_count_avoiders(&pat("012"), 8).unwrap(),
            13358u32.into()
        );
        // r > n: nothing to avoid
        assert_eq!(brute_count_avoiders(&pat("0123"), 3).unwrap(), 6u32.into());
    }

    #[test]
    fn refined_counts_examples() {
        let p = pat("001");
        assert_eq!(brute_count_refined(&p, 3, 0).unwrap(), 2u32.into());
        assert_eq!(brute_count_refined(&p, 3, 1).unwrap(), 1u32.into());
        assert_eq!(brute_count_refined(&p, 3, 2).unwrap(), 1u32.into());
        assert_eq!(brute_count_refined(&p, 3, 5).unwrap(), BigUint::zero());
    }

    #[test]
    fn refined_102_at_4_0_matches_independent_oracle() {
        // independent oracle: nested loops over all 24 members of I_4
        let p = pat("102");
        let mut expected = 0u32;
        for e2 in 0..2usize {
            for e3 in 0..3usize {
                for e4 in 0..4usize {
                    let e = [0, e2, e3, e4];
                    if e4 != 0 {
                        continue;
                    }
                    let mut ok = true;
                    for w in e.windows(3) {
                        // 102 window: mid < first < last
                        if w[1] < w[0] && w[0] < w[2] {
                            ok = false;
                        }
                    }
                    if ok {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(expected, 6); // frozen from the oracle above
        assert_eq!(
            brute_count_refined(&p, 4, 0).unwrap(),
            BigUint::from(expected)
        );
    }

    #[test]
    fn refined_sums_match_totals() {
        for pstr in ["000", "001", "021", "120", "110"] {
            let p = pat(pstr);
            for n in 1..=6 {
                let table = count_table_brute(&p, n).unwrap();
                let sum: BigUint = (0..n).map(|k| table.get(n, k)).sum();
                assert_eq!(sum, table.total(n), "pattern {pstr}, n={n}");
            }
        }
    }

    #[test]
    fn profile_000_n3() {
        let prof = occurrence_profile(&pat("000"), 3).unwrap();
        assert_eq!(prof.by_count.get(&0), Some(&BigUint::from(5u32)));
        assert_eq!(prof.by_count.get(&1), Some(&BigUint::from(1u32)));
        let total: BigUint = prof.by_count.values().sum();
        assert_eq!(total, factorial(3));
    }

    #[test]
    fn profile_consistency_with_avoiders() {
        for pstr in ["012", "100", "101"] {
            let p = pat(pstr);
            for n in 1..=6 {
                let prof = occurrence_profile(&p, n).unwrap();
                let zero = prof
                    .by_count
                    .get(&0)
                    .cloned()
                    .unwrap_or_else(BigUint::zero);
                assert_eq!(zero, brute_count_avoiders(&p, n).unwrap());
                let total: BigUint = prof.by_count.values().sum();
                assert_eq!(total, factorial(n));
                let set_total: BigUint = prof.by_set.values().sum();
                assert_eq!(set_total, factorial(n));
            }
        }
    }

    #[test]
    fn super_strong_equivalence_of_100_and_110_at_n7() {
        let a = occurrence_profile(&pat("100"), 7).unwrap();
        let b = occurrence_profile(&pat("110"), 7).unwrap();
        assert_eq!(a.by_set, b.by_set);
    }

    #[test]
    fn parallel_and_serial_tables_agree() {
        for pstr in ["012", "000", "110"] {
            let p = pat(pstr);
            let serial = count_table_brute(&p, 8).unwrap();
            let par = count_table_brute_par(&p, 8).unwrap();
            assert_eq!(serial, par);
        }
    }

    #[test]
    fn bfile_and_csv_shapes() {
        let t = count_table_brute(&pat("001"), 4).unwrap();
        let b = t.to_bfile(1);
        assert_eq!(b.lines().count(), 4);
        assert!(b.starts_with("1 1\n2 2\n3 4\n"));
        let csv = t.to_csv();
        assert!(csv.contains("n,k,count"));
        assert!(csv.contains("# pattern=001 method=brute"));
    }
}
