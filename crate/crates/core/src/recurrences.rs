//! Closed recurrence evaluators for every length-3 pattern, the `0^r`
//! family, and the derangement identity. These count far beyond brute-force
//! range; the brute-force module is their oracle at small `n`.
//!
//! Conventions used throughout: `|I_0(p)| = 1` and `|I_{n,j}(p)| = 0` for
//! `n < 0` or `j >= n`. Empty sums evaluate to 0. Every table is seeded from
//! brute-force values for `n <= 3`, which agrees with each recurrence's own
//! stated initial conditions.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::enumerate::{count_table_brute, factorial, CountTable};
use crate::error::{limit, usage, Result};
use crate::word::ConsecutivePattern;

/// Default ceiling for recurrence tables; arbitrary-precision arithmetic
/// keeps this cheap, it only bounds memory at O(n^2) cells.
pub const REC_NMAX_CEILING: usize = 200;

/// Derangement numbers `d_0 .. d_n` via `d_n = (n-1)(d_{n-1} + d_{n-2})`.
pub fn derangements_up_to(n: usize) -> Vec<BigUint> {
    let mut d = Vec::with_capacity(n + 1);
    d.push(BigUint::one()); // d_0
    if n >= 1 {
        d.push(BigUint::zero()); // d_1
    }
    for m in 2..=n {
        let v = BigUint::from(m - 1) * (&d[m - 1] + &d[m - 2]);
        d.push(v);
    }
    d.truncate(n + 1);
    d
}

/// `|I_n(000)|` by the two-term recurrence
/// `(n-1)|I_{n-1}(000)| + (n-2)|I_{n-2}(000)|` with initial terms 1, 2.
pub fn rec_count_000(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let mut prev2 = BigUint::one(); // |I_1|
    let mut prev1 = BigUint::from(2u32); // |I_2|
    match n {
        1 => return prev2,
        2 => return prev1,
        _ => {}
    }
    for m in 3..=n {
        let cur = BigUint::from(m - 1) * &prev1 + BigUint::from(m - 2) * &prev2;
        prev2 = std::mem::replace(&mut prev1, cur);
    }
    prev1
}

/// `|I_n(0^r)|` by the (r-1)-term recurrence
/// `sum_{j=1}^{r-1} (n-j) |I_{n-j}(0^r)|`, with `|I_n(0^r)| = n!` for n < r.
pub fn rec_count_zeros(r: usize, n: usize) -> Result<BigUint> {
    if r < 2 {
        return Err(usage("the 0^r recurrence needs r >= 2"));
    }
    let mut totals: Vec<BigUint> = Vec::with_capacity(n + 1);
    for m in 0..=n.min(r - 1) {
        totals.push(factorial(m));
    }
    for m in r..=n {
        let mut acc = BigUint::zero();
        for j in 1..r {
            acc += BigUint::from(m - j) * &totals[m - j];
        }
        totals.push(acc);
    }
    Ok(totals[n].clone())
}

/// Checks `n * |I_n(000)| = (n+1)! - d_{n+1}`.
pub fn derangement_identity_check(n: usize) -> bool {
    let d = derangements_up_to(n + 1);
    let lhs = BigUint::from(n) * rec_count_000(n);
    let rhs = factorial(n + 1) - &d[n + 1];
    lhs == rhs
}

fn check_ceiling(n_max: usize) -> Result<()> {
    if n_max > REC_NMAX_CEILING {
        Err(limit(format!(
            "recurrence n_max = {n_max} exceeds the ceiling {REC_NMAX_CEILING}"
        )))
    } else {
        Ok(())
    }
}

/// The 13 length-3 patterns, in lexicographic order.
pub fn length3_patterns() -> Vec<ConsecutivePattern> {
    [
        "000", "001", "010", "011", "012", "021", "100", "101", "102", "110", "120", "201", "210",
    ]
    .iter()
    .map(|s| s.parse().expect("valid pattern"))
    .collect()
}

/// Working state: rows[n][k] with rows[n].len() == n, plus running totals.
struct Table {
    rows: Vec<Vec<BigUint>>,
    totals: Vec<BigUint>,
}

impl Table {
    fn seeded(p: &ConsecutivePattern, n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = (0..=n_max).map(|n| vec![BigUint::zero(); n]).collect();
        let mut totals = vec![BigUint::zero(); n_max + 1];
        totals[0] = BigUint::one();
        let seed = count_table_brute(p, 3.min(n_max)).expect("tiny brute table");
        for n in 1..=3.min(n_max) {
            for k in 0..n {
                rows[n][k] = seed.get(n, k);
            }
            totals[n] = seed.total(n);
        }
        Self { rows, totals }
    }

    fn finish_row(&mut self, n: usize) {
        self.totals[n] = self.rows[n].iter().sum();
    }

    fn into_count_table(self, pattern: &str, method: &str) -> CountTable {
        let mut out = CountTable::new(pattern, method);
        for (n, row) in self.rows.iter().enumerate().skip(1) {
            for (k, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.set(n, k, v.clone());
                }
            }
            out.set_total(n, self.totals[n].clone());
        }
        out
    }
}

fn sub_checked(total: &BigUint, sub: BigUint, ctx: &str) -> BigUint {
    assert!(
        sub <= *total,
        "recurrence underflow in {ctx}: {sub} > {total}"
    );
    total - sub
}

/// Full refined table `|I_{n,k}(p)|` for any of the 13 length-3 patterns,
/// computed by the pattern's own recurrence.
pub fn rec_table_len3(p: &ConsecutivePattern, n_max: usize) -> Result<CountTable> {
    check_ceiling(n_max)?;
    if n_max == 0 {
        return Err(usage("n_max must be >= 1"));
    }
    let letters = p.letters().to_vec();
    let known = length3_patterns();
    if !known.contains(p) {
        return Err(usage(format!(
            "no length-3 recurrence for pattern {p}; recurrences exist only for the 13 length-3 patterns"
        )));
    }

    let mut t = Table::seeded(p, n_max);

    // auxiliary for 000: d_aux[k] = #{e in I_m(000) : e_{m-1} = e_m = k},
    // carried from row to row
    let mut d_aux: Vec<BigUint> = Vec::new();
    if letters == [0, 0, 0] {
        let m = 3.min(n_max);
        d_aux = vec![BigUint::zero(); n_max];
        // seed by direct scan of I_m
        crate::enumerate::visit_all(m, &mut |e| {
            let avoid = !e.windows(3).any(|w| w[0] == w[1] && w[1] == w[2]);
            if avoid && m >= 2 && e[m - 2] == e[m - 1] {
                d_aux[e[m - 1]] += BigUint::one();
            }
        });
    }

    for n in 4..=n_max {
        let prev_total = t.totals[n - 1].clone();
        match letters.as_slice() {
            [0, 0, 0] => {
                // |I_{n,k}| = |I_{n-1}| - D_{n-1,k}, where D_{m,k} counts
                // e in I_m(000) ending with the double letter k;
                // D_{m,k} = |I_{m-1,k}| - D_{m-1,k}
                let mut new_rows = vec![BigUint::zero(); n];
                for (k, cell) in new_rows.iter_mut().enumerate() {
                    let d = if k < d_aux.len() {
                        d_aux[k].clone()
                    } else {
                        BigUint::zero()
                    };
                    *cell = sub_checked(&prev_total, d, "000");
                }
                let mut new_d = vec![BigUint::zero(); n_max];
                for k in 0..t.rows[n - 1].len() {
                    new_d[k] = sub_checked(&t.rows[n - 1][k], d_aux[k].clone(), "000 aux");
                }
                d_aux = new_d;
                t.rows[n] = new_rows;
            }
            [0, 0, 1] | [0, 1, 1] => {
                let top_case = letters == [0, 1, 1];
                let prefix = prefix_sums(&t.rows[n - 2]);
                for k in 0..n {
                    t.rows[n][k] = if top_case && k == n - 1 {
                        prev_total.clone()
                    } else {
                        sub_checked(&prev_total, prefix_at(&prefix, k), "001/011")
                    };
                }
            }
            [0, 1, 0] => {
                for k in 0..n {
                    let sub = if k + 2 < n && k < t.rows[n - 2].len() {
                        BigUint::from(n - 2 - k) * &t.rows[n - 2][k]
                    } else {
                        BigUint::zero()
                    };
                    t.rows[n][k] = sub_checked(&prev_total, sub, "010");
                }
            }
            [1, 0, 1] => {
                for k in 0..n {
                    let sub = if k < t.rows[n - 2].len() {
                        BigUint::from(k) * &t.rows[n - 2][k]
                    } else {
                        BigUint::zero()
                    };
                    t.rows[n][k] = sub_checked(&prev_total, sub, "101");
                }
            }
            [1, 0, 0] | [1, 1, 0] => {
                let suffix = suffix_sums(&t.rows[n - 2]);
                for k in 0..n {
                    t.rows[n][k] =
                        sub_checked(&prev_total, suffix_from(&suffix, k + 1), "100/110");
                }
            }
            [0, 2, 1] => {
                let prefix = prefix_sums(&t.rows[n - 2]);
                for k in 0..n {
                    t.rows[n][k] = if k == n - 1 {
                        prev_total.clone()
                    } else {
                        let coeff = BigUint::from(n - 2 - k);
                        sub_checked(&prev_total, coeff * prefix_at(&prefix, k), "021")
                    };
                }
            }
            [1, 0, 2] => {
                // forbidden ending: e_{n-1} < e_{n-2} < k, so the subtracted
                // sum runs over j = e_{n-2} with 1 <= j < k only
                let mut sub = BigUint::zero();
                for k in 0..n {
                    if k >= 2 && k - 1 < t.rows[n - 2].len() {
                        sub += BigUint::from(k - 1) * &t.rows[n - 2][k - 1];
                    }
                    t.rows[n][k] = sub_checked(&prev_total, sub.clone(), "102");
                }
            }
            [1, 2, 0] => {
                for k in 0..n {
                    let mut sub = BigUint::zero();
                    for (j, v) in t.rows[n - 2].iter().enumerate().skip(k + 1) {
                        sub += BigUint::from(n - 2 - j) * v;
                    }
                    t.rows[n][k] = sub_checked(&prev_total, sub, "120");
                }
            }
            [2, 0, 1] => {
                let suffix = suffix_sums(&t.rows[n - 2]);
                for k in 0..n {
                    let sub = BigUint::from(k) * suffix_from(&suffix, k + 1);
                    t.rows[n][k] = sub_checked(&prev_total, sub, "201");
                }
            }
            [0, 1, 2] => {
                // triple sum over l, j, i with cached partial sums:
                // S(j) = sum_{i >= j} |I_{n-3,i}|, G(l) = sum_{j < l} S(j)
                let s = suffix_sums(&t.rows[n - 3]);
                let mut g = vec![BigUint::zero(); n]; // g[l] = sum_{j=0}^{l-1} S(j)
                for l in 1..n {
                    g[l] = &g[l - 1] + suffix_from(&s, l - 1);
                }
                for k in 0..n {
                    let mut sub = BigUint::zero();
                    for gl in g.iter().take(k).skip(1) {
                        sub += gl;
                    }
                    t.rows[n][k] = sub_checked(&prev_total, sub, "012");
                }
            }
            [2, 1, 0] => {
                // triple sum over l, j, i with cached partial sums:
                // P(j) = sum_{i <= j} |I_{n-3,i}|, Q(l) = sum_{j=l+1}^{n-3} P(j)
                let p_pref = prefix_sums(&t.rows[n - 3]);
                let upper = n.saturating_sub(3); // j <= n-3
                let mut q = vec![BigUint::zero(); n + 1];
                for l in (0..upper).rev() {
                    q[l] = &q[l + 1] + prefix_at(&p_pref, l + 2); // P(l+1) = prefix through index l+1
                }
                for k in 0..n {
                    let mut sub = BigUint::zero();
                    if n >= 4 {
                        for l in (k + 1)..=(n - 4) {
                            sub += &q[l];
                        }
                    }
                    t.rows[n][k] = sub_checked(&prev_total, sub, "210");
                }
            }
            _ => unreachable!("pattern membership checked above"),
        }
        t.finish_row(n);
    }

    Ok(t.into_count_table(&p.to_string(), "recurrence"))
}

/// prefix[j] = sum of row[0..j]
fn prefix_sums(row: &[BigUint]) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(row.len() + 1);
    out.push(BigUint::zero());
    for v in row {
        let last = out.last().expect("non-empty").clone();
        out.push(last + v);
    }
    out
}

/// sum of row[0..j], clamped
fn prefix_at(prefix: &[BigUint], j: usize) -> BigUint {
    prefix[j.min(prefix.len() - 1)].clone()
}

/// suffix[j] = sum of row[j..]
fn suffix_sums(row: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); row.len() + 1];
    for j in (0..row.len()).rev() {
        out[j] = &out[j + 1] + &row[j];
    }
    out
}

fn suffix_from(suffix: &[BigUint], j: usize) -> BigUint {
    suffix[j.min(suffix.len() - 1)].clone()
}

/// Collapsed double-sum form of the 012 recurrence; same table as
/// `rec_table_len3(012, ..)`, asymptotically cheaper per cell.
pub fn rec_table_012_fast(n_max: usize) -> Result<CountTable> {
    check_ceiling(n_max)?;
    if n_max == 0 {
        return Err(usage("n_max must be >= 1"));
    }
    let p: ConsecutivePattern = "012".parse().expect("valid");
    let mut t = Table::seeded(&p, n_max);
    for n in 4..=n_max {
        let prev_total = t.totals[n - 1].clone();
        let suffix = suffix_sums(&t.rows[n - 3]);
        for k in 0..n {
            let mut sub = BigUint::zero();
            if k >= 3 {
                for i in 0..=(k - 3) {
                    if i >= t.rows[n - 3].len() {
                        break;
                    }
                    // (i+1) * (k - 1 - i/2), kept integral as (i+1)(2k-2-i)/2
                    let coeff = BigUint::from((i + 1) * (2 * k - 2 - i)) / BigUint::from(2u32);
                    sub += coeff * &t.rows[n - 3][i];
                }
            }
            if k >= 2 {
                let tail = suffix_from(&suffix, k - 2);
                sub += BigUint::from(k * (k - 1) / 2) * tail;
            }
            t.rows[n][k] = sub_checked(&prev_total, sub, "012 fast");
        }
        t.finish_row(n);
    }
    Ok(t.into_count_table("012", "fast"))
}

/// Collapsed form of the 210 recurrence: `|I_{n,k}| = |I_{n-1}|` whenever
/// `n <= 4` or `k > n-5`, and a double-sum correction otherwise.
pub fn rec_table_210_fast(n_max: usize) -> Result<CountTable> {
    check_ceiling(n_max)?;
    if n_max == 0 {
        return Err(usage("n_max must be >= 1"));
    }
    let p: ConsecutivePattern = "210".parse().expect("valid");
    let mut t = Table::seeded(&p, n_max);
    for n in 4..=n_max {
        let prev_total = t.totals[n - 1].clone();
        let prefix = prefix_sums(&t.rows[n - 3]);
        for k in 0..n {
            if n <= 4 || k + 5 > n {
                t.rows[n][k] = prev_total.clone();
                continue;
            }
            // 0 <= k <= n-5
            let mut sub = BigUint::from((n - k - 4) * (n - k - 3)) * prefix_at(&prefix, k + 3);
            for i in (k + 3)..=(n - 4) {
                if i >= t.rows[n - 3].len() {
                    break;
                }
                sub += BigUint::from((n - i - 2) * (n + i - 2 * k - 5)) * &t.rows[n - 3][i];
            }
            sub /= BigUint::from(2u32);
            t.rows[n][k] = sub_checked(&prev_total, sub, "210 fast");
        }
        t.finish_row(n);
    }
    Ok(t.into_count_table("210", "fast"))
}
