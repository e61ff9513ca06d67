//! The bijection between permutations and inversion sequences, vincular
//! pattern matching in permutations, and numerical verification of the
//! pattern-transport correspondences.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{limit, usage, Result};
use crate::word::{ConsecutivePattern, InversionSequence};

/// An arrangement of `{1, .., n}`, 1-based positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(usage(format!("not a permutation of 1..{n}: {values:?}")));
            }
            seen[v] = true;
        }
        Ok(Self { values })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            values: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// 1-based access.
    pub fn value(&self, i: usize) -> usize {
        self.values[i - 1]
    }
}

/// `theta(pi)_i = |{j < i : pi_j > pi_i}|`, the inversion-sequence encoding.
pub fn theta(pi: &Permutation) -> InversionSequence {
    let v = pi.values();
    let entries: Vec<usize> = (0..v.len())
        .map(|i| v[..i].iter().filter(|&&x| x > v[i]).count())
        .collect();
    InversionSequence::new(entries).expect("theta output is always an inversion sequence")
}

/// Inverse of [`theta`]: among the values occupying positions `1..=i`,
/// `pi_i` is the `(e_i + 1)`-th largest, so rebuild from the right.
pub fn theta_inverse(e: &InversionSequence) -> Permutation {
    let n = e.len();
    let mut available: Vec<usize> = (1..=n).collect();
    let mut values = vec![0usize; n];
    for i in (0..n).rev() {
        let rank_from_top = e.entries()[i]; // e_i values above it among positions <= i
        let idx = available.len() - 1 - rank_from_top;
        values[i] = available.remove(idx);
    }
    Permutation { values }
}

/// `(pi^RC)_i = n + 1 - pi_{n+1-i}`.
pub fn reverse_complement(pi: &Permutation) -> Permutation {
    let n = pi.len();
    let values = (1..=n).map(|i| n + 1 - pi.value(n + 1 - i)).collect();
    Permutation { values }
}

/// A permutation pattern with adjacency bonds: `bonds` holds the 1-based
/// indices `i` for which positions `i` and `i+1` must be adjacent in an
/// occurrence. A fully-bonded pattern is a consecutive pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VincularPattern {
    word: Vec<usize>,
    bonds: Vec<usize>,
}

impl VincularPattern {
    pub fn new(word: Vec<usize>, mut bonds: Vec<usize>) -> Result<Self> {
        let s = word.len();
        Permutation::new(word.clone())
            .map_err(|_| usage(format!("vincular word must be a permutation of 1..{s}")))?;
        bonds.sort_unstable();
        bonds.dedup();
        if bonds.iter().any(|&b| b == 0 || b >= s) {
            return Err(usage("bonds must lie in 1..pattern length"));
        }
        Ok(Self { word, bonds })
    }

    /// All `s - 1` bonds set: the consecutive permutation pattern.
    pub fn consecutive(word: Vec<usize>) -> Result<Self> {
        let s = word.len();
        Self::new(word, (1..s).collect())
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn bonds(&self) -> &[usize] {
        &self.bonds
    }

    /// The descending consecutive pattern `(r+1) r .. 1`.
    pub fn descending_run(len: usize) -> Result<Self> {
        Self::consecutive((1..=len).rev().collect())
    }
}

/// True iff some index choice order-isomorphic to `vp.word` satisfies all
/// adjacency bonds. Bonded blocks are anchored first via the backtracking
/// order itself: positions are chosen left to right, and a bond forces the
/// next position to be adjacent.
pub fn contains_vincular(pi: &Permutation, vp: &VincularPattern) -> bool {
    let v = pi.values();
    let w = vp.word();
    let s = w.len();
    if s > v.len() {
        return false;
    }

    fn search(
        v: &[usize],
        w: &[usize],
        bonds: &[usize],
        chosen: &mut Vec<usize>, // chosen positions (0-based)
    ) -> bool {
        let t = chosen.len();
        if t == w.len() {
            return true;
        }
        let (lo, hi) = if t == 0 {
            (0, v.len())
        } else {
            let prev = chosen[t - 1];
            if bonds.contains(&t) {
                // bond between pattern positions t and t+1 (1-based)
                (prev + 1, (prev + 2).min(v.len()))
            } else {
                (prev + 1, v.len())
            }
        };
        for cand in lo..hi {
            // enough room for the rest
            if v.len() - cand < w.len() - t {
                break;
            }
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, &cj)| (v[cj] < v[cand]) == (w[j] < w[t]));
            if ok {
                chosen.push(cand);
                if search(v, w, bonds, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    search(v, w, vp.bonds(), &mut Vec::new())
}

/// Iterate over all of `S_n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    (1..=n)
        .permutations(n)
        .map(|values| Permutation { values })
}

/// `|S_n(vp)|` by exhaustive scan.
pub fn count_avoiders_sn(vp: &VincularPattern, n: usize) -> Result<u64> {
    if n > 9 {
        return Err(limit(format!("S_{n} scan refused (n > 9)")));
    }
    Ok(all_permutations(n)
        .filter(|pi| !contains_vincular(pi, vp))
        .count() as u64)
}

/// Descents of `pi` equal ascents of `theta(pi)`, position by position.
pub fn verify_descent_lemma(n: usize) -> Result<bool> {
    if n > 8 {
        return Err(limit("descent lemma check limited to n <= 8".to_string()));
    }
    for pi in all_permutations(n) {
        let e = theta(&pi);
        for i in 1..n {
            let descent = pi.value(i) > pi.value(i + 1);
            let ascent = e.entry(i) < e.entry(i + 1);
            if descent != ascent {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One verified equality `lhs = rhs` for a named claim at a given `n`.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub n: usize,
    pub lhs: u64,
    pub rhs: u64,
    pub ok: bool,
}

impl ClaimRecord {
    fn new(claim: impl Into<String>, n: usize, lhs: u64, rhs: u64) -> Self {
        Self {
            claim: claim.into(),
            n,
            lhs,
            rhs,
            ok: lhs == rhs,
        }
    }
}

fn big_to_u64(v: num_bigint::BigUint) -> u64 {
    use num_traits::ToPrimitive;
    v.to_u64().expect("count fits in u64 at desk scale")
}

/// Check every pattern-transport equality at `n <= n_max`:
/// increasing runs against descending runs, `120` against `3-214` and
/// `143-2`, `021` against `2-413` and `132-4`, and `0123` against `4321`.
pub fn verify_theta_correspondences(n_max: usize) -> Result<Vec<ClaimRecord>> {
    if n_max > 8 {
        return Err(limit("correspondence scan limited to n_max <= 8".to_string()));
    }
    use crate::enumerate::brute_count_avoiders;

    let mut records = Vec::new();
    for n in 1..=n_max {
        // |I_n(01..r)| = |S_n((r+1)r..1)| for r = 2, 3
        for r in 2..=3usize {
            let p = ConsecutivePattern::new((0..=r).collect())?;
            let vp = VincularPattern::descending_run(r + 1)?;
            let lhs = big_to_u64(brute_count_avoiders(&p, n)?);
            let rhs = count_avoiders_sn(&vp, n)?;
            records.push(ClaimRecord::new(
                format!("|I_n(01..{r})| = |S_n({}..1)|", r + 1),
                n,
                lhs,
                rhs,
            ));
        }
        // |I_n(120)| = |S_n(3-214)| = |S_n(143-2)|
        let i120 = big_to_u64(brute_count_avoiders(&"120".parse()?, n)?);
        let s3214 = count_avoiders_sn(&VincularPattern::new(vec![3, 2, 1, 4], vec![2, 3])?, n)?;
        let s1432 = count_avoiders_sn(&VincularPattern::new(vec![1, 4, 3, 2], vec![1, 2])?, n)?;
        records.push(ClaimRecord::new("|I_n(120)| = |S_n(3-214)|", n, i120, s3214));
        records.push(ClaimRecord::new("|S_n(3-214)| = |S_n(143-2)|", n, s3214, s1432));
        // |I_n(021)| = |S_n(2-413)| = |S_n(132-4)|
        let i021 = big_to_u64(brute_count_avoiders(&"021".parse()?, n)?);
        let s2413 = count_avoiders_sn(&VincularPattern::new(vec![2, 4, 1, 3], vec![2, 3])?, n)?;
        let s1324 = count_avoiders_sn(&VincularPattern::new(vec![1, 3, 2, 4], vec![1, 2])?, n)?;
        records.push(ClaimRecord::new("|I_n(021)| = |S_n(2-413)|", n, i021, s2413));
        records.push(ClaimRecord::new("|S_n(2-413)| = |S_n(132-4)|", n, s2413, s1324));
        // |I_n(0123)| = |S_n(4321)|
        let i0123 = big_to_u64(brute_count_avoiders(&"0123".parse()?, n)?);
        let s4321 = count_avoiders_sn(&VincularPattern::descending_run(4)?, n)?;
        records.push(ClaimRecord::new("|I_n(0123)| = |S_n(4321)|", n, i0123, s4321));
    }
    Ok(records)
}
