//! Fundamental objects: inversion sequences, consecutive patterns, word
//! reduction, and occurrence-position computation.
//!
//! Positions are 1-based throughout, matching the usual combinatorial
//! indexing. Conversion to 0-based offsets happens only at slice boundaries.

use std::fmt;
use std::str::FromStr;

use crate::error::{usage, Error, Result};

/// Replace every occurrence of the i-th smallest distinct value with `i - 1`.
///
/// Idempotent; errors on the empty word.
pub fn reduce(word: &[usize]) -> Result<Vec<usize>> {
    if word.is_empty() {
        return Err(usage("cannot reduce an empty word"));
    }
    let mut distinct: Vec<usize> = word.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(word
        .iter()
        .map(|v| distinct.binary_search(v).expect("value present"))
        .collect())
}

/// Reduction of a short window into a caller-provided buffer, avoiding
/// allocation in enumeration hot loops. `out.len()` must equal `win.len()`.
pub(crate) fn reduce_small(win: &[usize], out: &mut [usize]) {
    debug_assert_eq!(win.len(), out.len());
    for (t, &v) in win.iter().enumerate() {
        let mut distinct_smaller = 0;
        for (j, &w) in win.iter().enumerate() {
            if w < v && !win[..j].contains(&w) {
                distinct_smaller += 1;
            }
        }
        out[t] = distinct_smaller;
    }
}

/// True iff `word` is an inversion sequence: `word[i] <= i` in 0-based terms.
pub fn validate(word: &[usize]) -> bool {
    word.iter().enumerate().all(|(i, &v)| v <= i && (i > 0 || v == 0))
}

fn parse_word(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(usage("empty word literal"));
    }
    if s.contains(',') {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("bad word entry {t:?}")))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| usage(format!("bad digit {c:?} in word literal")))
            })
            .collect()
    }
}

fn format_word(word: &[usize], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if word.iter().all(|&v| v <= 9) {
        for v in word {
            write!(f, "{v}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = word.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An integer word `e_1 .. e_n` with `0 <= e_i < i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InversionSequence {
    entries: Vec<usize>,
}

impl InversionSequence {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if !validate(&entries) {
            return Err(usage(format!(
                "not an inversion sequence: {:?}",
                entries
            )));
        }
        Ok(Self { entries })
    }

    /// The all-zero sequence of length `n` (`n = 0` gives the empty sequence).
    pub fn zeros(n: usize) -> Self {
        Self { entries: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// 1-based entry access.
    pub fn entry(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    /// Last entry, i.e. the `k` of the refinement `I_{n,k}`.
    pub fn last(&self) -> Option<usize> {
        self.entries.last().copied()
    }
}

impl fmt::Display for InversionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_word(&self.entries, f)
    }
}

impl FromStr for InversionSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_word(s)?)
    }
}

/// A reduced word `p_1 .. p_r` over `{0, .., r-1}`: the canonical form of a
/// consecutive (or classical) pattern.
///
/// Constructors reject non-canonical words rather than silently reducing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConsecutivePattern {
    letters: Vec<usize>,
}

impl ConsecutivePattern {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(usage("empty pattern"));
        }
        let reduced = reduce(&letters)?;
        if reduced != letters {
            return Err(usage(format!(
                "pattern {:?} is not in reduced form (its reduction is {:?})",
                letters, reduced
            )));
        }
        Ok(Self { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// 1-based letter access.
    pub fn letter(&self, i: usize) -> usize {
        self.letters[i - 1]
    }

    pub fn max_letter(&self) -> usize {
        *self.letters.iter().max().expect("non-empty")
    }

    /// The pattern `0^r` consisting of `r` zeros.
    pub fn zeros(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(usage("empty pattern"));
        }
        Ok(Self { letters: vec![0; r] })
    }
}

impl fmt::Display for ConsecutivePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_word(&self.letters, f)
    }
}

impl FromStr for ConsecutivePattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_word(s)?)
    }
}

/// Sorted, duplicate-free set of 1-based start positions of occurrences.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionSet {
    positions: Vec<usize>,
}

impl PositionSet {
    pub fn new(mut positions: Vec<usize>) -> Result<Self> {
        positions.sort_unstable();
        let before = positions.len();
        positions.dedup();
        if positions.len() != before {
            return Err(usage("duplicate positions in position set"));
        }
        if positions.first() == Some(&0) {
            return Err(usage("positions are 1-based; 0 is not allowed"));
        }
        Ok(Self { positions })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.positions.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &PositionSet) -> bool {
        self.positions.iter().all(|&i| other.contains(i))
    }

    /// Canonical text form, used as a portable map key ("3,5,9"; empty set
    /// renders as the empty string).
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// Start positions of all occurrences of `p` in `e`: the set `Em(p, e)`.
pub fn find_occurrences(e: &InversionSequence, p: &ConsecutivePattern) -> PositionSet {
    let n = e.len();
    let r = p.len();
    let mut positions = Vec::new();
    if r <= n {
        let mut buf = vec![0usize; r];
        for i in 0..=(n - r) {
            reduce_small(&e.entries()[i..i + r], &mut buf);
            if buf == p.letters() {
                positions.push(i + 1);
            }
        }
    }
    PositionSet { positions }
}

/// True iff some (not necessarily consecutive) subsequence of `e` reduces to
/// `p`: classical pattern containment.
pub fn contains_classical(e: &InversionSequence, p: &ConsecutivePattern) -> bool {
    fn search(
        entries: &[usize],
        pat: &[usize],
        start: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let t = chosen.len();
        if t == pat.len() {
            return true;
        }
        // prune: not enough entries left
        if entries.len() - start < pat.len() - t {
            return false;
        }
        for i in start..entries.len() {
            let v = entries[i];
            let consistent = chosen.iter().enumerate().all(|(j, &w)| {
                match pat[j].cmp(&pat[t]) {
                    std::cmp::Ordering::Less => w < v,
                    std::cmp::Ordering::Equal => w == v,
                    std::cmp::Ordering::Greater => w > v,
                }
            });
            if consistent {
                chosen.push(v);
                if search(entries, pat, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    search(e.entries(), p.letters(), 0, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(s: &str) -> InversionSequence {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> ConsecutivePattern {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&[2, 2, 1]).unwrap(), vec![1, 1, 0]);
        assert_eq!(reduce(&[0, 3, 0]).unwrap(), vec![0, 1, 0]);
        assert_eq!(reduce(&[7, 7, 7]).unwrap(), vec![0, 0, 0]);
        assert!(reduce(&[]).is_err());
    }

    #[test]
    fn find_occurrences_examples() {
        let e = seq("0021100300");
        assert_eq!(find_occurrences(&e, &pat("100")).positions(), &[3, 5, 8]);
        assert!(find_occurrences(&e, &pat("120")).is_empty());
        let zeros = InversionSequence::zeros(6);
        assert_eq!(
            find_occurrences(&zeros, &pat("000")).positions(),
            &[1, 2, 3, 4]
        );
        // pattern longer than the sequence
        assert!(find_occurrences(&seq("00"), &pat("000")).is_empty());
    }

    #[test]
    fn contains_classical_examples() {
        let e = seq("0021213");
        assert!(!contains_classical(&e, &pat("210")));
        assert!(contains_classical(&e, &pat("110")));
        assert!(contains_classical(&seq("0"), &pat("0")));
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&[0, 0, 2, 0, 3, 1]));
        assert!(validate(&[0]));
        assert!(!validate(&[1, 0]));
        assert!(validate(&[]));
    }

    #[test]
    fn pattern_constructor_rejects_non_canonical() {
        assert!(ConsecutivePattern::new(vec![2, 2, 1]).is_err());
        assert!(ConsecutivePattern::new(vec![]).is_err());
        assert!(ConsecutivePattern::new(vec![0, 2, 2]).is_err()); // letter 1 missing
        assert!(ConsecutivePattern::new(vec![0, 2, 1]).is_ok());
        assert!(ConsecutivePattern::new(vec![1, 1, 0]).is_ok());
    }

    #[test]
    fn word_text_forms() {
        assert_eq!(seq("0021100300").to_string(), "0021100300");
        let big = InversionSequence::new((0..12).collect()).unwrap();
        assert_eq!(big.to_string(), "0,1,2,3,4,5,6,7,8,9,10,11");
        let parsed: InversionSequence = big.to_string().parse().unwrap();
        assert_eq!(parsed, big);
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(w in proptest::collection::vec(0usize..20, 1..12)) {
            let r1 = reduce(&w).unwrap();
            let r2 = reduce(&r1).unwrap();
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn reduction_is_translation_invariant(
            w in proptest::collection::vec(0usize..15, 1..10),
            c in 0usize..50,
        ) {
            let shifted: Vec<usize> = w.iter().map(|&v| v + c).collect();
            prop_assert_eq!(reduce(&w).unwrap(), reduce(&shifted).unwrap());
        }

        #[test]
        fn occurrence_windows_reduce_to_the_pattern(
            entries in (1usize..9).prop_flat_map(|n| {
                (0..n).map(|i| 0usize..(i + 1)).collect::<Vec<_>>()
            }),
            pletters in prop_oneof![
                Just(vec![0, 0, 0]), Just(vec![0, 0, 1]), Just(vec![0, 1, 0]),
                Just(vec![1, 0, 0]), Just(vec![0, 1, 2]), Just(vec![1, 1, 0]),
            ],
        ) {
            let e = InversionSequence::new(entries).unwrap();
            let p = ConsecutivePattern::new(pletters).unwrap();
            let occ = find_occurrences(&e, &p);
            for &i in occ.positions() {
                let window = &e.entries()[i - 1..i - 1 + p.len()];
                prop_assert_eq!(reduce(window).unwrap(), p.letters().to_vec());
            }
            if !occ.is_empty() {
                prop_assert!(contains_classical(&e, &p));
            }
        }
    }
}
