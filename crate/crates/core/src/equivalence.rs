//! Overlap analysis, changeability, switching bijections, block-based
//! occurrence-rewriting maps, the extends relation, and the Wilf-equivalence
//! classifier.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::enumerate::par_fold_sequences;
use crate::error::{usage, Error, Result};
use crate::word::{
    find_occurrences, reduce, reduce_small, ConsecutivePattern, InversionSequence, PositionSet,
};

/// True iff two occurrences of `p` can never overlap in more than one entry:
/// for all `1 < i < r`, the reductions of the length-`i` prefix and the
/// length-`i` suffix differ.
pub fn is_nonoverlapping(p: &ConsecutivePattern) -> bool {
    let w = p.letters();
    let r = w.len();
    (2..r).all(|i| {
        reduce(&w[..i]).expect("non-empty") != reduce(&w[r - i..]).expect("non-empty")
    })
}

/// True iff an occurrence of `p` and an occurrence of `q` can never overlap
/// in more than one entry.
pub fn are_mutually_nonoverlapping(p: &ConsecutivePattern, q: &ConsecutivePattern) -> Result<bool> {
    if p.len() != q.len() {
        return Err(usage("mutual overlap is defined for equal-length patterns"));
    }
    let (a, b) = (p.letters(), q.letters());
    let r = a.len();
    Ok((2..r).all(|i| {
        reduce(&a[..i]).expect("non-empty") != reduce(&b[r - i..]).expect("non-empty")
            && reduce(&b[..i]).expect("non-empty") != reduce(&a[r - i..]).expect("non-empty")
    }))
}

/// Result of the changeability test for an ordered pair of patterns, with a
/// witness sequence when a direction fails.
#[derive(Debug, Clone, Serialize)]
pub struct ChangeReport {
    pub source: String,
    pub target: String,
    pub changeable_forward: bool,
    pub changeable_backward: bool,
    /// A sequence with an occurrence of the failing direction's source whose
    /// change into the target is invalid; present iff a direction fails.
    pub witness: Option<String>,
    /// 1-based start of the non-changeable occurrence in `witness`.
    pub witness_position: Option<usize>,
}

fn check_change_hypotheses(p: &ConsecutivePattern, q: &ConsecutivePattern) -> Result<()> {
    if p.len() != q.len()
        || p.letter(1) != q.letter(1)
        || p.letter(p.len()) != q.letter(q.len())
        || p.max_letter() != q.max_letter()
    {
        return Err(usage(format!(
            "changeability requires equal length, equal endpoints, and equal maximum letter; got {p} and {q}"
        )));
    }
    Ok(())
}

/// `M_t` from the changeability criterion.
fn change_bound(p: &[usize], t: usize) -> usize {
    let r = p.len();
    let left = p[..=t].iter().copied().max().expect("non-empty");
    let right = (t + 1..r)
        .filter_map(|j| (p[j] + t).checked_sub(j))
        .max()
        .unwrap_or(0);
    left.max(right)
}

/// First 0-based index `t` violating the criterion, if any.
fn changeable_failure(p: &[usize], q: &[usize]) -> Option<usize> {
    (0..p.len()).find(|&t| q[t] > change_bound(p, t))
}

/// Witness for a failing direction: a sequence with an occurrence of `p`
/// whose change into `q` is invalid. Built as `0^s p` with the letters
/// `>= q_t` shifted up so that the change would force entry `s + t` to the
/// value `s + t` itself.
fn build_witness(p: &[usize], q: &[usize], t: usize) -> (InversionSequence, usize) {
    let r = p.len();
    let s = (0..r)
        .filter_map(|j| (p[j] + 1).checked_sub(j + 1))
        .chain(std::iter::once(q[t].saturating_sub(t + 1)))
        .max()
        .unwrap_or(0);
    let mut entries = vec![0usize; s];
    let shift = s + (t + 1) - q[t];
    for &letter in p {
        entries.push(if letter >= q[t] { letter + shift } else { letter });
    }
    (
        InversionSequence::new(entries).expect("lemma construction yields a valid sequence"),
        s + 1,
    )
}

/// Changeability of `p` for `q` and of `q` for `p`, with a verified witness
/// when a direction fails.
pub fn is_changeable(p: &ConsecutivePattern, q: &ConsecutivePattern) -> Result<ChangeReport> {
    check_change_hypotheses(p, q)?;
    let forward = changeable_failure(p.letters(), q.letters());
    let backward = changeable_failure(q.letters(), p.letters());
    let (witness, witness_position) = match (forward, backward) {
        (Some(t), _) => {
            let (e, pos) = build_witness(p.letters(), q.letters(), t);
            if !find_occurrences(&e, p).contains(pos) || apply_change(&e, pos, p, q)?.is_some() {
                return Err(Error::Verification(format!(
                    "witness construction failed for ({p}, {q})"
                )));
            }
            (Some(e.to_string()), Some(pos))
        }
        (None, Some(t)) => {
            let (e, pos) = build_witness(q.letters(), p.letters(), t);
            if !find_occurrences(&e, q).contains(pos) || apply_change(&e, pos, q, p)?.is_some() {
                return Err(Error::Verification(format!(
                    "witness construction failed for ({q}, {p})"
                )));
            }
            (Some(e.to_string()), Some(pos))
        }
        (None, None) => (None, None),
    };
    Ok(ChangeReport {
        source: p.to_string(),
        target: q.to_string(),
        changeable_forward: forward.is_none(),
        changeable_backward: backward.is_none(),
        witness,
        witness_position,
    })
}

/// Change the occurrence of `p` at 1-based position `i` into an occurrence
/// of `q` via the order-preserving letter map. Returns `None` when the
/// rewritten sequence is not a valid inversion sequence.
pub fn apply_change(
    e: &InversionSequence,
    i: usize,
    p: &ConsecutivePattern,
    q: &ConsecutivePattern,
) -> Result<Option<InversionSequence>> {
    check_change_hypotheses(p, q)?;
    if !find_occurrences(e, p).contains(i) {
        return Err(usage(format!("no occurrence of {p} at position {i}")));
    }
    let r = p.len();
    let window = &e.entries()[i - 1..i + r - 1];
    let mut values: Vec<usize> = window.to_vec();
    values.sort_unstable();
    values.dedup();
    // f: letter -> value, order-preserving on the window's value set
    let mut out = e.entries().to_vec();
    for (off, &letter) in q.letters().iter().enumerate() {
        let j = i - 1 + off;
        out[j] = values[letter];
        if out[j] >= j + 1 {
            return Ok(None);
        }
    }
    Ok(Some(
        InversionSequence::new(out).expect("entries checked above"),
    ))
}

/// Simultaneously change every occurrence of `p` into `q` and vice versa.
/// Requires `p` and `q` to be non-overlapping, mutually non-overlapping, and
/// interchangeable, which makes the map a well-defined involution.
pub fn switch_all(
    e: &InversionSequence,
    p: &ConsecutivePattern,
    q: &ConsecutivePattern,
) -> Result<InversionSequence> {
    let report = is_changeable(p, q)?;
    if !is_nonoverlapping(p)
        || !is_nonoverlapping(q)
        || !are_mutually_nonoverlapping(p, q)?
        || !report.changeable_forward
        || !report.changeable_backward
    {
        return Err(usage(format!(
            "switch_all requires non-overlapping, mutually non-overlapping, interchangeable patterns; got {p} and {q}"
        )));
    }
    let r = p.len();
    let mut out = e.entries().to_vec();
    let mut rewrite = |from: &ConsecutivePattern, to: &ConsecutivePattern| {
        for &i in find_occurrences(e, from).positions() {
            let window = &e.entries()[i - 1..i + r - 1];
            let mut values: Vec<usize> = window.to_vec();
            values.sort_unstable();
            values.dedup();
            for (off, &letter) in to.letters().iter().enumerate() {
                out[i - 1 + off] = values[letter];
            }
        }
    };
    rewrite(p, q);
    rewrite(q, p);
    InversionSequence::new(out)
        .map_err(|_| Error::Verification(format!("switch of {p} and {q} left the domain")))
}

/// The five pattern families behind the block-based bijections. Each member
/// has length `s(r+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyPattern {
    /// `0^r 1 0^r 2 ... (s-1) 0^r s`
    A1,
    /// `0^r 1 1^r 2 2^r ... (s-1)^r s`
    A2,
    /// `s 0^r (s-1) 0^r ... 1 0^r`
    B1,
    /// `s (s-1)^r s (s-2)^r s ... s 1^r s 0^r`
    B2,
    /// `s (s-1)^r (s-1) (s-2)^r (s-2) ... 1^r 1 0^r`
    B3,
}

pub fn build_family_pattern(kind: FamilyPattern, r: usize, s: usize) -> Result<ConsecutivePattern> {
    if r < 1 || s < 2 {
        return Err(usage("family patterns require r >= 1 and s >= 2"));
    }
    let mut w = Vec::with_capacity(s * (r + 1));
    match kind {
        FamilyPattern::A1 => {
            for m in 1..=s {
                w.extend(std::iter::repeat(0).take(r));
                w.push(m);
            }
        }
        FamilyPattern::A2 => {
            for m in 1..=s {
                w.extend(std::iter::repeat(m - 1).take(r));
                w.push(m);
            }
        }
        FamilyPattern::B1 => {
            for m in (1..=s).rev() {
                w.push(m);
                w.extend(std::iter::repeat(0).take(r));
            }
        }
        FamilyPattern::B2 => {
            w.push(s);
            for m in (1..s).rev() {
                w.extend(std::iter::repeat(m).take(r));
                w.push(s);
            }
            w.extend(std::iter::repeat(0).take(r));
        }
        FamilyPattern::B3 => {
            w.push(s);
            for m in (1..s).rev() {
                w.extend(std::iter::repeat(m).take(r));
                w.push(m);
            }
            w.extend(std::iter::repeat(0).take(r));
        }
    }
    ConsecutivePattern::new(w)
}

/// Which block-based rewriting map to apply. `A` sends occurrences of the
/// `A1` family member to `A2`; `B2`/`B3` send `B1` to the named member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockFamily {
    A,
    B2,
    B3,
}

impl BlockFamily {
    pub fn source(self, r: usize, s: usize) -> Result<ConsecutivePattern> {
        match self {
            BlockFamily::A => build_family_pattern(FamilyPattern::A1, r, s),
            BlockFamily::B2 | BlockFamily::B3 => build_family_pattern(FamilyPattern::B1, r, s),
        }
    }

    pub fn target(self, r: usize, s: usize) -> Result<ConsecutivePattern> {
        match self {
            BlockFamily::A => build_family_pattern(FamilyPattern::A2, r, s),
            BlockFamily::B2 => build_family_pattern(FamilyPattern::B2, r, s),
            BlockFamily::B3 => build_family_pattern(FamilyPattern::B3, r, s),
        }
    }
}

/// Split `S` into maximal blocks whose consecutive differences are of the
/// form `a * step_unit` with `1 <= a <= max_multiplier`.
pub fn block_decompose(
    set: &PositionSet,
    step_unit: usize,
    max_multiplier: usize,
) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &i in set.positions() {
        let extend = blocks.last().is_some_and(|b| {
            let last = *b.last().expect("blocks are non-empty");
            let d = i - last;
            step_unit > 0 && d % step_unit == 0 && d / step_unit >= 1 && d / step_unit <= max_multiplier
        });
        if extend {
            blocks.last_mut().expect("checked above").push(i);
        } else {
            blocks.push(vec![i]);
        }
    }
    blocks
}

fn check_block_preconditions(
    e: &InversionSequence,
    set: &PositionSet,
    pattern: &ConsecutivePattern,
    r: usize,
) -> Result<()> {
    for w in set.positions().windows(2) {
        if w[1] - w[0] <= r {
            return Err(usage(format!(
                "positions {} and {} are closer than the minimum spacing {}",
                w[0],
                w[1],
                r + 1
            )));
        }
    }
    let em = find_occurrences(e, pattern);
    if !set.is_subset_of(&em) {
        return Err(usage(format!(
            "S = {set} is not contained in Em({pattern}, {e}) = {em}"
        )));
    }
    Ok(())
}

/// Change the occurrences of the family's source pattern at the positions of
/// `S` into occurrences of the target pattern.
pub fn phi_blocks(
    e: &InversionSequence,
    set: &PositionSet,
    family: BlockFamily,
    r: usize,
    s: usize,
) -> Result<InversionSequence> {
    let source = family.source(r, s)?;
    check_block_preconditions(e, set, &source, r)?;
    let n = e.len();
    let mut out = e.entries().to_vec();
    match family {
        BlockFamily::A => {
            // e'_i = e_{i-b-1} when i - a(r+1) - b lands in S
            for i in 1..=n {
                'found: for a in 1..s {
                    for b in 0..r {
                        if let Some(j) = i.checked_sub(a * (r + 1) + b) {
                            if set.contains(j) {
                                out[i - 1] = e.entry(i - b - 1);
                                break 'found;
                            }
                        }
                    }
                }
            }
        }
        BlockFamily::B2 | BlockFamily::B3 => {
            for block in block_decompose(set, r + 1, s - 1) {
                let top = e.entry(block[0]);
                for &q in &block {
                    for m in 1..s {
                        let letter_pos = q + m * (r + 1);
                        for b in 0..r {
                            out[q + (m - 1) * (r + 1) + b] = e.entry(letter_pos);
                        }
                        if family == BlockFamily::B2 {
                            out[letter_pos - 1] = top;
                        }
                    }
                }
            }
        }
    }
    InversionSequence::new(out)
        .map_err(|_| Error::Verification("block map left the domain".to_string()))
}

/// Inverse of [`phi_blocks`]: restores occurrences of the target pattern at
/// the positions of `S` back into occurrences of the source pattern.
pub fn psi_blocks(
    e: &InversionSequence,
    set: &PositionSet,
    family: BlockFamily,
    r: usize,
    s: usize,
) -> Result<InversionSequence> {
    let target = family.target(r, s)?;
    check_block_preconditions(e, set, &target, r)?;
    let mut out = e.entries().to_vec();
    match family {
        BlockFamily::A => {
            for block in block_decompose(set, r + 1, s - 1) {
                let base = e.entry(block[0]);
                for &q in &block {
                    for m in 1..s {
                        for b in 0..r {
                            out[q + m * (r + 1) + b - 1] = base;
                        }
                    }
                }
            }
        }
        BlockFamily::B2 | BlockFamily::B3 => {
            for block in block_decompose(set, r + 1, s - 1) {
                let last = *block.last().expect("blocks are non-empty");
                let bottom = e.entry(last + s * (r + 1) - 1);
                for &q in &block {
                    for m in 1..s {
                        let letter_pos = q + m * (r + 1);
                        for b in 0..r {
                            out[q + (m - 1) * (r + 1) + b] = bottom;
                        }
                        if family == BlockFamily::B2 {
                            out[letter_pos - 1] = e.entry(letter_pos - 1);
                        }
                    }
                }
            }
        }
    }
    InversionSequence::new(out)
        .map_err(|_| Error::Verification("block map inverse left the domain".to_string()))
}

/// All subsets of `Em(p, e)` whose consecutive elements are spaced more than
/// `r` apart: exactly the sets the block maps accept.
pub fn find_block_sets(
    e: &InversionSequence,
    p: &ConsecutivePattern,
    r: usize,
) -> Vec<PositionSet> {
    let em = find_occurrences(e, p);
    let m = em.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        let chosen: Vec<usize> = em
            .positions()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &q)| q)
            .collect();
        if chosen.windows(2).all(|w| w[1] - w[0] > r) {
            out.push(PositionSet::new(chosen).expect("sorted, distinct, positive"));
        }
    }
    out
}

/// All reduced words of length `r`, in lexicographic order.
pub fn enumerate_patterns(r: usize) -> Result<Vec<ConsecutivePattern>> {
    if r == 0 || r > 6 {
        return Err(usage("pattern enumeration supports 1 <= r <= 6"));
    }
    let mut out = Vec::new();
    let mut w = vec![0usize; r];
    loop {
        // reduced words: each letter at most one more than the running max
        if reduce(&w).expect("non-empty") == w {
            out.push(ConsecutivePattern::new(w.clone()).expect("reduced word"));
        }
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if w[i] < r - 1 {
                w[i] += 1;
                for v in w[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// The three generalized Wilf-equivalence levels, ordered from coarsest to
/// finest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Wilf,
    Strong,
    #[serde(rename = "superstrong")]
    SuperStrong,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Wilf => "wilf",
            Level::Strong => "strong",
            Level::SuperStrong => "superstrong",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wilf" => Ok(Level::Wilf),
            "strong" => Ok(Level::Strong),
            "superstrong" => Ok(Level::SuperStrong),
            other => Err(usage(format!(
                "unknown level {other:?}; expected wilf, strong, or superstrong"
            ))),
        }
    }
}

// 12 rather than 10: the first ten terms do not separate 3021 and 3201 from
// the pair 3012 ~ 3102; the totals first diverge at n = 11
pub const CLASSIFY_WILF_LIMIT: usize = 12;
pub const CLASSIFY_PROFILE_LIMIT: usize = 8;

/// A partition of a pattern set into generalized Wilf-equivalence classes.
/// Classes are sorted by their lexicographically least member; `evidence`
/// holds, per class, the digest of the counting data shared by its members.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalencePartition {
    pub level: Level,
    pub n_max: usize,
    pub classes: Vec<Vec<String>>,
    pub evidence: Vec<String>,
    pub evidence_digest: String,
}

impl EquivalencePartition {
    pub fn class_of(&self, pattern: &str) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.iter().any(|m| m == pattern))
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }
}

fn window_code(buf: &[usize]) -> u32 {
    buf.iter().fold(0u32, |acc, &v| (acc << 3) | v as u32)
}

/// Group `patterns` by equality of the per-`n` statistic selected by
/// `level`: avoider totals, occurrence-count distributions, or full
/// occurrence-set distributions, for every `n <= n_max`.
pub fn classify(
    patterns: &[ConsecutivePattern],
    n_max: usize,
    level: Level,
) -> Result<EquivalencePartition> {
    if patterns.is_empty() {
        return Err(usage("classify requires at least one pattern"));
    }
    let r = patterns[0].len();
    if patterns.iter().any(|p| p.len() != r) {
        return Err(usage("classify requires patterns of equal length"));
    }
    let cap = match level {
        Level::Wilf => CLASSIFY_WILF_LIMIT,
        Level::Strong | Level::SuperStrong => CLASSIFY_PROFILE_LIMIT,
    };
    if n_max > cap {
        return Err(Error::Limit(format!(
            "classification at level {level} is limited to n_max <= {cap}, got {n_max}"
        )));
    }
    if n_max == 0 {
        return Err(usage("n_max must be >= 1"));
    }

    // every window of length r reduces to exactly one pattern
    let mut code_to_index: BTreeMap<u32, usize> = BTreeMap::new();
    for (t, p) in patterns.iter().enumerate() {
        code_to_index.insert(window_code(p.letters()), t);
    }

    let mut hashers: Vec<Sha256> = patterns.iter().map(|_| Sha256::new()).collect();
    for n in 1..=n_max {
        // per pattern: statistic-key -> count, over sequences with at least
        // one occurrence; avoiders are derived from the total. The last two
        // fields are per-worker scratch buffers.
        type Acc = (u64, Vec<BTreeMap<Vec<u8>, u64>>, Vec<usize>, Vec<(usize, u8)>);
        let n_patterns = patterns.len();
        let (total, stats, _, _): Acc = par_fold_sequences(
            n,
            || (0u64, vec![BTreeMap::new(); n_patterns], vec![0usize; r], Vec::new()),
            |acc, e| {
                acc.0 += 1;
                if e.len() < r {
                    return;
                }
                let (_, maps, buf, matches) = acc; // matches: (pattern, 1-based pos)
                matches.clear();
                for j in 0..=e.len() - r {
                    reduce_small(&e[j..j + r], buf);
                    if let Some(&t) = code_to_index.get(&window_code(buf)) {
                        matches.push((t, (j + 1) as u8));
                    }
                }
                matches.sort_unstable();
                let mut i = 0;
                while i < matches.len() {
                    let t = matches[i].0;
                    let mut j = i;
                    while j < matches.len() && matches[j].0 == t {
                        j += 1;
                    }
                    let key: Vec<u8> = match level {
                        Level::Wilf => vec![1],
                        Level::Strong => vec![(j - i) as u8],
                        Level::SuperStrong => matches[i..j].iter().map(|&(_, p)| p).collect(),
                    };
                    *maps[t].entry(key).or_insert(0) += 1;
                    i = j;
                }
            },
            |out, part| {
                out.0 += part.0;
                for (dst, src) in out.1.iter_mut().zip(part.1) {
                    for (k, v) in src {
                        *dst.entry(k).or_insert(0) += v;
                    }
                }
            },
        );
        for (t, map) in stats.iter().enumerate() {
            let contained: u64 = map.values().sum();
            let hasher = &mut hashers[t];
            hasher.update(n.to_le_bytes());
            hasher.update((total - contained).to_le_bytes());
            for (k, v) in map {
                hasher.update([k.len() as u8]);
                hasher.update(k);
                hasher.update(v.to_le_bytes());
            }
        }
    }

    let digests: Vec<String> = hashers
        .into_iter()
        .map(|h| hex_digest(h.finalize().as_slice()))
        .collect();
    let mut groups: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (t, p) in patterns.iter().enumerate() {
        groups
            .entry(digests[t].as_str())
            .or_default()
            .push(p.to_string());
    }
    let mut classes: Vec<(Vec<String>, String)> = groups
        .into_iter()
        .map(|(d, mut members)| {
            members.sort();
            (members, d.to_string())
        })
        .collect();
    classes.sort_by(|a, b| a.0[0].cmp(&b.0[0]));

    let mut overall = Sha256::new();
    for (_, d) in &classes {
        overall.update(d.as_bytes());
    }
    Ok(EquivalencePartition {
        level,
        n_max,
        evidence: classes.iter().map(|(_, d)| d.clone()).collect(),
        classes: classes.into_iter().map(|(m, _)| m).collect(),
        evidence_digest: hex_digest(overall.finalize().as_slice()),
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// How a longer pattern forces occurrences of a shorter one at its ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    Left,
    Right,
    Both,
    None,
}

/// Whether every occurrence of `p` contains an occurrence of `q` in its
/// leftmost (`Right`) or rightmost (`Left`) `|q|` entries. Reduction commutes
/// with window restriction, so the letter-level test is exact.
pub fn extends(p: &ConsecutivePattern, q: &ConsecutivePattern) -> Result<Extension> {
    if p.len() <= q.len() {
        return Err(usage("extends requires a strictly longer first pattern"));
    }
    let s = q.len();
    let right = reduce(&p.letters()[..s]).expect("non-empty") == q.letters();
    let left = reduce(&p.letters()[p.len() - s..]).expect("non-empty") == q.letters();
    Ok(match (left, right) {
        (true, true) => Extension::Both,
        (true, false) => Extension::Left,
        (false, true) => Extension::Right,
        (false, false) => Extension::None,
    })
}

/// The fixed correspondence between length-4 patterns extending `100` and
/// those extending `110`, with each pair verified super-strongly equivalent
/// at `n <= n_max`.
pub fn extension_correspondence(n_max: usize) -> Result<Vec<(ConsecutivePattern, ConsecutivePattern)>> {
    const PAIRS: [(&str, &str); 10] = [
        ("0100", "0110"),
        ("1002", "1102"),
        ("1200", "1220"),
        ("0211", "0221"),
        ("1000", "1110"),
        ("1001", "1101"),
        ("1100", "1100"),
        ("2100", "2210"),
        ("2001", "2201"),
        ("2110", "2110"),
    ];
    let pairs: Vec<(ConsecutivePattern, ConsecutivePattern)> = PAIRS
        .iter()
        .map(|&(a, b)| Ok((a.parse()?, b.parse()?)))
        .collect::<Result<_>>()?;
    for n in 1..=n_max.min(CLASSIFY_PROFILE_LIMIT) {
        for (a, b) in &pairs {
            if a == b {
                continue;
            }
            let pa = crate::enumerate::occurrence_profile(a, n)?;
            let pb = crate::enumerate::occurrence_profile(b, n)?;
            if pa.by_set != pb.by_set {
                return Err(Error::Verification(format!(
                    "correspondence pair ({a}, {b}) differs at n = {n}"
                )));
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::generate_all;

    fn pat(s: &str) -> ConsecutivePattern {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> InversionSequence {
        s.parse().unwrap()
    }

    #[test]
    fn nonoverlapping_examples() {
        assert!(is_nonoverlapping(&pat("110")));
        assert!(!is_nonoverlapping(&pat("1100")));
        assert!(!is_nonoverlapping(&pat("000")));
        // witness: two 1100 occurrences sharing two entries
        let e = seq("0000221100");
        let em = find_occurrences(&e, &pat("1100"));
        assert!(em.contains(5) && em.contains(7));
    }

    #[test]
    fn mutual_nonoverlap_examples() {
        assert!(are_mutually_nonoverlapping(&pat("110"), &pat("010")).unwrap());
        assert!(!are_mutually_nonoverlapping(&pat("110"), &pat("100")).unwrap());
        let e = seq("0002211");
        assert!(find_occurrences(&e, &pat("110")).contains(4));
        assert!(find_occurrences(&e, &pat("100")).contains(5));
        assert!(are_mutually_nonoverlapping(&pat("110"), &pat("011")).is_ok());
        assert!(are_mutually_nonoverlapping(&pat("110"), &pat("0110")).is_err());
        for p in ["110", "100", "010", "000", "012"] {
            assert_eq!(
                are_mutually_nonoverlapping(&pat(p), &pat(p)).unwrap(),
                is_nonoverlapping(&pat(p)),
                "{p}"
            );
        }
    }

    #[test]
    fn changeable_examples() {
        let rep = is_changeable(&pat("01230"), &pat("03210")).unwrap();
        assert!(!rep.changeable_forward);
        assert!(rep.witness.is_some());

        let rep = is_changeable(&pat("0021"), &pat("0121")).unwrap();
        assert!(rep.changeable_forward && rep.changeable_backward);
        assert!(rep.witness.is_none());

        let rep = is_changeable(&pat("0102"), &pat("0102")).unwrap();
        assert!(rep.changeable_forward && rep.changeable_backward);

        assert!(is_changeable(&pat("010"), &pat("001")).is_err()); // endpoint mismatch
        assert!(is_changeable(&pat("010"), &pat("0120")).is_err()); // length mismatch
    }

    #[test]
    fn apply_change_examples() {
        let e = seq("00134015331");
        let out = apply_change(&e, 7, &pat("02110"), &pat("02100")).unwrap();
        assert_eq!(out.unwrap().to_string(), "00134015311");

        let out = apply_change(&e, 2, &pat("01230"), &pat("03210")).unwrap();
        assert!(out.is_none());

        let out = apply_change(&e, 7, &pat("02110"), &pat("02110")).unwrap();
        assert_eq!(out.unwrap(), e);

        assert!(apply_change(&e, 3, &pat("02110"), &pat("02100")).is_err());
    }

    #[test]
    fn changeable_iff_every_change_valid() {
        // exhaustive transport check for a changeable and a non-changeable pair
        let cases = [("0021", "0121", true), ("01230", "03210", false)];
        for (a, b, expect) in cases {
            let (p, q) = (pat(a), pat(b));
            assert_eq!(is_changeable(&p, &q).unwrap().changeable_forward, expect);
            let mut all_valid = true;
            for n in 1..=7 {
                for e in generate_all(n).unwrap() {
                    for &i in find_occurrences(&e, &p).positions() {
                        if apply_change(&e, i, &p, &q).unwrap().is_none() {
                            all_valid = false;
                        }
                    }
                }
            }
            assert_eq!(all_valid, expect, "({a}, {b})");
        }
    }

    #[test]
    fn switch_all_examples() {
        let (p, q) = (pat("0021"), pat("0121"));
        let out = switch_all(&seq("00032454"), &p, &q).unwrap();
        assert_eq!(out.to_string(), "00232254");

        // precondition rejection: 110/100 are not mutually non-overlapping
        assert!(switch_all(&seq("0002211"), &pat("110"), &pat("100")).is_err());
    }

    #[test]
    fn switch_all_involution_and_em_swap() {
        let (p, q) = (pat("0021"), pat("0121"));
        for n in 1..=7 {
            for e in generate_all(n).unwrap() {
                let f = switch_all(&e, &p, &q).unwrap();
                assert_eq!(find_occurrences(&f, &q), find_occurrences(&e, &p));
                assert_eq!(find_occurrences(&f, &p), find_occurrences(&e, &q));
                assert_eq!(switch_all(&f, &p, &q).unwrap(), e);
            }
        }
    }

    #[test]
    fn family_pattern_strings() {
        let cases = [
            (FamilyPattern::A1, 1, 2, "0102"),
            (FamilyPattern::A2, 1, 2, "0112"),
            (FamilyPattern::B1, 1, 2, "2010"),
            (FamilyPattern::B2, 1, 2, "2120"),
            (FamilyPattern::B3, 1, 2, "2110"),
            (FamilyPattern::A1, 2, 2, "001002"),
            (FamilyPattern::A2, 2, 2, "001112"),
            (FamilyPattern::B1, 1, 3, "302010"),
            (FamilyPattern::B2, 1, 3, "323130"),
            (FamilyPattern::B3, 1, 3, "322110"),
        ];
        for (kind, r, s, expect) in cases {
            assert_eq!(build_family_pattern(kind, r, s).unwrap().to_string(), expect);
        }
        assert!(build_family_pattern(FamilyPattern::A1, 0, 2).is_err());
        assert!(build_family_pattern(FamilyPattern::A1, 1, 1).is_err());
    }

    #[test]
    fn block_decompose_examples() {
        let s = PositionSet::new(vec![3, 5, 9]).unwrap();
        assert_eq!(block_decompose(&s, 2, 1), vec![vec![3, 5], vec![9]]);
        assert_eq!(block_decompose(&PositionSet::empty(), 2, 1), Vec::<Vec<usize>>::new());
        let s = PositionSet::new(vec![4]).unwrap();
        assert_eq!(block_decompose(&s, 2, 1), vec![vec![4]]);
        // step 3, multipliers up to 2: 1,4,10 chains (diffs 3 and 6)
        let s = PositionSet::new(vec![1, 4, 10, 12]).unwrap();
        assert_eq!(block_decompose(&s, 3, 2), vec![vec![1, 4, 10], vec![12]]);
    }

    #[test]
    fn phi_blocks_paper_example() {
        let e = seq("0102040523262889");
        let s = PositionSet::new(vec![3, 5, 9]).unwrap();
        assert_eq!(
            find_occurrences(&e, &pat("0102")),
            PositionSet::new(vec![1, 3, 5, 9, 11]).unwrap()
        );
        let out = phi_blocks(&e, &s, BlockFamily::A, 1, 2).unwrap();
        assert_eq!(out.to_string(), "0102244523362889");
        assert!(s.is_subset_of(&find_occurrences(&out, &pat("0112"))));
        assert_eq!(psi_blocks(&out, &s, BlockFamily::A, 1, 2).unwrap(), e);

        // empty S: identity
        assert_eq!(
            phi_blocks(&e, &PositionSet::empty(), BlockFamily::A, 1, 2).unwrap(),
            e
        );
        // S not within Em: rejected
        assert!(phi_blocks(&e, &PositionSet::new(vec![2]).unwrap(), BlockFamily::A, 1, 2).is_err());
        // spacing violation: rejected
        assert!(phi_blocks(&e, &PositionSet::new(vec![3, 4]).unwrap(), BlockFamily::A, 1, 2).is_err());
    }

    #[test]
    fn phi_blocks_round_trip_exhaustive() {
        // every e in I_n, every valid S inside Em(source, e), all three maps
        for (family, r, s) in [
            (BlockFamily::A, 1, 2),
            (BlockFamily::B2, 1, 2),
            (BlockFamily::B3, 1, 2),
        ] {
            let source = family.source(r, s).unwrap();
            let target = family.target(r, s).unwrap();
            for n in 4..=8 {
                for e in generate_all(n).unwrap() {
                    let em = find_occurrences(&e, &source);
                    for mask in 0u32..(1 << em.len()) {
                        let chosen: Vec<usize> = em
                            .positions()
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, &p)| p)
                            .collect();
                        if chosen.windows(2).any(|w| w[1] - w[0] <= r) {
                            continue;
                        }
                        let set = PositionSet::new(chosen).unwrap();
                        let out = phi_blocks(&e, &set, family, r, s).unwrap();
                        assert!(set.is_subset_of(&find_occurrences(&out, &target)));
                        assert_eq!(psi_blocks(&out, &set, family, r, s).unwrap(), e);
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_pattern_counts() {
        assert_eq!(enumerate_patterns(1).unwrap().len(), 1);
        assert_eq!(enumerate_patterns(2).unwrap().len(), 3);
        assert_eq!(enumerate_patterns(3).unwrap().len(), 13);
        assert_eq!(enumerate_patterns(4).unwrap().len(), 75);
        assert_eq!(enumerate_patterns(1).unwrap()[0].to_string(), "0");
        let p3 = enumerate_patterns(3).unwrap();
        let mut sorted = p3.clone();
        sorted.sort_by_key(|p| p.letters().to_vec());
        assert_eq!(p3, sorted);
        assert!(enumerate_patterns(0).is_err());
        assert!(enumerate_patterns(7).is_err());
    }

    #[test]
    fn classify_length3() {
        let patterns = enumerate_patterns(3).unwrap();
        let part = classify(&patterns, 8, Level::SuperStrong).unwrap();
        assert_eq!(part.classes.len(), 12);
        let merged: Vec<_> = part.classes.iter().filter(|c| c.len() > 1).collect();
        assert_eq!(merged, vec![&vec!["100".to_string(), "110".to_string()]]);
        // coarser levels agree here
        for level in [Level::Wilf, Level::Strong] {
            let coarse = classify(&patterns, 8, level).unwrap();
            assert_eq!(coarse.classes, part.classes);
        }
    }

    #[test]
    fn classify_levels_refine() {
        // wilf never splits what superstrong merges
        let patterns = enumerate_patterns(4).unwrap();
        let fine = classify(&patterns, 6, Level::SuperStrong).unwrap();
        let coarse = classify(&patterns, 6, Level::Wilf).unwrap();
        for class in &fine.classes {
            let c = coarse.class_of(&class[0]).unwrap();
            for member in class {
                assert_eq!(coarse.class_of(member), Some(c));
            }
        }
    }

    #[test]
    fn classify_input_checks() {
        let patterns = enumerate_patterns(3).unwrap();
        assert!(classify(&[], 5, Level::Wilf).is_err());
        assert!(classify(&patterns, 13, Level::Wilf).is_err());
        assert!(classify(&patterns, 9, Level::SuperStrong).is_err());
        let mixed = vec![pat("010"), pat("0102")];
        assert!(classify(&mixed, 5, Level::Wilf).is_err());
        let single = classify(&[pat("010")], 5, Level::Wilf).unwrap();
        assert_eq!(single.classes, vec![vec!["010".to_string()]]);
    }

    #[test]
    fn extends_examples() {
        assert_eq!(extends(&pat("1102"), &pat("110")).unwrap(), Extension::Right);
        assert_eq!(extends(&pat("2110"), &pat("110")).unwrap(), Extension::Left);
        assert_eq!(extends(&pat("0123"), &pat("210")).unwrap(), Extension::None);
        assert_eq!(extends(&pat("1100"), &pat("110")).unwrap(), Extension::Right);
        assert_eq!(extends(&pat("0110"), &pat("110")).unwrap(), Extension::Left);
        assert!(extends(&pat("110"), &pat("110")).is_err());

        // full example lists for 110 and 100
        let right_110 = ["1102", "1101", "2201", "1100", "2210"];
        let left_110 = ["2110", "1110", "1220", "0110", "0221"];
        let right_100 = ["1002", "1001", "2001", "1000", "2110"];
        let left_100 = ["2100", "1100", "1200", "0100", "0211"];
        for p in enumerate_patterns(4).unwrap() {
            let vs110 = extends(&p, &pat("110")).unwrap();
            let name = p.to_string();
            assert_eq!(
                matches!(vs110, Extension::Right | Extension::Both),
                right_110.contains(&name.as_str()),
                "{name} vs 110 right"
            );
            assert_eq!(
                matches!(vs110, Extension::Left | Extension::Both),
                left_110.contains(&name.as_str()),
                "{name} vs 110 left"
            );
            let vs100 = extends(&p, &pat("100")).unwrap();
            assert_eq!(
                matches!(vs100, Extension::Right | Extension::Both),
                right_100.contains(&name.as_str()),
                "{name} vs 100 right"
            );
            assert_eq!(
                matches!(vs100, Extension::Left | Extension::Both),
                left_100.contains(&name.as_str()),
                "{name} vs 100 left"
            );
        }
    }

    #[test]
    fn extends_transports_occurrences() {
        // letter-level test confirmed by exhaustive transport at small n
        let cases = [("1102", "110"), ("2110", "110"), ("0123", "210")];
        for (a, b) in cases {
            let (p, q) = (pat(a), pat(b));
            let verdict = extends(&p, &q).unwrap();
            let (mut right_ok, mut left_ok) = (true, true);
            let shift = p.len() - q.len();
            for n in 1..=7 {
                for e in generate_all(n).unwrap() {
                    let em_q = find_occurrences(&e, &q);
                    for &i in find_occurrences(&e, &p).positions() {
                        right_ok &= em_q.contains(i);
                        left_ok &= em_q.contains(i + shift);
                    }
                }
            }
            assert_eq!(
                matches!(verdict, Extension::Right | Extension::Both),
                right_ok,
                "{a} right-extends {b}"
            );
            assert_eq!(
                matches!(verdict, Extension::Left | Extension::Both),
                left_ok,
                "{a} left-extends {b}"
            );
        }
    }

    #[test]
    fn correspondence_pairs() {
        let pairs = extension_correspondence(6).unwrap();
        assert_eq!(pairs.len(), 10);
        for (a, b) in &pairs {
            assert!(matches!(
                extends(a, &pat("100")).unwrap(),
                Extension::Left | Extension::Right | Extension::Both
            ));
            assert!(matches!(
                extends(b, &pat("110")).unwrap(),
                Extension::Left | Extension::Right | Extension::Both
            ));
        }
        assert!(pairs.iter().any(|(a, b)| a == b && a.to_string() == "1100"));
        assert!(pairs.iter().any(|(a, b)| a == b && a.to_string() == "2110"));
    }
}
