//! Pattern-side precomputation.
//!
//! Prefix lengths `0..=m` are the nodes of the failure tree: node `i > 0`
//! hangs below `f(i)`, the length of the longest proper border of `S[1..i]`.
//! Two lengths are *comparable* when the shorter prefix is a border of (or
//! equal to) the longer one, which is exactly ancestry in that tree.
//!
//! Ancestry is answered two ways:
//! * balanced-parenthesis `open`/`close` positions of the failure tree, and
//! * intervals in the lexicographic order of the reversed prefixes
//!   `S[i] S[i-1] .. S[1]` (`rev_rank`/`rev_close`). That order is a preorder
//!   of the same tree and additionally survives prepending a symbol, which
//!   the linear-time merge relies on.

use crate::error::{Error, Result};
use crate::graph::{is_label_byte, Alphabet, Digraph};

/// Failure function of `s`: entry `i - 1` holds `f(i)` for `i` in `1..=m`.
pub fn failure_function(s: &[u8]) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let mut f = vec![0usize; s.len()];
    let mut q = 0;
    for i in 1..s.len() {
        while q > 0 && s[q] != s[i] {
            q = f[q - 1];
        }
        if s[q] == s[i] {
            q += 1;
        }
        f[i] = q;
    }
    Ok(f)
}

/// Number of failure-tree nodes in `0..=m` that are nobody's parent.
/// `f` is in the layout returned by [`failure_function`].
pub fn leaf_count(f: &[usize]) -> usize {
    let mut is_parent = vec![false; f.len() + 1];
    for &p in f {
        is_parent[p] = true;
    }
    is_parent.iter().filter(|&&p| !p).count()
}

/// Preorder balanced-parenthesis positions of the failure tree rooted at 0,
/// children visited by increasing length.
pub fn build_bp(f: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let nodes = f.len() + 1;
    let mut first_child = vec![usize::MAX; nodes];
    let mut next_sibling = vec![usize::MAX; nodes];
    // Insert in decreasing order so sibling lists come out increasing.
    for i in (1..nodes).rev() {
        let p = f[i - 1];
        next_sibling[i] = first_child[p];
        first_child[p] = i;
    }
    let mut open = vec![0; nodes];
    let mut close = vec![0; nodes];
    let mut pos = 0;
    let mut stack = vec![(0usize, first_child[0])];
    open[0] = 0;
    pos += 1;
    while let Some(&mut (node, ref mut child)) = stack.last_mut() {
        if *child == usize::MAX {
            close[node] = pos;
            pos += 1;
            stack.pop();
        } else {
            let c = *child;
            *child = next_sibling[c];
            open[c] = pos;
            pos += 1;
            stack.push((c, first_child[c]));
        }
    }
    (open, close)
}

/// Lexicographic rank of each reversed prefix `S[i..1]` (`i` in `0..=m`, the
/// empty string first) and, per prefix, the last rank whose string still
/// starts with it. Ancestry is `rank[i] <= rank[j] <= close[i]`.
///
/// Built from a suffix array plus LCP array of `S^r` followed by a sentinel.
pub fn reversed_suffix_order(s: &[u8]) -> (Vec<usize>, Vec<usize>) {
    let m = s.len();
    // text = S^r + sentinel; suffix at position p has length m - p (without sentinel),
    // i.e. it is the reversed prefix of length m - p.
    let text: Vec<usize> = s.iter().rev().map(|&b| b as usize + 1).chain(std::iter::once(0)).collect();
    let sa = suffix_array(&text);
    let len = text.len();
    let mut rank = vec![0; len];
    for (r, &p) in sa.iter().enumerate() {
        rank[p] = r;
    }
    // Kasai: lcp[r] = lcp(sa[r - 1], sa[r]).
    let mut lcp = vec![0usize; len];
    let mut h = 0usize;
    for p in 0..len {
        if rank[p] > 0 {
            let q = sa[rank[p] - 1];
            while p + h < len && q + h < len && text[p + h] == text[q + h] {
                h += 1;
            }
            lcp[rank[p]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    // close[r]: last rank r' such that lcp[r+1..=r'] >= length of suffix sa[r].
    let mut close_by_rank = vec![0; len];
    let mut chain: Vec<usize> = Vec::new();
    for r in (0..len).rev() {
        let need = m - sa[r];
        let cut = chain.partition_point(|&x| lcp[x] < need);
        close_by_rank[r] = if cut == 0 { len - 1 } else { chain[cut - 1] - 1 };
        while chain.last().is_some_and(|&x| lcp[x] >= lcp[r]) {
            chain.pop();
        }
        if r > 0 {
            chain.push(r);
        }
    }
    let rev_rank: Vec<usize> = (0..=m).map(|i| rank[m - i]).collect();
    let rev_close: Vec<usize> = (0..=m).map(|i| close_by_rank[rank[m - i]]).collect();
    (rev_rank, rev_close)
}

/// Prefix-doubling suffix array of an integer text with a unique smallest
/// final symbol.
fn suffix_array(text: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = text.to_vec();
    let mut tmp = vec![0usize; n];
    let mut k = 1;
    loop {
        let key = |p: usize, rank: &[usize]| (rank[p], if p + k < n { rank[p + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&p| key(p, &rank));
        tmp[sa[0]] = 0;
        for w in 1..n {
            let bump = usize::from(key(sa[w - 1], &rank) != key(sa[w], &rank));
            tmp[sa[w]] = tmp[sa[w - 1]] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] == n - 1 || k >= n {
            break;
        }
        k *= 2;
    }
    sa
}

/// All pattern-side tables for one pattern over a fixed alphabet.
#[derive(Debug, Clone)]
pub struct PatternIndex {
    pattern: Vec<u8>,
    alphabet: Alphabet,
    /// `codes[i]` is the code of `S[i + 1]`.
    codes: Vec<u32>,
    /// `fail[i]` = f(i) for `i >= 1`, `fail[0] = 0`.
    fail: Vec<u32>,
    sigma: usize,
    automaton: Vec<u32>,
    open: Vec<u32>,
    close: Vec<u32>,
    rev_rank: Vec<u32>,
    rev_close: Vec<u32>,
    leaves: usize,
}

impl PatternIndex {
    /// Index over the pattern's own alphabet.
    pub fn new(pattern: &[u8]) -> Result<Self> {
        Self::with_alphabet(pattern, &Alphabet::default())
    }

    /// Index over `alphabet` extended by the pattern's symbols.
    pub fn with_alphabet(pattern: &[u8], alphabet: &Alphabet) -> Result<Self> {
        if let Some(&b) = pattern.iter().find(|&&b| !is_label_byte(b)) {
            return Err(Error::InvalidPatternByte(b));
        }
        let f = failure_function(pattern)?;
        let alphabet = alphabet.union(&Alphabet::from_bytes(pattern.iter().copied()));
        let sigma = alphabet.len();
        let m = pattern.len();
        let codes: Vec<u32> = pattern
            .iter()
            .map(|&b| alphabet.code(b).expect("pattern symbol in alphabet") as u32)
            .collect();
        let fail: Vec<u32> = std::iter::once(0).chain(f.iter().map(|&x| x as u32)).collect();

        let mut automaton = vec![0u32; (m + 1) * sigma];
        automaton[codes[0] as usize] = 1;
        for i in 1..=m {
            let back = fail[i] as usize * sigma;
            for a in 0..sigma {
                automaton[i * sigma + a] = automaton[back + a];
            }
            if i < m {
                automaton[i * sigma + codes[i] as usize] = i as u32 + 1;
            }
        }

        let (open, close) = build_bp(&f);
        let (rev_rank, rev_close) = reversed_suffix_order(pattern);
        let to32 = |v: Vec<usize>| v.into_iter().map(|x| x as u32).collect::<Vec<u32>>();
        Ok(PatternIndex {
            pattern: pattern.to_vec(),
            alphabet,
            codes,
            fail,
            sigma,
            automaton,
            open: to32(open),
            close: to32(close),
            rev_rank: to32(rev_rank),
            rev_close: to32(rev_close),
            leaves: leaf_count(&f),
        })
    }

    /// Index whose alphabet covers both the pattern and the graph labels.
    pub fn for_graph(pattern: &[u8], graph: &Digraph) -> Result<Self> {
        Self::with_alphabet(pattern, graph.alphabet())
    }

    /// Index of the reversed pattern over the same alphabet.
    pub fn reversed(&self) -> PatternIndex {
        let rev: Vec<u8> = self.pattern.iter().rev().copied().collect();
        Self::with_alphabet(&rev, &self.alphabet).expect("reversal of a valid pattern is valid")
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    pub fn m(&self) -> usize {
        self.pattern.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Leaf count `w` of the failure tree.
    pub fn w(&self) -> usize {
        self.leaves
    }

    /// f(i) for `1 <= i <= m`.
    pub fn fail(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.m(), "failure function is defined on 1..=m");
        self.fail[i] as usize
    }

    /// The failure function as `[f(1), .., f(m)]`.
    pub fn failure(&self) -> Vec<usize> {
        self.fail[1..].iter().map(|&x| x as usize).collect()
    }

    /// 1-based symbol access, `S[i]` for `1 <= i <= m`.
    pub fn symbol(&self, i: usize) -> u8 {
        self.pattern[i - 1]
    }

    /// Code of `S[i + 1]`, i.e. the symbol that extends a match of length `i`.
    #[inline]
    pub(crate) fn next_code(&self, i: usize) -> Option<u32> {
        self.codes.get(i).copied()
    }

    #[inline]
    pub fn code(&self, label: u8) -> Option<usize> {
        self.alphabet.code(label)
    }

    /// Automaton transition on a symbol code.
    #[inline]
    pub fn step_code(&self, i: usize, code: usize) -> usize {
        self.automaton[i * self.sigma + code] as usize
    }

    /// Automaton transition on a label byte; symbols outside the alphabet
    /// cannot continue any prefix.
    #[inline]
    pub fn step(&self, i: usize, label: u8) -> usize {
        match self.code(label) {
            Some(c) => self.step_code(i, c),
            None => 0,
        }
    }

    pub fn open(&self, i: usize) -> usize {
        self.open[i] as usize
    }

    pub fn close(&self, i: usize) -> usize {
        self.close[i] as usize
    }

    pub fn rev_rank(&self, i: usize) -> usize {
        self.rev_rank[i] as usize
    }

    pub fn rev_close(&self, i: usize) -> usize {
        self.rev_close[i] as usize
    }

    /// `i` is an ancestor of (or equal to) `j` in the failure tree.
    #[inline]
    pub fn is_ancestor(&self, i: usize, j: usize) -> bool {
        let oj = self.open[j];
        self.open[i] <= oj && oj <= self.close[i]
    }

    /// Same relation as [`Self::is_ancestor`], answered in reversed-suffix order.
    #[inline]
    pub fn rev_is_ancestor(&self, i: usize, j: usize) -> bool {
        let rj = self.rev_rank[j];
        self.rev_rank[i] <= rj && rj <= self.rev_close[i]
    }

    /// Whether the shorter of `S[1..i]`, `S[1..j]` is a border of (or equal
    /// to) the longer one.
    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        if i <= j {
            self.is_ancestor(i, j)
        } else {
            self.is_ancestor(j, i)
        }
    }

    /// Balanced-parenthesis rendering of the failure tree.
    pub fn bp_string(&self) -> String {
        let mut bp = vec![b')'; 2 * (self.m() + 1)];
        for &o in &self.open {
            bp[o as usize] = b'(';
        }
        String::from_utf8(bp).expect("ascii")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &[u8] = b"abaababaaba";

    fn brute_borders(s: &[u8], i: usize) -> Vec<usize> {
        (0..i).filter(|&b| s[..b] == s[i - b..i]).collect()
    }

    fn brute_automaton(s: &[u8], i: usize, a: u8) -> usize {
        let mut t = s[..i].to_vec();
        t.push(a);
        (0..=s.len().min(t.len())).rev().find(|&l| t.ends_with(&s[..l])).unwrap()
    }

    #[test]
    fn failure_examples() {
        assert_eq!(failure_function(b"aaaa").unwrap(), vec![0, 1, 2, 3]);
        let f = failure_function(FIG1).unwrap();
        assert_eq!(f[8 - 1], 3);
        assert_eq!(f, vec![0, 0, 1, 1, 2, 3, 2, 3, 4, 5, 6]);
        let brute: Vec<usize> = (1..=FIG1.len()).map(|i| *brute_borders(FIG1, i).last().unwrap()).collect();
        assert_eq!(f, brute);
        assert_eq!(failure_function(b""), Err(Error::EmptyPattern));
    }

    #[test]
    fn automaton_examples() {
        let idx = PatternIndex::new(FIG1).unwrap();
        assert_eq!(idx.step(0, b'a'), 1);
        assert_eq!(idx.step(3, b'a'), 4);
        // Longest prefix of S that is a suffix of S.'a' is "abaa".
        assert_eq!(brute_automaton(FIG1, 11, b'a'), 4);
        assert_eq!(idx.step(11, b'a'), 4);
        assert_eq!(idx.step(5, b'z'), 0);
    }

    #[test]
    fn bp_examples() {
        assert_eq!(build_bp(&[]), (vec![0], vec![1]));
        assert_eq!(build_bp(&[0, 1]), (vec![0, 1, 2], vec![5, 4, 3]));
        let idx = PatternIndex::new(b"aa").unwrap();
        assert_eq!(idx.bp_string(), "((()))");
        let idx = PatternIndex::new(FIG1).unwrap();
        assert!(idx.open(3) <= idx.open(8) && idx.open(8) <= idx.close(3));
    }

    #[test]
    fn comparable_examples() {
        let idx = PatternIndex::new(FIG1).unwrap();
        assert!(idx.comparable(4, 4));
        assert!(idx.comparable(1, 8));
        assert!(!idx.comparable(2, 3));
        assert!(idx.comparable(8, 1));
    }

    #[test]
    fn leaf_count_examples() {
        assert_eq!(PatternIndex::new(FIG1).unwrap().w(), 5);
        assert_eq!(PatternIndex::new(b"aaaa").unwrap().w(), 1);
        assert_eq!(PatternIndex::new(b"abcd").unwrap().w(), 4);
        assert_eq!(leaf_count(&[]), 1);
    }

    #[test]
    fn reversed_order_examples() {
        let (rank, close) = reversed_suffix_order(b"ab");
        assert!(rank[0] < rank[1] && rank[0] < rank[2]);
        assert_eq!(close[0], 2);

        let idx = PatternIndex::new(FIG1).unwrap();
        let mut seen: Vec<usize> = (0..=11).map(|i| idx.rev_rank(i)).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 12);
        for i in 0..=11 {
            for j in 0..=11 {
                assert_eq!(idx.rev_is_ancestor(i, j), idx.is_ancestor(i, j), "({i}, {j})");
            }
        }
    }

    /// Exhaustive over all strings of length <= 7 on {a,b,c}; the bigger
    /// sweeps live in the integration tests.
    #[test]
    fn tables_match_brute_force_small() {
        let mut strings: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..7 {
            let mut next = Vec::new();
            for s in &strings {
                for a in *b"abc" {
                    let mut t = s.clone();
                    t.push(a);
                    next.push(t);
                }
            }
            for s in &next {
                let idx = PatternIndex::new(s).unwrap();
                let m = s.len();
                for i in 0..=m {
                    for a in *b"abc" {
                        if idx.code(a).is_some() {
                            assert_eq!(idx.step(i, a), brute_automaton(s, i, a));
                        }
                    }
                    for j in i..=m {
                        let border = s[..j].ends_with(&s[..i]);
                        assert_eq!(idx.comparable(i, j), border);
                        assert_eq!(idx.rev_is_ancestor(i, j), border);
                    }
                }
            }
            strings = next;
        }
    }
}
