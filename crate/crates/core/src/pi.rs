//! Prefix-incomparable match sets and the procedures that advance them
//! across a vertex.
//!
//! `B_v` (every prefix length spelled by some path ending at `v`) is closed
//! under borders, so it is represented by its maximal elements in the
//! failure tree: the unique antichain `PI_v` dominating it. A [`PiSet`] is
//! kept sorted by the reversed-suffix rank of its elements.
//!
//! All four merges compute the same set; they differ only in cost:
//! quadratic in the input mass, `w^2` per in-neighbor, a sort plus a
//! linear scan, and linear in the input mass.

use crate::pattern::PatternIndex;

/// Antichain of prefix lengths, sorted by [`PatternIndex::rev_rank`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiSet(Vec<u32>);

impl PiSet {
    /// `{0}`: only the empty match.
    pub fn empty_match() -> Self {
        PiSet(vec![0])
    }

    /// Builds a set from arbitrary prefix lengths, reducing them to their
    /// dominating antichain.
    pub fn from_lengths(idx: &PatternIndex, lengths: &[usize]) -> Self {
        let mut xs: Vec<u32> = lengths.iter().map(|&x| x as u32).collect();
        xs.sort_unstable_by_key(|&x| idx.rev_rank(x as usize));
        let mut out = Vec::with_capacity(xs.len());
        reduce_rev(idx, &xs, &mut out);
        PiSet::finish(out)
    }

    pub(crate) fn from_raw(items: Vec<u32>) -> Self {
        PiSet(items)
    }

    fn finish(items: Vec<u32>) -> Self {
        if items.is_empty() {
            PiSet::empty_match()
        } else {
            PiSet(items)
        }
    }

    pub fn items(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.iter().any(|&x| x as usize == i)
    }

    /// Elements by increasing prefix length.
    pub fn sorted_lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.0.iter().map(|&x| x as usize).collect();
        v.sort_unstable();
        v
    }

    /// Whether the items are pairwise incomparable and rev-rank sorted.
    pub fn is_valid(&self, idx: &PatternIndex) -> bool {
        let sorted = self.0.windows(2).all(|w| idx.rev_rank(w[0] as usize) < idx.rev_rank(w[1] as usize));
        let antichain = self.0.iter().enumerate().all(|(a, &x)| {
            self.0[a + 1..].iter().all(|&y| !idx.comparable(x as usize, y as usize))
        });
        sorted && antichain
    }
}

/// Single left-to-right scan over values sorted by failure-tree preorder
/// (`open`): a value is dropped when it is an ancestor of its successor.
/// Retained values keep their relative order.
pub fn reduce_to_antichain(idx: &PatternIndex, xs: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(xs.len());
    for (t, &x) in xs.iter().enumerate() {
        match xs.get(t + 1) {
            Some(&y) if idx.is_ancestor(x, y) => {}
            _ => out.push(x),
        }
    }
    out
}

/// [`reduce_to_antichain`] for values sorted by reversed-suffix rank.
fn reduce_rev(idx: &PatternIndex, xs: &[u32], out: &mut Vec<u32>) {
    for (t, &x) in xs.iter().enumerate() {
        match xs.get(t + 1) {
            Some(&y) if idx.rev_is_ancestor(x as usize, y as usize) => {}
            _ => out.push(x),
        }
    }
}

fn sort_canonical(idx: &PatternIndex, mut items: Vec<u32>) -> PiSet {
    items.sort_unstable_by_key(|&x| idx.rev_rank(x as usize));
    PiSet::finish(items)
}

/// Match state of a vertex without in-neighbors.
pub fn step_source(idx: &PatternIndex, label: u8) -> PiSet {
    if label == idx.symbol(1) {
        PiSet(vec![1])
    } else {
        PiSet::empty_match()
    }
}

/// Removes every element that is an ancestor of (or a duplicate of) another
/// one by testing all pairs.
fn quadratic_reduce(idx: &PatternIndex, list: &[u32]) -> Vec<u32> {
    let mut alive = vec![true; list.len()];
    for a in 0..list.len() {
        for b in a + 1..list.len() {
            if !alive[a] || !alive[b] {
                continue;
            }
            let (x, y) = (list[a] as usize, list[b] as usize);
            if x == y || (x < y && idx.is_ancestor(x, y)) {
                alive[a] = false;
            } else if y < x && idx.is_ancestor(y, x) {
                alive[b] = false;
            }
        }
    }
    list.iter().zip(alive).filter_map(|(&x, keep)| keep.then_some(x)).collect()
}

fn advance_all(idx: &PatternIndex, set: &PiSet, label: u8, out: &mut Vec<u32>) {
    out.extend(set.0.iter().map(|&i| idx.step(i as usize, label) as u32));
}

/// Maps every element of every input through the automaton, then checks all
/// pairs. `O(k^2)` comparisons for `k` = total input size.
pub fn merge_quadratic(idx: &PatternIndex, ins: &[&PiSet], label: u8) -> PiSet {
    if ins.is_empty() {
        return step_source(idx, label);
    }
    let mut list = Vec::new();
    for set in ins {
        advance_all(idx, set, label, &mut list);
    }
    sort_canonical(idx, quadratic_reduce(idx, &list))
}

/// Processes in-neighbors one at a time, keeping a running antichain.
pub fn merge_incremental(idx: &PatternIndex, ins: &[&PiSet], label: u8) -> PiSet {
    if ins.is_empty() {
        return step_source(idx, label);
    }
    let mut current: Vec<u32> = Vec::new();
    for set in ins {
        advance_all(idx, set, label, &mut current);
        current = quadratic_reduce(idx, &current);
    }
    sort_canonical(idx, current)
}

/// Sorts the mapped values by failure-tree preorder and reduces in one scan.
pub fn merge_sorted(idx: &PatternIndex, ins: &[&PiSet], label: u8) -> PiSet {
    if ins.is_empty() {
        return step_source(idx, label);
    }
    let mut list = Vec::new();
    for set in ins {
        advance_all(idx, set, label, &mut list);
    }
    list.sort_unstable_by_key(|&x| idx.open(x as usize));
    let mut out = Vec::with_capacity(list.len());
    for (t, &x) in list.iter().enumerate() {
        match list.get(t + 1) {
            Some(&y) if idx.is_ancestor(x as usize, y as usize) => {}
            _ => out.push(x),
        }
    }
    sort_canonical(idx, out)
}

/// Linear-time merge over rev-rank sorted inputs.
pub fn merge_linear(idx: &PatternIndex, ins: &[&PiSet], label: u8) -> PiSet {
    if ins.is_empty() {
        return step_source(idx, label);
    }
    let mut merger = Merger::new(idx);
    let mut out = Vec::new();
    merger.merge_linear(ins.iter().map(|s| s.items()), label, &mut out);
    PiSet(out)
}

/// Scratch buffers for repeated linear merges.
pub(crate) struct Merger<'a> {
    idx: &'a PatternIndex,
    runs: Vec<u32>,
    bounds: Vec<usize>,
    matched: Vec<u32>,
    fallback: Vec<u32>,
    reduced: Vec<u32>,
    spare: Vec<u32>,
    spare_bounds: Vec<usize>,
}

impl<'a> Merger<'a> {
    pub(crate) fn new(idx: &'a PatternIndex) -> Self {
        Merger {
            idx,
            runs: Vec::new(),
            bounds: Vec::new(),
            matched: Vec::new(),
            fallback: Vec::new(),
            reduced: Vec::new(),
            spare: Vec::new(),
            spare_bounds: Vec::new(),
        }
    }

    /// Writes the merged antichain (rev-rank sorted) into `out`.
    pub(crate) fn merge_linear<'s, I>(&mut self, ins: I, label: u8, out: &mut Vec<u32>)
    where
        I: IntoIterator<Item = &'s [u32]>,
    {
        out.clear();
        let idx = self.idx;
        let Some(code) = idx.code(label) else {
            out.push(0);
            return;
        };
        self.runs.clear();
        self.bounds.clear();
        self.bounds.push(0);
        for set in ins {
            self.advance_one(set, code as u32);
            self.bounds.push(self.runs.len());
        }
        self.combine_runs();
        reduce_rev(idx, &self.runs, out);
        if out.is_empty() {
            out.push(0);
        }
    }

    /// Appends the rev-sorted image of one input set to `self.runs`.
    fn advance_one(&mut self, set: &[u32], code: u32) {
        let idx = self.idx;
        self.matched.clear();
        self.fallback.clear();
        for &i in set {
            if idx.next_code(i as usize) == Some(code) {
                // Prepending the same symbol keeps reversed-prefix order.
                self.matched.push(i + 1);
            } else {
                let t = idx.step_code(i as usize, code as usize);
                if t == 0 {
                    continue;
                }
                // t - 1 is a border of i; an out-of-order value is a border of
                // the value before it and is dominated.
                let node = (t - 1) as u32;
                if let Some(&last) = self.fallback.last() {
                    if idx.rev_rank(node as usize) <= idx.rev_rank(last as usize) {
                        continue;
                    }
                }
                self.fallback.push(node);
            }
        }
        self.reduced.clear();
        reduce_rev(idx, &self.fallback, &mut self.reduced);
        for x in self.reduced.iter_mut() {
            *x += 1;
        }
        merge_by_rank(idx, &self.matched, &self.reduced, &mut self.runs);
    }

    /// Pairwise merges of the sorted runs until one remains.
    fn combine_runs(&mut self) {
        let idx = self.idx;
        while self.bounds.len() > 2 {
            self.spare.clear();
            self.spare_bounds.clear();
            self.spare_bounds.push(0);
            let mut r = 0;
            while r + 1 < self.bounds.len() {
                let a = &self.runs[self.bounds[r]..self.bounds[r + 1]];
                if r + 2 < self.bounds.len() {
                    let b = &self.runs[self.bounds[r + 1]..self.bounds[r + 2]];
                    merge_by_rank(idx, a, b, &mut self.spare);
                    r += 2;
                } else {
                    self.spare.extend_from_slice(a);
                    r += 1;
                }
                self.spare_bounds.push(self.spare.len());
            }
            std::mem::swap(&mut self.runs, &mut self.spare);
            std::mem::swap(&mut self.bounds, &mut self.spare_bounds);
        }
    }
}

fn merge_by_rank(idx: &PatternIndex, a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if idx.rev_rank(a[i] as usize) <= idx.rev_rank(b[j] as usize) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
