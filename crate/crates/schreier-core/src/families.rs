//! The Schreier families `S_n` and `S_ω`: membership, maximality,
//! decomposition, spreads, squeezing, completion, and windowed enumeration.
//!
//! The family tower is defined recursively: `S_0` holds the empty set and
//! all singletons; a set lies in `S_{n+1}` when it splits into at most
//! `min F` consecutive blocks, each lying in `S_n`; and `S_ω` (with the
//! ladder fixed at `α_k = k`) holds `F` exactly when `F ∈ S_{min F}`. All
//! families here are *regular*: hereditary (subsets stay in), spreading
//! (moving elements up coordinate-wise stays in), and compact.
//!
//! The production membership test is a greedy longest-prefix parse, linear
//! in the set size per recursion level. Its agreement with the exponential
//! partition-search oracle in [`crate::oracle`] is a tested invariant of the
//! crate, not an assumption.
//!
//! Two structural facts, both consequences of the greedy parse and both
//! cross-checked against the oracle, do a lot of quiet work in this module:
//!
//! * **value independence** — for `l > max F`, whether `F ∪ {l}` is a member
//!   does not depend on the value of `l` (the parse only ever compares the
//!   new element's *position*, never its value, once it is the largest).
//!   Maximality is therefore decided by the single probe `F ∪ {max F + 1}`,
//!   and greedy completion always appends a consecutive run.
//! * **order clamping** — a member of any `S_n` is already a member of
//!   `S_{|F|}` (blocks of a witness decomposition are strictly smaller than
//!   `F`, so induction on the size bounds the order needed). Membership
//!   queries clamp `n` to `|F|`, which keeps recursion depth proportional to
//!   the set size even for `S_ω` and for astronomically large finite orders.

use alloc::vec;
use alloc::vec::Vec;

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A Schreier order: a finite level of the tower, or the first limit level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderIndex {
    /// The finite family `S_n`; `Finite(0)` is `S_0` (singletons and `∅`).
    Finite(u32),
    /// The limit family `S_ω` with the fixed ladder `α_k = k`.
    Omega,
}

impl OrderIndex {
    /// The finite level, if this is one.
    pub fn finite(self) -> Option<u32> {
        match self {
            OrderIndex::Finite(n) => Some(n),
            OrderIndex::Omega => None,
        }
    }
}

impl fmt::Display for OrderIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderIndex::Finite(n) => write!(f, "{n}"),
            OrderIndex::Omega => write!(f, "omega"),
        }
    }
}

impl FromStr for OrderIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<OrderIndex> {
        match s {
            "omega" | "w" | "ω" => Ok(OrderIndex::Omega),
            _ => s
                .parse::<u32>()
                .map(OrderIndex::Finite)
                .map_err(|_| Error::PreconditionViolated("order must be a natural number or ω")),
        }
    }
}

/// A finite set of positive integers, stored strictly increasing.
///
/// The derived `Ord` is lexicographic on the increasing element lists,
/// which is the tie-break order used by every search in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet {
    elems: Vec<u32>,
}

impl IndexSet {
    /// Validates that `elems` is strictly increasing with entries ≥ 1.
    pub fn new(elems: Vec<u32>) -> Result<IndexSet> {
        if elems.first().is_some_and(|&e| e == 0) {
            return Err(Error::PreconditionViolated("set elements must be ≥ 1"));
        }
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::PreconditionViolated(
                "set elements must be strictly increasing",
            ));
        }
        Ok(IndexSet { elems })
    }

    /// The empty set.
    pub fn empty() -> IndexSet {
        IndexSet::default()
    }

    /// A one-element set (`i ≥ 1`).
    pub fn singleton(i: u32) -> IndexSet {
        assert!(i >= 1, "indices start at 1");
        IndexSet { elems: vec![i] }
    }

    /// The consecutive run `{start, …, start + len − 1}`.
    pub fn run(start: u32, len: u32) -> IndexSet {
        assert!(start >= 1, "indices start at 1");
        IndexSet {
            elems: (start..start + len).collect(),
        }
    }

    /// Builds from any iterator of indices, sorting and deduplicating.
    pub fn from_indices<I: IntoIterator<Item = u32>>(iter: I) -> Result<IndexSet> {
        let mut elems: Vec<u32> = iter.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        IndexSet::new(elems)
    }

    /// The elements, strictly increasing.
    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// True iff the set is empty.
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Smallest element, if any.
    pub fn min_elem(&self) -> Option<u32> {
        self.elems.first().copied()
    }

    /// Largest element, if any.
    pub fn max_elem(&self) -> Option<u32> {
        self.elems.last().copied()
    }

    /// Membership of a single index.
    pub fn contains(&self, i: u32) -> bool {
        self.elems.binary_search(&i).is_ok()
    }

    /// True iff every element of `self` is an element of `other`.
    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.elems.iter().all(|&e| other.contains(e))
    }

    /// Set union.
    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut elems = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.elems.iter().peekable(), other.elems.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) if x < y => {
                    elems.push(x);
                    a.next();
                }
                (Some(&&x), Some(&&y)) if x > y => {
                    elems.push(y);
                    b.next();
                }
                (Some(&&x), Some(_)) => {
                    elems.push(x);
                    a.next();
                    b.next();
                }
                (Some(&&x), None) => {
                    elems.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    elems.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        IndexSet { elems }
    }

    /// Set difference `self ∖ other`.
    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            elems: self
                .elems
                .iter()
                .copied()
                .filter(|&e| !other.contains(e))
                .collect(),
        }
    }

    /// The set with `j` inserted; `j` must be absent.
    pub fn with_inserted(&self, j: u32) -> Result<IndexSet> {
        if j == 0 {
            return Err(Error::PreconditionViolated("set elements must be ≥ 1"));
        }
        match self.elems.binary_search(&j) {
            Ok(_) => Err(Error::PreconditionViolated("element already present")),
            Err(pos) => {
                let mut elems = self.elems.clone();
                elems.insert(pos, j);
                Ok(IndexSet { elems })
            }
        }
    }

    /// Iterates over the elements.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elems.iter().copied()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// The unique consecutive-block decomposition of a maximal set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Consecutive blocks `E_1 < … < E_d`, each maximal at `inner_order`.
    pub blocks: Vec<IndexSet>,
    /// The order of the individual blocks.
    pub inner_order: OrderIndex,
    /// The order of the set of block minima.
    pub outer_order: OrderIndex,
}

/// Evidence that a set belongs to a family; constructed only after the
/// membership check has actually run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCert {
    set: IndexSet,
    order: OrderIndex,
}

impl MembershipCert {
    /// The certified set.
    pub fn set(&self) -> &IndexSet {
        &self.set
    }

    /// The family it was certified against.
    pub fn order(&self) -> OrderIndex {
        self.order
    }

    /// Re-runs the membership check this certificate stands for.
    pub fn verify(&self) -> bool {
        is_member(&self.set, self.order)
    }
}

/// Default guard for exhaustive windowed enumeration.
pub const DEFAULT_WINDOW_LIMIT: u32 = 24;

/// Guard for greedy completion: the largest number of elements a completed
/// set may have before the operation refuses to materialize it. High-order
/// completions are *forced* to double block sizes, so a completion whose
/// minimum is large can genuinely need billions of elements; the guard turns
/// that into an error instead of an effectively unbounded allocation.
pub const COMPLETION_SIZE_LIMIT: usize = 1 << 21;

/// Length of the longest prefix of `xs` (nonempty, strictly increasing)
/// that belongs to `S_n`. Greedy: at level `n ≥ 1` it consumes up to
/// `xs[0]` longest `S_{n−1}`-prefixes. Greedy is exact here because a
/// longest prefix can always be traded into any witness decomposition
/// block-by-block (the oracle-agreement tests pin this down).
fn longest_prefix_len(xs: &[u32], n: u32) -> usize {
    debug_assert!(!xs.is_empty());
    if n == 0 {
        return 1;
    }
    // |prefix| ≤ min prefix already certifies membership at every order
    // ≥ 1; besides being fast, this bounds recursion depth by the set size
    // even when n is huge (the S_ω case goes through here).
    if xs.len() <= xs[0] as usize {
        return xs.len();
    }
    let capacity = xs[0] as usize;
    let mut pos = 0;
    let mut blocks = 0;
    while blocks < capacity && pos < xs.len() {
        pos += longest_prefix_len(&xs[pos..], n - 1);
        blocks += 1;
    }
    pos
}

/// Membership clamp: every member of any `S_n` is a member of `S_{|F|}`
/// (induction on size: witness blocks are proper subsets), so orders above
/// the set size never change the answer.
fn clamp_order(n: u32, len: usize) -> u32 {
    n.min(len.max(1) as u32)
}

/// Decides `F ∈ S_α`. Total: every input gets an answer.
pub fn is_member(set: &IndexSet, alpha: OrderIndex) -> bool {
    let xs = set.elems();
    if xs.is_empty() {
        return true;
    }
    let n = match alpha {
        OrderIndex::Finite(n) => n,
        // Ladder case: F ∈ S_ω iff F ∈ S_{min F}.
        OrderIndex::Omega => xs[0],
    };
    if n == 0 {
        return xs.len() <= 1;
    }
    longest_prefix_len(xs, clamp_order(n, xs.len())) == xs.len()
}

/// True iff `F ∪ {l} ∈ S_α` for one (equivalently, by value independence,
/// every) `l > max F`. The empty set always extends.
pub fn is_extendable(set: &IndexSet, alpha: OrderIndex) -> bool {
    let probe = match set.max_elem() {
        None => return true,
        Some(m) => set.with_inserted(m + 1).expect("m + 1 is absent"),
    };
    is_member(&probe, alpha)
}

/// Decides maximality of a member: `F ∈ S_α^MAX` iff no superset with a
/// larger element stays in the family. Single-probe by value independence.
pub fn is_maximal(set: &IndexSet, alpha: OrderIndex) -> Result<bool> {
    if !is_member(set, alpha) {
        return Err(Error::NotAMember);
    }
    if set.is_empty() {
        return Err(Error::PreconditionViolated("maximality needs a nonempty set"));
    }
    Ok(!is_extendable(set, alpha))
}

/// Splits a maximal set `F ∈ S_n^MAX` into its unique consecutive blocks
/// `E_1 < … < E_d`, each in `S_k^MAX`, whose minima form a set in
/// `S_{n−k}^MAX`. Greedy longest-prefix splitting produces exactly this
/// decomposition (a longer `S_k`-prefix would extend the first maximal
/// block, contradicting its maximality); the result is re-verified here.
pub fn decompose_maximal(set: &IndexSet, n: u32, k: u32) -> Result<BlockDecomposition> {
    if k > n {
        return Err(Error::PreconditionViolated("need 0 ≤ k ≤ n"));
    }
    if !is_maximal(set, OrderIndex::Finite(n))? {
        return Err(Error::NotMaximal);
    }
    let mut blocks = Vec::new();
    if k == n {
        blocks.push(set.clone());
    } else {
        let mut xs = set.elems();
        while !xs.is_empty() {
            let take = if k == 0 {
                1
            } else {
                longest_prefix_len(xs, clamp_order(k, xs.len()))
            };
            blocks.push(IndexSet::new(xs[..take].to_vec()).expect("sorted slice"));
            xs = &xs[take..];
        }
    }
    let mins = IndexSet::new(blocks.iter().map(|b| b.min_elem().expect("nonempty")).collect())
        .expect("block minima increase");
    let inner = OrderIndex::Finite(k);
    let outer = OrderIndex::Finite(n - k);
    for b in &blocks {
        assert!(
            is_maximal(b, inner).unwrap_or(false),
            "greedy block must be maximal at the inner order"
        );
    }
    assert!(
        is_maximal(&mins, outer).unwrap_or(false),
        "block minima must form a maximal set at the outer order"
    );
    Ok(BlockDecomposition {
        blocks,
        inner_order: inner,
        outer_order: outer,
    })
}

/// True iff `F` is a spread of `G`: same size and `G_i ≤ F_i` pointwise.
pub fn is_spread(g: &IndexSet, f: &IndexSet) -> bool {
    g.len() == f.len() && g.elems().iter().zip(f.elems()).all(|(&gi, &fi)| gi <= fi)
}

/// The squeezing certificate: if `G ∈ S_n^MAX`, `F` is a spread of `G` with
/// `min G < min F`, and `min G < j ∉ F`, then `{j} ∪ F ∈ S_n`. The
/// membership is checked, not trusted; a failure would falsify the
/// underlying combinatorial fact and panics.
pub fn squeeze_in(g: &IndexSet, f: &IndexSet, j: u32, n: u32) -> Result<MembershipCert> {
    let order = OrderIndex::Finite(n);
    if g.is_empty() {
        return Err(Error::PreconditionViolated("G must be nonempty"));
    }
    if !is_member(g, order) {
        return Err(Error::PreconditionViolated("G must be a member of S_n"));
    }
    if is_extendable(g, order) {
        return Err(Error::PreconditionViolated("G must be maximal in S_n"));
    }
    match (g.min_elem(), f.min_elem()) {
        (Some(gm), Some(fm)) if gm < fm => {}
        _ => return Err(Error::PreconditionViolated("need min G < min F")),
    }
    if !is_spread(g, f) {
        return Err(Error::PreconditionViolated("F must be a spread of G"));
    }
    if j <= g.min_elem().expect("nonempty") {
        return Err(Error::PreconditionViolated("need j > min G"));
    }
    if f.contains(j) {
        return Err(Error::PreconditionViolated("j must not lie in F"));
    }
    let set = f.with_inserted(j).expect("j is absent");
    assert!(
        is_member(&set, order),
        "{{j}} ∪ F must be a member whenever the hypotheses hold"
    );
    Ok(MembershipCert { set, order })
}

/// Greedy completion: the ⊆-smallest maximal superset of `F` whose added
/// elements are consecutive integers starting above `max(max F, floor)`.
///
/// Greedy means "repeatedly add the smallest admissible element"; by value
/// independence the smallest admissible element is always `current max + 1`
/// (or `floor + 1` for the first step), so the completion is `F` plus a
/// consecutive run whose length is found by doubling-then-bisecting on the
/// hereditary (hence monotone) membership predicate.
pub fn complete_to_maximal(set: &IndexSet, alpha: OrderIndex, floor: u32) -> Result<IndexSet> {
    if set.is_empty() {
        return Err(Error::PreconditionViolated("completion needs a nonempty set"));
    }
    if !is_member(set, alpha) {
        return Err(Error::NotAMember);
    }
    if floor < set.max_elem().expect("nonempty") {
        return Err(Error::PreconditionViolated("need floor ≥ max F"));
    }
    let base = floor.max(set.max_elem().expect("nonempty"));
    let with_run = |len: usize| -> IndexSet {
        if len == 0 {
            set.clone()
        } else {
            set.union(&IndexSet::run(base + 1, len as u32))
        }
    };
    if !is_member(&with_run(1), alpha) {
        // No admissible extension above the floor at all: by value
        // independence F itself is maximal.
        return Ok(set.clone());
    }
    // Membership of F ∪ {base+1, …, base+len} is downward monotone in len
    // (hereditariness), so the largest member run length is found by
    // exponential growth followed by binary search.
    let mut lo: usize = 1; // member
    let mut hi: usize = 2;
    while is_member(&with_run(hi), alpha) {
        lo = hi;
        hi *= 2;
        if hi > COMPLETION_SIZE_LIMIT {
            return Err(Error::ConstructionTooLarge {
                estimate: hi as u128,
            });
        }
    }
    // Invariant: run(lo) is a member, run(hi) is not.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if is_member(&with_run(mid), alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let completed = with_run(lo);
    debug_assert!(matches!(is_maximal(&completed, alpha), Ok(true)));
    Ok(completed)
}

/// Enumerates `S_α ∩ 2^[1,window]` in lexicographic order, optionally
/// filtered to sets maximal in ℕ (not merely in the window), under the
/// default window guard.
pub fn enumerate_family(
    alpha: OrderIndex,
    window: u32,
    only_maximal: bool,
) -> Result<Vec<IndexSet>> {
    enumerate_family_bounded(alpha, window, only_maximal, DEFAULT_WINDOW_LIMIT)
}

/// [`enumerate_family`] with an explicit guard limit (the CLI lets an
/// environment variable widen or narrow the default).
pub fn enumerate_family_bounded(
    alpha: OrderIndex,
    window: u32,
    only_maximal: bool,
    limit: u32,
) -> Result<Vec<IndexSet>> {
    if window < 1 || window > limit {
        return Err(Error::WindowTooLarge {
            requested: window,
            limit,
        });
    }
    let mut out = Vec::new();
    // Depth-first with ascending next elements visits members in
    // lexicographic order (a set precedes its extensions). A single
    // extendability probe per node covers all of its children at once,
    // again by value independence.
    fn visit(
        cur: &IndexSet,
        alpha: OrderIndex,
        window: u32,
        only_maximal: bool,
        out: &mut Vec<IndexSet>,
    ) {
        let extendable = is_extendable(cur, alpha);
        let keep = if only_maximal {
            !cur.is_empty() && !extendable
        } else {
            true
        };
        if keep {
            out.push(cur.clone());
        }
        if !extendable {
            return;
        }
        let from = cur.max_elem().map_or(1, |m| m + 1);
        for l in from..=window {
            let child = cur.with_inserted(l).expect("l exceeds max");
            visit(&child, alpha, window, only_maximal, out);
        }
    }
    visit(&IndexSet::empty(), alpha, window, only_maximal, &mut out);
    Ok(out)
}
