//! Exact sparse vectors and the norm machinery of `X^p_{S_α}`.
//!
//! The norm is `‖x‖ = sup_F (Σ_{i∈F} |x_i|^p)^(1/p)` over family members
//! `F`; everything here works with the p-th powers, which are exact
//! rationals for [`SparseVector`] coordinates. The supremum is computed by
//! depth-first branch-and-bound over the support: hereditariness makes
//! "extend the current prefix" a complete search, value independence makes
//! one extendability probe per node cover all children, and a
//! remaining-mass bound prunes. The same engine runs on rational masses and
//! on [`Radical`] masses (needed to verify norms of the reflected
//! saturation branch), via the small [`Mass`] abstraction.
//!
//! Besides the norm, this module computes the certificate data the
//! extreme-point theory consumes: the family `A_x` of admissible sets whose
//! mass sum is exactly 1 (zero coordinates allowed), the 1-sets (those
//! inside the support), the ε-gap (distance from 1 down to the best
//! sub-unit admissible sum), and per-index coverage maxima.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::families::{self, IndexSet, OrderIndex, DEFAULT_WINDOW_LIMIT};
use crate::scalar::{PScalar, Radical, Sign};

/// Cap on the number of sets materialized into a [`GapReport`]. `A_x` can
/// be exponentially large (every zero coordinate can pad every 1-set), so
/// reports refuse to materialize beyond this many sets.
pub const GAP_REPORT_SIZE_LIMIT: usize = 1 << 16;

/// A finitely supported vector with exact `sign·(mag_p)^(1/p)` entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVector {
    p: u32,
    entries: BTreeMap<u32, PScalar>,
}

impl SparseVector {
    /// The zero vector in `X^p`.
    pub fn new(p: u32) -> SparseVector {
        assert!(p >= 1, "exponent p must be positive");
        SparseVector {
            p,
            entries: BTreeMap::new(),
        }
    }

    /// The basis vector `e_i`.
    pub fn unit(p: u32, i: u32) -> SparseVector {
        let mut v = SparseVector::new(p);
        v.set_entry(i, PScalar::new(p, Sign::Pos, BigRational::one()).expect("valid"));
        v
    }

    /// Builds from `(index, entry)` pairs; entries must share `p`, indices
    /// must be ≥ 1 and distinct. Zero entries are dropped.
    pub fn from_entries<I>(p: u32, entries: I) -> Result<SparseVector>
    where
        I: IntoIterator<Item = (u32, PScalar)>,
    {
        let mut v = SparseVector::new(p);
        for (i, s) in entries {
            if i == 0 {
                return Err(Error::PreconditionViolated("indices start at 1"));
            }
            if s.p() != p {
                return Err(Error::PreconditionViolated(
                    "all entries must share the exponent",
                ));
            }
            if v.entries.contains_key(&i) {
                return Err(Error::PreconditionViolated("duplicate index"));
            }
            v.set_entry(i, s);
        }
        Ok(v)
    }

    /// Builds from rational *values* (so `mag_p = |value|^p`).
    pub fn from_values<I>(p: u32, values: I) -> Result<SparseVector>
    where
        I: IntoIterator<Item = (u32, BigRational)>,
    {
        SparseVector::from_entries(
            p,
            values
                .into_iter()
                .map(|(i, v)| (i, PScalar::from_value(p, &v))),
        )
    }

    /// Builds from nonnegative `mag_p` values with positive sign.
    pub fn from_mag_p<I>(p: u32, mags: I) -> Result<SparseVector>
    where
        I: IntoIterator<Item = (u32, BigRational)>,
    {
        let mut entries = Vec::new();
        for (i, m) in mags {
            if m.is_zero() {
                continue;
            }
            entries.push((i, PScalar::new(p, Sign::Pos, m)?));
        }
        SparseVector::from_entries(p, entries)
    }

    /// The exponent context.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Writes an entry; a zero scalar erases the slot.
    pub fn set_entry(&mut self, i: u32, s: PScalar) {
        assert!(i >= 1, "indices start at 1");
        assert_eq!(s.p(), self.p, "exponent contexts must match");
        if s.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, s);
        }
    }

    /// The entry at `i` (zero when absent).
    pub fn get(&self, i: u32) -> PScalar {
        self.entries
            .get(&i)
            .cloned()
            .unwrap_or_else(|| PScalar::zero(self.p))
    }

    /// `mag_p` at `i` (zero when absent).
    pub fn mag_p_at(&self, i: u32) -> BigRational {
        self.entries
            .get(&i)
            .map(|s| s.mag_p().clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Iterates `(index, entry)` in increasing index order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &PScalar)> + '_ {
        self.entries.iter().map(|(&i, s)| (i, s))
    }

    /// The support as a set.
    pub fn support(&self) -> IndexSet {
        IndexSet::new(self.entries.keys().copied().collect()).expect("BTreeMap keys increase")
    }

    /// Largest supported index, if any.
    pub fn max_support(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    /// Number of nonzero coordinates.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// True iff this is the zero vector.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The vector scaled by a rational factor.
    pub fn scale(&self, c: &BigRational) -> SparseVector {
        let mut v = SparseVector::new(self.p);
        if c.is_zero() {
            return v;
        }
        for (&i, s) in &self.entries {
            v.set_entry(i, s.scale(c));
        }
        v
    }

    /// Exact coordinatewise sum. Fails with [`Error::MixedRadicals`] only
    /// when two incommensurable irrational coordinates meet at one index,
    /// which the decomposition pipeline never does to the vectors it keeps
    /// in this type.
    pub fn add(&self, other: &SparseVector) -> Result<SparseVector> {
        assert_eq!(self.p, other.p, "exponent contexts must match");
        let mut v = self.clone();
        for (&i, s) in &other.entries {
            let sum = v.get(i).add(s)?;
            v.set_entry(i, sum);
        }
        Ok(v)
    }

    /// Exact coordinatewise difference.
    pub fn sub(&self, other: &SparseVector) -> Result<SparseVector> {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Restriction to the indices in `window` (a plain truncation).
    pub fn restrict<F: Fn(u32) -> bool>(&self, keep: F) -> SparseVector {
        let mut v = SparseVector::new(self.p);
        for (&i, s) in &self.entries {
            if keep(i) {
                v.set_entry(i, s.clone());
            }
        }
        v
    }

    /// The vector as a radical-coordinate vector.
    pub fn to_radical_vector(&self) -> RadicalVector {
        let mut v = RadicalVector::new(self.p);
        for (&i, s) in &self.entries {
            v.set_entry(i, s.to_radical());
        }
        v
    }

    /// The support masses `(index, mag_p)`, increasing in index.
    fn masses(&self) -> Vec<(u32, BigRational)> {
        self.entries
            .iter()
            .map(|(&i, s)| (i, s.mag_p().clone()))
            .collect()
    }
}

/// A finitely supported vector whose coordinates are [`Radical`] sums.
/// This is the coordinate type forced on the reflected saturation branch
/// for `p ≥ 2`; for everything else it is a lossless superset of
/// [`SparseVector`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalVector {
    p: u32,
    entries: BTreeMap<u32, Radical>,
}

impl RadicalVector {
    /// The zero vector.
    pub fn new(p: u32) -> RadicalVector {
        assert!(p >= 1, "exponent p must be positive");
        RadicalVector {
            p,
            entries: BTreeMap::new(),
        }
    }

    /// The exponent context.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Writes an entry; zero erases.
    pub fn set_entry(&mut self, i: u32, r: Radical) {
        assert!(i >= 1, "indices start at 1");
        assert_eq!(r.p(), self.p, "exponent contexts must match");
        if r.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, r);
        }
    }

    /// The entry at `i` (zero when absent).
    pub fn get(&self, i: u32) -> Radical {
        self.entries
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Radical::zero(self.p))
    }

    /// Iterates `(index, entry)` in increasing index order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &Radical)> + '_ {
        self.entries.iter().map(|(&i, r)| (i, r))
    }

    /// The support as a set.
    pub fn support(&self) -> IndexSet {
        IndexSet::new(self.entries.keys().copied().collect()).expect("BTreeMap keys increase")
    }

    /// Exact coordinatewise sum (total: radicals are closed under it).
    pub fn add(&self, other: &RadicalVector) -> RadicalVector {
        assert_eq!(self.p, other.p, "exponent contexts must match");
        let mut v = self.clone();
        for (&i, r) in &other.entries {
            let sum = v.get(i).add(r);
            v.set_entry(i, sum);
        }
        v
    }

    /// Exact coordinatewise difference.
    pub fn sub(&self, other: &RadicalVector) -> RadicalVector {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// The vector scaled by a rational factor.
    pub fn scale(&self, c: &BigRational) -> RadicalVector {
        let mut v = RadicalVector::new(self.p);
        if c.is_zero() {
            return v;
        }
        for (&i, r) in &self.entries {
            v.set_entry(i, r.scale(c));
        }
        v
    }

    /// Converts back to single-radical coordinates when every entry permits.
    pub fn to_sparse(&self) -> Option<SparseVector> {
        let mut v = SparseVector::new(self.p);
        for (&i, r) in &self.entries {
            v.set_entry(i, r.to_pscalar()?);
        }
        Some(v)
    }

    /// The support masses `|entry|^p` as radicals, increasing in index.
    fn masses(&self) -> Vec<(u32, Radical)> {
        self.entries
            .iter()
            .map(|(&i, r)| (i, r.abs_pow_p()))
            .collect()
    }
}

/// Exact evidence for a computed norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormWitness {
    /// `‖x‖^p`, exactly.
    pub value_p: BigRational,
    /// A family member achieving the supremum (lexicographically least).
    pub witness: IndexSet,
}

impl NormWitness {
    /// Re-checks the local witness conditions: the witness is a family
    /// member and its mass sum equals `value_p`.
    pub fn certifies(&self, x: &SparseVector, alpha: OrderIndex) -> bool {
        let sum: BigRational = self.witness.iter().map(|i| x.mag_p_at(i)).sum();
        families::is_member(&self.witness, alpha) && sum == self.value_p
    }
}

/// The ε-gap report: `A_x`, the 1-sets, and the gap itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    /// `1 −` (best admissible sub-unit mass sum); `1` when only the empty
    /// sum stays below the unit.
    pub epsilon_x: BigRational,
    /// All `F ⊆ [1, max supp x]` with `F ∈ S_α` and mass sum exactly 1
    /// (zero coordinates allowed), lexicographically ordered.
    pub a_x: Vec<IndexSet>,
    /// The members of `A_x` avoiding zero coordinates, i.e. `F ⊆ supp x`.
    pub one_sets: Vec<IndexSet>,
}

/// Abstraction over exact mass types the search engine can sum and compare.
pub(crate) trait Mass: Clone {
    fn mass_add(&self, other: &Self) -> Self;
    fn mass_cmp(&self, other: &Self) -> Ordering;
}

impl Mass for BigRational {
    fn mass_add(&self, other: &Self) -> Self {
        self + other
    }
    fn mass_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Mass for Radical {
    fn mass_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mass_cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

/// Branch-and-bound over admissible subsets of the mass support.
///
/// Searches `max Σ_{i∈F} mass(i)` over `F ∈ S_α` with `F ⊆ {indices}`,
/// optionally forcing one index into `F` and optionally only counting sums
/// strictly below a bound. Returns the best sum with its lexicographically
/// least witness, or `None` when nothing qualifies (only possible under
/// `force`/`below`). Masses must be nonnegative.
pub(crate) fn search_admissible<S: Mass>(
    masses: &[(u32, S)],
    alpha: OrderIndex,
    zero: S,
    force: Option<u32>,
    below: Option<&S>,
) -> Option<(S, IndexSet)> {
    debug_assert!(masses.windows(2).all(|w| w[0].0 < w[1].0));
    // Suffix sums for the remaining-mass prune.
    let mut suffix = alloc::vec![zero.clone(); masses.len() + 1];
    for k in (0..masses.len()).rev() {
        suffix[k] = suffix[k + 1].mass_add(&masses[k].1);
    }
    struct State<'a, S> {
        masses: &'a [(u32, S)],
        suffix: &'a [S],
        alpha: OrderIndex,
        force: Option<u32>,
        below: Option<&'a S>,
        best: Option<(S, Vec<u32>)>,
    }
    fn dfs<S: Mass>(st: &mut State<'_, S>, prefix: &mut Vec<u32>, sum: &S, from: usize) {
        let forced_ok = st.force.is_none_or(|f| prefix.binary_search(&f).is_ok());
        let below_ok = st
            .below
            .is_none_or(|b| sum.mass_cmp(b) == Ordering::Less);
        if forced_ok && below_ok {
            let better = match &st.best {
                None => true,
                Some((bs, _)) => sum.mass_cmp(bs) == Ordering::Greater,
            };
            if better {
                st.best = Some((sum.clone(), prefix.clone()));
            }
        }
        // Nonnegative masses: once at or above a strict bound, every
        // extension stays there.
        if let Some(b) = st.below {
            if sum.mass_cmp(b) != Ordering::Less {
                return;
            }
        }
        if from == st.masses.len() {
            return;
        }
        // The forced index, if not yet taken, must still be reachable.
        if let Some(f) = st.force {
            if prefix.binary_search(&f).is_err() && st.masses[from].0 > f {
                return;
            }
        }
        // Remaining-mass prune: the subtree cannot strictly beat the best.
        if let Some((bs, _)) = &st.best {
            let reach = sum.mass_add(&st.suffix[from]);
            if st.force.is_none_or(|f| prefix.binary_search(&f).is_ok())
                && reach.mass_cmp(bs) != Ordering::Greater
            {
                return;
            }
        }
        // One extendability probe covers all children (value independence).
        let as_set = IndexSet::new(prefix.clone()).expect("prefix increases");
        if !families::is_extendable(&as_set, st.alpha) {
            return;
        }
        for j in from..st.masses.len() {
            prefix.push(st.masses[j].0);
            let next = sum.mass_add(&st.masses[j].1);
            dfs(st, prefix, &next, j + 1);
            prefix.pop();
        }
    }
    let mut st = State {
        masses,
        suffix: &suffix,
        alpha,
        force,
        below,
        best: None,
    };
    dfs(&mut st, &mut Vec::new(), &zero, 0);
    st.best.map(|(s, elems)| {
        (
            s,
            IndexSet::new(elems).expect("witness elements increase"),
        )
    })
}

/// The exact norm with witness. `value_p = ‖x‖^p` as a rational.
pub fn norm(x: &SparseVector, alpha: OrderIndex) -> NormWitness {
    let (value_p, witness) = search_admissible(
        &x.masses(),
        alpha,
        BigRational::zero(),
        None,
        None,
    )
    .expect("unforced unbounded search always yields the empty set");
    NormWitness { value_p, witness }
}

/// The exact norm of a radical-coordinate vector: `‖x‖^p` as a radical,
/// with the witness set.
pub fn norm_radical(x: &RadicalVector, alpha: OrderIndex) -> (Radical, IndexSet) {
    search_admissible(&x.masses(), alpha, Radical::zero(x.p()), None, None)
        .expect("unforced unbounded search always yields the empty set")
}

/// True iff `‖x‖^p = 1` exactly.
pub fn is_unit_norm(x: &SparseVector, alpha: OrderIndex) -> bool {
    norm(x, alpha).value_p.is_one()
}

/// Exact norm value at orders 0–2 for nonnegative masses sitting on a
/// contiguous index block and nonincreasing along it — the shape repeated
/// averaging produces. Returns `None` when the input is outside this shape
/// or the order is higher, and the caller falls back to [`norm`].
///
/// The point is scale: averaged supports run to thousands of indices, where
/// branch-and-bound stalls. Monotonicity collapses the search instead:
///
/// * order 0: members are singletons, so the norm is the first mass;
/// * order 1: a member with min `j` has at most `j` elements, all `≥ j`, so
///   the leftmost interval starting at `j` of the same size dominates it
///   and is itself admissible — scan intervals `[j, j + min(j, rest) − 1]`;
/// * order 2: a member is at most `d ≤ min F` consecutive order-1 blocks.
///   Walking the blocks left to right and replacing each by the leftmost
///   same-size interval above the previous replacement keeps the minima
///   (hence admissibility) and never loses mass, so only families of
///   disjoint ordered intervals compete, each of size at most its own start
///   and at most (first start) many in total. A DP over (position,
///   intervals remaining) maximizes over those.
///
/// The interval budget in the DP is capped at `⌈log₂(max element)⌉ + 1`:
/// when the real budget `d` exceeds the cap, the saturated chain
/// `[j, 2j), [2j, 4j), …` fits within the cap, swallows the entire window
/// from `j` on, and so dominates every deeper family outright.
pub(crate) fn monotone_norm_value(
    masses: &[(u32, BigRational)],
    alpha: OrderIndex,
) -> Option<BigRational> {
    let order = match alpha {
        OrderIndex::Finite(n) if n <= 2 => n,
        _ => return None,
    };
    let first = masses.first()?.0;
    for (idx, (i, m)) in masses.iter().enumerate() {
        if u64::from(*i) != u64::from(first) + idx as u64 || m.is_negative() {
            return None;
        }
        if idx > 0 && masses[idx - 1].1 < *m {
            return None;
        }
    }
    if order == 0 {
        return Some(masses[0].1.clone());
    }

    // Common-denominator u128 arithmetic when it fits; the total is
    // bound-checked too, so the prefix sums in the maximization cannot
    // overflow. Otherwise the same computation runs over `BigRational`.
    let mut lcd = BigInt::one();
    for (_, m) in masses {
        lcd = lcd.lcm(m.denom());
    }
    let numerators: Option<Vec<u128>> = lcd.to_u128().and_then(|_| {
        let mut out = Vec::with_capacity(masses.len());
        let mut total: u128 = 0;
        for (_, m) in masses {
            let n = (m.numer() * (&lcd / m.denom())).to_u128()?;
            total = total.checked_add(n)?;
            out.push(n);
        }
        Some(out)
    });
    if let Some(nums) = numerators {
        let best = monotone_best(&nums, u128::from(first), order);
        return Some(BigRational::new(best.into(), lcd));
    }
    let values: Vec<BigRational> = masses.iter().map(|(_, m)| m.clone()).collect();
    Some(monotone_best(&values, u128::from(first), order))
}

/// The interval maximization behind [`monotone_norm_value`], generic over
/// the exact arithmetic. `nums[idx]` is the mass of element `first + idx`.
fn monotone_best<T>(nums: &[T], first: u128, order: u32) -> T
where
    T: Clone + Ord + Zero,
    for<'a> &'a T: core::ops::Add<&'a T, Output = T> + core::ops::Sub<&'a T, Output = T>,
{
    let len = nums.len();
    let mut pref: Vec<T> = Vec::with_capacity(len + 1);
    pref.push(T::zero());
    for n in nums {
        let last = pref.last().expect("prefix sums start nonempty");
        pref.push(last + n);
    }
    let intmass = |f: usize, c: usize| -> T { &pref[f + c] - &pref[f] };
    let elem = |idx: usize| -> u128 { first + idx as u128 };
    let span = |idx: usize| -> usize {
        usize::try_from(elem(idx).min((len - idx) as u128)).expect("span fits the window")
    };

    if order == 1 {
        let mut best = T::zero();
        for idx in 0..len {
            best = best.max(intmass(idx, span(idx)));
        }
        return best;
    }

    // Interval budget cap: beyond ⌈log₂(max element)⌉ + 1 intervals the
    // saturated chain already covers everything reachable.
    let max_el = elem(len - 1);
    let mut cap = 1usize;
    while (1u128 << cap) <= max_el {
        cap += 1;
    }
    cap += 1;

    // tail[f][r]: best mass from at most r further intervals placed in
    // positions ≥ f, each interval sized at most its own start element.
    let mut tail: Vec<Vec<T>> = alloc::vec![alloc::vec![T::zero(); cap + 1]; len + 1];
    for f in (0..len).rev() {
        for r in 1..=cap {
            let mut best = tail[f + 1][r].clone();
            for c in 1..=span(f) {
                let cand = &intmass(f, c) + &tail[f + c][r - 1];
                best = best.max(cand);
            }
            tail[f][r] = best;
        }
    }

    // The first interval pins d ≤ min F = its start element; it must start
    // exactly where the member's minimum is, so scan all starts.
    let mut best = T::zero();
    for idx in 0..len {
        let budget = usize::try_from(elem(idx).min(cap as u128)).expect("cap is tiny");
        for c in 1..=span(idx) {
            let cand = &intmass(idx, c) + &tail[idx + c][budget - 1];
            best = best.max(cand);
        }
    }
    best
}

/// The best admissible mass sum strictly below 1 using only support
/// indices, with its witness. For a norm-one vector this is `1 − ε_x`;
/// hereditariness means restricting to the support loses nothing.
pub fn best_sub_unit(x: &SparseVector, alpha: OrderIndex) -> (BigRational, IndexSet) {
    let one = BigRational::one();
    search_admissible(&x.masses(), alpha, BigRational::zero(), None, Some(&one))
        .expect("the empty sum is always below 1")
}

/// The largest admissible mass sum over sets containing `i`, where the set
/// may use `i` itself even off the support (zero coordinates of member sets
/// never change sums, so only `supp x ∪ {i}` needs searching).
pub fn max_sum_containing(x: &SparseVector, i: u32, alpha: OrderIndex) -> (BigRational, IndexSet) {
    assert!(i >= 1, "indices start at 1");
    let mut masses = x.masses();
    if !x.support().contains(i) {
        let pos = masses.partition_point(|&(j, _)| j < i);
        masses.insert(pos, (i, BigRational::zero()));
    }
    search_admissible(&masses, alpha, BigRational::zero(), Some(i), None)
        .expect("the singleton {i} is admissible in every family")
}

/// The smallest `i ≤ max supp x` not covered by any unit-sum admissible
/// set, if one exists. `x` must have norm one.
pub fn uncovered_index(x: &SparseVector, alpha: OrderIndex) -> Result<Option<u32>> {
    if !is_unit_norm(x, alpha) {
        return Err(Error::NotUnitNorm);
    }
    let m = x.max_support().expect("norm-one vectors are nonzero");
    for i in 1..=m {
        if !max_sum_containing(x, i, alpha).0.is_one() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Enumerates the 1-sets (admissible `G ⊆ supp x` with mass sum exactly 1)
/// without any window guard: the search never leaves the support. Prunes
/// sums above 1, so it assumes `‖x‖ ≤ 1` to be complete. Lexicographic
/// order.
pub(crate) fn one_sets_support(x: &SparseVector, alpha: OrderIndex) -> Vec<IndexSet> {
    let masses = x.masses();
    let one = BigRational::one();
    let mut out = Vec::new();
    fn visit(
        masses: &[(u32, BigRational)],
        alpha: OrderIndex,
        cur: &mut Vec<u32>,
        sum: &BigRational,
        from: usize,
        one: &BigRational,
        out: &mut Vec<IndexSet>,
    ) {
        if sum == one {
            out.push(IndexSet::new(cur.clone()).expect("increasing"));
        }
        let as_set = IndexSet::new(cur.clone()).expect("increasing");
        if !families::is_extendable(&as_set, alpha) {
            return;
        }
        for j in from..masses.len() {
            let next = sum + &masses[j].1;
            if next > *one {
                continue;
            }
            cur.push(masses[j].0);
            visit(masses, alpha, cur, &next, j + 1, one, out);
            cur.pop();
        }
    }
    visit(
        &masses,
        alpha,
        &mut Vec::new(),
        &BigRational::zero(),
        0,
        &one,
        &mut out,
    );
    out
}

/// Materializes `A_x` and the 1-sets. Requires `‖x‖ = 1`.
pub fn unit_sets(x: &SparseVector, alpha: OrderIndex) -> Result<GapReport> {
    gap_report(x, alpha)
}

/// The full gap report: `ε_x`, `A_x`, 1-sets. Requires `‖x‖ = 1`.
pub fn epsilon_gap(x: &SparseVector, alpha: OrderIndex) -> Result<GapReport> {
    gap_report(x, alpha)
}

fn gap_report(x: &SparseVector, alpha: OrderIndex) -> Result<GapReport> {
    if !is_unit_norm(x, alpha) {
        return Err(Error::NotUnitNorm);
    }
    let epsilon_x = BigRational::one() - best_sub_unit(x, alpha).0;
    let m = x.max_support().expect("norm-one vectors are nonzero");
    if m > DEFAULT_WINDOW_LIMIT {
        return Err(Error::WindowTooLarge {
            requested: m,
            limit: DEFAULT_WINDOW_LIMIT,
        });
    }
    // Enumerate every member of S_α within [1, m] whose mass sum is exactly
    // 1. DFS in lexicographic order with two prunes: a sum can never come
    // back down (masses ≥ 0), and a sum that cannot reach 1 with all
    // remaining support mass is dead.
    let mut a_x: Vec<IndexSet> = Vec::new();
    let support = x.support();
    let one = BigRational::one();
    fn visit(
        x: &SparseVector,
        alpha: OrderIndex,
        m: u32,
        cur: &mut Vec<u32>,
        sum: &BigRational,
        out: &mut Vec<IndexSet>,
        one: &BigRational,
    ) -> Result<()> {
        if sum == one && !cur.is_empty() {
            if out.len() >= GAP_REPORT_SIZE_LIMIT {
                return Err(Error::ConstructionTooLarge {
                    estimate: GAP_REPORT_SIZE_LIMIT as u128,
                });
            }
            out.push(IndexSet::new(cur.clone()).expect("increasing"));
        }
        let as_set = IndexSet::new(cur.clone()).expect("increasing");
        if !families::is_extendable(&as_set, alpha) {
            return Ok(());
        }
        let from = cur.last().map_or(1, |&l| l + 1);
        for l in from..=m {
            let next = sum + x.mag_p_at(l);
            if next > *one {
                // Extensions of cur ∪ {l} by larger indices can still work
                // (they may skip l), so only this branch dies.
                continue;
            }
            cur.push(l);
            visit(x, alpha, m, cur, &next, out, one)?;
            cur.pop();
        }
        Ok(())
    }
    visit(
        x,
        alpha,
        m,
        &mut Vec::new(),
        &BigRational::zero(),
        &mut a_x,
        &one,
    )?;
    let one_sets = a_x
        .iter()
        .filter(|f| f.is_subset_of(&support))
        .cloned()
        .collect();
    Ok(GapReport {
        epsilon_x,
        a_x,
        one_sets,
    })
}
