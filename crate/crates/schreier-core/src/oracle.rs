//! Brute-force reference implementations ("oracles").
//!
//! Everything in this module recomputes answers by following the raw
//! definitions with exhaustive search — no greedy parses, no pruning beyond
//! what the definition itself states, no shared code with the production
//! algorithms. The oracles are exponential and only usable at desk scale;
//! their entire purpose is to be *obviously* correct so that the fast
//! implementations can be tested against them over full windows.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::families::{IndexSet, OrderIndex};

/// Membership by the definition: `F ∈ S_{n+1}` iff `F` splits into `d`
/// consecutive nonempty blocks, `1 ≤ d ≤ min F`, each block in `S_n`. All
/// block counts and all compositions are tried.
pub fn member_brute(elems: &[u32], alpha: OrderIndex) -> bool {
    if elems.is_empty() {
        return true;
    }
    let n = match alpha {
        OrderIndex::Finite(n) => n,
        OrderIndex::Omega => elems[0],
    };
    member_brute_finite(elems, n)
}

fn member_brute_finite(elems: &[u32], n: u32) -> bool {
    if elems.is_empty() {
        return true;
    }
    if n == 0 {
        return elems.len() <= 1;
    }
    let max_blocks = (elems[0] as usize).min(elems.len());
    (1..=max_blocks).any(|d| splits_into(elems, d, n - 1))
}

/// True iff `elems` splits into exactly `d` consecutive nonempty blocks,
/// each a member of `S_n`.
fn splits_into(elems: &[u32], d: usize, n: u32) -> bool {
    if d == 1 {
        return member_brute_finite(elems, n);
    }
    if elems.len() < d {
        return false;
    }
    // First block takes 1..=len−(d−1) elements; recurse on the rest.
    (1..=elems.len() - (d - 1)).any(|take| {
        member_brute_finite(&elems[..take], n) && splits_into(&elems[take..], d - 1, n)
    })
}

/// Maximality by probing every extension in `(max F, max F + probe_window]`
/// rather than trusting the single-probe shortcut.
pub fn maximal_brute(set: &IndexSet, alpha: OrderIndex, probe_window: u32) -> Option<bool> {
    if set.is_empty() || !member_brute(set.elems(), alpha) {
        return None;
    }
    let m = set.max_elem().expect("nonempty");
    let extendable = (m + 1..=m + probe_window)
        .any(|l| member_brute(set.with_inserted(l).expect("l > max").elems(), alpha));
    Some(!extendable)
}

/// All subsets of `[1, window]`, in lexicographic order.
pub fn all_subsets(window: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(1 << window);
    fn extend(prefix: &mut Vec<u32>, from: u32, window: u32, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for l in from..=window {
            prefix.push(l);
            extend(prefix, l + 1, window, out);
            prefix.pop();
        }
    }
    extend(&mut Vec::new(), 1, window, &mut out);
    out
}

/// Exhaustive norm: the maximum of `Σ_{i∈F} mass(i)` over *all* subsets `F`
/// of the support with `F ∈ S_α` (membership by [`member_brute`]), with the
/// lexicographically least maximizing subset. Masses must be nonnegative.
pub fn norm_brute(masses: &[(u32, BigRational)], alpha: OrderIndex) -> (BigRational, Vec<u32>) {
    let mut best_sum = BigRational::zero();
    let mut best_set: Vec<u32> = Vec::new();
    // Subsets of the support in lexicographic order; the first maximizer
    // encountered is the lexicographically least one.
    fn extend(
        masses: &[(u32, BigRational)],
        from: usize,
        cur: &mut Vec<u32>,
        sum: &BigRational,
        alpha: OrderIndex,
        best_sum: &mut BigRational,
        best_set: &mut Vec<u32>,
    ) {
        if member_brute(cur, alpha) && sum > best_sum {
            *best_sum = sum.clone();
            *best_set = cur.clone();
        }
        for i in from..masses.len() {
            cur.push(masses[i].0);
            let next = sum + &masses[i].1;
            extend(masses, i + 1, cur, &next, alpha, best_sum, best_set);
            cur.pop();
        }
    }
    debug_assert!(masses.windows(2).all(|w| w[0].0 < w[1].0));
    extend(
        masses,
        0,
        &mut Vec::new(),
        &BigRational::zero(),
        alpha,
        &mut best_sum,
        &mut best_set,
    );
    (best_sum, best_set)
}

/// Shifts a rational-valued vector by a rational direction given as
/// `(index, value)` pairs. Panics if `x` has an irrational coordinate, so
/// callers must build their corpora from rational values.
fn offset_by(x: &crate::vectors::SparseVector, v: &[(u32, BigRational)], flip: bool) -> crate::vectors::SparseVector {
    let mut out = x.clone();
    for (i, dv) in v {
        let base = out
            .get(*i)
            .as_rational()
            .expect("split oracles need rational coordinate values");
        let moved = if flip { &base - dv } else { &base + dv };
        out.set_entry(*i, crate::scalar::PScalar::from_value(x.p(), &moved));
    }
    out
}

fn splits_ball(
    x: &crate::vectors::SparseVector,
    v: &[(u32, BigRational)],
    alpha: OrderIndex,
) -> bool {
    use num_traits::One;
    let one = BigRational::one();
    !v.iter().all(|(_, dv)| dv.is_zero())
        && crate::vectors::norm(&offset_by(x, v, false), alpha).value_p <= one
        && crate::vectors::norm(&offset_by(x, v, true), alpha).value_p <= one
}

/// Exhaustive split search on the rational grid: directions `v` with
/// coordinates in `{−kmax/denom, …, kmax/denom}` over `[1, max supp x + reach]`.
/// Returns a direction with `x ± v` both in the unit ball (so `x` is not
/// extreme), or `None` when no grid direction splits. Coordinates of `x`
/// must have rational values.
pub fn split_direction_brute(
    x: &crate::vectors::SparseVector,
    alpha: OrderIndex,
    denom: u32,
    reach: u32,
) -> Option<Vec<(u32, BigRational)>> {
    let m = x.max_support().unwrap_or(0) + reach;
    let kmax: i64 = 2;
    let dims = m as usize;
    assert!(
        (2 * kmax as u128 + 1).pow(dims as u32) <= 1 << 24,
        "grid too large for the brute split search"
    );
    let mut dir: Vec<(u32, BigRational)> = (1..=m).map(|i| (i, BigRational::zero())).collect();
    fn rec(
        x: &crate::vectors::SparseVector,
        alpha: OrderIndex,
        denom: u32,
        kmax: i64,
        at: usize,
        dir: &mut Vec<(u32, BigRational)>,
    ) -> bool {
        if at == dir.len() {
            return splits_ball(x, dir, alpha);
        }
        for k in -kmax..=kmax {
            dir[at].1 = BigRational::new(k.into(), (denom as i64).into());
            if rec(x, alpha, denom, kmax, at + 1, dir) {
                return true;
            }
        }
        dir[at].1 = BigRational::zero();
        false
    }
    if rec(x, alpha, denom, kmax, 0, &mut dir) {
        Some(dir)
    } else {
        None
    }
}

/// Seeded random split search: `attempts` random directions with
/// coordinates `k/denom`, `k ∈ {−2,…,2}`, over `[1, max supp x + reach]`
/// with `reach = 2`. Returns the first splitting direction found.
pub fn random_split_search(
    x: &crate::vectors::SparseVector,
    alpha: OrderIndex,
    denom: u32,
    attempts: u32,
    seed: u64,
) -> Option<Vec<(u32, BigRational)>> {
    let mut rng = crate::rng::SplitMix64::new(seed);
    let m = x.max_support().unwrap_or(0) + 2;
    for _ in 0..attempts {
        let dir: Vec<(u32, BigRational)> = (1..=m)
            .map(|i| {
                let k = rng.next_below(5) as i64 - 2;
                (i, BigRational::new(k.into(), (denom as i64).into()))
            })
            .collect();
        if splits_ball(x, &dir, alpha) {
            return Some(dir);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{self, OrderIndex::*};

    fn set(elems: &[u32]) -> IndexSet {
        IndexSet::new(elems.to_vec()).unwrap()
    }

    #[test]
    fn brute_membership_basics() {
        assert!(member_brute(&[], Finite(0)));
        assert!(member_brute(&[5], Finite(0)));
        assert!(!member_brute(&[1, 2], Finite(0)));
        assert!(member_brute(&[2, 3], Finite(1)));
        assert!(!member_brute(&[1, 2], Finite(1)));
        assert!(member_brute(&[2, 3, 4, 5, 6, 7], Finite(2)));
        assert!(!member_brute(&[2, 3, 4, 5, 6, 7], Finite(1)));
        assert!(member_brute(&[2, 3, 4, 5, 6, 7], Omega));
    }

    #[test]
    fn production_membership_agrees_with_brute_on_window_ten() {
        // The load-bearing invariant of the whole crate: greedy parsing and
        // the definitional partition search agree subset-for-subset.
        for elems in all_subsets(10) {
            let f = set(&elems);
            for alpha in [Finite(0), Finite(1), Finite(2), Finite(3), Omega] {
                assert_eq!(
                    families::is_member(&f, alpha),
                    member_brute(&elems, alpha),
                    "disagreement on {f} at order {alpha}"
                );
            }
        }
    }

    #[test]
    fn single_probe_maximality_agrees_with_probe_window() {
        for elems in all_subsets(8) {
            if elems.is_empty() {
                continue;
            }
            let f = set(&elems);
            for alpha in [Finite(1), Finite(2), Omega] {
                if let Some(brute) = maximal_brute(&f, alpha, 8) {
                    assert_eq!(
                        families::is_maximal(&f, alpha).unwrap(),
                        brute,
                        "disagreement on {f} at order {alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn hereditary_and_spreading_on_window_eight() {
        // Regularity, checked exhaustively with the oracle only.
        let subsets = all_subsets(8);
        for elems in &subsets {
            for alpha in [Finite(1), Finite(2), Finite(3)] {
                if !member_brute(elems, alpha) {
                    continue;
                }
                // Hereditary: drop each element in turn.
                for skip in 0..elems.len() {
                    let mut sub = elems.clone();
                    sub.remove(skip);
                    assert!(member_brute(&sub, alpha), "hereditary fails at {elems:?}");
                }
                // Spreading: push each element up by one where room allows.
                for k in 0..elems.len() {
                    let mut spread = elems.clone();
                    spread[k] += 1;
                    if k + 1 < spread.len() && spread[k] == spread[k + 1] {
                        continue;
                    }
                    assert!(
                        member_brute(&spread, alpha),
                        "spreading fails at {elems:?} → {spread:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn enumerate_agrees_with_brute_filter() {
        for alpha in [Finite(0), Finite(1), Finite(2), Omega] {
            let fast: Vec<Vec<u32>> = families::enumerate_family(alpha, 8, false)
                .unwrap()
                .into_iter()
                .map(|s| s.elems().to_vec())
                .collect();
            let brute: Vec<Vec<u32>> = all_subsets(8)
                .into_iter()
                .filter(|s| member_brute(s, alpha))
                .collect();
            assert_eq!(fast, brute, "windowed enumeration at order {alpha}");
        }
    }

    #[test]
    fn norm_brute_frozen_example() {
        // e₁+e₂+e₃ at order 1: the best admissible set is {2,3} with sum 2.
        let one = BigRational::from_integer(1.into());
        let masses = vec![(1, one.clone()), (2, one.clone()), (3, one)];
        let (value, witness) = norm_brute(&masses, Finite(1));
        assert_eq!(value, BigRational::from_integer(2.into()));
        assert_eq!(witness, vec![2, 3]);
    }
}
