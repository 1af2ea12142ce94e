//! Extreme points of the unit ball of `X^p_{S_α}`.
//!
//! A norm-one vector `x` is extreme iff three finite conditions hold, all
//! phrased through the unit-sum sets of `x`:
//!
//! * **tail blocking** — some 1-set is nonmaximal, so any mass added past
//!   the support tips an exact unit sum over 1;
//! * **coverage** — every index up to `max supp x` lies in some admissible
//!   set whose mass sum is exactly 1 (zero coordinates count), so no
//!   coordinate has slack in either direction;
//! * **for `p = 1` only**: the signed 1-set indicators span the support
//!   coordinates. For `p > 1` strict convexity of `t^p` makes the first
//!   two conditions sufficient.
//!
//! Every negative verdict is returned with a certified refutation: a pair
//! `y ≠ z` in the ball with `x = (y + z)/2`, built from the exact ε-gap of
//! `x` and re-verified before being handed out. Positive verdicts carry
//! the evidence the criteria produced.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::families::{self, IndexSet, OrderIndex};
use crate::scalar::{rational_pow, PScalar, Sign};
use crate::simplex;
use crate::vectors::{self, SparseVector};

/// Window cap for [`enumerate_extreme`].
pub const ENUMERATION_WINDOW_LIMIT: u32 = 8;

/// Grid-size cap for [`enumerate_extreme`] (candidate mag_p grids).
const ENUMERATION_GRID_LIMIT: u128 = 1 << 22;

/// The verdict of [`is_extreme`], with evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeReport {
    pub extreme: bool,
    /// A nonmaximal 1-set, when one exists (evidence for tail blocking).
    pub nonmaximal_unit_set: Option<IndexSet>,
    /// The smallest index `≤ max supp x` missed by every unit-sum
    /// admissible set, when coverage fails.
    pub uncovered_index: Option<u32>,
    /// For `p = 1`: (rank of the signed 1-set indicators on the support,
    /// support size).
    pub rank: Option<(usize, usize)>,
    /// For a non-extreme `x`: `y ≠ z` in the ball with `x = (y+z)/2`,
    /// verified exactly before return.
    pub refutation: Option<(SparseVector, SparseVector)>,
}

/// Decides extremality of a norm-one vector, with certificates either way.
pub fn is_extreme(x: &SparseVector, alpha: OrderIndex) -> Result<ExtremeReport> {
    if !vectors::is_unit_norm(x, alpha) {
        return Err(Error::NotUnitNorm);
    }
    let epsilon = BigRational::one() - vectors::best_sub_unit(x, alpha).0;
    let one_sets = vectors::one_sets_support(x, alpha);
    let nonmaximal = one_sets
        .iter()
        .find(|g| !families::is_maximal(g, alpha).expect("1-sets are members"))
        .cloned();
    let m = x.max_support().expect("norm-one vectors are nonzero");

    if nonmaximal.is_none() {
        // No unit sum survives an appended index, so mass can be planted
        // just past the support in either direction.
        let refutation = additive_split(x, alpha, m + 1, &epsilon);
        return Ok(ExtremeReport {
            extreme: false,
            nonmaximal_unit_set: None,
            uncovered_index: None,
            rank: None,
            refutation: Some(refutation),
        });
    }

    for i in 1..=m {
        if vectors::max_sum_containing(x, i, alpha).0.is_one() {
            continue;
        }
        // Index i has slack in every admissible set through it.
        let refutation = if x.mag_p_at(i).is_zero() {
            additive_split(x, alpha, i, &epsilon)
        } else {
            multiplicative_split(x, alpha, i, &epsilon)
        };
        return Ok(ExtremeReport {
            extreme: false,
            nonmaximal_unit_set: nonmaximal,
            uncovered_index: Some(i),
            rank: None,
            refutation: Some(refutation),
        });
    }

    if x.p() == 1 {
        let support: Vec<u32> = x.support().elems().to_vec();
        let rows = signed_indicator_rows(x, &one_sets, &support);
        let rank = simplex::rational_rank(&rows);
        if rank < support.len() {
            let kernel = simplex::rational_kernel_vector(&rows, support.len())
                .expect("deficient rank has a kernel vector");
            let refutation = kernel_split(x, alpha, &support, &kernel, &epsilon);
            return Ok(ExtremeReport {
                extreme: false,
                nonmaximal_unit_set: nonmaximal,
                uncovered_index: None,
                rank: Some((rank, support.len())),
                refutation: Some(refutation),
            });
        }
        return Ok(ExtremeReport {
            extreme: true,
            nonmaximal_unit_set: nonmaximal,
            uncovered_index: None,
            rank: Some((rank, support.len())),
            refutation: None,
        });
    }

    Ok(ExtremeReport {
        extreme: true,
        nonmaximal_unit_set: nonmaximal,
        uncovered_index: None,
        rank: None,
        refutation: None,
    })
}

/// The `p = 1` vertex rank over the window `[1, max supp x]`: achieved
/// rank of the active linearized ball constraints versus the window
/// dimension. Zero coordinates contribute through the unit-sum sets that
/// pad them in; the achieved rank is their count plus the signed 1-set
/// indicator rank on the support.
pub fn vertex_rank_test(x: &SparseVector, alpha: OrderIndex) -> Result<(usize, usize)> {
    if x.p() != 1 {
        return Err(Error::WrongExponent {
            expected: 1,
            got: x.p(),
        });
    }
    if !vectors::is_unit_norm(x, alpha) {
        return Err(Error::NotUnitNorm);
    }
    let m = x.max_support().expect("norm-one vectors are nonzero");
    let support: Vec<u32> = x.support().elems().to_vec();
    let one_sets = vectors::one_sets_support(x, alpha);
    let rows = signed_indicator_rows(x, &one_sets, &support);
    let mut achieved = simplex::rational_rank(&rows);
    for j in 1..=m {
        if x.mag_p_at(j).is_zero() && vectors::max_sum_containing(x, j, alpha).0.is_one() {
            achieved += 1;
        }
    }
    Ok((achieved, m as usize))
}

/// One row per 1-set: `sign(x_i)` on the set's coordinates, in support
/// column order.
fn signed_indicator_rows(
    x: &SparseVector,
    one_sets: &[IndexSet],
    support: &[u32],
) -> Vec<Vec<BigRational>> {
    one_sets
        .iter()
        .map(|g| {
            support
                .iter()
                .map(|&i| {
                    if g.contains(i) {
                        x.get(i).sign().as_rational()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Verifies a split exactly; panics on an internal construction bug.
fn check_split(x: &SparseVector, alpha: OrderIndex, y: &SparseVector, z: &SparseVector) {
    let one = BigRational::one();
    assert!(vectors::norm(y, alpha).value_p <= one, "split half escapes the ball");
    assert!(vectors::norm(z, alpha).value_p <= one, "split half escapes the ball");
    assert_ne!(y, z, "split halves must differ");
    let half = BigRational::new(1.into(), 2.into());
    let mid = y
        .add(z)
        .expect("split halves share coordinate radical classes")
        .scale(&half);
    assert_eq!(&mid, x, "split midpoint must reproduce the input");
}

/// `x ± δ e_k` with `δ^p = ε/2`, valid at any index `k` (zero coordinate)
/// through which no admissible set reaches mass 1.
fn additive_split(
    x: &SparseVector,
    alpha: OrderIndex,
    k: u32,
    epsilon: &BigRational,
) -> (SparseVector, SparseVector) {
    debug_assert!(x.mag_p_at(k).is_zero());
    assert!(epsilon.is_positive(), "the ε-gap of a finite vector is positive");
    let half = BigRational::new(1.into(), 2.into());
    let delta_p = epsilon * &half;
    let mut y = x.clone();
    y.set_entry(k, PScalar::new(x.p(), Sign::Pos, delta_p.clone()).expect("positive mass"));
    let mut z = x.clone();
    z.set_entry(k, PScalar::new(x.p(), Sign::Neg, delta_p).expect("positive mass"));
    check_split(x, alpha, &y, &z);
    (y, z)
}

/// `x` with coordinate `i` scaled by `1 ± ρ`, `ρ = 2^{-t}` small enough
/// that the extra mass `((1+ρ)^p − 1)·|x_i|^p` fits inside the ε-gap.
fn multiplicative_split(
    x: &SparseVector,
    alpha: OrderIndex,
    i: u32,
    epsilon: &BigRational,
) -> (SparseVector, SparseVector) {
    let mag = x.mag_p_at(i);
    assert!(mag.is_positive());
    assert!(epsilon.is_positive(), "the ε-gap of a finite vector is positive");
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let mut rho = BigRational::new(1.into(), 2.into());
    loop {
        let grow = (rational_pow(&(&one + &rho), x.p()) - &one) * &mag;
        if grow <= *epsilon {
            break;
        }
        rho /= &two;
    }
    let sign = x.get(i).sign();
    let mut y = x.clone();
    y.set_entry(
        i,
        PScalar::new(x.p(), sign, rational_pow(&(&one + &rho), x.p()) * &mag).expect("positive"),
    );
    let mut z = x.clone();
    z.set_entry(
        i,
        PScalar::new(x.p(), sign, rational_pow(&(&one - &rho), x.p()) * &mag).expect("positive"),
    );
    check_split(x, alpha, &y, &z);
    (y, z)
}

/// `x ± t·v` for a kernel direction `v` of the signed 1-set indicators
/// (`p = 1` only): exact unit sums are preserved, sub-unit sums move by at
/// most `t·Σ|v| ≤ ε/2`, and `t` is small enough that no sign flips.
fn kernel_split(
    x: &SparseVector,
    alpha: OrderIndex,
    support: &[u32],
    kernel: &[BigRational],
    epsilon: &BigRational,
) -> (SparseVector, SparseVector) {
    debug_assert_eq!(x.p(), 1);
    let total: BigRational = kernel.iter().map(|v| v.abs()).sum();
    assert!(total.is_positive(), "kernel vector must be nonzero");
    let two = BigRational::from_integer(2.into());
    let mut t = epsilon / (&total * &two);
    for (&i, v) in support.iter().zip(kernel) {
        if v.is_zero() {
            continue;
        }
        let cap = x.mag_p_at(i) / (v.abs() * &two);
        if cap < t {
            t = cap;
        }
    }
    assert!(t.is_positive());
    let mut y = x.clone();
    let mut z = x.clone();
    for (&i, v) in support.iter().zip(kernel) {
        if v.is_zero() {
            continue;
        }
        let base = x
            .get(i)
            .as_rational()
            .expect("p = 1 coordinates are rational");
        let step = &t * v;
        y.set_entry(i, PScalar::from_value(1, &(&base + &step)));
        z.set_entry(i, PScalar::from_value(1, &(&base - &step)));
    }
    check_split(x, alpha, &y, &z);
    (y, z)
}

/// Enumerates every extreme point of the unit ball supported in
/// `[1, window]` whose `|x_i|^p` all lie on a grid `ℤ/d` for a single
/// `d ≤ denominator_bound`, expanded over all sign patterns.
/// Deterministic order: by nonnegative mass pattern, then sign mask with
/// positives first.
pub fn enumerate_extreme(
    p: u32,
    alpha: OrderIndex,
    window: u32,
    denominator_bound: u32,
) -> Result<Vec<SparseVector>> {
    assert!(p >= 1, "exponent p must be positive");
    if window > ENUMERATION_WINDOW_LIMIT {
        return Err(Error::WindowTooLarge {
            requested: window,
            limit: ENUMERATION_WINDOW_LIMIT,
        });
    }
    if denominator_bound == 0 {
        return Err(Error::PreconditionViolated(
            "denominator bound must be positive",
        ));
    }
    let grids = (denominator_bound as u128 + 1)
        .checked_pow(window)
        .filter(|&g| g <= ENUMERATION_GRID_LIMIT);
    if grids.is_none() {
        return Err(Error::ConstructionTooLarge {
            estimate: ENUMERATION_GRID_LIMIT,
        });
    }

    let mut patterns: alloc::collections::BTreeSet<Vec<(u32, BigRational)>> =
        alloc::collections::BTreeSet::new();
    for d in 1..=denominator_bound {
        let mut cur = SparseVector::new(p);
        search_grid(p, alpha, window, d, 1, &mut cur, &mut patterns)?;
    }

    let mut out = Vec::new();
    for pattern in &patterns {
        let k = pattern.len() as u32;
        for mask in 0..(1u64 << k) {
            let mut v = SparseVector::new(p);
            for (idx, (i, mag)) in pattern.iter().enumerate() {
                let sign = if mask & (1 << idx) != 0 { Sign::Neg } else { Sign::Pos };
                v.set_entry(*i, PScalar::new(p, sign, mag.clone()).expect("positive mass"));
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// DFS over mass grids `|x_i|^p ∈ {0, 1/d, …, d/d}` for `i ≤ window`,
/// pruning prefixes whose norm already exceeds 1.
fn search_grid(
    p: u32,
    alpha: OrderIndex,
    window: u32,
    d: u32,
    next: u32,
    cur: &mut SparseVector,
    patterns: &mut alloc::collections::BTreeSet<Vec<(u32, BigRational)>>,
) -> Result<()> {
    let norm_p = vectors::norm(cur, alpha).value_p;
    if norm_p > BigRational::one() {
        return Ok(());
    }
    if next > window {
        if norm_p.is_one() && is_extreme(cur, alpha)?.extreme {
            patterns.insert(cur.entries().map(|(i, s)| (i, s.mag_p().clone())).collect());
        }
        return Ok(());
    }
    for k in 0..=d {
        if k == 0 {
            cur.set_entry(next, PScalar::zero(p));
        } else {
            let mag = BigRational::new(k.into(), d.into());
            cur.set_entry(next, PScalar::new(p, Sign::Pos, mag).expect("positive mass"));
        }
        search_grid(p, alpha, window, d, next + 1, cur, patterns)?;
    }
    cur.set_entry(next, PScalar::zero(p));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn set(elems: &[u32]) -> IndexSet {
        IndexSet::new(elems.to_vec()).unwrap()
    }

    fn v1(values: &[(u32, (i64, i64))]) -> SparseVector {
        SparseVector::from_values(1, values.iter().map(|&(i, (n, d))| (i, rat(n, d)))).unwrap()
    }

    fn mag2(mags: &[(u32, (i64, i64))]) -> SparseVector {
        SparseVector::from_mag_p(2, mags.iter().map(|&(i, (n, d))| (i, rat(n, d)))).unwrap()
    }

    #[test]
    fn non_unit_input_is_rejected() {
        let x = v1(&[(1, (1, 2))]);
        assert_eq!(is_extreme(&x, OrderIndex::Finite(1)), Err(Error::NotUnitNorm));
    }

    #[test]
    fn basis_vector_is_never_extreme_at_order_one() {
        // Every 1-set of e₁ is {1}, which is maximal, so mass fits past the
        // support: e₁ = ½((e₁+δe₂) + (e₁−δe₂)).
        for p in [1, 2, 3] {
            let e1 = SparseVector::unit(p, 1);
            let report = is_extreme(&e1, OrderIndex::Finite(1)).unwrap();
            assert!(!report.extreme);
            assert_eq!(report.nonmaximal_unit_set, None);
            let (y, z) = report.refutation.unwrap();
            assert_eq!(y.support(), set(&[1, 2]));
            assert_eq!(y.mag_p_at(2), rat(1, 2));
            assert_eq!(z.get(2).sign(), Sign::Neg);
        }
    }

    #[test]
    fn e1_plus_ej_is_extreme() {
        for p in [1, 2] {
            for j in [2u32, 5] {
                let mut x = SparseVector::unit(p, 1);
                x.set_entry(j, PScalar::new(p, Sign::Neg, int(1)).unwrap());
                let report = is_extreme(&x, OrderIndex::Finite(1)).unwrap();
                assert!(report.extreme, "e1 - e{j} should be extreme at p = {p}");
                assert_eq!(report.nonmaximal_unit_set, Some(set(&[j])));
                assert_eq!(report.uncovered_index, None);
                if p == 1 {
                    assert_eq!(report.rank, Some((2, 2)));
                }
            }
        }
    }

    #[test]
    fn missing_first_coordinate_blocks_extremality() {
        // Sets containing 1 are exactly {1} at finite orders, so any unit
        // vector with x₁ = 0 is uncovered at 1 and splits additively there.
        let x = v1(&[(2, (1, 2)), (3, (1, 2)), (4, (1, 2))]);
        let report = is_extreme(&x, OrderIndex::Finite(1)).unwrap();
        assert!(!report.extreme);
        assert_eq!(report.nonmaximal_unit_set, Some(set(&[3, 4])));
        assert_eq!(report.uncovered_index, Some(1));
        let (y, _z) = report.refutation.unwrap();
        assert_eq!(y.mag_p_at(1), rat(1, 4)); // ε = 1/2, δ^p = ε/2
    }

    #[test]
    fn uncovered_nonzero_coordinate_splits_multiplicatively() {
        // mag_p = (1, ¼, ½, ½) on (1,2,3,5): the 1-set {3,5} is nonmaximal,
        // indices 1 and 3,5 are covered, and the best sum through the
        // nonzero index 2 is only ¾.
        for p in [1, 2] {
            let x = SparseVector::from_mag_p(
                p,
                [(1, int(1)), (2, rat(1, 4)), (3, rat(1, 2)), (5, rat(1, 2))],
            )
            .unwrap();
            let report = is_extreme(&x, OrderIndex::Finite(1)).unwrap();
            assert!(!report.extreme);
            assert_eq!(report.uncovered_index, Some(2));
            assert!(report.nonmaximal_unit_set.is_some());
            let (y, z) = report.refutation.unwrap();
            // Multiplicative split: support unchanged, coordinate 2 moved.
            assert_eq!(y.support(), x.support());
            assert_eq!(z.support(), x.support());
            assert!(y.mag_p_at(2) > x.mag_p_at(2));
            assert!(z.mag_p_at(2) < x.mag_p_at(2));
        }
    }

    #[test]
    fn rank_deficiency_splits_along_a_kernel_direction() {
        // x = e₁ + ¼e₂ + ¾e₃ + ¼e₄ at p = 1: 1-sets {1},{2,3},{3,4} give
        // rank 3 over a 4-element support, so x sits on an edge.
        let x = v1(&[(1, (1, 1)), (2, (1, 4)), (3, (3, 4)), (4, (1, 4))]);
        let report = is_extreme(&x, OrderIndex::Finite(1)).unwrap();
        assert!(!report.extreme);
        assert_eq!(report.uncovered_index, None);
        assert_eq!(report.rank, Some((3, 4)));
        let (y, z) = report.refutation.unwrap();
        // Unit sums are preserved exactly on both halves.
        for g in [set(&[2, 3]), set(&[3, 4])] {
            let sy: BigRational = g.iter().map(|i| y.mag_p_at(i)).sum();
            let sz: BigRational = g.iter().map(|i| z.mag_p_at(i)).sum();
            assert_eq!(sy, int(1));
            assert_eq!(sz, int(1));
        }
    }

    #[test]
    fn same_masses_can_be_extreme_only_for_p_above_one() {
        // mag_p = (1, ½, ½) on (1,2,3) at order 2: strict convexity makes
        // it extreme for p = 2, while for p = 1 the indicators of {1} and
        // {2,3} only span rank 2 of 3.
        let mags = [(1, rat(1, 1)), (2, rat(1, 2)), (3, rat(1, 2))];
        let x2 = SparseVector::from_mag_p(2, mags.clone()).unwrap();
        let r2 = is_extreme(&x2, OrderIndex::Finite(2)).unwrap();
        assert!(r2.extreme);

        let x1 = SparseVector::from_mag_p(1, mags).unwrap();
        let r1 = is_extreme(&x1, OrderIndex::Finite(2)).unwrap();
        assert!(!r1.extreme);
        assert_eq!(r1.rank, Some((2, 3)));
    }

    #[test]
    fn vertex_rank_reports_window_dimension() {
        let x = v1(&[(1, (1, 1)), (5, (-1, 1))]);
        // Support rank 2, zero coordinates 2,3,4 all covered via {j,5}.
        assert_eq!(vertex_rank_test(&x, OrderIndex::Finite(1)).unwrap(), (5, 5));
        let x2 = mag2(&[(1, (1, 1)), (5, (1, 1))]);
        assert_eq!(
            vertex_rank_test(&x2, OrderIndex::Finite(1)),
            Err(Error::WrongExponent { expected: 1, got: 2 })
        );
    }

    #[test]
    fn enumerate_frozen_small_windows() {
        // Order 1, window 2: exactly the four sign patterns of e₁ + e₂.
        let out = enumerate_extreme(1, OrderIndex::Finite(1), 2, 1).unwrap();
        assert_eq!(out.len(), 4);
        for v in &out {
            assert_eq!(v.support(), set(&[1, 2]));
            assert_eq!(v.mag_p_at(1), int(1));
            assert_eq!(v.mag_p_at(2), int(1));
        }
        assert_eq!(out[0].get(1).sign(), Sign::Pos);
        assert_eq!(out[0].get(2).sign(), Sign::Pos);
        assert_eq!(out[1].get(1).sign(), Sign::Neg);
        assert_eq!(out[1].get(2).sign(), Sign::Pos);

        // Window 1: ±e₁ are not extreme.
        assert!(enumerate_extreme(1, OrderIndex::Finite(1), 1, 2)
            .unwrap()
            .is_empty());
        // Order 0: singletons are all maximal, nothing is extreme.
        assert!(enumerate_extreme(1, OrderIndex::Finite(0), 2, 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn enumerate_window_three_with_halves() {
        let out = enumerate_extreme(1, OrderIndex::Finite(1), 3, 2).unwrap();
        // Sign expansions of e₁+e₂ and e₁+e₃ only: 8 vectors.
        assert_eq!(out.len(), 8);
        let supports: alloc::collections::BTreeSet<IndexSet> =
            out.iter().map(|v| v.support()).collect();
        assert!(supports.contains(&set(&[1, 2])));
        assert!(supports.contains(&set(&[1, 3])));
    }

    #[test]
    fn enumerate_separates_exponents_at_order_two() {
        // mag pattern (1, ½, ½) survives only for p = 2.
        let has_half_pattern = |vecs: &[SparseVector]| {
            vecs.iter().any(|v| {
                v.mag_p_at(1).is_one() && v.mag_p_at(2) == rat(1, 2) && v.mag_p_at(3) == rat(1, 2)
            })
        };
        let out2 = enumerate_extreme(2, OrderIndex::Finite(2), 3, 2).unwrap();
        assert!(has_half_pattern(&out2));
        let out1 = enumerate_extreme(1, OrderIndex::Finite(2), 3, 2).unwrap();
        assert!(!has_half_pattern(&out1));
    }

    #[test]
    fn enumerate_guards() {
        assert_eq!(
            enumerate_extreme(1, OrderIndex::Finite(1), 9, 1),
            Err(Error::WindowTooLarge {
                requested: 9,
                limit: 8
            })
        );
        assert_eq!(
            enumerate_extreme(1, OrderIndex::Finite(1), 2, 0),
            Err(Error::PreconditionViolated(
                "denominator bound must be positive"
            ))
        );
        assert!(matches!(
            enumerate_extreme(1, OrderIndex::Finite(1), 8, 7),
            Err(Error::ConstructionTooLarge { .. })
        ));
    }

    #[test]
    fn verdicts_agree_with_grid_split_search() {
        // Small corpus, both exponents: whenever the brute grid finds a
        // split direction the verdict must be negative, and vice versa the
        // verified refutation already certifies every negative verdict.
        let corpus = [
            v1(&[(1, (1, 1)), (2, (1, 1))]),
            v1(&[(1, (1, 1)), (2, (1, 2)), (3, (1, 2))]),
            v1(&[(1, (1, 1)), (3, (-1, 1))]),
            v1(&[(2, (1, 2)), (3, (1, 2)), (4, (1, 2))]),
            SparseVector::unit(1, 1),
        ];
        for x in &corpus {
            for alpha in [OrderIndex::Finite(1), OrderIndex::Finite(2)] {
                if !vectors::is_unit_norm(x, alpha) {
                    continue;
                }
                let verdict = is_extreme(x, alpha).unwrap().extreme;
                let brute = crate::oracle::split_direction_brute(x, alpha, 4, 1);
                assert_eq!(
                    verdict,
                    brute.is_none(),
                    "grid oracle disagrees on {x:?} at {alpha}"
                );
            }
        }
    }

    #[test]
    fn extreme_verdicts_survive_random_perturbations() {
        // Seeded random split attempts must all fail on extreme points.
        let x = v1(&[(1, (1, 1)), (2, (1, 1))]);
        assert!(is_extreme(&x, OrderIndex::Finite(1)).unwrap().extreme);
        assert!(crate::oracle::random_split_search(&x, OrderIndex::Finite(1), 2, 1000, 0x5eed).is_none());

        // A p = 2 extreme point with rational coordinate values, so the
        // rational-grid oracle can perturb it: e₁ + (3/5)e₂ + (4/5)e₃.
        let y = SparseVector::from_values(2, [(1, int(1)), (2, rat(3, 5)), (3, rat(4, 5))]).unwrap();
        assert!(is_extreme(&y, OrderIndex::Finite(2)).unwrap().extreme);
        assert!(crate::oracle::random_split_search(&y, OrderIndex::Finite(2), 5, 1000, 0x5eed).is_none());
    }
}
