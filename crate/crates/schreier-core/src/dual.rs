//! Dual-ball geometry at exponent 1: exact dual norms, minimal norming-set
//! representations, dual extreme points, dual-side convex splitting, and
//! the polyhedrality margin.
//!
//! Everything here lives in the `p = 1` spaces, where the dual unit ball is
//! the closed convex hull of the norming set `W`: the signed indicator
//! functionals `Σ_{i∈F} ε_i e*_i` over admissible `F` and `ε ∈ {±1}^F`.
//! On any finite window that hull is a polytope cut out by finitely many
//! linear inequalities, so each operation reduces to exact rational linear
//! programming over admissible sets — no floating point anywhere.
//!
//! The two central computations certify each other: `dual_norm` produces a
//! ball vector `x` with `f(x) = v`, proving `‖f‖* ≥ v`, while
//! `represent_in_ball` writes `f = Σ λ_i f_i` with `f_i ∈ W` and
//! `Σ λ_i = v`, proving `‖f‖* ≤ v` by the triangle inequality. Both
//! certificates are rechecked by the combinatorial machinery (norm search,
//! family membership), not by the LP that found them.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::families::{self, IndexSet, OrderIndex};
use crate::simplex::{self, Constraint, Lp, LpOutcome};
use crate::vectors::{self, SparseVector};

/// Window guard for the representation LP: `max supp f` may not exceed
/// this when asking for a norming-set representation (the LP is exact and
/// the admissible-pattern separation stays cheap on such windows).
pub const REPRESENT_WINDOW_LIMIT: u32 = 12;

/// Window guard for the hull-vertex cross-check: the enumeration ranges
/// over every signed admissible pattern in the completion closure of the
/// window, which grows quickly with the order.
pub const HULL_WINDOW_LIMIT: u32 = 6;

/// A finitely supported functional `Σ coeffs(i)·e*_i` with exact rational
/// coefficients, acting on vectors by `f(x) = Σ coeffs(i)·x_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Functional {
    coeffs: BTreeMap<u32, BigRational>,
}

impl Functional {
    /// Builds from `(index, coefficient)` pairs; indices must be ≥ 1 and
    /// distinct. Zero coefficients are dropped.
    pub fn new<I>(pairs: I) -> Result<Functional>
    where
        I: IntoIterator<Item = (u32, BigRational)>,
    {
        let mut coeffs = BTreeMap::new();
        for (i, c) in pairs {
            if i == 0 {
                return Err(Error::PreconditionViolated("indices start at 1"));
            }
            if coeffs.contains_key(&i) {
                return Err(Error::PreconditionViolated("duplicate index"));
            }
            if !c.is_zero() {
                coeffs.insert(i, c);
            }
        }
        Ok(Functional { coeffs })
    }

    /// The zero functional.
    pub fn zero() -> Functional {
        Functional::default()
    }

    /// The coordinate functional `e*_i`.
    pub fn unit(i: u32) -> Functional {
        Functional::indicator(&IndexSet::singleton(i))
    }

    /// The all-`+1` indicator `Σ_{i∈F} e*_i`.
    pub fn indicator(set: &IndexSet) -> Functional {
        let coeffs = set.iter().map(|i| (i, BigRational::one())).collect();
        Functional { coeffs }
    }

    /// The signed indicator with `signs` aligned to `set.elems()`.
    fn signed_indicator(set: &IndexSet, signs: &[i8]) -> Functional {
        debug_assert_eq!(set.len(), signs.len());
        let coeffs = set
            .iter()
            .zip(signs)
            .map(|(i, &s)| {
                debug_assert!(s == 1 || s == -1);
                (i, BigRational::from_integer(s.into()))
            })
            .collect();
        Functional { coeffs }
    }

    /// The coefficient at `i` (zero when absent).
    pub fn coeff(&self, i: u32) -> BigRational {
        self.coeffs.get(&i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The nonzero coefficients in index order.
    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &BigRational)> + '_ {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    /// The support as a set.
    pub fn support(&self) -> IndexSet {
        IndexSet::new(self.coeffs.keys().copied().collect()).expect("BTreeMap keys increase")
    }

    /// The largest supported index.
    pub fn max_support(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// True when every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `f(x) = Σ coeffs(i)·x_i`. Defined on the exponent-1 spaces only,
    /// where coordinate values are rational.
    pub fn apply(&self, x: &SparseVector) -> Result<BigRational> {
        if x.p() != 1 {
            return Err(Error::WrongExponent {
                expected: 1,
                got: x.p(),
            });
        }
        let mut total = BigRational::zero();
        for (i, c) in &self.coeffs {
            let value = x.get(*i).as_rational().expect("p = 1 values are rational");
            total += c * &value;
        }
        Ok(total)
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Functional) -> Functional {
        let mut coeffs = self.coeffs.clone();
        for (i, c) in &other.coeffs {
            let entry = coeffs.entry(*i).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(i);
            }
        }
        Functional { coeffs }
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, other: &Functional) -> Functional {
        self.add(&other.neg())
    }

    /// Coefficient-wise negation.
    pub fn neg(&self) -> Functional {
        let coeffs = self.coeffs.iter().map(|(&i, c)| (i, -c)).collect();
        Functional { coeffs }
    }

    /// Scales every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> Functional {
        if c.is_zero() {
            return Functional::zero();
        }
        let coeffs = self.coeffs.iter().map(|(&i, v)| (i, v * c)).collect();
        Functional { coeffs }
    }

    /// When every coefficient is `±1`, the support with the aligned sign
    /// pattern; otherwise `None`. This is membership data for the norming
    /// set `W` (up to admissibility of the support).
    fn as_signed_indicator(&self) -> Option<(IndexSet, Vec<i8>)> {
        let one = BigRational::one();
        let mut signs = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.values() {
            if *c == one {
                signs.push(1);
            } else if *c == -&one {
                signs.push(-1);
            } else {
                return None;
            }
        }
        Some((self.support(), signs))
    }
}

/// A weighted representation `f = Σ λ_i·f_i` by members of the norming set
/// `W`, together with the weight total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRep {
    /// Positive weights with their signed-indicator functionals.
    pub terms: Vec<(BigRational, Functional)>,
    /// `Σ λ_i`; the minimizing representation pins this at `‖f‖*`.
    pub total: BigRational,
}

impl DualRep {
    /// Re-checks the certificate: every weight positive, every term a
    /// signed indicator of an admissible set, the weights summing to
    /// `total`, and the weighted sum reconstructing `target` exactly.
    pub fn verify(&self, target: &Functional, alpha: OrderIndex) -> bool {
        let mut weight_sum = BigRational::zero();
        let mut sum = Functional::zero();
        for (weight, term) in &self.terms {
            if !weight.is_positive() {
                return false;
            }
            let Some((support, _)) = term.as_signed_indicator() else {
                return false;
            };
            if !families::is_member(&support, alpha) {
                return false;
            }
            weight_sum += weight;
            sum = sum.add(&term.scale(weight));
        }
        weight_sum == self.total && sum == *target
    }
}

/// The polyhedrality margin of a unit vector: how far the non-norming dual
/// extremes stay below 1 at `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginReport {
    /// `max{f(x) : f dual-extreme, f(x) < 1}`, exactly.
    pub margin: BigRational,
    /// The sub-unit gap of `x` (so `margin ≤ 1 − epsilon_x`).
    pub epsilon_x: BigRational,
    /// A dual-extreme functional attaining the margin on `x`.
    pub witness: Functional,
    /// Every attaining dual-extreme functional found by the admissible
    /// enumeration, in enumeration order; the witness is the first.
    pub attains: Vec<Functional>,
}

/// The sectional LP state shared by `dual_norm` and `represent_in_ball`:
/// variables are the coordinates of `x` over `supp f` (each split into
/// positive and negative parts for the simplex), rows are the
/// sign-patterned admissible constraints `Σ_{i∈F} ε_i x_i ≤ 1` accumulated
/// so far. Hereditariness lets the ball section over `[1, max supp f]`
/// collapse onto `supp f`: dropping the off-support elements of a
/// constraint set only strengthens it.
struct SectionLp {
    support: Vec<u32>,
    rows: Vec<(IndexSet, Vec<i8>)>,
}

impl SectionLp {
    /// Seeds with both signed singleton rows per support index, which are
    /// always admissible and keep the LP bounded.
    fn new(f: &Functional) -> SectionLp {
        let support: Vec<u32> = f.support().elems().to_vec();
        let mut rows = Vec::with_capacity(2 * support.len());
        for &i in &support {
            rows.push((IndexSet::singleton(i), alloc::vec![1]));
            rows.push((IndexSet::singleton(i), alloc::vec![-1]));
        }
        SectionLp { support, rows }
    }

    fn position(&self, i: u32) -> usize {
        self.support.binary_search(&i).expect("row sets stay inside the support")
    }

    /// A row's coefficients over the split variables `u_0..u_s, v_0..v_s`
    /// (so `x_j = u_j − v_j`).
    fn row_coeffs(&self, set: &IndexSet, signs: &[i8]) -> Vec<BigRational> {
        let s = self.support.len();
        let mut row = alloc::vec![BigRational::zero(); 2 * s];
        for (i, &sign) in set.iter().zip(signs) {
            let j = self.position(i);
            let c = BigRational::from_integer(sign.into());
            row[s + j] = -&c;
            row[j] = c;
        }
        row
    }

    fn objective_for(&self, f: &Functional) -> Vec<BigRational> {
        let s = self.support.len();
        let mut c = alloc::vec![BigRational::zero(); 2 * s];
        for (j, &i) in self.support.iter().enumerate() {
            let fi = f.coeff(i);
            c[s + j] = -&fi;
            c[j] = fi;
        }
        c
    }

    /// Maximizes `c` over the accumulated rows. The LP is feasible (zero)
    /// and bounded (the singleton rows box every coordinate, and a ray
    /// moving `u` and `v` together never improves the objective), so an
    /// optimum always exists.
    fn solve(&self, c: &[BigRational]) -> simplex::SimplexResult {
        let a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|(set, signs)| self.row_coeffs(set, signs))
            .collect();
        let b = alloc::vec![BigRational::one(); a.len()];
        let kinds = alloc::vec![Constraint::Le; a.len()];
        match simplex::solve(&Lp {
            a,
            b,
            c: c.to_vec(),
            kinds,
        }) {
            LpOutcome::Optimal(res) => res,
            _ => unreachable!("the sectional LP is feasible and bounded"),
        }
    }

    /// Recovers the nonzero coordinates `x_i = u_i − v_i` of a solution.
    fn x_pairs(&self, uv: &[BigRational]) -> Vec<(u32, BigRational)> {
        let s = self.support.len();
        let mut out = Vec::new();
        for (j, &i) in self.support.iter().enumerate() {
            let xi = &uv[j] - &uv[s + j];
            if !xi.is_zero() {
                out.push((i, xi));
            }
        }
        out
    }

    /// Checks a candidate against the full ball with the independent norm
    /// search. In the ball: true. Otherwise the violated sign-patterned
    /// constraint joins the rows and the answer is false (the caller
    /// re-solves). Each added row is violated by its candidate, hence new,
    /// so the loop visits each of the finitely many patterns at most once.
    fn admit(&mut self, pairs: &[(u32, BigRational)], alpha: OrderIndex) -> bool {
        if pairs.is_empty() {
            return true;
        }
        let x = SparseVector::from_values(1, pairs.iter().cloned()).expect("distinct indices");
        let witness = vectors::norm(&x, alpha);
        if witness.value_p <= BigRational::one() {
            return true;
        }
        let signs: Vec<i8> = witness
            .witness
            .iter()
            .map(|i| {
                let at = pairs.binary_search_by_key(&i, |(j, _)| *j).expect("witness ⊆ supp");
                if pairs[at].1.is_negative() {
                    -1
                } else {
                    1
                }
            })
            .collect();
        self.rows.push((witness.witness, signs));
        false
    }

    /// The lexicographically extreme vertex of the optimal face
    /// `{f·x = value}` of the accumulated section: coordinates are
    /// maximized (or minimized) in index order, each stage pinned before
    /// the next.
    fn lex_vertex(
        &self,
        f: &Functional,
        value: &BigRational,
        upward: bool,
    ) -> Vec<(u32, BigRational)> {
        let s = self.support.len();
        let mut a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|(set, signs)| self.row_coeffs(set, signs))
            .collect();
        let mut b = alloc::vec![BigRational::one(); a.len()];
        let mut kinds = alloc::vec![Constraint::Le; a.len()];
        a.push(self.objective_for(f));
        b.push(value.clone());
        kinds.push(Constraint::Eq);
        let mut objectives = Vec::with_capacity(s);
        for j in 0..s {
            let mut c = alloc::vec![BigRational::zero(); 2 * s];
            let unit = if upward {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            c[s + j] = -&unit;
            c[j] = unit;
            objectives.push(c);
        }
        let (uv, _) = simplex::lex_maximize(&a, &b, &kinds, &objectives)
            .expect("the optimal face is nonempty and boxed");
        self.x_pairs(&uv)
    }
}

/// The exact dual norm `‖f‖* = max{f(x) : ‖x‖ ≤ 1}` over the exponent-1
/// space of order `alpha`, with a maximizer attached.
///
/// The ball section over `supp f` is cut out lazily: solve over the rows
/// found so far, test the candidate against the full ball with the norm
/// search, and add the violated sign-patterned constraint until the
/// candidate is feasible. The returned maximizer is the midpoint of the
/// two lexicographically extreme vertices of the optimal face, a canonical
/// optimal point that restores the symmetries Bland's rule breaks (so
/// `e*_2 + e*_3` reports `½(e_2+e_3)`, not an arbitrary segment end).
pub fn dual_norm(f: &Functional, alpha: OrderIndex) -> Result<(BigRational, SparseVector)> {
    if f.is_zero() {
        return Ok((BigRational::zero(), SparseVector::new(1)));
    }
    let mut section = SectionLp::new(f);
    let objective = section.objective_for(f);
    loop {
        let res = section.solve(&objective);
        let pairs = section.x_pairs(&res.x);
        if !section.admit(&pairs, alpha) {
            continue;
        }
        let value = res.objective;
        let hi = section.lex_vertex(f, &value, true);
        if !section.admit(&hi, alpha) {
            continue;
        }
        let lo = section.lex_vertex(f, &value, false);
        if !section.admit(&lo, alpha) {
            continue;
        }
        let half = BigRational::new(1.into(), 2.into());
        let mut mid: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (i, v) in hi.into_iter().chain(lo) {
            *mid.entry(i).or_insert_with(BigRational::zero) += v * &half;
        }
        let maximizer =
            SparseVector::from_values(1, mid.into_iter().filter(|(_, v)| !v.is_zero()))
                .expect("indices are distinct");
        debug_assert_eq!(f.apply(&maximizer).expect("p = 1"), value);
        debug_assert!(vectors::norm(&maximizer, alpha).value_p <= BigRational::one());
        return Ok((value, maximizer));
    }
}

/// A minimal-weight norming-set representation `f = Σ λ_i·f_i` with
/// `f_i ∈ W` supported inside `supp f` and `Σ λ_i = ‖f‖*`.
///
/// The weights are the row duals of the converged sectional LP: splitting
/// `x` into positive and negative parts forces the dual constraints to
/// equalities, so `Σ λ_i ε_i 1_{F_i} = f` coefficient by coefficient, and
/// strong duality pins `Σ λ_i` at the primal optimum. Minimality over all
/// of `W` (not merely the accumulated rows) follows from weak duality:
/// any representation bounds the primal value it majorizes.
pub fn represent_in_ball(f: &Functional, alpha: OrderIndex) -> Result<DualRep> {
    if let Some(m) = f.max_support() {
        if m > REPRESENT_WINDOW_LIMIT {
            return Err(Error::WindowTooLarge {
                requested: m,
                limit: REPRESENT_WINDOW_LIMIT,
            });
        }
    }
    if f.is_zero() {
        return Ok(DualRep {
            terms: Vec::new(),
            total: BigRational::zero(),
        });
    }
    let mut section = SectionLp::new(f);
    let objective = section.objective_for(f);
    let res = loop {
        let res = section.solve(&objective);
        let pairs = section.x_pairs(&res.x);
        if section.admit(&pairs, alpha) {
            break res;
        }
    };
    let terms: Vec<(BigRational, Functional)> = section
        .rows
        .iter()
        .zip(&res.duals)
        .filter(|(_, dual)| dual.is_positive())
        .map(|((set, signs), dual)| (dual.clone(), Functional::signed_indicator(set, signs)))
        .collect();
    let rep = DualRep {
        terms,
        total: res.objective,
    };
    assert!(
        rep.verify(f, alpha),
        "LP duality must hand back an exact minimal representation"
    );
    // The two sides of the certificate pair: the representation total must
    // equal the independently maximized functional value.
    assert_eq!(rep.total, dual_norm(f, alpha)?.0);
    Ok(rep)
}

/// True iff `f` is an extreme point of the dual unit ball: every
/// coefficient `±1` and the support maximal in the family.
pub fn is_dual_extreme(f: &Functional, alpha: OrderIndex) -> bool {
    match f.as_signed_indicator() {
        Some((support, _)) => matches!(families::is_maximal(&support, alpha), Ok(true)),
        None => false,
    }
}

/// The greedy maximal set whose elements lie strictly above `floor`.
fn greedy_maximal_above(floor: u32, alpha: OrderIndex) -> Result<IndexSet> {
    families::complete_to_maximal(&IndexSet::singleton(floor + 1), alpha, floor + 1)
}

/// Splits a non-extreme member of `W` through the midpoint identity
/// `f = ½(f₁ + f₂)`: complete the support to a maximal set with fresh
/// elements above `max supp f` and hand the completion both signs.
pub fn dual_split(f: &Functional, alpha: OrderIndex) -> Result<(Functional, Functional)> {
    let Some((support, _)) = f.as_signed_indicator() else {
        return Err(Error::NotInW);
    };
    let completed = if support.is_empty() {
        greedy_maximal_above(0, alpha)?
    } else {
        if !families::is_member(&support, alpha) {
            return Err(Error::NotInW);
        }
        if families::is_maximal(&support, alpha)? {
            return Err(Error::AlreadyExtreme);
        }
        families::complete_to_maximal(&support, alpha, support.max_elem().expect("nonempty"))?
    };
    let pad = Functional::indicator(&completed.difference(&support));
    let f1 = f.add(&pad);
    let f2 = f.sub(&pad);
    debug_assert!(is_dual_extreme(&f1, alpha) && is_dual_extreme(&f2, alpha));
    debug_assert_eq!(
        f1.add(&f2).scale(&BigRational::new(1.into(), 2.into())),
        *f
    );
    Ok((f1, f2))
}

/// Writes a dual-ball element as a finite convex combination of dual
/// extreme points: represent in `W`, split every non-maximal term, and pad
/// the convex deficit `1 − ‖f‖*` with a cancelling pair `±g` of fresh
/// extremes. The result is a [`DualRep`] with `total = 1` whose terms all
/// pass [`is_dual_extreme`].
pub fn dual_csrp(f: &Functional, alpha: OrderIndex) -> Result<DualRep> {
    let rep = represent_in_ball(f, alpha)?;
    let one = BigRational::one();
    if rep.total > one {
        return Err(Error::OutsideBall);
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut terms: Vec<(BigRational, Functional)> = Vec::new();
    for (weight, term) in rep.terms {
        if is_dual_extreme(&term, alpha) {
            terms.push((weight, term));
        } else {
            let (t1, t2) = dual_split(&term, alpha)?;
            let w = &weight * &half;
            terms.push((w.clone(), t1));
            terms.push((w, t2));
        }
    }
    let deficit = &one - &rep.total;
    if deficit.is_positive() {
        let pad = Functional::indicator(&greedy_maximal_above(
            f.max_support().unwrap_or(0),
            alpha,
        )?);
        let w = &deficit * &half;
        terms.push((w.clone(), pad.clone()));
        terms.push((w, pad.neg()));
    }
    let cert = DualRep { terms, total: one };
    assert!(
        cert.verify(f, alpha) && cert.terms.iter().all(|(_, g)| is_dual_extreme(g, alpha)),
        "the convex split must reconstruct the functional from dual extremes"
    );
    Ok(cert)
}

/// Every admissible subset of `ground`, in lexicographic order (the empty
/// set first). A single extendability probe per node covers all of its
/// children at once, exactly as in the family enumeration: whether one
/// more, larger element may join does not depend on the element's value.
fn admissible_subsets(ground: &IndexSet, alpha: OrderIndex) -> Vec<IndexSet> {
    fn visit(ground: &[u32], alpha: OrderIndex, cur: &IndexSet, out: &mut Vec<IndexSet>) {
        out.push(cur.clone());
        if !families::is_extendable(cur, alpha) {
            return;
        }
        let floor = cur.max_elem().unwrap_or(0);
        for &j in ground.iter().filter(|&&j| j > floor) {
            let next = cur.with_inserted(j).expect("j exceeds the maximum");
            visit(ground, alpha, &next, out);
        }
    }
    let mut out = Vec::new();
    visit(ground.elems(), alpha, &IndexSet::empty(), &mut out);
    out
}

/// Completes an attaining pattern to a dual-extreme functional: the signs
/// stay on `G`, the completion runs above `top = max supp x` (so the new
/// elements meet only zero coordinates and the attained value survives).
fn completed_witness(
    g: &IndexSet,
    signs: &[i8],
    top: u32,
    alpha: OrderIndex,
) -> Result<Functional> {
    let completed = if g.is_empty() {
        greedy_maximal_above(top, alpha)?
    } else {
        families::complete_to_maximal(g, alpha, top)?
    };
    let pattern = Functional::signed_indicator(g, signs);
    Ok(pattern.add(&Functional::indicator(&completed.difference(g))))
}

/// The polyhedrality margin of a unit vector `x` in an exponent-1 space:
/// the best value `f(x) < 1` over dual-extreme `f`, certified to stay at
/// least `ε_x` away from 1.
///
/// Since completions can always run above `max supp x`, the dual extremes
/// not norming `x` realize exactly the sign-patterned admissible sums over
/// `supp x` with value below 1: the margin is a finite maximum. For each
/// admissible `G ⊆ supp x` the best such sum is the full mass sum when it
/// stays below 1, and otherwise the sum with a single smallest-mass
/// coordinate flipped (larger flip sets are dominated by smaller `G`).
pub fn vpoly_margin(x: &SparseVector, alpha: OrderIndex) -> Result<MarginReport> {
    if x.p() != 1 {
        return Err(Error::WrongExponent {
            expected: 1,
            got: x.p(),
        });
    }
    if !vectors::is_unit_norm(x, alpha) {
        return Err(Error::NotUnitNorm);
    }
    let top = x.max_support().expect("unit vectors are nonzero");
    let epsilon_x = BigRational::one() - vectors::best_sub_unit(x, alpha).0;
    let one = BigRational::one();

    let subsets = admissible_subsets(&x.support(), alpha);
    let best_for = |g: &IndexSet| -> BigRational {
        let full: BigRational = g.iter().map(|i| x.mag_p_at(i)).sum();
        if full < one {
            full
        } else {
            let smallest = g.iter().map(|i| x.mag_p_at(i)).min().expect("nonempty");
            full - BigRational::from_integer(2.into()) * smallest
        }
    };
    let margin = subsets
        .iter()
        .filter(|g| !g.is_empty())
        .map(|g| best_for(g))
        .chain(core::iter::once(BigRational::zero()))
        .max()
        .expect("the empty set always competes");

    // Second pass: every attaining pattern, in enumeration order. A set
    // with full mass sum below 1 attains with the aligned signs; a norming
    // set attains with each of its smallest-mass coordinates flipped.
    let mut attains = Vec::new();
    for g in &subsets {
        if g.is_empty() {
            if margin.is_zero() {
                attains.push(completed_witness(g, &[], top, alpha)?);
            }
            continue;
        }
        let aligned: Vec<i8> = g.iter().map(|i| x.get(i).sign().as_i8()).collect();
        let full: BigRational = g.iter().map(|i| x.mag_p_at(i)).sum();
        if full < one {
            if full == margin {
                attains.push(completed_witness(g, &aligned, top, alpha)?);
            }
            continue;
        }
        let two = BigRational::from_integer(2.into());
        for (at, i) in g.iter().enumerate() {
            if &full - &two * x.mag_p_at(i) == margin {
                let mut signs = aligned.clone();
                signs[at] = -signs[at];
                attains.push(completed_witness(g, &signs, top, alpha)?);
            }
        }
    }
    let witness = attains.first().expect("some pattern attains the maximum").clone();
    assert!(margin < one, "norming patterns are excluded by construction");
    assert!(
        margin <= &one - &epsilon_x,
        "the margin is bounded by the sub-unit gap"
    );
    debug_assert!(attains.iter().all(|w| {
        is_dual_extreme(w, alpha) && w.apply(x).expect("p = 1") == margin
    }));
    Ok(MarginReport {
        margin,
        epsilon_x,
        witness,
        attains,
    })
}

/// Whether a `±1` functional on an admissible set inside `[1, window]` is
/// a vertex of the convex hull of the windowed norming set.
///
/// The hull is taken over the completion closure of the window: ground
/// elements run far enough that every non-maximal admissible set inside
/// the window completes to a maximal one inside the ground. Without the
/// closure, sets whose completions overflow the window would masquerade as
/// vertices (nothing inside the window can average them away). Since the
/// tested functional is `±1` on its support, any convex combination
/// producing it must agree with it there, so only agreeing patterns enter
/// the feasibility system.
pub fn is_windowed_hull_vertex(
    f: &Functional,
    alpha: OrderIndex,
    window: u32,
) -> Result<bool> {
    if window < 1 || window > HULL_WINDOW_LIMIT {
        return Err(Error::WindowTooLarge {
            requested: window,
            limit: HULL_WINDOW_LIMIT,
        });
    }
    let Some((support, signs)) = f.as_signed_indicator() else {
        return Err(Error::NotInW);
    };
    if support.max_elem().is_some_and(|m| m > window) {
        return Err(Error::PreconditionViolated(
            "the functional must live inside the window",
        ));
    }
    if !families::is_member(&support, alpha) {
        return Err(Error::NotInW);
    }

    let mut ground = window;
    for set in families::enumerate_family(alpha, window, false)? {
        if set.is_empty() || !families::is_extendable(&set, alpha) {
            continue;
        }
        let completed =
            families::complete_to_maximal(&set, alpha, set.max_elem().expect("nonempty"))?;
        ground = ground.max(completed.max_elem().expect("completions grow"));
    }

    // Columns: every signed admissible pattern in the ground window that
    // agrees with `f` on `supp f`, except `f` itself. Rows: one equality
    // per ground coordinate plus the convexity row.
    let mut columns: Vec<Functional> = Vec::new();
    for set in families::enumerate_family_bounded(alpha, ground, false, ground)? {
        if !support.is_subset_of(&set) {
            continue;
        }
        let free: Vec<u32> = set.iter().filter(|i| !support.contains(*i)).collect();
        for mask in 0u32..(1 << free.len()) {
            let pattern: Vec<i8> = set
                .iter()
                .map(|i| match support.elems().binary_search(&i) {
                    Ok(at) => signs[at],
                    Err(_) => {
                        let bit = free.binary_search(&i).expect("i is free");
                        if mask & (1 << bit) == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                })
                .collect();
            let candidate = Functional::signed_indicator(&set, &pattern);
            if candidate != *f {
                columns.push(candidate);
            }
        }
    }

    if columns.is_empty() {
        return Ok(true);
    }
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(ground as usize + 1);
    let mut b: Vec<BigRational> = Vec::with_capacity(ground as usize + 1);
    for i in 1..=ground {
        a.push(columns.iter().map(|g| g.coeff(i)).collect());
        b.push(f.coeff(i));
    }
    a.push(alloc::vec![BigRational::one(); columns.len()]);
    b.push(BigRational::one());
    Ok(simplex::feasibility_eq(&a, &b).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use alloc::vec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn set(elems: &[u32]) -> IndexSet {
        IndexSet::new(elems.to_vec()).expect("increasing")
    }

    fn func(pairs: &[(u32, BigRational)]) -> Functional {
        Functional::new(pairs.to_vec()).expect("valid")
    }

    fn signed(elems: &[u32], signs: &[i8]) -> Functional {
        Functional::signed_indicator(&set(elems), signs)
    }

    const S1: OrderIndex = OrderIndex::Finite(1);

    #[test]
    fn functional_construction_and_application() {
        assert!(Functional::new(vec![(0, q(1, 1))]).is_err());
        assert!(Functional::new(vec![(2, q(1, 1)), (2, q(1, 1))]).is_err());
        let f = func(&[(2, q(1, 1)), (3, q(0, 1)), (5, q(-1, 2))]);
        assert_eq!(f.support(), set(&[2, 5]));
        assert_eq!(f.coeff(3), q(0, 1));

        let x = SparseVector::from_values(1, vec![(2, q(1, 2)), (5, q(1, 3))]).unwrap();
        assert_eq!(f.apply(&x).unwrap(), q(1, 2) - q(1, 6));
        let y = SparseVector::unit(2, 2);
        assert!(matches!(
            f.apply(&y),
            Err(Error::WrongExponent { expected: 1, got: 2 })
        ));

        assert_eq!(f.add(&f.neg()), Functional::zero());
        assert_eq!(f.sub(&f), Functional::zero());
        assert_eq!(f.scale(&q(0, 1)), Functional::zero());
    }

    #[test]
    fn dual_norm_frozen_examples() {
        let (v, x) = dual_norm(&Functional::unit(1), S1).unwrap();
        assert_eq!(v, q(1, 1));
        assert_eq!(x, SparseVector::unit(1, 1));

        let f = func(&[(2, q(1, 1)), (3, q(1, 1))]);
        let (v, x) = dual_norm(&f, S1).unwrap();
        assert_eq!(v, q(1, 1));
        let expected =
            SparseVector::from_values(1, vec![(2, q(1, 2)), (3, q(1, 2))]).unwrap();
        assert_eq!(x, expected);

        let f = func(&[(1, q(1, 1)), (2, q(1, 1))]);
        let (v, x) = dual_norm(&f, S1).unwrap();
        assert_eq!(v, q(2, 1));
        let expected =
            SparseVector::from_values(1, vec![(1, q(1, 1)), (2, q(1, 1))]).unwrap();
        assert_eq!(x, expected);

        let (v, x) = dual_norm(&Functional::zero(), S1).unwrap();
        assert_eq!(v, q(0, 1));
        assert!(x.is_zero());
    }

    #[test]
    fn represent_frozen_examples() {
        let f = func(&[(2, q(1, 1)), (3, q(1, 1))]);
        let rep = represent_in_ball(&f, S1).unwrap();
        assert_eq!(rep.total, q(1, 1));
        assert_eq!(rep.terms, vec![(q(1, 1), f.clone())]);
        assert!(rep.verify(&f, S1));

        let f = func(&[(1, q(1, 2)), (2, q(1, 2))]);
        let rep = represent_in_ball(&f, S1).unwrap();
        assert_eq!(rep.total, q(1, 1));
        assert_eq!(
            rep.terms,
            vec![
                (q(1, 2), Functional::unit(1)),
                (q(1, 2), Functional::unit(2)),
            ]
        );

        let rep = represent_in_ball(&Functional::zero(), S1).unwrap();
        assert!(rep.terms.is_empty());
        assert_eq!(rep.total, q(0, 1));

        let far = Functional::unit(13);
        assert!(matches!(
            represent_in_ball(&far, S1),
            Err(Error::WindowTooLarge { requested: 13, limit: 12 })
        ));
    }

    /// The certificate pair: the maximizer proves `‖f‖* ≥ v` (it lies in
    /// the ball by the independent norm search and attains `v`), the
    /// representation proves `‖f‖* ≤ v` (triangle inequality through
    /// membership-checked terms). Together they pin the dual norm without
    /// trusting the LP.
    #[test]
    fn dual_norm_and_representation_certify_each_other() {
        let mut rng = SplitMix64::new(0x5eed_d0a1);
        for _ in 0..40 {
            let mut pairs = Vec::new();
            for i in 1..=8u32 {
                if rng.next_u64() % 2 == 0 {
                    continue;
                }
                let num = (rng.next_u64() % 5) as i64 - 2;
                let den = (rng.next_u64() % 4) as i64 + 1;
                if num != 0 {
                    pairs.push((i, q(num, den)));
                }
            }
            let f = func(&pairs);
            let (value, maximizer) = dual_norm(&f, S1).unwrap();
            assert_eq!(f.apply(&maximizer).unwrap(), value);
            assert!(vectors::norm(&maximizer, S1).value_p <= q(1, 1));
            let rep = represent_in_ball(&f, S1).unwrap();
            assert!(rep.verify(&f, S1));
            assert_eq!(rep.total, value);
        }
    }

    #[test]
    fn norming_set_members_have_dual_norm_one() {
        for f in [
            signed(&[2, 3], &[1, -1]),
            signed(&[1], &[-1]),
            signed(&[3, 4, 5], &[1, 1, -1]),
            signed(&[4, 7], &[-1, -1]),
        ] {
            let (v, _) = dual_norm(&f, S1).unwrap();
            assert_eq!(v, q(1, 1));
        }
    }

    #[test]
    fn dual_extreme_frozen_examples() {
        assert!(is_dual_extreme(&signed(&[2, 3], &[1, -1]), S1));
        assert!(is_dual_extreme(&Functional::unit(1), S1));
        assert!(!is_dual_extreme(&Functional::unit(2), S1));
        assert!(!is_dual_extreme(&func(&[(1, q(1, 2))]), S1));
        assert!(!is_dual_extreme(&Functional::zero(), S1));
        // Support outside the family: {1, 2} carries no admissible pattern.
        assert!(!is_dual_extreme(&signed(&[1, 2], &[1, 1]), S1));
    }

    #[test]
    fn dual_split_frozen_examples() {
        let (f1, f2) = dual_split(&Functional::unit(2), S1).unwrap();
        assert_eq!(f1, signed(&[2, 3], &[1, 1]));
        assert_eq!(f2, signed(&[2, 3], &[1, -1]));

        let (f1, f2) = dual_split(&signed(&[4, 5], &[1, 1]), S1).unwrap();
        assert_eq!(f1, signed(&[4, 5, 6, 7], &[1, 1, 1, 1]));
        assert_eq!(f2, signed(&[4, 5, 6, 7], &[1, 1, -1, -1]));

        assert!(matches!(
            dual_split(&signed(&[2, 3], &[1, -1]), S1),
            Err(Error::AlreadyExtreme)
        ));
        assert!(matches!(
            dual_split(&func(&[(2, q(1, 2))]), S1),
            Err(Error::NotInW)
        ));
        assert!(matches!(
            dual_split(&signed(&[1, 2], &[1, 1]), S1),
            Err(Error::NotInW)
        ));
    }

    #[test]
    fn dual_csrp_frozen_examples() {
        let extreme = signed(&[2, 3], &[1, -1]);
        let cert = dual_csrp(&extreme, S1).unwrap();
        assert_eq!(cert.terms, vec![(q(1, 1), extreme)]);

        let cert = dual_csrp(&Functional::unit(2), S1).unwrap();
        assert_eq!(
            cert.terms,
            vec![
                (q(1, 2), signed(&[2, 3], &[1, 1])),
                (q(1, 2), signed(&[2, 3], &[1, -1])),
            ]
        );

        let cert = dual_csrp(&func(&[(2, q(1, 2))]), S1).unwrap();
        let pad = Functional::indicator(&set(&[3, 4, 5]));
        assert_eq!(
            cert.terms,
            vec![
                (q(1, 4), signed(&[2, 3], &[1, 1])),
                (q(1, 4), signed(&[2, 3], &[1, -1])),
                (q(1, 4), pad.clone()),
                (q(1, 4), pad.neg()),
            ]
        );

        assert!(matches!(
            dual_csrp(&func(&[(2, q(2, 1))]), S1),
            Err(Error::OutsideBall)
        ));
    }

    #[test]
    fn margin_frozen_examples() {
        let x = SparseVector::from_values(1, vec![(2, q(1, 2)), (3, q(1, 2))]).unwrap();
        let report = vpoly_margin(&x, S1).unwrap();
        assert_eq!(report.margin, q(1, 2));
        assert_eq!(report.epsilon_x, q(1, 2));
        assert_eq!(report.witness, signed(&[2, 4], &[1, 1]));
        assert_eq!(report.witness.apply(&x).unwrap(), q(1, 2));

        let report = vpoly_margin(&SparseVector::unit(1, 1), S1).unwrap();
        assert_eq!(report.margin, q(0, 1));
        assert_eq!(report.epsilon_x, q(1, 1));
        // The empty pattern completes off the support: coordinate 1 is not
        // touched by the witness.
        assert_eq!(report.witness, signed(&[2, 3], &[1, 1]));

        let x = SparseVector::from_values(1, vec![(1, q(1, 1)), (2, q(1, 1))]).unwrap();
        let report = vpoly_margin(&x, S1).unwrap();
        assert_eq!(report.margin, q(0, 1));
        assert_eq!(report.epsilon_x, q(1, 1));

        assert!(matches!(
            vpoly_margin(&SparseVector::from_values(1, vec![(2, q(1, 2))]).unwrap(), S1),
            Err(Error::NotUnitNorm)
        ));
        assert!(matches!(
            vpoly_margin(&SparseVector::unit(2, 1), S1),
            Err(Error::WrongExponent { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn margin_equals_the_gap_complement_on_random_unit_vectors() {
        let mut rng = SplitMix64::new(0x11ad_9e00);
        for _ in 0..25 {
            let mut pairs = Vec::new();
            for i in 1..=9u32 {
                if rng.next_u64() % 3 != 0 {
                    continue;
                }
                let num = (rng.next_u64() % 4) as i64 + 1;
                let den = (rng.next_u64() % 4) as i64 + 1;
                let sign = if rng.next_u64() % 2 == 0 { 1 } else { -1 };
                pairs.push((i, q(sign * num, den)));
            }
            if pairs.is_empty() {
                continue;
            }
            let raw = SparseVector::from_values(1, pairs).unwrap();
            let scale = vectors::norm(&raw, S1).value_p.recip();
            let x = raw.scale(&scale);
            let report = vpoly_margin(&x, S1).unwrap();
            // The sub-unit enumeration and the signed-pattern maximum see
            // the same values: flips are dominated by subsets.
            assert_eq!(report.margin, q(1, 1) - report.epsilon_x);
            assert!(is_dual_extreme(&report.witness, S1));
            assert_eq!(report.witness.apply(&x).unwrap(), report.margin);
        }
    }

    #[test]
    fn hull_vertices_match_the_extreme_characterization() {
        // Every ±1 pattern on every admissible set inside the window: the
        // vertex test must agree with the maximality characterization.
        for window in [3u32, 4] {
            for f_set in families::enumerate_family(S1, window, false).unwrap() {
                if f_set.is_empty() {
                    continue;
                }
                for mask in 0u32..(1 << f_set.len()) {
                    let signs: Vec<i8> = (0..f_set.len())
                        .map(|b| if mask & (1 << b) == 0 { 1 } else { -1 })
                        .collect();
                    let f = Functional::signed_indicator(&f_set, &signs);
                    assert_eq!(
                        is_windowed_hull_vertex(&f, S1, window).unwrap(),
                        is_dual_extreme(&f, S1),
                        "disagreement at {f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn hull_vertex_test_needs_the_completion_closure() {
        // {4,5,6} has no admissible extension inside [1,6]; only the
        // closure (which reaches 7) lets the averaging pair appear.
        let f = signed(&[4, 5, 6], &[1, 1, 1]);
        assert!(!is_windowed_hull_vertex(&f, S1, 6).unwrap());
        assert!(!is_dual_extreme(&f, S1));

        assert!(matches!(
            is_windowed_hull_vertex(&Functional::unit(1), S1, 7),
            Err(Error::WindowTooLarge { requested: 7, limit: 6 })
        ));
        assert!(matches!(
            is_windowed_hull_vertex(&func(&[(2, q(1, 2))]), S1, 3),
            Err(Error::NotInW)
        ));
    }

    #[test]
    fn dual_operations_respect_higher_orders() {
        // At order 2 the set {2, 3, 4, 5} is admissible, so the four
        // coordinate functionals share one norming pattern.
        let alpha = OrderIndex::Finite(2);
        let f = func(&[(2, q(1, 1)), (3, q(1, 1)), (4, q(1, 1)), (5, q(1, 1))]);
        let (v, x) = dual_norm(&f, alpha).unwrap();
        assert_eq!(v, q(1, 1));
        assert_eq!(f.apply(&x).unwrap(), q(1, 1));
        let rep = represent_in_ball(&f, alpha).unwrap();
        assert_eq!(rep.total, q(1, 1));
        assert_eq!(rep.terms.len(), 1);

        // At order 1 no admissible set covers all four coordinates and the
        // optimum mixes patterns: ⅓(e*₂+e*₃) + ⅓(e*₂+e*₄) + ⅓(e*₂+e*₅)
        // + ⅔(e*₃+e*₄+e*₅) reconstructs f with total 5/3, matched from
        // below by x = (⅔,⅓,⅓,⅓).
        let (v1, x1) = dual_norm(&f, S1).unwrap();
        assert_eq!(v1, q(5, 3));
        assert_eq!(f.apply(&x1).unwrap(), q(5, 3));
        assert!(vectors::norm(&x1, S1).value_p <= q(1, 1));
    }
}
