//! Exact rational linear programming, crate-internal.
//!
//! A dense two-phase tableau simplex over `BigRational` with Bland's rule,
//! so every pivot is exact and termination is guaranteed. Problems are
//! `maximize c·x` over `x ≥ 0` with `≤` / `=` rows. Row duals are read off
//! the reduced costs of each row's slack or artificial column, which is
//! what the dual-ball machinery uses to extract convex-combination
//! certificates. Free variables are handled by the callers (they split
//! variables into positive and negative parts).

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Constraint {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct Lp {
    /// Row coefficient vectors, all of the same length.
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
    pub kinds: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexResult {
    pub objective: BigRational,
    pub x: Vec<BigRational>,
    /// One dual multiplier per original row (zero for rows detected as
    /// redundant). For `≤` rows at a maximum these are ≥ 0.
    pub duals: Vec<BigRational>,
}

#[derive(Debug, Clone)]
pub(crate) enum LpOutcome {
    Optimal(SimplexResult),
    Unbounded,
    Infeasible,
}

struct Tableau {
    /// `rows[r]` has `ncols` coefficients followed by the rhs.
    rows: Vec<Vec<BigRational>>,
    /// Objective row: reduced costs per column, then the objective value.
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    /// Reader column per original row (slack or artificial), with the sign
    /// the row was scaled by.
    reader: Vec<(usize, i8)>,
    first_artificial: usize,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.ncols]
    }

    /// Installs reduced costs for the cost vector `cost` (full column
    /// length, rhs slot unused): `obj[j] = cost[j] − Σ_r cost[basis_r]·T[r][j]`.
    fn set_objective(&mut self, cost: &[BigRational]) {
        let mut obj = alloc::vec![BigRational::zero(); self.ncols + 1];
        obj[..self.ncols].clone_from_slice(&cost[..self.ncols]);
        for r in 0..self.rows.len() {
            let cb = cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..=self.ncols {
                let t = &self.rows[r][j] * &cb;
                obj[j] -= t;
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let piv = self.rows[r][j].clone();
        debug_assert!(!piv.is_zero());
        for v in self.rows[r].iter_mut() {
            *v /= &piv;
        }
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][j].clone();
            if factor.is_zero() {
                continue;
            }
            for k in 0..=self.ncols {
                let t = &self.rows[r][k] * &factor;
                self.rows[i][k] -= t;
            }
        }
        let factor = self.obj[j].clone();
        if !factor.is_zero() {
            for k in 0..=self.ncols {
                let t = &self.rows[r][k] * &factor;
                self.obj[k] -= t;
            }
        }
        self.basis[r] = j;
    }

    /// Runs simplex until optimality or unboundedness. Columns at or past
    /// `col_limit` are barred from entering (used to lock artificials in
    /// phase 2). Bland's rule throughout.
    fn optimize(&mut self, col_limit: usize) -> bool {
        loop {
            let entering = (0..col_limit).find(|&j| self.obj[j].is_positive());
            let j = match entering {
                Some(j) => j,
                None => return true,
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][j].is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / &self.rows[r][j];
                let replace = match &leave {
                    None => true,
                    Some((lr, lv)) => {
                        ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr])
                    }
                };
                if replace {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }
}

/// Solves the LP exactly. Variables are implicitly `≥ 0`.
pub(crate) fn solve(lp: &Lp) -> LpOutcome {
    let m = lp.a.len();
    let n = lp.c.len();
    debug_assert!(lp.a.iter().all(|row| row.len() == n));
    debug_assert_eq!(lp.b.len(), m);
    debug_assert_eq!(lp.kinds.len(), m);

    let n_slack = lp.kinds.iter().filter(|k| **k == Constraint::Le).count();
    // Artificials: every `=` row, plus every `≤` row whose slack cannot
    // start basic because the rhs is negative.
    let needs_artificial: Vec<bool> = (0..m)
        .map(|i| lp.kinds[i] == Constraint::Eq || lp.b[i].is_negative())
        .collect();
    let n_art = needs_artificial.iter().filter(|x| **x).count();
    let first_artificial = n + n_slack;
    let ncols = first_artificial + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut reader = Vec::with_capacity(m);
    let mut slack_at = n;
    let mut art_at = first_artificial;
    for i in 0..m {
        let sigma: i8 = if lp.b[i].is_negative() { -1 } else { 1 };
        let mut row = alloc::vec![BigRational::zero(); ncols + 1];
        for j in 0..n {
            row[j] = if sigma < 0 { -&lp.a[i][j] } else { lp.a[i][j].clone() };
        }
        row[ncols] = if sigma < 0 { -&lp.b[i] } else { lp.b[i].clone() };
        if lp.kinds[i] == Constraint::Le {
            row[slack_at] = if sigma < 0 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            reader.push((slack_at, sigma));
            slack_at += 1;
        }
        if needs_artificial[i] {
            row[art_at] = BigRational::one();
            if lp.kinds[i] == Constraint::Eq {
                reader.push((art_at, sigma));
            }
            basis.push(art_at);
            art_at += 1;
        } else {
            // A `≤` row with b ≥ 0: its slack starts basic.
            basis.push(reader[i].0);
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        reader,
        first_artificial,
        ncols,
    };

    // Phase 1: maximize −Σ artificials down to zero.
    if n_art > 0 {
        let mut cost = alloc::vec![BigRational::zero(); ncols + 1];
        for j in first_artificial..ncols {
            cost[j] = -BigRational::one();
        }
        t.set_objective(&cost);
        let bounded = t.optimize(ncols);
        debug_assert!(bounded, "phase 1 is bounded by 0");
        if !t.obj[t.ncols].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive leftover artificials out of the basis at level zero, or
        // drop their rows as redundant.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= t.first_artificial {
                debug_assert!(t.rhs(r).is_zero());
                match (0..t.first_artificial).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2 on the real objective, artificial columns barred.
    let mut cost = alloc::vec![BigRational::zero(); ncols + 1];
    cost[..n].clone_from_slice(&lp.c);
    t.set_objective(&cost);
    if !t.optimize(t.first_artificial) {
        return LpOutcome::Unbounded;
    }

    let mut x = alloc::vec![BigRational::zero(); n];
    for r in 0..t.rows.len() {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r).clone();
        }
    }
    // Duals: for a reader column with A_col = σ·e_i and zero cost, the
    // reduced cost is −σ·y_i.
    let mut duals = alloc::vec![BigRational::zero(); m];
    for i in 0..m {
        let (col, sigma) = t.reader[i];
        let y = -t.obj[col].clone();
        duals[i] = if sigma < 0 { -y } else { y };
    }
    // The objective slot accumulates −z under the reduced-cost convention.
    let objective = -t.obj[t.ncols].clone();
    LpOutcome::Optimal(SimplexResult { objective, x, duals })
}

/// Finds `x ≥ 0` with `A x = b`, or `None`.
pub(crate) fn feasibility_eq(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.first().map_or(0, |row| row.len());
    let lp = Lp {
        a: a.to_vec(),
        b: b.to_vec(),
        c: alloc::vec![BigRational::zero(); n],
        kinds: alloc::vec![Constraint::Eq; a.len()],
    };
    match solve(&lp) {
        LpOutcome::Optimal(res) => Some(res.x),
        _ => None,
    }
}

/// Lexicographic maximization: optimizes each objective in turn, pinning
/// the previous optima with equality rows. Returns the final solution and
/// the optimum of each stage. `None` on infeasibility or unboundedness of
/// any stage.
pub(crate) fn lex_maximize(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    kinds: &[Constraint],
    objectives: &[Vec<BigRational>],
) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    let mut lp = Lp {
        a: a.to_vec(),
        b: b.to_vec(),
        c: Vec::new(),
        kinds: kinds.to_vec(),
    };
    let mut optima = Vec::with_capacity(objectives.len());
    let mut last_x = None;
    for c in objectives {
        lp.c = c.clone();
        match solve(&lp) {
            LpOutcome::Optimal(res) => {
                optima.push(res.objective.clone());
                last_x = Some(res.x);
                lp.a.push(c.clone());
                lp.b.push(res.objective);
                lp.kinds.push(Constraint::Eq);
            }
            _ => return None,
        }
    }
    last_x.map(|x| (x, optima))
}

/// A nonzero rational kernel vector of the row system (length `ncols`),
/// or `None` when the rows have full column rank.
pub(crate) fn rational_kernel_vector(
    rows: &[Vec<BigRational>],
    ncols: usize,
) -> Option<Vec<BigRational>> {
    // Reduced row echelon form, tracking pivot columns.
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let piv = m[rank][col].clone();
        for v in m[rank].iter_mut() {
            *v /= &piv;
        }
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for k in 0..ncols {
                let t = &m[rank][k] * &factor;
                m[r][k] -= t;
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let pivot_cols: alloc::collections::BTreeSet<usize> = pivot_col_of_row.iter().copied().collect();
    let free = (0..ncols).find(|c| !pivot_cols.contains(c))?;
    // Set the free coordinate to 1 and read pivot coordinates off RREF.
    let mut v = alloc::vec![BigRational::zero(); ncols];
    v[free] = BigRational::one();
    for (r, &pc) in pivot_col_of_row.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

/// The rank over ℚ of a rational matrix, by Gaussian elimination.
pub(crate) fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let piv = m[rank][col].clone();
        for v in m[rank].iter_mut() {
            *v /= &piv;
        }
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for k in 0..ncols {
                let t = &m[rank][k] * &factor;
                m[r][k] -= t;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
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

    fn rows(data: &[&[i64]]) -> Vec<Vec<BigRational>> {
        data.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    /// `maximize c·x` subject to `A x ≤ b`, `x ≥ 0`.
    fn maximize_leq(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
        solve(&Lp {
            a: a.to_vec(),
            b: b.to_vec(),
            c: c.to_vec(),
            kinds: alloc::vec![Constraint::Le; a.len()],
        })
    }

    fn vec_i(data: &[i64]) -> Vec<BigRational> {
        data.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn box_maximum_with_duals() {
        // max x + y over the unit box.
        let out = maximize_leq(&rows(&[&[1, 0], &[0, 1]]), &vec_i(&[1, 1]), &vec_i(&[1, 1]));
        let LpOutcome::Optimal(res) = out else {
            panic!("expected optimum")
        };
        assert_eq!(res.objective, int(2));
        assert_eq!(res.x, vec_i(&[1, 1]));
        assert_eq!(res.duals, vec_i(&[1, 1]));
    }

    #[test]
    fn binding_structure_in_duals() {
        // max 2x + y, x + y ≤ 3, x ≤ 2: optimum (2,1), value 5, duals (1,1);
        // y·b = objective (strong duality).
        let out = maximize_leq(
            &rows(&[&[1, 1], &[1, 0]]),
            &vec_i(&[3, 2]),
            &vec_i(&[2, 1]),
        );
        let LpOutcome::Optimal(res) = out else {
            panic!("expected optimum")
        };
        assert_eq!(res.objective, int(5));
        assert_eq!(res.x, vec_i(&[2, 1]));
        let paid: BigRational = res.duals[0].clone() * int(3) + res.duals[1].clone() * int(2);
        assert_eq!(paid, int(5));
    }

    #[test]
    fn fractional_pivoting_stays_exact() {
        // max x + y, 2x + y ≤ 2, x + 3y ≤ 3 → x = 3/5, y = 4/5.
        let out = maximize_leq(
            &rows(&[&[2, 1], &[1, 3]]),
            &vec_i(&[2, 3]),
            &vec_i(&[1, 1]),
        );
        let LpOutcome::Optimal(res) = out else {
            panic!("expected optimum")
        };
        assert_eq!(res.x, alloc::vec![rat(3, 5), rat(4, 5)]);
        assert_eq!(res.objective, rat(7, 5));
    }

    #[test]
    fn unbounded_direction_detected() {
        let out = maximize_leq(&rows(&[&[1, -1]]), &vec_i(&[1]), &vec_i(&[0, 1]));
        assert!(matches!(out, LpOutcome::Unbounded));
    }

    #[test]
    fn negative_rhs_uses_phase_one() {
        // x − y ≤ −1 forces y ≥ 1 + x; max −y hits y = 1.
        let out = maximize_leq(&rows(&[&[1, -1]]), &vec_i(&[-1]), &vec_i(&[0, -1]));
        let LpOutcome::Optimal(res) = out else {
            panic!("expected optimum")
        };
        assert_eq!(res.x, vec_i(&[0, 1]));
        assert_eq!(res.objective, int(-1));
    }

    #[test]
    fn infeasible_equalities() {
        // x + y = 1 and x + y = 2 cannot both hold.
        let a = rows(&[&[1, 1], &[1, 1]]);
        assert!(feasibility_eq(&a, &vec_i(&[1, 2])).is_none());
    }

    #[test]
    fn feasible_equalities() {
        // x + y = 1, x − y = 0 → (1/2, 1/2).
        let a = rows(&[&[1, 1], &[1, -1]]);
        let x = feasibility_eq(&a, &vec_i(&[1, 0])).unwrap();
        assert_eq!(x, alloc::vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // Duplicate equality rows leave a basic artificial to clean up.
        let a = rows(&[&[1, 1], &[1, 1], &[1, -1]]);
        let x = feasibility_eq(&a, &vec_i(&[1, 1, 0])).unwrap();
        assert_eq!(x, alloc::vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn lex_stages_pin_previous_optima() {
        // Stage 1: max x + y = 1 on the simplex x + y ≤ 1 with x ≤ 3/4;
        // stage 2: max x → (3/4, 1/4).
        let a = alloc::vec![vec_i(&[1, 1]), alloc::vec![int(1), int(0)]];
        let b = alloc::vec![int(1), rat(3, 4)];
        let kinds = alloc::vec![Constraint::Le, Constraint::Le];
        let objs = alloc::vec![vec_i(&[1, 1]), vec_i(&[1, 0])];
        let (x, optima) = lex_maximize(&a, &b, &kinds, &objs).unwrap();
        assert_eq!(optima, alloc::vec![int(1), rat(3, 4)]);
        assert_eq!(x, alloc::vec![rat(3, 4), rat(1, 4)]);
    }

    #[test]
    fn rank_of_rational_matrices() {
        assert_eq!(rational_rank(&rows(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rational_rank(&rows(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
        assert_eq!(rational_rank(&rows(&[&[0, 0]])), 0);
        assert_eq!(
            rational_rank(&[alloc::vec![rat(1, 2), rat(1, 3)], alloc::vec![rat(1, 4), rat(1, 5)]]),
            2
        );
    }
}
