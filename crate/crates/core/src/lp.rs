//! The stability polytope and its exact decision procedure. Every number in
//! this module is an arbitrary-precision rational; there are no tolerances.
//! Feasibility is decided by a phase-1 simplex with Bland's pivoting rule,
//! and a feasible point is rounded to a stable matching by sending each man
//! to his favourite woman in the support of his row.

use itertools::Itertools;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::smg::{Matching, SmgInstance};
use crate::{Error, Man, Result, Woman};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

/// Dense row representation of the polytope: per-man and per-woman matching
/// equalities, one stability inequality per (man, woman) pair, and implicit
/// nonnegativity. Variables are indexed `b * n + c`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub n: usize,
    pub num_vars: usize,
    /// `row . x = rhs`
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    /// `row . x >= rhs`
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
}

impl LinearSystem {
    pub fn var_index(&self, b: Man, c: Woman) -> usize {
        b.0 * self.n + c.0
    }

    /// Exact membership check, nonnegativity included.
    pub fn satisfies(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if x.iter().any(|v| v.is_negative()) {
            return false;
        }
        let dot = |row: &[Rational]| -> Rational {
            row.iter().zip(x).map(|(a, b)| a * b).sum()
        };
        self.equalities.iter().all(|(row, rhs)| &dot(row) == rhs)
            && self.inequalities.iter().all(|(row, rhs)| &dot(row) >= rhs)
    }
}

/// Builds the polytope for the instance: row sums one per man and per
/// woman, and for every pair `(b, c)` the inequality
/// `x_bc + sum over women b prefers to c of x_bc' + sum over (b', b) in R_c
/// of x_b'c >= 1`.
pub fn build_polytope(inst: &SmgInstance) -> LinearSystem {
    let n = inst.n();
    let num_vars = n * n;
    let mut equalities = Vec::with_capacity(2 * n);
    for b in 0..n {
        let mut row = vec![Rational::zero(); num_vars];
        for c in 0..n {
            row[b * n + c] = Rational::one();
        }
        equalities.push((row, Rational::one()));
    }
    for c in 0..n {
        let mut row = vec![Rational::zero(); num_vars];
        for b in 0..n {
            row[b * n + c] = Rational::one();
        }
        equalities.push((row, Rational::one()));
    }

    let mut inequalities = Vec::with_capacity(num_vars);
    for b in 0..n {
        let pref = inst.man_pref(Man(b));
        for c in 0..n {
            let mut row = vec![Rational::zero(); num_vars];
            row[b * n + c] = Rational::one();
            for &c2 in pref.ranked() {
                if c2 == c {
                    break;
                }
                row[b * n + c2] = Rational::one();
            }
            for b2 in 0..n {
                if b2 != b && inst.relation(Woman(c)).contains(Man(b2), Man(b)) {
                    row[b2 * n + c] = Rational::one();
                }
            }
            inequalities.push((row, Rational::one()));
        }
    }

    LinearSystem {
        n,
        num_vars,
        equalities,
        inequalities,
    }
}

/// Decides feasibility exactly; returns a point in the polytope or `None`
/// iff it is empty.
pub fn feasible_point(sys: &LinearSystem) -> Option<RationalVector> {
    // Standard form: each inequality row . x >= rhs becomes
    // row . x - s = rhs with slack s >= 0; every row then receives an
    // artificial variable, and phase 1 minimises the artificial sum.
    let n_struct = sys.num_vars;
    let n_slack = sys.inequalities.len();
    let n_rows = sys.equalities.len() + sys.inequalities.len();
    let n_cols = n_struct + n_slack + n_rows;

    // rows[i] = coefficients over all columns, rhs[i] >= 0
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_rows);
    let mut rhs: Vec<Rational> = Vec::with_capacity(n_rows);
    for (row, b) in sys
        .equalities
        .iter()
        .map(|(r, b)| (r.clone(), b.clone()))
        .chain(
            sys.inequalities
                .iter()
                .enumerate()
                .map(|(k, (r, b))| {
                    let mut row = r.clone();
                    row.resize(n_struct + n_slack, Rational::zero());
                    row[n_struct + k] = -Rational::one();
                    (row, b.clone())
                }),
        )
    {
        let mut full = row;
        full.resize(n_cols, Rational::zero());
        rows.push(full);
        rhs.push(b);
    }
    for i in 0..n_rows {
        if rhs[i].is_negative() {
            for v in rows[i].iter_mut() {
                *v = -v.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
        rows[i][n_struct + n_slack + i] = Rational::one();
    }

    let mut basis: Vec<usize> = (0..n_rows).map(|i| n_struct + n_slack + i).collect();

    // phase-1 objective: minimise the sum of artificials. Maintain the
    // reduced cost row explicitly: z_row[j] = c_j - c_B . B^-1 A_j, with
    // c_j = 1 on artificials. Start: subtract each artificial row.
    let mut cost = vec![Rational::zero(); n_cols];
    for j in (n_struct + n_slack)..n_cols {
        cost[j] = Rational::one();
    }
    let mut z_row = cost.clone();
    let mut z_val = Rational::zero();
    for i in 0..n_rows {
        // basis variable i is an artificial with cost 1
        for j in 0..n_cols {
            z_row[j] -= &rows[i][j];
        }
        z_val -= &rhs[i];
    }

    loop {
        // Bland: entering = lowest-index column with negative reduced cost
        let entering = (0..n_cols).find(|&j| z_row[j].is_negative());
        let Some(e) = entering else { break };

        // ratio test, ties broken by lowest basis variable index
        let mut best: Option<(Rational, usize)> = None;
        for i in 0..n_rows {
            if rows[i][e].is_positive() {
                let ratio = &rhs[i] / &rows[i][e];
                match &best {
                    Some((r, bi))
                        if *r < ratio || (*r == ratio && basis[*bi] < basis[i]) => {}
                    _ => best = Some((ratio, i)),
                }
            }
        }
        let Some((_, pivot_row)) = best else {
            // unbounded phase-1 objective cannot happen (bounded below by 0)
            unreachable!("phase-1 simplex is bounded");
        };

        // pivot on (pivot_row, e)
        let piv = rows[pivot_row][e].clone();
        for v in rows[pivot_row].iter_mut() {
            *v /= &piv;
        }
        rhs[pivot_row] /= &piv;
        for i in 0..n_rows {
            if i != pivot_row && !rows[i][e].is_zero() {
                let factor = rows[i][e].clone();
                for j in 0..n_cols {
                    let delta = &factor * &rows[pivot_row][j];
                    rows[i][j] -= delta;
                }
                let delta = &factor * &rhs[pivot_row];
                rhs[i] -= delta;
            }
        }
        if !z_row[e].is_zero() {
            let factor = z_row[e].clone();
            for j in 0..n_cols {
                let delta = &factor * &rows[pivot_row][j];
                z_row[j] -= delta;
            }
            let delta = &factor * &rhs[pivot_row];
            z_val -= delta;
        }
        basis[pivot_row] = e;
    }

    if !z_val.is_zero() {
        return None; // artificials cannot all reach zero: infeasible
    }

    let mut x = vec![Rational::zero(); n_struct];
    for (i, &var) in basis.iter().enumerate() {
        if var < n_struct {
            x[var] = rhs[i].clone();
        }
    }
    debug_assert!(sys.satisfies(&x));
    Some(x)
}

/// Rounds a point of the polytope to a stable matching: each man takes his
/// most preferred woman with positive mass. Requires asymmetric
/// preferences, under which no two men can select the same woman.
pub fn round_to_matching(inst: &SmgInstance, x: &[Rational]) -> Result<Matching> {
    if !inst.is_asymmetric() {
        return Err(Error::NotAsymmetric);
    }
    let sys = build_polytope(inst);
    if !sys.satisfies(x) {
        return Err(Error::InfeasiblePoint);
    }
    let n = inst.n();
    let mut man_to_woman = vec![usize::MAX; n];
    let mut woman_taken: Vec<Option<usize>> = vec![None; n];
    for b in 0..n {
        let fav = inst
            .man_pref(Man(b))
            .ranked()
            .iter()
            .copied()
            .find(|&c| x[b * n + c].is_positive())
            .expect("row sums to one, so the support is non-empty");
        if let Some(b0) = woman_taken[fav] {
            return Err(Error::RoundingCollision(b0, b, fav));
        }
        woman_taken[fav] = Some(b);
        man_to_woman[b] = fav;
    }
    Matching::from_vec(man_to_woman)
}

/// Full decision procedure for asymmetric instances: build, decide
/// feasibility, round. `None` iff the polytope is empty iff no stable
/// matching exists.
pub fn decide_via_lp(inst: &SmgInstance) -> Result<Option<Matching>> {
    if !inst.is_asymmetric() {
        return Err(Error::NotAsymmetric);
    }
    let sys = build_polytope(inst);
    match feasible_point(&sys) {
        Some(x) => Ok(Some(round_to_matching(inst, &x)?)),
        None => Ok(None),
    }
}

/// The incidence vector of a matching.
pub fn incidence_vector(n: usize, m: &Matching) -> RationalVector {
    let mut x = vec![Rational::zero(); n * n];
    for (b, c) in m.pairs() {
        x[b.0 * n + c.0] = Rational::one();
    }
    x
}

/// Enumerates the vertices of a small system by trying every set of tight
/// inequalities that, together with the equalities, pins down a unique
/// point. Intended for desk-scale cross-checks only.
pub fn enumerate_vertices(sys: &LinearSystem) -> Result<Vec<RationalVector>> {
    let d = sys.num_vars;
    if d > 9 {
        return Err(Error::BudgetExceeded(format!(
            "vertex enumeration limited to 9 variables, got {d}"
        )));
    }
    // all inequality rows, nonnegativity included
    let mut ineqs: Vec<(Vec<Rational>, Rational)> = sys.inequalities.clone();
    for j in 0..d {
        let mut row = vec![Rational::zero(); d];
        row[j] = Rational::one();
        ineqs.push((row, Rational::zero()));
    }

    let eq_rank = rank(&sys.equalities, d);
    let k = d.saturating_sub(eq_rank);

    let mut vertices: Vec<RationalVector> = Vec::new();
    for combo in (0..ineqs.len()).combinations(k) {
        let mut rows: Vec<(Vec<Rational>, Rational)> = sys.equalities.clone();
        for &i in &combo {
            rows.push(ineqs[i].clone());
        }
        if let Some(x) = solve_unique(&rows, d) {
            if sys.satisfies(&x) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    }
    Ok(vertices)
}

fn rank(rows: &[(Vec<Rational>, Rational)], d: usize) -> usize {
    let mut mat: Vec<Vec<Rational>> = rows.iter().map(|(r, _)| r.clone()).collect();
    let mut r = 0;
    for col in 0..d {
        if let Some(p) = (r..mat.len()).find(|&i| !mat[i][col].is_zero()) {
            mat.swap(r, p);
            let piv = mat[r][col].clone();
            for v in mat[r].iter_mut() {
                *v /= &piv;
            }
            for i in 0..mat.len() {
                if i != r && !mat[i][col].is_zero() {
                    let f = mat[i][col].clone();
                    for j in 0..d {
                        let delta = &f * &mat[r][j];
                        mat[i][j] -= delta;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Gaussian elimination; `Some(x)` only when the system has exactly one
/// solution.
fn solve_unique(rows: &[(Vec<Rational>, Rational)], d: usize) -> Option<RationalVector> {
    let mut mat: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let m = mat.len();
    let mut pivot_col = vec![usize::MAX; m];
    let mut r = 0;
    for col in 0..d {
        if r >= m {
            break;
        }
        if let Some(p) = (r..m).find(|&i| !mat[i][col].is_zero()) {
            mat.swap(r, p);
            let piv = mat[r][col].clone();
            for v in mat[r].iter_mut() {
                *v /= &piv;
            }
            for i in 0..m {
                if i != r && !mat[i][col].is_zero() {
                    let f = mat[i][col].clone();
                    for j in 0..=d {
                        let delta = &f * &mat[r][j];
                        mat[i][j] -= delta;
                    }
                }
            }
            pivot_col[r] = col;
            r += 1;
        }
    }
    if r < d {
        return None; // underdetermined
    }
    // inconsistent rows?
    for i in r..m {
        if !mat[i][d].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); d];
    for i in 0..r {
        x[pivot_col[i]] = mat[i][d].clone();
    }
    Some(x)
}

/// Serialises the system in a plain LP interchange layout; exact rationals
/// appear as `p/q`.
pub fn to_lp_text(sys: &LinearSystem) -> String {
    let fmt_row = |row: &[Rational]| -> String {
        let mut parts = Vec::new();
        for (j, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let b = j / sys.n;
            let c = j % sys.n;
            if v.is_one() {
                parts.push(format!("+ x_{b}_{c}"));
            } else {
                parts.push(format!("+ {v} x_{b}_{c}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ")
        }
    };
    let mut out = String::new();
    out.push_str("minimize\n obj: 0\nsubject to\n");
    for (i, (row, rhs)) in sys.equalities.iter().enumerate() {
        out.push_str(&format!(" eq{}: {} = {}\n", i, fmt_row(row), rhs));
    }
    for (i, (row, rhs)) in sys.inequalities.iter().enumerate() {
        out.push_str(&format!(" st{}: {} >= {}\n", i, fmt_row(row), rhs));
    }
    out.push_str("bounds\n");
    for b in 0..sys.n {
        for c in 0..sys.n {
            out.push_str(&format!(" x_{b}_{c} >= 0\n"));
        }
    }
    out.push_str("end\n");
    out
}
