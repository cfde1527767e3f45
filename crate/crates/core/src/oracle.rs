//! Brute-force enumeration of solutions on small instances. These routines
//! are the ground truth the solvers and reductions are tested against, so
//! they stay as close to the definitions as possible.

use itertools::Itertools;

use crate::cyclic3d::{compose, SeInstance};
use crate::smg::{Matching, SmgInstance};
use crate::smti::{PartialMatching, SmtiInstance};
use crate::{Error, Man, Result, Woman};

#[derive(Debug, Clone, Copy)]
pub struct EnumerationBudget {
    pub max_n: usize,
    pub max_candidates: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_n: 8,
            max_candidates: 1_000_000,
        }
    }
}

impl EnumerationBudget {
    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::BudgetExceeded(format!(
                "n = {n} exceeds max_n = {}",
                self.max_n
            )));
        }
        let mut count: u64 = 1;
        for k in 1..=n as u64 {
            count = count.saturating_mul(k);
        }
        if count > self.max_candidates {
            return Err(Error::BudgetExceeded(format!(
                "{n}! candidates exceed max_candidates = {}",
                self.max_candidates
            )));
        }
        Ok(())
    }
}

fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    // lexicographic because the base range is sorted
    (0..n).permutations(n)
}

/// All stable matchings of the instance, in lexicographic order of the
/// man-to-woman vector.
pub fn enumerate_stable_smg(inst: &SmgInstance, budget: EnumerationBudget) -> Result<Vec<Matching>> {
    budget.check(inst.n())?;
    let mut out = Vec::new();
    for perm in permutations(inst.n()) {
        let m = Matching::from_vec(perm).expect("permutation");
        if inst.is_stable(&m)?.0 {
            out.push(m);
        }
    }
    Ok(out)
}

/// All perfect weakly stable matchings, in lexicographic order.
pub fn enumerate_perfect_weakly_stable_smti(
    inst: &SmtiInstance,
    budget: EnumerationBudget,
) -> Result<Vec<PartialMatching>> {
    budget.check(inst.n())?;
    let n = inst.n();
    let mut out = Vec::new();
    for perm in permutations(n) {
        let acceptable = perm
            .iter()
            .enumerate()
            .all(|(b, &c)| inst.acceptable(Man(b), Woman(c)));
        if !acceptable {
            continue;
        }
        let m = PartialMatching::new(
            inst,
            perm.iter().enumerate().map(|(b, &c)| (Man(b), Woman(c))),
        )?;
        if inst.is_weakly_stable(&m)?.0 {
            out.push(m);
        }
    }
    Ok(out)
}

/// All stable extensions of the fixed matching: perfect matchings `N` on
/// men x women whose composition with `M` is 3D stable.
pub fn enumerate_stable_extensions(
    se: &SeInstance,
    budget: EnumerationBudget,
) -> Result<Vec<Matching>> {
    budget.check(se.n())?;
    let mut out = Vec::new();
    for perm in permutations(se.n()) {
        let nm = Matching::from_vec(perm).expect("permutation");
        let mm = compose(&se.fixed, &nm)?;
        if !se.cyclic.has_blocking_triple(&mm)? {
            out.push(nm);
        }
    }
    Ok(out)
}
