//! Tie-splitting gadget: builds, from an SMTI instance with ties only on the
//! women's side, a stable-extension instance whose solutions correspond
//! exactly to the perfect weakly stable matchings of the source. Each side
//! of the gadget has `n + sum_i t_i + 3` agents, where `t_i` is the number
//! of positions in woman `i`'s list: the original agents, one block per tie
//! position, and three anchor agents that pin down the structure of every
//! solution.

use crate::cyclic3d::{CyclicInstance, FixedMatching, SeInstance};
use crate::oracle::{enumerate_stable_extensions, EnumerationBudget};
use crate::smg::Matching;
use crate::smti::{PartialMatching, SmtiInstance};
use crate::{Error, Man, Result, StrictOrder, Woman};
#[cfg(test)]
use crate::Dog;

/// Index bookkeeping for the gadget. One side's layout (shared by dogs, men
/// and women): originals at `0..n`, tie blocks next, the three anchors last.
#[derive(Debug, Clone)]
pub struct GadgetLayout {
    pub n: usize,
    /// positions per original woman's list (`t_i`, 0 for an empty list)
    pub t: Vec<usize>,
    /// start of block `i` relative to `n`
    block_offset: Vec<usize>,
    /// agents per side
    pub side: usize,
    /// `positions[i][j]` = original men tied at position `j` of woman `i`
    pub positions: Vec<Vec<Vec<usize>>>,
    /// `ranks[i][b]` = position of man `b` in woman `i`'s list
    pub ranks: Vec<Vec<Option<usize>>>,
}

impl GadgetLayout {
    pub fn original(&self, i: usize) -> usize {
        i
    }

    /// Index of the block agent for woman `i`, position `j` (`b_{i,j}` and
    /// its corresponding dog and woman).
    pub fn block(&self, i: usize, j: usize) -> usize {
        self.n + self.block_offset[i] + j
    }

    /// Index of anchor `k` (0, 1, 2 for the agents indexed n+1, n+2, n+3).
    pub fn anchor(&self, k: usize) -> usize {
        self.side - 3 + k
    }

    pub fn is_original(&self, idx: usize) -> bool {
        idx < self.n
    }
}

fn order_with(head: &[usize], side: usize, forced_last: Option<usize>) -> StrictOrder {
    let mut ranked = head.to_vec();
    for x in 0..side {
        if !ranked.contains(&x) && forced_last != Some(x) {
            ranked.push(x);
        }
    }
    if let Some(x) = forced_last {
        if !ranked.contains(&x) {
            ranked.push(x);
        }
    }
    StrictOrder::new(ranked).expect("head entries are distinct and in range")
}

/// Builds the gadget. All arbitrary list segments are completed in
/// ascending index order so that the construction is deterministic.
pub fn build_se_gadget(inst: &SmtiInstance) -> (SeInstance, GadgetLayout) {
    let n = inst.n();
    let t: Vec<usize> = (0..n)
        .map(|c| inst.woman_list(Woman(c)).num_positions())
        .collect();
    let mut block_offset = Vec::with_capacity(n);
    let mut acc = 0;
    for &ti in &t {
        block_offset.push(acc);
        acc += ti;
    }
    let side = n + acc + 3;
    let positions: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|c| inst.woman_list(Woman(c)).groups().to_vec())
        .collect();
    let ranks: Vec<Vec<Option<usize>>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|b| inst.woman_list(Woman(c)).rank_of(b))
                .collect()
        })
        .collect();
    let layout = GadgetLayout {
        n,
        t,
        block_offset,
        side,
        positions,
        ranks,
    };

    let mut dog_prefs: Vec<StrictOrder> = Vec::with_capacity(side);
    let mut man_prefs: Vec<StrictOrder> = Vec::with_capacity(side);
    let mut woman_prefs: Vec<StrictOrder> = Vec::with_capacity(side);

    // original agents
    for i in 0..n {
        // dog i: its own man first
        dog_prefs.push(order_with(&[i], side, None));
        // man i: his original list, then the first anchor woman
        let mut head: Vec<usize> = inst.man_list(Man(i)).iter_agents().collect();
        head.push(layout.anchor(0));
        man_prefs.push(order_with(&head, side, None));
        // woman i: dogs of the men at position 1, the block dog for
        // position 1, dogs at position 2, and so on
        let mut head = Vec::new();
        for (j, group) in layout.positions[i].iter().enumerate() {
            head.extend(group.iter().copied()); // dog index = man index
            head.push(layout.block(i, j));
        }
        woman_prefs.push(order_with(&head, side, None));
    }
    // block agents
    for i in 0..n {
        for j in 0..layout.t[i] {
            let idx = layout.block(i, j);
            debug_assert_eq!(dog_prefs.len(), idx);
            // block dog: the men tied at position j, then its own man
            let mut head: Vec<usize> = layout.positions[i][j].clone();
            head.push(idx);
            dog_prefs.push(order_with(&head, side, None));
            // block man: its own woman first
            man_prefs.push(order_with(&[idx], side, None));
            // block woman: the second anchor dog first
            woman_prefs.push(order_with(&[layout.anchor(1)], side, None));
        }
    }
    // anchors
    let a1 = layout.anchor(0);
    let a2 = layout.anchor(1);
    let a3 = layout.anchor(2);
    dog_prefs.push(order_with(&[a1], side, None)); // first anchor dog: own man first
    dog_prefs.push(order_with(&[], side, Some(a2))); // second: own man last
    dog_prefs.push(order_with(&[a2, a3], side, None)); // third: second's man, then own
    for k in 0..3 {
        man_prefs.push(order_with(&[layout.anchor(k)], side, None)); // own woman first
    }
    woman_prefs.push(order_with(&[a2], side, None)); // first anchor woman
    woman_prefs.push(order_with(&[a3], side, None)); // second
    woman_prefs.push(order_with(&[a2], side, None)); // third

    let cyclic = CyclicInstance::new(dog_prefs, man_prefs, woman_prefs)
        .expect("all orders are complete");
    let se = SeInstance::new(cyclic, FixedMatching::identity(side)).expect("sizes match");
    (se, layout)
}

/// Structural validation report; empty means all checks passed.
#[derive(Debug, Default)]
pub struct GadgetReport {
    pub violations: Vec<String>,
}

impl GadgetReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the gadget's claimed structure: the predicted sets of dogs able
/// to block with each man, the induced relations on the original women
/// against the source preferences, and the anchored shape of every stable
/// extension found by enumeration.
pub fn validate_gadget(
    se: &SeInstance,
    layout: &GadgetLayout,
    budget: EnumerationBudget,
) -> Result<GadgetReport> {
    let mut report = GadgetReport::default();
    let n = layout.n;
    let side = layout.side;

    // predicted dogs-preferring sets
    for b in 0..side {
        let actual: Vec<usize> = se.dogs_preferring(Man(b)).iter().map(|d| d.0).collect();
        let mut expected: Vec<usize> = if layout.is_original(b) {
            let mut v: Vec<usize> = (0..n)
                .filter_map(|i| layout.ranks[i][b].map(|r| layout.block(i, r)))
                .collect();
            v.push(layout.anchor(1));
            v
        } else if b == layout.anchor(1) {
            vec![layout.anchor(2)]
        } else {
            vec![layout.anchor(1)]
        };
        expected.sort_unstable();
        if actual != expected {
            report.violations.push(format!(
                "dogs preferring man {b}: got {actual:?}, expected {expected:?}"
            ));
        }
    }

    // induced relations on original women mirror the source preferences
    let smg = se.to_smg();
    for c in 0..n {
        for b in 0..n {
            if layout.ranks[c][b].is_none() {
                continue;
            }
            for b2 in 0..n {
                if b2 == b {
                    continue;
                }
                let in_rel = smg.relation(Woman(c)).contains(Man(b2), Man(b));
                let expected = match (layout.ranks[c][b2], layout.ranks[c][b]) {
                    (Some(r2), Some(r)) => r2 <= r,
                    _ => false,
                };
                if in_rel != expected {
                    report.violations.push(format!(
                        "relation of woman {c} on ({b2}, {b}): got {in_rel}, expected {expected}"
                    ));
                }
            }
        }
    }

    // every stable extension is anchored as claimed
    let solutions = enumerate_stable_extensions(se, budget)?;
    for nm in &solutions {
        let w_of = |b: usize| nm.woman_of(Man(b)).0;
        let pair23 = [w_of(layout.anchor(1)), w_of(layout.anchor(2))];
        let mut sorted23 = pair23;
        sorted23.sort_unstable();
        if sorted23 != [layout.anchor(1), layout.anchor(2)] {
            report.violations.push(format!(
                "anchor men matched to {pair23:?} instead of the last two anchor women"
            ));
        }
        if w_of(layout.anchor(0)) != layout.anchor(0) {
            report.violations.push(format!(
                "first anchor man matched to woman {}",
                w_of(layout.anchor(0))
            ));
        }
        for b in 0..n {
            let c = w_of(b);
            let inside = c < n && layout.ranks[c][b].is_some();
            if !inside {
                report.violations.push(format!(
                    "original man {b} matched outside his list (woman {c})"
                ));
            }
        }
    }
    Ok(report)
}

/// Completes a perfect matching on the original agents to the gadget:
/// block men take their own block women, anchor men their own anchor women.
pub fn lift_solution(
    inst: &SmtiInstance,
    layout: &GadgetLayout,
    m: &PartialMatching,
) -> Result<Matching> {
    if m.len() != inst.n() {
        return Err(Error::InvalidMatching(
            "lift requires a perfect matching on the original agents".into(),
        ));
    }
    let mut pairs: Vec<(Man, Woman)> = m.pairs().collect();
    for i in 0..layout.n {
        for j in 0..layout.t[i] {
            let idx = layout.block(i, j);
            pairs.push((Man(idx), Woman(idx)));
        }
    }
    for k in 0..3 {
        pairs.push((Man(layout.anchor(k)), Woman(layout.anchor(k))));
    }
    Matching::from_pairs(layout.side, pairs)
}

/// Restricts a gadget matching to the original agents.
pub fn restrict_solution(
    inst: &SmtiInstance,
    layout: &GadgetLayout,
    m: &Matching,
) -> Result<PartialMatching> {
    if m.n() != layout.side {
        return Err(Error::InvalidMatching(format!(
            "restrict requires a matching on {} agents",
            layout.side
        )));
    }
    let n = layout.n;
    let pairs = m
        .pairs()
        .filter(|&(b, c)| b.0 < n && c.0 < n)
        .collect::<Vec<_>>();
    PartialMatching::new(inst, pairs)
}
