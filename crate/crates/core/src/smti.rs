//! Stable marriage with ties and incomplete lists, restricted to ties on the
//! women's side, plus the reduction into the general-preference model.

use std::collections::BTreeSet;

use crate::ids::check_index;
use crate::smg::{Matching, PrefRelation, SmgInstance};
use crate::{Error, Man, Result, StrictOrder, Woman};

/// An ordered preference list over a subset of the opposite side, possibly
/// with ties. `groups[0]` is the most preferred position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiedList {
    groups: Vec<Vec<usize>>,
    rank: Vec<Option<usize>>,
}

impl TiedList {
    /// `n` is the size of the opposite side. Groups must be non-empty and
    /// pairwise disjoint; each group is stored sorted.
    pub fn new(n: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut rank = vec![None; n];
        let mut sorted_groups = Vec::with_capacity(groups.len());
        for (pos, mut group) in groups.into_iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidInstance(format!(
                    "empty tie group at position {pos}"
                )));
            }
            group.sort_unstable();
            for &x in &group {
                check_index(x, n)?;
                if rank[x].is_some() {
                    return Err(Error::InvalidInstance(format!(
                        "agent {x} appears twice in a preference list"
                    )));
                }
                rank[x] = Some(pos);
            }
            sorted_groups.push(group);
        }
        Ok(TiedList {
            groups: sorted_groups,
            rank,
        })
    }

    /// Number of positions (`t` in the tie-splitting gadget); 0 for an empty
    /// list.
    pub fn num_positions(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Position of `x`, or `None` when `x` is not listed.
    pub fn rank_of(&self, x: usize) -> Option<usize> {
        self.rank.get(x).copied().flatten()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.rank_of(x).is_some()
    }

    /// True iff `x` is strictly above `y`; unlisted agents compare below
    /// every listed one only through [`TiedList::prefers_over_partner`]-style
    /// call sites, here both must be listed to return true.
    pub fn strictly_prefers(&self, x: usize, y: usize) -> bool {
        match (self.rank_of(x), self.rank_of(y)) {
            (Some(rx), Some(ry)) => rx < ry,
            _ => false,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    pub fn iter_agents(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().flatten().copied()
    }
}

/// An SMTI instance with ties only on the women's side. Acceptability is
/// symmetric: `b` lists `c` iff `c` lists `b` (checked at construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmtiInstance {
    n: usize,
    men_lists: Vec<TiedList>,
    women_lists: Vec<TiedList>,
}

impl SmtiInstance {
    pub fn new(men_lists: Vec<TiedList>, women_lists: Vec<TiedList>) -> Result<Self> {
        let n = men_lists.len();
        if women_lists.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} men but {} women",
                n,
                women_lists.len()
            )));
        }
        for (b, list) in men_lists.iter().enumerate() {
            if list.rank.len() != n {
                return Err(Error::InvalidInstance("list over wrong side size".into()));
            }
            if !list.is_strict() {
                return Err(Error::InvalidInstance(format!(
                    "man {b} has ties; ties are only allowed on the women's side"
                )));
            }
        }
        for list in &women_lists {
            if list.rank.len() != n {
                return Err(Error::InvalidInstance("list over wrong side size".into()));
            }
        }
        for b in 0..n {
            for c in 0..n {
                if men_lists[b].contains(c) != women_lists[c].contains(b) {
                    return Err(Error::InvalidInstance(format!(
                        "acceptability is not symmetric for man {b}, woman {c}"
                    )));
                }
            }
        }
        Ok(SmtiInstance {
            n,
            men_lists,
            women_lists,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn man_list(&self, b: Man) -> &TiedList {
        &self.men_lists[b.0]
    }

    pub fn woman_list(&self, c: Woman) -> &TiedList {
        &self.women_lists[c.0]
    }

    pub fn acceptable(&self, b: Man, c: Woman) -> bool {
        self.men_lists[b.0].contains(c.0)
    }

    /// Weak stability: no acceptable pair outside the matching where both
    /// members strictly prefer each other to their current situation. An
    /// unmatched agent strictly prefers every acceptable partner to being
    /// unmatched. Blocking pairs are returned in lexicographic order.
    pub fn is_weakly_stable(&self, m: &PartialMatching) -> Result<(bool, Vec<(Man, Woman)>)> {
        m.check_against(self)?;
        let mut blocking = Vec::new();
        for b in 0..self.n {
            for c in 0..self.n {
                if self.is_blocking(m, Man(b), Woman(c)) {
                    blocking.push((Man(b), Woman(c)));
                }
            }
        }
        Ok((blocking.is_empty(), blocking))
    }

    fn is_blocking(&self, m: &PartialMatching, b: Man, c: Woman) -> bool {
        if !self.acceptable(b, c) || m.woman_of(b) == Some(c) {
            return false;
        }
        let man_wants = match m.woman_of(b) {
            None => true,
            Some(cur) => self.men_lists[b.0].strictly_prefers(c.0, cur.0),
        };
        if !man_wants {
            return false;
        }
        match m.man_of(c) {
            None => true,
            Some(cur) => self.women_lists[c.0].strictly_prefers(b.0, cur.0),
        }
    }
}

/// A matching using only acceptable pairs; not necessarily perfect.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartialMatching {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PartialMatching {
    pub fn new(
        inst: &SmtiInstance,
        pairs: impl IntoIterator<Item = (Man, Woman)>,
    ) -> Result<Self> {
        let n = inst.n();
        let mut set = BTreeSet::new();
        let mut man_used = vec![false; n];
        let mut woman_used = vec![false; n];
        for (b, c) in pairs {
            check_index(b.0, n)?;
            check_index(c.0, n)?;
            if !inst.acceptable(b, c) {
                return Err(Error::UnacceptablePair { man: b.0, woman: c.0 });
            }
            if man_used[b.0] || woman_used[c.0] {
                return Err(Error::InvalidMatching(format!(
                    "agent reused in pair ({}, {})",
                    b.0, c.0
                )));
            }
            man_used[b.0] = true;
            woman_used[c.0] = true;
            set.insert((b.0, c.0));
        }
        Ok(PartialMatching { n, pairs: set })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn woman_of(&self, b: Man) -> Option<Woman> {
        self.pairs
            .iter()
            .find(|&&(x, _)| x == b.0)
            .map(|&(_, c)| Woman(c))
    }

    pub fn man_of(&self, c: Woman) -> Option<Man> {
        self.pairs
            .iter()
            .find(|&&(_, y)| y == c.0)
            .map(|&(b, _)| Man(b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Man, Woman)> + '_ {
        self.pairs.iter().map(|&(b, c)| (Man(b), Woman(c)))
    }

    fn check_against(&self, inst: &SmtiInstance) -> Result<()> {
        if self.n != inst.n() {
            return Err(Error::InvalidMatching(format!(
                "matching over {} agents, instance has {}",
                self.n,
                inst.n()
            )));
        }
        Ok(())
    }
}

/// True iff the matching covers all `n` men (and hence all `n` women).
pub fn is_perfect(m: &PartialMatching, n: usize) -> bool {
    m.len() == n
}

/// Reduction to the general-preference model. One extra man and woman are
/// added; each original man ranks his list, then the new woman, then the
/// rest in ascending id order; each original woman's relation holds
/// `(b, b')` whenever both are acceptable to her and she ranks `b` at least
/// as high as `b'`; the new woman's relation is empty.
pub fn reduce_smti_to_smg(inst: &SmtiInstance) -> SmgInstance {
    let n = inst.n();
    let big = n + 1;
    let mut men_prefs = Vec::with_capacity(big);
    for b in 0..n {
        let mut ranked: Vec<usize> = inst.men_lists[b].iter_agents().collect();
        ranked.push(n); // the new woman
        for c in 0..n {
            if !inst.men_lists[b].contains(c) {
                ranked.push(c);
            }
        }
        men_prefs.push(StrictOrder::new(ranked).expect("completion is a permutation"));
    }
    // the new man ranks the new woman first
    let mut last: Vec<usize> = vec![n];
    last.extend(0..n);
    men_prefs.push(StrictOrder::new(last).unwrap());

    let mut women_rels = Vec::with_capacity(big);
    for c in 0..n {
        let list = &inst.women_lists[c];
        let mut pairs = Vec::new();
        for b in list.iter_agents() {
            for b2 in list.iter_agents() {
                if b != b2 && list.rank_of(b) <= list.rank_of(b2) {
                    pairs.push((b, b2));
                }
            }
        }
        women_rels.push(PrefRelation::new(big, pairs).expect("indices in range"));
    }
    women_rels.push(PrefRelation::empty(big));

    SmgInstance::new(men_prefs, women_rels).expect("construction is well formed")
}

/// Completes a perfect matching on the original agents to the reduced
/// instance by pairing the two new agents.
pub fn lift_matching(m: &PartialMatching, n: usize) -> Result<Matching> {
    if m.n != n || m.len() != n {
        return Err(Error::InvalidMatching(format!(
            "lift requires a perfect matching on {n} agents"
        )));
    }
    let mut pairs: Vec<(Man, Woman)> = m.pairs().collect();
    pairs.push((Man(n), Woman(n)));
    Matching::from_pairs(n + 1, pairs)
}

/// Drops the pairs involving the extra agents; errors if a surviving pair is
/// unacceptable in the original instance.
pub fn restrict_matching(inst: &SmtiInstance, m: &Matching) -> Result<PartialMatching> {
    let n = inst.n();
    if m.n() != n + 1 {
        return Err(Error::InvalidMatching(format!(
            "restrict requires a matching on {} agents",
            n + 1
        )));
    }
    let pairs = m
        .pairs()
        .filter(|&(b, c)| b.0 < n && c.0 < n)
        .collect::<Vec<_>>();
    PartialMatching::new(inst, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_pair_instance() -> SmtiInstance {
        SmtiInstance::new(
            vec![TiedList::new(1, vec![vec![0]]).unwrap()],
            vec![TiedList::new(1, vec![vec![0]]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn men_ties_rejected() {
        let err = SmtiInstance::new(
            vec![
                TiedList::new(2, vec![vec![0, 1]]).unwrap(),
                TiedList::new(2, vec![vec![0], vec![1]]).unwrap(),
            ],
            vec![
                TiedList::new(2, vec![vec![0], vec![1]]).unwrap(),
                TiedList::new(2, vec![vec![0], vec![1]]).unwrap(),
            ],
        );
        assert!(err.is_err());
    }

    #[test]
    fn asymmetric_acceptability_rejected() {
        let err = SmtiInstance::new(
            vec![TiedList::new(1, vec![vec![0]]).unwrap()],
            vec![TiedList::new(1, vec![]).unwrap()],
        );
        assert!(err.is_err());
    }

    #[test]
    fn weak_stability_on_single_pair() {
        let inst = single_pair_instance();
        let full = PartialMatching::new(&inst, [(Man(0), Woman(0))]).unwrap();
        assert!(inst.is_weakly_stable(&full).unwrap().0);
        let empty = PartialMatching::new(&inst, []).unwrap();
        let (stable, blocking) = inst.is_weakly_stable(&empty).unwrap();
        assert!(!stable);
        assert_eq!(blocking, vec![(Man(0), Woman(0))]);
    }

    #[test]
    fn unacceptable_pair_rejected_at_construction() {
        let inst = SmtiInstance::new(
            vec![
                TiedList::new(2, vec![vec![0]]).unwrap(),
                TiedList::new(2, vec![]).unwrap(),
            ],
            vec![
                TiedList::new(2, vec![vec![0]]).unwrap(),
                TiedList::new(2, vec![]).unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            PartialMatching::new(&inst, [(Man(1), Woman(1))]),
            Err(Error::UnacceptablePair { man: 1, woman: 1 })
        ));
    }

    #[test]
    fn perfect_detection() {
        let inst = single_pair_instance();
        let empty = PartialMatching::new(&inst, []).unwrap();
        assert!(!is_perfect(&empty, 1));
        let full = PartialMatching::new(&inst, [(Man(0), Woman(0))]).unwrap();
        assert!(is_perfect(&full, 1));
    }

    #[test]
    fn reduce_smallest_gadget() {
        let inst = single_pair_instance();
        let smg = reduce_smti_to_smg(&inst);
        assert_eq!(smg.n(), 2);
        // one acceptable man: no distinct pairs, so R_{c1} is empty too
        assert!(smg.relation(Woman(0)).is_empty());
        assert!(smg.relation(Woman(1)).is_empty());
        assert_eq!(smg.man_pref(Man(0)).ranked(), &[0, 1]);
        assert_eq!(smg.man_pref(Man(1)).ranked(), &[1, 0]);
    }

    #[test]
    fn reduce_tie_breaks_asymmetry() {
        let inst = SmtiInstance::new(
            vec![
                TiedList::new(2, vec![vec![0], vec![1]]).unwrap(),
                TiedList::new(2, vec![vec![0], vec![1]]).unwrap(),
            ],
            vec![
                TiedList::new(2, vec![vec![0, 1]]).unwrap(),
                TiedList::new(2, vec![vec![0], vec![1]]).unwrap(),
            ],
        )
        .unwrap();
        let smg = reduce_smti_to_smg(&inst);
        // the tie in c1's list puts both orientations into R_{c1}
        assert!(smg.relation(Woman(0)).contains(Man(0), Man(1)));
        assert!(smg.relation(Woman(0)).contains(Man(1), Man(0)));
        assert!(!smg.is_asymmetric());
        // c2 has a strict list: only one orientation
        assert!(smg.relation(Woman(1)).contains(Man(0), Man(1)));
        assert!(!smg.relation(Woman(1)).contains(Man(1), Man(0)));
    }

    #[test]
    fn lift_restrict_round_trip() {
        let inst = single_pair_instance();
        let m = PartialMatching::new(&inst, [(Man(0), Woman(0))]).unwrap();
        let lifted = lift_matching(&m, 1).unwrap();
        assert_eq!(lifted.woman_of(Man(1)), Woman(1));
        let back = restrict_matching(&inst, &lifted).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn lift_rejects_non_perfect() {
        let inst = single_pair_instance();
        let empty = PartialMatching::new(&inst, []).unwrap();
        assert!(lift_matching(&empty, 1).is_err());
    }
}
