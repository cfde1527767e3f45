//! Core model: men with strict complete orders, women with arbitrary binary
//! relations over the men, blocking pairs and stability, the asymmetry test
//! and the dual-stability transformation.

use std::collections::BTreeSet;

use crate::ids::check_index;
use crate::{Error, Man, Result, StrictOrder, Woman};

/// A woman's preference relation: `(b, b')` present means she prefers `b` at
/// least as much as `b'`. Membership of `(b, b')` is independent of
/// `(b', b)`; the relation need not be transitive or acyclic. Self-pairs are
/// rejected at construction since the blocking condition only ever queries
/// distinct men.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefRelation {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PrefRelation {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (x, y) in pairs {
            check_index(x, n)?;
            check_index(y, n)?;
            if x == y {
                return Err(Error::SelfPair(x));
            }
            set.insert((x, y));
        }
        Ok(PrefRelation { n, pairs: set })
    }

    pub fn empty(n: usize) -> Self {
        PrefRelation {
            n,
            pairs: BTreeSet::new(),
        }
    }

    /// True iff the woman prefers `x` at least as much as `y`.
    pub fn contains(&self, x: Man, y: Man) -> bool {
        self.pairs.contains(&(x.0, y.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Man, Man)> + '_ {
        self.pairs.iter().map(|&(x, y)| (Man(x), Man(y)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// An instance: `n` men with strict complete orders over the `n` women, and
/// one `PrefRelation` per woman.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmgInstance {
    n: usize,
    men_prefs: Vec<StrictOrder>,
    women_rels: Vec<PrefRelation>,
}

impl SmgInstance {
    pub fn new(men_prefs: Vec<StrictOrder>, women_rels: Vec<PrefRelation>) -> Result<Self> {
        let n = men_prefs.len();
        if women_rels.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} men but {} women",
                n,
                women_rels.len()
            )));
        }
        for ord in &men_prefs {
            if ord.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "man's order has length {}, expected {}",
                    ord.len(),
                    n
                )));
            }
        }
        for rel in &women_rels {
            if rel.n != n {
                return Err(Error::InvalidInstance(format!(
                    "woman's relation is over {} men, expected {}",
                    rel.n, n
                )));
            }
        }
        Ok(SmgInstance {
            n,
            men_prefs,
            women_rels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn man_pref(&self, b: Man) -> &StrictOrder {
        &self.men_prefs[b.0]
    }

    pub fn relation(&self, c: Woman) -> &PrefRelation {
        &self.women_rels[c.0]
    }

    /// Blocking pair test: `(b, c)` blocks `m` iff they are not matched to
    /// each other, `b` strictly prefers `c` to his partner, and `c` does not
    /// prefer her partner at least as much as `b`.
    pub fn is_blocking_pair(&self, m: &Matching, b: Man, c: Woman) -> Result<bool> {
        self.check_matching(m)?;
        check_index(b.0, self.n)?;
        check_index(c.0, self.n)?;
        if m.woman_of(b) == c {
            return Ok(false);
        }
        let pref = &self.men_prefs[b.0];
        if !pref.prefers(c.0, m.woman_of(b).0) {
            return Ok(false);
        }
        Ok(!self.women_rels[c.0].contains(m.man_of(c), b))
    }

    /// Stability check. Returns the full blocking-pair list in lexicographic
    /// (man, woman) order; the matching is stable iff the list is empty.
    pub fn is_stable(&self, m: &Matching) -> Result<(bool, Vec<(Man, Woman)>)> {
        self.check_matching(m)?;
        let mut blocking = Vec::new();
        for b in 0..self.n {
            for c in 0..self.n {
                if self.is_blocking_pair(m, Man(b), Woman(c))? {
                    blocking.push((Man(b), Woman(c)));
                }
            }
        }
        Ok((blocking.is_empty(), blocking))
    }

    /// Blocking test under the alternate model, where `(b, c)` blocks when
    /// `c` prefers `b` at least as much as her partner: `(b, N(c)) ∈ R_c`.
    /// Stability under this test on `dualize(inst)` coincides with stability
    /// on `inst` under the primary test.
    pub fn is_blocking_pair_alt(&self, m: &Matching, b: Man, c: Woman) -> Result<bool> {
        self.check_matching(m)?;
        check_index(b.0, self.n)?;
        check_index(c.0, self.n)?;
        if m.woman_of(b) == c {
            return Ok(false);
        }
        let pref = &self.men_prefs[b.0];
        if !pref.prefers(c.0, m.woman_of(b).0) {
            return Ok(false);
        }
        Ok(self.women_rels[c.0].contains(b, m.man_of(c)))
    }

    /// True iff for every woman and every pair of distinct men at most one
    /// orientation of the pair is in her relation.
    pub fn is_asymmetric(&self) -> bool {
        self.women_rels.iter().all(|rel| {
            rel.pairs
                .iter()
                .all(|&(x, y)| x > y || !rel.pairs.contains(&(y, x)))
        })
    }

    /// Swaps between the two equivalent stability models: the new relation
    /// holds `(b, b')` exactly when the old one lacks `(b', b)`. An
    /// involution, since self-pairs are excluded.
    pub fn dualize(&self) -> SmgInstance {
        let women_rels = self
            .women_rels
            .iter()
            .map(|rel| {
                let mut pairs = BTreeSet::new();
                for x in 0..self.n {
                    for y in 0..self.n {
                        if x != y && !rel.pairs.contains(&(y, x)) {
                            pairs.insert((x, y));
                        }
                    }
                }
                PrefRelation {
                    n: self.n,
                    pairs,
                }
            })
            .collect();
        SmgInstance {
            n: self.n,
            men_prefs: self.men_prefs.clone(),
            women_rels,
        }
    }

    fn check_matching(&self, m: &Matching) -> Result<()> {
        if m.n() != self.n {
            return Err(Error::InvalidMatching(format!(
                "matching over {} agents, instance has {}",
                m.n(),
                self.n
            )));
        }
        Ok(())
    }
}

/// A perfect matching between the men and the women, with both direction
/// lookups.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matching {
    man_to_woman: Vec<usize>,
    woman_to_man: Vec<usize>,
}

impl Matching {
    /// `man_to_woman[b]` = woman matched to man `b`; must be a permutation.
    pub fn from_vec(man_to_woman: Vec<usize>) -> Result<Self> {
        let n = man_to_woman.len();
        let mut woman_to_man = vec![usize::MAX; n];
        for (b, &c) in man_to_woman.iter().enumerate() {
            if c >= n {
                return Err(Error::InvalidMatching(format!("woman {c} out of range")));
            }
            if woman_to_man[c] != usize::MAX {
                return Err(Error::InvalidMatching(format!("woman {c} matched twice")));
            }
            woman_to_man[c] = b;
        }
        Ok(Matching {
            man_to_woman,
            woman_to_man,
        })
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Man, Woman)>) -> Result<Self> {
        let mut man_to_woman = vec![usize::MAX; n];
        for (b, c) in pairs {
            check_index(b.0, n)?;
            check_index(c.0, n)?;
            if man_to_woman[b.0] != usize::MAX {
                return Err(Error::InvalidMatching(format!("man {} matched twice", b.0)));
            }
            man_to_woman[b.0] = c.0;
        }
        if man_to_woman.contains(&usize::MAX) {
            return Err(Error::InvalidMatching("matching is not perfect".into()));
        }
        Matching::from_vec(man_to_woman)
    }

    pub fn n(&self) -> usize {
        self.man_to_woman.len()
    }

    pub fn woman_of(&self, b: Man) -> Woman {
        Woman(self.man_to_woman[b.0])
    }

    pub fn man_of(&self, c: Woman) -> Man {
        Man(self.woman_to_man[c.0])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Man, Woman)> + '_ {
        self.man_to_woman
            .iter()
            .enumerate()
            .map(|(b, &c)| (Man(b), Woman(c)))
    }

    pub fn as_vec(&self) -> &[usize] {
        &self.man_to_woman
    }
}

/// The 2x2 instance without a stable matching: both men rank `c1` first and
/// both relations are empty, so `c1` always blocks with the man she is not
/// matched to.
pub fn counterexample_2x2() -> SmgInstance {
    let men = vec![
        StrictOrder::new(vec![0, 1]).unwrap(),
        StrictOrder::new(vec![0, 1]).unwrap(),
    ];
    let women = vec![PrefRelation::empty(2), PrefRelation::empty(2)];
    SmgInstance::new(men, women).unwrap()
}
