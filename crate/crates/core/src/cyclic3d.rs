//! Cyclic three-dimensional stable matching: dogs rank men, men rank women,
//! women rank dogs. A stable-extension instance fixes a perfect matching on
//! dogs x men and asks for a matching on men x women whose composition is a
//! stable 3D matching; such instances reduce to the general-preference
//! two-sided model.

use crate::ids::check_index;
use crate::smg::{Matching, PrefRelation, SmgInstance};
use crate::{Dog, Error, Man, Result, StrictOrder, Woman};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicInstance {
    n: usize,
    dog_prefs: Vec<StrictOrder>,
    man_prefs: Vec<StrictOrder>,
    woman_prefs: Vec<StrictOrder>,
}

impl CyclicInstance {
    pub fn new(
        dog_prefs: Vec<StrictOrder>,
        man_prefs: Vec<StrictOrder>,
        woman_prefs: Vec<StrictOrder>,
    ) -> Result<Self> {
        let n = dog_prefs.len();
        if man_prefs.len() != n || woman_prefs.len() != n {
            return Err(Error::InvalidInstance(
                "the three sides must have equal size".into(),
            ));
        }
        for ord in dog_prefs.iter().chain(&man_prefs).chain(&woman_prefs) {
            if ord.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "order of length {}, expected {}",
                    ord.len(),
                    n
                )));
            }
        }
        Ok(CyclicInstance {
            n,
            dog_prefs,
            man_prefs,
            woman_prefs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dog_pref(&self, a: Dog) -> &StrictOrder {
        &self.dog_prefs[a.0]
    }

    pub fn man_pref(&self, b: Man) -> &StrictOrder {
        &self.man_prefs[b.0]
    }

    pub fn woman_pref(&self, c: Woman) -> &StrictOrder {
        &self.woman_prefs[c.0]
    }

    /// `(a, b, c)` blocks iff the triple is not in the matching and each
    /// member strictly prefers it to its current triple.
    pub fn is_blocking_triple(
        &self,
        mm: &ThreeDMatching,
        a: Dog,
        b: Man,
        c: Woman,
    ) -> Result<bool> {
        self.check_matching(mm)?;
        check_index(a.0, self.n)?;
        check_index(b.0, self.n)?;
        check_index(c.0, self.n)?;
        if mm.man_of_dog(a) == b && mm.woman_of_man(b) == c {
            return Ok(false);
        }
        Ok(self.dog_prefs[a.0].prefers(b.0, mm.man_of_dog(a).0)
            && self.man_prefs[b.0].prefers(c.0, mm.woman_of_man(b).0)
            && self.woman_prefs[c.0].prefers(a.0, mm.dog_of_woman(c).0))
    }

    /// Full blocking-triple list in lexicographic (dog, man, woman) order;
    /// stable iff empty. The scan is the plain n^3 sweep so it can serve as
    /// an oracle component.
    pub fn is_3d_stable(&self, mm: &ThreeDMatching) -> Result<(bool, Vec<(Dog, Man, Woman)>)> {
        self.check_matching(mm)?;
        let mut blocking = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    if self.is_blocking_triple(mm, Dog(a), Man(b), Woman(c))? {
                        blocking.push((Dog(a), Man(b), Woman(c)));
                    }
                }
            }
        }
        Ok((blocking.is_empty(), blocking))
    }

    /// Early-exit variant used by enumeration.
    pub fn has_blocking_triple(&self, mm: &ThreeDMatching) -> Result<bool> {
        self.check_matching(mm)?;
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    if self.is_blocking_triple(mm, Dog(a), Man(b), Woman(c))? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    fn check_matching(&self, mm: &ThreeDMatching) -> Result<()> {
        if mm.n() != self.n {
            return Err(Error::InvalidMatching(format!(
                "3D matching over {} agents, instance has {}",
                mm.n(),
                self.n
            )));
        }
        Ok(())
    }
}

/// The fixed perfect matching on dogs x men.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedMatching {
    dog_to_man: Vec<usize>,
    man_to_dog: Vec<usize>,
}

impl FixedMatching {
    pub fn from_vec(dog_to_man: Vec<usize>) -> Result<Self> {
        let n = dog_to_man.len();
        let mut man_to_dog = vec![usize::MAX; n];
        for (a, &b) in dog_to_man.iter().enumerate() {
            if b >= n {
                return Err(Error::InvalidMatching(format!("man {b} out of range")));
            }
            if man_to_dog[b] != usize::MAX {
                return Err(Error::InvalidMatching(format!("man {b} matched twice")));
            }
            man_to_dog[b] = a;
        }
        Ok(FixedMatching {
            dog_to_man,
            man_to_dog,
        })
    }

    pub fn identity(n: usize) -> Self {
        FixedMatching {
            dog_to_man: (0..n).collect(),
            man_to_dog: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.dog_to_man.len()
    }

    pub fn man_of(&self, a: Dog) -> Man {
        Man(self.dog_to_man[a.0])
    }

    pub fn dog_of(&self, b: Man) -> Dog {
        Dog(self.man_to_dog[b.0])
    }

    pub fn as_vec(&self) -> &[usize] {
        &self.dog_to_man
    }
}

/// A stable-extension instance: cyclic preferences plus the fixed matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeInstance {
    pub cyclic: CyclicInstance,
    pub fixed: FixedMatching,
}

impl SeInstance {
    pub fn new(cyclic: CyclicInstance, fixed: FixedMatching) -> Result<Self> {
        if fixed.n() != cyclic.n() {
            return Err(Error::InvalidMatching(
                "fixed matching size differs from instance size".into(),
            ));
        }
        Ok(SeInstance { cyclic, fixed })
    }

    pub fn n(&self) -> usize {
        self.cyclic.n()
    }

    /// The dogs that prefer `b` to their fixed partner; exactly the dogs
    /// that could join `b` in a blocking triple.
    pub fn dogs_preferring(&self, b: Man) -> Vec<Dog> {
        (0..self.n())
            .filter(|&a| {
                self.cyclic.dog_prefs[a]
                    .prefers(b.0, self.fixed.man_of(Dog(a)).0)
            })
            .map(Dog)
            .collect()
    }

    /// Woman `c`'s favourite among the dogs preferring `b`; when no dog
    /// prefers `b`, her last-ranked dog.
    pub fn best_dog_for(&self, b: Man, c: Woman) -> Dog {
        let candidates = self.dogs_preferring(b);
        match candidates
            .into_iter()
            .min_by_key(|a| self.cyclic.woman_prefs[c.0].rank(a.0))
        {
            Some(a) => a,
            None => Dog(self.cyclic.woman_prefs[c.0].last()),
        }
    }

    /// Reduces to the two-sided model: men keep their orders, and woman `c`
    /// prefers `b` at least as much as `b'` exactly when her fixed dog
    /// `M(b)` is ranked at least as high as her favourite dog preferring
    /// `b'`.
    pub fn to_smg(&self) -> SmgInstance {
        let n = self.n();
        let men_prefs = (0..n)
            .map(|b| self.cyclic.man_prefs[b].clone())
            .collect::<Vec<_>>();
        let mut women_rels = Vec::with_capacity(n);
        for c in 0..n {
            let order = &self.cyclic.woman_prefs[c];
            let mut pairs = Vec::new();
            for b in 0..n {
                let dog_of_b = self.fixed.dog_of(Man(b));
                for b2 in 0..n {
                    if b == b2 {
                        continue;
                    }
                    let alpha = self.best_dog_for(Man(b2), Woman(c));
                    if order.rank(dog_of_b.0) <= order.rank(alpha.0) {
                        pairs.push((b, b2));
                    }
                }
            }
            women_rels.push(PrefRelation::new(n, pairs).expect("indices in range"));
        }
        SmgInstance::new(men_prefs, women_rels).expect("well formed")
    }
}

/// A perfect 3D matching stored as partner arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeDMatching {
    dog_to_man: Vec<usize>,
    man_to_woman: Vec<usize>,
    woman_to_dog: Vec<usize>,
}

impl ThreeDMatching {
    pub fn from_triples(
        n: usize,
        triples: impl IntoIterator<Item = (Dog, Man, Woman)>,
    ) -> Result<Self> {
        let mut dog_to_man = vec![usize::MAX; n];
        let mut man_to_woman = vec![usize::MAX; n];
        let mut woman_to_dog = vec![usize::MAX; n];
        for (a, b, c) in triples {
            check_index(a.0, n)?;
            check_index(b.0, n)?;
            check_index(c.0, n)?;
            if dog_to_man[a.0] != usize::MAX
                || man_to_woman[b.0] != usize::MAX
                || woman_to_dog[c.0] != usize::MAX
            {
                return Err(Error::InvalidMatching("agent in two triples".into()));
            }
            dog_to_man[a.0] = b.0;
            man_to_woman[b.0] = c.0;
            woman_to_dog[c.0] = a.0;
        }
        if dog_to_man.contains(&usize::MAX) {
            return Err(Error::InvalidMatching("3D matching is not perfect".into()));
        }
        Ok(ThreeDMatching {
            dog_to_man,
            man_to_woman,
            woman_to_dog,
        })
    }

    pub fn n(&self) -> usize {
        self.dog_to_man.len()
    }

    pub fn man_of_dog(&self, a: Dog) -> Man {
        Man(self.dog_to_man[a.0])
    }

    pub fn woman_of_man(&self, b: Man) -> Woman {
        Woman(self.man_to_woman[b.0])
    }

    pub fn dog_of_woman(&self, c: Woman) -> Dog {
        Dog(self.woman_to_dog[c.0])
    }

    pub fn triples(&self) -> impl Iterator<Item = (Dog, Man, Woman)> + '_ {
        self.dog_to_man.iter().enumerate().map(|(a, &b)| {
            let c = self.man_to_woman[b];
            (Dog(a), Man(b), Woman(c))
        })
    }
}

/// `(a, b, c)` is in the composition iff `(a, b)` is in the fixed matching
/// and `(b, c)` in the extension.
pub fn compose(m: &FixedMatching, nm: &Matching) -> Result<ThreeDMatching> {
    if m.n() != nm.n() {
        return Err(Error::InvalidMatching(format!(
            "composing matchings of sizes {} and {}",
            m.n(),
            nm.n()
        )));
    }
    ThreeDMatching::from_triples(
        m.n(),
        (0..m.n()).map(|a| {
            let b = m.man_of(Dog(a));
            (Dog(a), b, nm.woman_of(b))
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(n: usize) -> CyclicInstance {
        let ord = |v: Vec<usize>| StrictOrder::new(v).unwrap();
        let idgen = |n: usize| (0..n).map(|_| ord((0..n).collect())).collect::<Vec<_>>();
        CyclicInstance::new(idgen(n), idgen(n), idgen(n)).unwrap()
    }

    #[test]
    fn compose_identity_gives_diagonal() {
        let m = FixedMatching::identity(3);
        let nm = Matching::from_vec(vec![0, 1, 2]).unwrap();
        let mm = compose(&m, &nm).unwrap();
        let triples: Vec<_> = mm.triples().collect();
        assert_eq!(triples.len(), 3);
        for (a, b, c) in triples {
            assert_eq!(a.0, b.0);
            assert_eq!(b.0, c.0);
        }
    }

    #[test]
    fn compose_size_mismatch_errors() {
        let m = FixedMatching::identity(2);
        let nm = Matching::from_vec(vec![0, 1, 2]).unwrap();
        assert!(compose(&m, &nm).is_err());
    }

    #[test]
    fn singleton_always_stable() {
        let inst = tiny(1);
        let mm = ThreeDMatching::from_triples(1, [(Dog(0), Man(0), Woman(0))]).unwrap();
        assert!(inst.is_3d_stable(&mm).unwrap().0);
    }

    #[test]
    fn matched_triple_never_blocks() {
        let inst = tiny(2);
        let mm = ThreeDMatching::from_triples(
            2,
            [(Dog(0), Man(0), Woman(0)), (Dog(1), Man(1), Woman(1))],
        )
        .unwrap();
        for (a, b, c) in mm.triples().collect::<Vec<_>>() {
            assert!(!inst.is_blocking_triple(&mm, a, b, c).unwrap());
        }
    }

    #[test]
    fn singleton_se_reduction_is_trivially_stable() {
        let inst = tiny(1);
        let se = SeInstance::new(inst, FixedMatching::identity(1)).unwrap();
        let smg = se.to_smg();
        assert!(smg.relation(Woman(0)).is_empty());
        let nm = Matching::from_vec(vec![0]).unwrap();
        assert!(smg.is_stable(&nm).unwrap().0);
        let mm = compose(&se.fixed, &nm).unwrap();
        assert!(se.cyclic.is_3d_stable(&mm).unwrap().0);
    }

    #[test]
    fn dogs_preferring_matches_definition() {
        // dog 0 ranks man 1 above its fixed partner man 0
        let inst = CyclicInstance::new(
            vec![
                StrictOrder::new(vec![1, 0]).unwrap(),
                StrictOrder::new(vec![1, 0]).unwrap(),
            ],
            vec![
                StrictOrder::new(vec![0, 1]).unwrap(),
                StrictOrder::new(vec![0, 1]).unwrap(),
            ],
            vec![
                StrictOrder::new(vec![0, 1]).unwrap(),
                StrictOrder::new(vec![0, 1]).unwrap(),
            ],
        )
        .unwrap();
        let se = SeInstance::new(inst, FixedMatching::identity(2)).unwrap();
        assert_eq!(se.dogs_preferring(Man(1)), vec![Dog(0)]);
        assert!(se.dogs_preferring(Man(0)).is_empty());
        // empty set falls back to the woman's last-ranked dog
        assert_eq!(se.best_dog_for(Man(0), Woman(0)), Dog(1));
        assert_eq!(se.best_dog_for(Man(1), Woman(0)), Dog(0));
    }
}
