//! Shared helpers: independent re-implementations of the stability
//! definitions (used as oracles against the library's predicates) and an
//! exhaustive generator for tiny SMTI instances.
#![allow(dead_code)] // not every test target uses every helper

use stablegen::cyclic3d::{CyclicInstance, ThreeDMatching};
use stablegen::smg::{Matching, SmgInstance};
use stablegen::smti::{SmtiInstance, TiedList};
use stablegen::{Dog, Man, Woman};

/// Blocking-pair test written directly from the definition, on the raw
/// man-to-woman vector, sharing no code with `SmgInstance::is_blocking_pair`.
pub fn blocking_by_definition(inst: &SmgInstance, m: &[usize], b: usize, c: usize) -> bool {
    if m[b] == c {
        return false;
    }
    let pos = |man: usize, w: usize| {
        inst.man_pref(Man(man))
            .ranked()
            .iter()
            .position(|&x| x == w)
            .unwrap()
    };
    if pos(b, c) >= pos(b, m[b]) {
        return false;
    }
    let partner_of_c = m.iter().position(|&w| w == c).unwrap();
    !inst
        .relation(Woman(c))
        .iter()
        .any(|(x, y)| x.0 == partner_of_c && y.0 == b)
}

pub fn stable_by_definition(inst: &SmgInstance, m: &Matching) -> bool {
    let v = m.as_vec();
    for b in 0..inst.n() {
        for c in 0..inst.n() {
            if blocking_by_definition(inst, v, b, c) {
                return false;
            }
        }
    }
    true
}

/// Blocking-triple test written directly from the definition.
pub fn blocking_triple_by_definition(
    inst: &CyclicInstance,
    mm: &ThreeDMatching,
    a: usize,
    b: usize,
    c: usize,
) -> bool {
    let in_matching = mm.man_of_dog(Dog(a)).0 == b && mm.woman_of_man(Man(b)).0 == c;
    if in_matching {
        return false;
    }
    let pos = |ord: &stablegen::StrictOrder, x: usize| {
        ord.ranked().iter().position(|&y| y == x).unwrap()
    };
    pos(inst.dog_pref(Dog(a)), b) < pos(inst.dog_pref(Dog(a)), mm.man_of_dog(Dog(a)).0)
        && pos(inst.man_pref(Man(b)), c) < pos(inst.man_pref(Man(b)), mm.woman_of_man(Man(b)).0)
        && pos(inst.woman_pref(Woman(c)), a)
            < pos(inst.woman_pref(Woman(c)), mm.dog_of_woman(Woman(c)).0)
}

pub fn orderings(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    // all strict orders, as singleton groups
    fn perms(items: &[usize]) -> Vec<Vec<usize>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut p in perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    perms(items)
        .into_iter()
        .map(|p| p.into_iter().map(|x| vec![x]).collect())
        .collect()
}

pub fn weak_orders(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    // all ordered partitions (lists with ties)
    fn go(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let n = items.len();
        let mut out = Vec::new();
        // choose a non-empty subset as the top group
        for mask in 1u32..(1 << n) {
            let (top, rest): (Vec<_>, Vec<_>) = items
                .iter()
                .enumerate()
                .partition(|(i, _)| mask & (1 << i) != 0);
            let top: Vec<usize> = top.into_iter().map(|(_, &x)| x).collect();
            let rest: Vec<usize> = rest.into_iter().map(|(_, &x)| x).collect();
            for mut tail in go(&rest) {
                tail.insert(0, top.clone());
                out.push(tail);
            }
        }
        out
    }
    go(items)
}

/// Every SMTI instance with `n = 2` up to the choice of agent labels:
/// all acceptability graphs, all strict men's lists, all weak women's
/// lists.
pub fn exhaustive_smti_n2() -> Vec<SmtiInstance> {
    let n = 2;
    let mut out = Vec::new();
    for graph in 0u32..16 {
        let acc = |b: usize, c: usize| graph & (1 << (b * 2 + c)) != 0;
        let men_sets: Vec<Vec<usize>> = (0..n)
            .map(|b| (0..n).filter(|&c| acc(b, c)).collect())
            .collect();
        let women_sets: Vec<Vec<usize>> = (0..n)
            .map(|c| (0..n).filter(|&b| acc(b, c)).collect())
            .collect();
        let men_choices: Vec<Vec<Vec<Vec<usize>>>> =
            men_sets.iter().map(|s| orderings(s)).collect();
        let women_choices: Vec<Vec<Vec<Vec<usize>>>> =
            women_sets.iter().map(|s| weak_orders(s)).collect();
        for m0 in &men_choices[0] {
            for m1 in &men_choices[1] {
                for w0 in &women_choices[0] {
                    for w1 in &women_choices[1] {
                        let inst = SmtiInstance::new(
                            vec![
                                TiedList::new(n, m0.clone()).unwrap(),
                                TiedList::new(n, m1.clone()).unwrap(),
                            ],
                            vec![
                                TiedList::new(n, w0.clone()).unwrap(),
                                TiedList::new(n, w1.clone()).unwrap(),
                            ],
                        )
                        .expect("acceptability symmetric by construction");
                        out.push(inst);
                    }
                }
            }
        }
    }
    out
}

/// The two SMTI instances with `n = 1`.
pub fn exhaustive_smti_n1() -> Vec<SmtiInstance> {
    vec![
        SmtiInstance::new(
            vec![TiedList::new(1, vec![]).unwrap()],
            vec![TiedList::new(1, vec![]).unwrap()],
        )
        .unwrap(),
        SmtiInstance::new(
            vec![TiedList::new(1, vec![vec![0]]).unwrap()],
            vec![TiedList::new(1, vec![vec![0]]).unwrap()],
        )
        .unwrap(),
    ]
}
