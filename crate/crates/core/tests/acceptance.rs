//! Acceptance suite. Each test exercises one end-to-end correctness claim
//! at desk scale and prints a single pass line; failures abort with the
//! offending seed. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

mod common;

use std::time::Instant;

use itertools::Itertools;

use common::*;
use stablegen::cyclic3d::compose;
use stablegen::gadget;
use stablegen::gen;
use stablegen::io::{self, InstanceData};
use stablegen::lp;
use stablegen::oracle;
use stablegen::smg::Matching;
use stablegen::smti;
use stablegen::{da, Man, Woman};

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture present")
}

#[test]
fn criterion_1_counterexample_fixture() {
    let start = Instant::now();
    let parsed = io::parse_instance(&fixture("counterexample_2x2.smg")).unwrap();
    let InstanceData::Smg(inst) = parsed.data else {
        panic!("fixture is not an smg instance")
    };
    let found = oracle::enumerate_stable_smg(&inst, Default::default()).unwrap();
    assert!(found.is_empty(), "oracle found a stable matching");
    assert_eq!(
        da::solve_da(&inst).verdict,
        da::Verdict::NoStableMatching,
        "deferred acceptance verdict"
    );
    let sys = lp::build_polytope(&inst);
    assert!(lp::feasible_point(&sys).is_none(), "polytope not empty");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!("criterion 1 (2x2 counterexample: oracle, solver, LP all negative): PASS");
}

#[test]
fn criterion_2_da_complete_on_asymmetric_instances() {
    let start = Instant::now();
    let mut max_proposals_ok = true;
    for n in 2..=5usize {
        for seed in 0..500u64 {
            let inst = gen::gen_smg(n, seed, true);
            let found = oracle::enumerate_stable_smg(&inst, Default::default()).unwrap();
            let res = da::solve_da(&inst);
            max_proposals_ok &= res.proposal_count <= n * n;
            match res.verdict {
                da::Verdict::Solution(m) => {
                    assert!(!found.is_empty(), "n {n} seed {seed}: false positive");
                    assert!(
                        stable_by_definition(&inst, &m),
                        "n {n} seed {seed}: unstable output"
                    );
                }
                da::Verdict::NoStableMatching => {
                    assert!(found.is_empty(), "n {n} seed {seed}: missed solution");
                }
                da::Verdict::NotFound => {
                    panic!("n {n} seed {seed}: asymmetric instance reported NotFound")
                }
            }
        }
    }
    assert!(max_proposals_ok, "proposal bound violated");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("criterion 2 (solver complete on 2000 asymmetric instances, n = 2..5): PASS");
}

#[test]
fn criterion_3_da_sound_without_asymmetry() {
    for n in 1..=5usize {
        for seed in 0..500u64 {
            let inst = gen::gen_smg(n, seed, false);
            let res = da::solve_da(&inst);
            assert!(res.proposal_count <= n * n, "n {n} seed {seed}");
            if let da::Verdict::Solution(m) = res.verdict {
                assert!(
                    stable_by_definition(&inst, &m),
                    "n {n} seed {seed}: unstable output"
                );
            }
        }
    }
    println!("criterion 3 (every returned matching stable on 2500 general instances): PASS");
}

#[test]
fn criterion_4_lp_characterisation() {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=4usize {
        for seed in 0..70u64 {
            count += 1;
            let inst = gen::gen_smg(n, seed, true);
            let found = oracle::enumerate_stable_smg(&inst, Default::default()).unwrap();
            let sys = lp::build_polytope(&inst);
            match lp::feasible_point(&sys) {
                Some(x) => {
                    assert!(!found.is_empty(), "n {n} seed {seed}: polytope not empty but no stable matching");
                    // rounding never collides and always yields a stable
                    // matching (a collision surfaces as an error)
                    let m = lp::round_to_matching(&inst, &x).unwrap();
                    assert!(
                        stable_by_definition(&inst, &m),
                        "n {n} seed {seed}: rounded matching unstable"
                    );
                }
                None => {
                    assert!(found.is_empty(), "n {n} seed {seed}: empty polytope but stable matching exists");
                }
            }
        }
    }
    assert!(count >= 200);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!("criterion 4 (exact LP feasibility matches existence on {count} asymmetric instances): PASS");
}

#[test]
fn criterion_5_integral_soundness() {
    // same corpus as criterion 2, restricted to n <= 4: a 0/1 matching
    // vector satisfies the system iff the matching is stable
    for n in 2..=4usize {
        for seed in 0..500u64 {
            let inst = gen::gen_smg(n, seed, true);
            let sys = lp::build_polytope(&inst);
            for perm in (0..n).permutations(n) {
                let m = Matching::from_vec(perm).unwrap();
                let x = lp::incidence_vector(n, &m);
                assert_eq!(
                    sys.satisfies(&x),
                    stable_by_definition(&inst, &m),
                    "n {n} seed {seed}"
                );
            }
        }
    }
    println!("criterion 5 (0/1 vectors in the polytope are exactly the stable matchings): PASS");
}

#[test]
fn criterion_6_smti_reduction() {
    // deterministic corpus: every n <= 2 instance (the n = 2 family is
    // complete at 77 members) plus an n = 3 slice covering every tie shape
    // (shared men's order x shared women's weak order over complete lists)
    let mut family = exhaustive_smti_n1();
    let n2 = exhaustive_smti_n2();
    assert_eq!(n2.len(), 77);
    family.extend(n2);
    for men_order in orderings(&[0, 1, 2]) {
        for women_order in weak_orders(&[0, 1, 2]) {
            family.push(
                smti::SmtiInstance::new(
                    vec![smti::TiedList::new(3, men_order.clone()).unwrap(); 3],
                    vec![smti::TiedList::new(3, women_order.clone()).unwrap(); 3],
                )
                .unwrap(),
            );
        }
    }
    assert!(family.len() >= 100);
    let check = |inst: &smti::SmtiInstance, tag: &str| {
        let smg = smti::reduce_smti_to_smg(inst);
        let weak =
            oracle::enumerate_perfect_weakly_stable_smti(inst, Default::default()).unwrap();
        let stable = oracle::enumerate_stable_smg(&smg, Default::default()).unwrap();
        assert_eq!(weak.is_empty(), stable.is_empty(), "{tag}: decision differs");
        let n = inst.n();
        for m in &stable {
            // the extra man is always matched to the extra woman, and every
            // original man stays inside his list
            assert_eq!(m.woman_of(Man(n)), Woman(n), "{tag}");
            for b in 0..n {
                let c = m.woman_of(Man(b));
                assert!(
                    c.0 < n && inst.acceptable(Man(b), c),
                    "{tag}: man {b} matched outside his list"
                );
            }
        }
    };
    for (i, inst) in family.iter().enumerate() {
        check(inst, &format!("exhaustive {i}"));
    }
    for seed in 0..200u64 {
        let inst = gen::gen_smti(3, seed, 0.5, 0.7);
        check(&inst, &format!("random seed {seed}"));
    }
    println!(
        "criterion 6 (tie/incomplete-list reduction preserves the decision on {} + 200 instances): PASS",
        family.len()
    );
}

#[test]
fn criterion_7_se_reduction() {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=4usize {
        for seed in 0..70u64 {
            count += 1;
            let se = gen::gen_se(n, seed);
            let smg = se.to_smg();
            for perm in (0..n).permutations(n) {
                let nm = Matching::from_vec(perm).unwrap();
                let mm = compose(&se.fixed, &nm).unwrap();
                assert_eq!(
                    se.cyclic.is_3d_stable(&mm).unwrap().0,
                    smg.is_stable(&nm).unwrap().0,
                    "n {n} seed {seed}"
                );
            }
        }
    }
    assert!(count >= 200);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("criterion 7 (stable-extension reduction exact on {count} instances, all matchings): PASS");
}

#[test]
fn criterion_8_gadget() {
    let start = Instant::now();
    let mut family: Vec<smti::SmtiInstance> = exhaustive_smti_n1();
    family.extend(exhaustive_smti_n2());
    let mut checked = 0;
    for (i, inst) in family.iter().enumerate() {
        let total_positions: usize = (0..inst.n())
            .map(|c| inst.woman_list(Woman(c)).num_positions())
            .sum();
        if total_positions > 3 {
            continue; // keep the gadget side within oracle reach
        }
        checked += 1;
        let (se, layout) = gadget::build_se_gadget(inst);
        let weak =
            oracle::enumerate_perfect_weakly_stable_smti(inst, Default::default()).unwrap();
        let extensions = oracle::enumerate_stable_extensions(&se, Default::default()).unwrap();
        assert_eq!(
            weak.is_empty(),
            extensions.is_empty(),
            "instance {i}: decision differs"
        );
        // structural validation covers the induced relations and the
        // anchored shape of every extension
        let report = gadget::validate_gadget(&se, &layout, Default::default()).unwrap();
        assert!(report.ok(), "instance {i}: {:?}", report.violations);
        // round trips through the gadget
        for m in &weak {
            let lifted = gadget::lift_solution(inst, &layout, m).unwrap();
            let mm = compose(&se.fixed, &lifted).unwrap();
            assert!(se.cyclic.is_3d_stable(&mm).unwrap().0, "instance {i}: lift unstable");
        }
        for nm in &extensions {
            let back = gadget::restrict_solution(inst, &layout, nm).unwrap();
            assert_eq!(back.len(), inst.n(), "instance {i}: restriction not perfect");
            assert!(
                inst.is_weakly_stable(&back).unwrap().0,
                "instance {i}: restriction unstable"
            );
        }
    }
    assert!(checked > 0);

    // negative control: perturbing an anchor list must trip the validator
    let inst = &exhaustive_smti_n1()[1];
    let (se, layout) = gadget::build_se_gadget(inst);
    let side = layout.side;
    let mut dog_prefs: Vec<stablegen::StrictOrder> = (0..side)
        .map(|a| se.cyclic.dog_pref(stablegen::Dog(a)).clone())
        .collect();
    let mut ranked = vec![layout.anchor(1)];
    ranked.extend((0..side).filter(|&x| x != layout.anchor(1)));
    dog_prefs[layout.anchor(1)] = stablegen::StrictOrder::new(ranked).unwrap();
    let bad = stablegen::cyclic3d::SeInstance::new(
        stablegen::cyclic3d::CyclicInstance::new(
            dog_prefs,
            (0..side).map(|b| se.cyclic.man_pref(Man(b)).clone()).collect(),
            (0..side).map(|c| se.cyclic.woman_pref(Woman(c)).clone()).collect(),
        )
        .unwrap(),
        stablegen::cyclic3d::FixedMatching::identity(side),
    )
    .unwrap();
    let report = gadget::validate_gadget(&bad, &layout, Default::default()).unwrap();
    assert!(!report.ok(), "perturbed gadget passed validation");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    println!("criterion 8 (gadget decision equivalence on {checked} instances + negative control): PASS");
}

#[test]
fn criterion_9_proposal_bound() {
    // re-asserted from the trace over the corpora of criteria 2 and 3
    for n in 2..=5usize {
        for seed in 0..500u64 {
            for asym in [true, false] {
                let inst = gen::gen_smg(n, seed, asym);
                let res = da::solve_da(&inst);
                let traced: usize = res.trace.iter().map(|r| r.proposals.len()).sum();
                assert_eq!(traced, res.proposal_count, "trace disagrees with counter");
                assert!(traced <= n * n, "n {n} seed {seed}: {traced} proposals");
            }
        }
    }
    println!("criterion 9 (proposal count bounded by n^2 on every run): PASS");
}
