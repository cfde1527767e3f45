//! Seeded random instance generators. All randomness flows through a
//! ChaCha8 stream keyed by the caller's seed, so output is reproducible
//! across platforms and releases.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclic3d::{CyclicInstance, FixedMatching, SeInstance};
use crate::smg::{PrefRelation, SmgInstance};
use crate::smti::{SmtiInstance, TiedList};
use crate::StrictOrder;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_order(rng: &mut ChaCha8Rng, n: usize) -> StrictOrder {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    StrictOrder::new(v).expect("shuffled permutation")
}

/// Random general-preference instance. With `asymmetric` the relation is
/// built pair by pair, picking one of the two orientations or neither with
/// equal probability, so asymmetry holds by construction; otherwise every
/// ordered pair is included independently with probability 1/2.
pub fn gen_smg(n: usize, seed: u64, asymmetric: bool) -> SmgInstance {
    let mut rng = rng(seed);
    let men = (0..n).map(|_| random_order(&mut rng, n)).collect();
    let mut women = Vec::with_capacity(n);
    for _ in 0..n {
        let mut pairs = Vec::new();
        if asymmetric {
            for b in 0..n {
                for b2 in (b + 1)..n {
                    match rng.random_range(0..3) {
                        0 => pairs.push((b, b2)),
                        1 => pairs.push((b2, b)),
                        _ => {}
                    }
                }
            }
        } else {
            for b in 0..n {
                for b2 in 0..n {
                    if b != b2 && rng.random_bool(0.5) {
                        pairs.push((b, b2));
                    }
                }
            }
        }
        women.push(PrefRelation::new(n, pairs).expect("pairs in range"));
    }
    SmgInstance::new(men, women).expect("well formed")
}

/// Random SMTI instance with ties only on the women's side. `list_density`
/// is the probability that a pair is mutually acceptable; `tie_density` the
/// probability that a woman's list entry joins the previous tie group.
pub fn gen_smti(n: usize, seed: u64, tie_density: f64, list_density: f64) -> SmtiInstance {
    let mut rng = rng(seed);
    // acceptability graph first, so both sides agree
    let mut acceptable = vec![vec![false; n]; n];
    for b in 0..n {
        for c in 0..n {
            acceptable[b][c] = rng.random_bool(list_density.clamp(0.0, 1.0));
        }
    }
    let mut men_lists = Vec::with_capacity(n);
    for b in 0..n {
        let mut women: Vec<usize> = (0..n).filter(|&c| acceptable[b][c]).collect();
        women.shuffle(&mut rng);
        men_lists.push(
            TiedList::new(n, women.into_iter().map(|c| vec![c]).collect())
                .expect("singleton groups"),
        );
    }
    let mut women_lists = Vec::with_capacity(n);
    for c in 0..n {
        let mut men: Vec<usize> = (0..n).filter(|&b| acceptable[b][c]).collect();
        men.shuffle(&mut rng);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for b in men {
            let join = !groups.is_empty() && rng.random_bool(tie_density.clamp(0.0, 1.0));
            if join {
                groups.last_mut().unwrap().push(b);
            } else {
                groups.push(vec![b]);
            }
        }
        women_lists.push(TiedList::new(n, groups).expect("disjoint groups"));
    }
    SmtiInstance::new(men_lists, women_lists).expect("acceptability is symmetric")
}

/// Random cyclic 3D instance.
pub fn gen_cyclic(n: usize, seed: u64) -> CyclicInstance {
    let mut rng = rng(seed);
    let dogs = (0..n).map(|_| random_order(&mut rng, n)).collect();
    let men = (0..n).map(|_| random_order(&mut rng, n)).collect();
    let women = (0..n).map(|_| random_order(&mut rng, n)).collect();
    CyclicInstance::new(dogs, men, women).expect("well formed")
}

/// Random stable-extension instance: cyclic preferences plus a random fixed
/// matching on dogs x men.
pub fn gen_se(n: usize, seed: u64) -> SeInstance {
    let cyclic = gen_cyclic(n, seed);
    let mut rng = rng(seed.wrapping_add(0x5e)); // distinct stream for the matching
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rng);
    SeInstance::new(cyclic, FixedMatching::from_vec(v).expect("permutation"))
        .expect("sizes match")
}
