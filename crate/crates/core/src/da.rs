//! Man-proposing deferred acceptance for general one-sided preference
//! relations. A woman keeps a man engaged exactly while he satisfies the
//! acceptance condition against every man that has ever proposed to her; a
//! later proposer can therefore dislodge an earlier engagement. On
//! asymmetric instances the solver is complete: it returns a matching iff
//! one exists.

use std::collections::BTreeSet;

use crate::smg::{Matching, SmgInstance};
use crate::{Man, Woman};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A stable matching was found (sound on every instance).
    Solution(Matching),
    /// No stable matching exists; only issued for asymmetric instances.
    NoStableMatching,
    /// The search failed but the instance is not asymmetric, so nonexistence
    /// is not proved.
    NotFound,
}

/// One round of the proposal loop.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub round: usize,
    pub proposals: Vec<(Man, Woman)>,
    pub acceptances: Vec<(Man, Woman)>,
    /// Rejections issued this round, including dislodged engagements.
    pub rejections: Vec<(Man, Woman)>,
}

#[derive(Debug, Clone)]
pub struct DaResult {
    pub verdict: Verdict,
    pub trace: Vec<RoundRecord>,
    pub proposal_count: usize,
    /// Engaged pairs at termination, also when they do not form a perfect
    /// matching.
    pub engaged: Vec<(Man, Woman)>,
    /// Every (man, woman) rejection over the whole run.
    pub rejected: Vec<(Man, Woman)>,
}

pub fn solve_da(inst: &SmgInstance) -> DaResult {
    let n = inst.n();
    let mut cursor = vec![0usize; n];
    let mut engaged_to: Vec<Option<usize>> = vec![None; n];
    let mut proposers: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut trace = Vec::new();
    let mut rejected = Vec::new();
    let mut proposal_count = 0;
    let mut round = 0;

    loop {
        let singles: Vec<usize> = (0..n)
            .filter(|&b| engaged_to[b].is_none() && cursor[b] < n)
            .collect();
        if singles.is_empty() {
            break;
        }
        round += 1;
        let mut record = RoundRecord {
            round,
            proposals: Vec::new(),
            acceptances: Vec::new(),
            rejections: Vec::new(),
        };

        let mut touched = BTreeSet::new();
        let mut round_proposals: Vec<(usize, usize)> = Vec::new();
        for &b in &singles {
            let c = inst.man_pref(Man(b)).ranked()[cursor[b]];
            proposers[c].insert(b);
            touched.insert(c);
            round_proposals.push((b, c));
            proposal_count += 1;
            record.proposals.push((Man(b), Woman(c)));
        }

        for &c in &touched {
            let rel = inst.relation(Woman(c));
            let accepted: Vec<usize> = proposers[c]
                .iter()
                .copied()
                .filter(|&b| {
                    proposers[c]
                        .iter()
                        .all(|&b2| b2 == b || rel.contains(Man(b), Man(b2)))
                })
                .collect();
            // dislodge engagements that no longer satisfy the condition
            for b in 0..n {
                if engaged_to[b] == Some(c) && !accepted.contains(&b) {
                    engaged_to[b] = None;
                    cursor[b] += 1;
                    record.rejections.push((Man(b), Woman(c)));
                    rejected.push((Man(b), Woman(c)));
                }
            }
            for &(b, cc) in &round_proposals {
                if cc != c {
                    continue;
                }
                if accepted.contains(&b) {
                    engaged_to[b] = Some(c);
                    record.acceptances.push((Man(b), Woman(c)));
                } else {
                    cursor[b] += 1;
                    record.rejections.push((Man(b), Woman(c)));
                    rejected.push((Man(b), Woman(c)));
                }
            }
        }
        trace.push(record);
    }

    let engaged: Vec<(Man, Woman)> = (0..n)
        .filter_map(|b| engaged_to[b].map(|c| (Man(b), Woman(c))))
        .collect();

    let verdict = match Matching::from_pairs(n, engaged.iter().copied()) {
        Ok(m) => {
            debug_assert!(inst.is_stable(&m).map(|(s, _)| s).unwrap_or(false));
            Verdict::Solution(m)
        }
        Err(_) if inst.is_asymmetric() => Verdict::NoStableMatching,
        Err(_) => Verdict::NotFound,
    };

    DaResult {
        verdict,
        trace,
        proposal_count,
        engaged,
        rejected,
    }
}
