//! Sufficient conditions under which the myopic teacher is within a
//! logarithmic factor of optimal.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TeachError};
use crate::finite::FiniteProblem;

/// Largest class whose removal sets are expanded into all subsets.
pub const DEFAULT_SUBSET_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// No hypothesis ranked between `h` and the target is a shortcut.
    pub cond1: bool,
    /// `(h, h_i, h_j)` violating the first condition.
    pub cond1_witness: Option<[usize; 3]>,
    /// Every subset of a removal set is itself some example's removal set.
    pub cond2: bool,
    /// `(z, H')` with no example removing exactly `H'`.
    pub cond2_witness: Option<(usize, Vec<usize>)>,
}

/// Subsets examined before a larger-than-cap class is declared undecidable.
pub const SUBSET_WORK_BUDGET: usize = 2_000_000;

/// Exhaustive on classes of at most `subset_cap` hypotheses. Larger classes
/// are searched for a second-condition counterexample by increasing subset
/// size; if none turns up within [`SUBSET_WORK_BUDGET`] subsets the check is
/// unsupported.
pub fn check_thm2_conditions(p: &FiniteProblem, subset_cap: usize) -> Result<ConditionReport> {
    let n = p.size();
    let t = p.target();
    let mut cond1_witness = None;
    'outer: for h in 0..n {
        let bound = p.key(t, h);
        for i in 0..n {
            let ki = p.key(i, h);
            if ki > bound {
                continue;
            }
            for j in 0..n {
                let kj = p.key(j, h);
                if ki <= kj && kj <= bound && p.key(j, i) > p.key(t, i) {
                    cond1_witness = Some([h, i, j]);
                    break 'outer;
                }
            }
        }
    }
    let removal: Vec<Vec<usize>> = (0..p.examples().len()).map(|z| p.removed_by(z).ones().collect()).collect();
    let available: HashSet<&[usize]> = removal.iter().map(|r| r.as_slice()).collect();
    let exhaustive = n <= subset_cap;
    let mut work = 0usize;
    let mut cond2_witness = None;
    let max_size = removal.iter().map(Vec::len).max().unwrap_or(0);
    'sizes: for k in 1..=max_size {
        for (z, members) in removal.iter().enumerate() {
            if members.len() < k {
                continue;
            }
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                work += 1;
                if !exhaustive && work > SUBSET_WORK_BUDGET {
                    return Err(TeachError::Unsupported(format!(
                        "second condition undecided after {SUBSET_WORK_BUDGET} subsets on a class of {n}"
                    )));
                }
                let sub: Vec<usize> = idx.iter().map(|&i| members[i]).collect();
                if !available.contains(sub.as_slice()) {
                    cond2_witness = Some((z, sub));
                    break 'sizes;
                }
                if !next_combination(&mut idx, members.len()) {
                    break;
                }
            }
        }
    }
    Ok(ConditionReport {
        cond1: cond1_witness.is_none(),
        cond1_witness,
        cond2: cond2_witness.is_none(),
        cond2_witness,
    })
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
