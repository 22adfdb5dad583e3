use std::sync::Arc;

use super::{Flow, FlowMorphism};
use crate::error::{Error, Result};

/// Default cap on candidate assignments examined by a hom-set enumeration.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Upper bound on raw candidates: `|Y0|^|X0| · m^|PX|` with `m` the largest path set of `Y`.
pub fn hom_estimate(x: &Flow, y: &Flow) -> u128 {
    let states = (y.states().len() as u128)
        .checked_pow(x.states().len() as u32)
        .unwrap_or(u128::MAX);
    let widest = y
        .nonempty_pairs()
        .iter()
        .map(|&(a, b)| y.pair_range(a, b).len())
        .max()
        .unwrap_or(0) as u128;
    let paths = widest.checked_pow(x.path_count() as u32).unwrap_or(u128::MAX);
    states.saturating_mul(paths.max(1))
}

/// Every morphism `X → Y`, ordered lexicographically by (state table, path table).
pub fn enumerate_morphisms(x: &Arc<Flow>, y: &Arc<Flow>, budget: u64) -> Result<Vec<FlowMorphism>> {
    if x.is_truncated() || y.is_truncated() {
        return Err(Error::MalformedFlow("truncated flows have no exhaustive hom-set".into()));
    }
    let needed = hom_estimate(x, y);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, cap: budget });
    }

    // Composition constraints (a, b, a*b), bucketed by the largest path index involved so
    // each can be checked as soon as all three paths are assigned.
    let n = x.path_count();
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for (a, b) in x.composable_pairs() {
        if let Some(ab) = x.compose(a, b) {
            checks[a.max(b).max(ab)].push((a, b, ab));
        }
    }

    let ns = x.states().len();
    let ks = y.states().len();
    let mut out = Vec::new();
    if ns > 0 && ks == 0 {
        return Ok(out);
    }
    let mut states = vec![0usize; ns];
    let mut paths = vec![0usize; n];
    loop {
        extend(x, y, &checks, &states, &mut paths, 0, &mut out);
        // odometer over state tables
        let mut pos = ns;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            states[pos] += 1;
            if states[pos] < ks {
                break;
            }
            states[pos] = 0;
        }
    }
}

fn extend(
    x: &Arc<Flow>,
    y: &Arc<Flow>,
    checks: &[Vec<(usize, usize, usize)>],
    states: &[usize],
    paths: &mut Vec<usize>,
    p: usize,
    out: &mut Vec<FlowMorphism>,
) {
    if p == paths.len() {
        out.push(FlowMorphism::new_unchecked(x.clone(), y.clone(), states.to_vec(), paths.clone()));
        return;
    }
    let path = x.path(p);
    for q in y.pair_range(states[path.src], states[path.tgt]) {
        paths[p] = q;
        let ok = checks[p]
            .iter()
            .all(|&(a, b, ab)| y.compose(paths[a], paths[b]) == Some(paths[ab]));
        if ok {
            extend(x, y, checks, states, paths, p + 1, out);
        }
    }
}
