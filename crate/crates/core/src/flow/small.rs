use super::{Flow, FlowBuilder};
use crate::finset::FinSet;

/// All flows with at most `max_states` states and at most `max_per_pair` paths in each
/// `P_{α,β}`, one per isomorphism class. Exhaustive over composition tables, so only
/// meant for tiny bounds (`max_states ≤ 3`, `max_per_pair ≤ 1`, or `max_states ≤ 2`).
pub fn small_flows(max_states: usize, max_per_pair: usize) -> Vec<Flow> {
    let mut out: Vec<Flow> = Vec::new();
    for n in 0..=max_states {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        let mut sizes = vec![0usize; pairs.len()];
        loop {
            for flow in flows_with_sizes(n, &pairs, &sizes) {
                if !out.iter().any(|g| g.is_isomorphic(&flow)) {
                    out.push(flow);
                }
            }
            if !bump(&mut sizes, max_per_pair + 1) {
                break;
            }
        }
    }
    out
}

fn bump(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn flows_with_sizes(n: usize, pairs: &[(usize, usize)], sizes: &[usize]) -> Vec<Flow> {
    const NAMES: &[u8] = b"abcdefgh";
    let mut builder = FlowBuilder::new(FinSet::range(n));
    // handles[a][b] = builder handles of P_{a,b}
    let mut handles = vec![vec![Vec::new(); n]; n];
    for (&(a, b), &k) in pairs.iter().zip(sizes) {
        for &name in &NAMES[..k] {
            let label = format!("{a}{b}{}", name as char);
            handles[a][b].push(builder.path_by_index(a, b, label));
        }
    }
    // composable pairs and their candidate composites
    let mut slots: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for &x in &handles[a][b] {
                    for &y in &handles[b][c] {
                        slots.push((x, y, handles[a][c].clone()));
                    }
                }
            }
        }
    }
    if slots.iter().any(|(_, _, cands)| cands.is_empty()) {
        return Vec::new();
    }
    let mut choice = vec![0usize; slots.len()];
    let mut out = Vec::new();
    loop {
        let mut b = builder.clone();
        for (slot, &c) in slots.iter().zip(&choice) {
            b.compose(slot.0, slot.1, slot.2[c]);
        }
        if let Ok(flow) = b.build() {
            out.push(flow);
        }
        // mixed-radix odometer
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < slots[pos].2.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}
