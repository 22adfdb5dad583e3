#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use flowcalc::finset::{FinSet, SetMap};
use flowcalc::flow::{materialize, small_flows, Edge, Flow, FlowMorphism, FlowPresentation};
use flowcalc::lifting::SearchContext;
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_set_map(rng: &mut StdRng, max: usize) -> SetMap {
    loop {
        let n = rng.gen_range(0..=max);
        let m = rng.gen_range(0..=max);
        if n > 0 && m == 0 {
            continue;
        }
        let table = (0..n).map(|_| rng.gen_range(0..m)).collect();
        return SetMap::from_table(FinSet::range(n), FinSet::range(m), table).unwrap();
    }
}

/// Every flow with at most 3 states and at most one path per pair, up to isomorphism.
pub fn flow_pool() -> &'static [Arc<Flow>] {
    static POOL: OnceLock<Vec<Arc<Flow>>> = OnceLock::new();
    POOL.get_or_init(|| small_flows(3, 1).into_iter().map(Arc::new).collect())
}

/// A free or partly quotiented flow on an acyclic graph over at most 3 states, with at most
/// 2 paths in every path set.
pub fn random_acyclic_flow(rng: &mut StdRng) -> Flow {
    loop {
        let n = rng.gen_range(1..=3);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for k in 0..rng.gen_range(0..=2) {
                    edges.push(Edge {
                        label: format!("e{a}{b}{k}"),
                        src: a,
                        tgt: b,
                    });
                }
            }
        }
        // identify some two-step words with direct edges or with each other
        let mut relations = Vec::new();
        if n == 3 {
            let words: Vec<Vec<usize>> = edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.src == 0 && e.tgt == 1)
                .flat_map(|(i, _)| {
                    edges
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| e.src == 1 && e.tgt == 2)
                        .map(move |(j, _)| vec![i, j])
                })
                .chain(edges.iter().enumerate().filter(|(_, e)| e.src == 0 && e.tgt == 2).map(|(i, _)| vec![i]))
                .collect();
            for _ in 0..rng.gen_range(0..=3) {
                if words.len() >= 2 {
                    let u = &words[rng.gen_range(0..words.len())];
                    let v = &words[rng.gen_range(0..words.len())];
                    relations.push((u.clone(), v.clone()));
                }
            }
        }
        let p = FlowPresentation::from_parts(FinSet::range(n), edges, relations).unwrap();
        let x = materialize(&p, None).unwrap().flow;
        let small = x.nonempty_pairs().iter().all(|&(a, b)| x.pair_range(a, b).len() <= 2);
        if small {
            return x;
        }
    }
}

/// Half from the exhaustive pool (which has loops), half random acyclic.
pub fn random_flow(rng: &mut StdRng) -> Arc<Flow> {
    if rng.gen_bool(0.5) {
        let pool = flow_pool();
        pool[rng.gen_range(0..pool.len())].clone()
    } else {
        Arc::new(random_acyclic_flow(rng))
    }
}

/// A random morphism between random small flows.
pub fn random_morphism(rng: &mut StdRng, ctx: &SearchContext) -> FlowMorphism {
    loop {
        let x = random_flow(rng);
        let y = random_flow(rng);
        let homs = ctx.flow_homs(&x, &y).unwrap();
        if !homs.is_empty() {
            return homs[rng.gen_range(0..homs.len())].clone();
        }
    }
}

/// Injective, surjective and bijective read straight off the table.
pub fn injective(f: &SetMap) -> bool {
    let mut seen = vec![false; f.codomain().len()];
    f.table().iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

pub fn surjective(f: &SetMap) -> bool {
    let mut seen = vec![false; f.codomain().len()];
    for &y in f.table() {
        seen[y] = true;
    }
    seen.into_iter().all(|s| s)
}

/// Closed forms of the named classes, written from scratch.
pub fn closed_form(class: &str, f: &SetMap) -> bool {
    let (n, m) = (f.domain().len(), f.codomain().len());
    let iso = injective(f) && surjective(f);
    match class {
        "All" => true,
        "Iso" => iso,
        "Mono" => injective(f),
        "Epi" => surjective(f),
        "SplitMono" => injective(f) && (n > 0 || m == 0),
        "Empty" => n == 0,
        "NonEmpty" => n > 0,
        "Iso∪Empty" => iso || n == 0,
        "Iso∪NonEmpty" => iso || n > 0,
        "Epi∪Empty" => surjective(f) || n == 0,
        other => panic!("no closed form for {other}"),
    }
}
