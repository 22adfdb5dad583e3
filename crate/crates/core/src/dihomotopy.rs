//! Automata-style properties of flows, discrete weak equivalences, and the executable
//! counterexamples showing why no model structure on flows can identify `φ` with an
//! equivalence while keeping weak equivalences bijective on states.
//!
//! Reachability, deadlocks, branchings and mergings are read off the generating paths: the
//! edges of a presentation, or the indecomposable paths of a materialized flow. A deadlock is
//! a non-isolated state with no outgoing path that is not an intended terminal; intended
//! terminals are the designated final states when given, otherwise the sinks reachable from an
//! initial state.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::colimits::{codiagonal_construction, coproduct, pushout};
use crate::error::Result;
use crate::finset::{named, FinSet, SetMap};
use crate::flow::{directed_segment, phi, segment_pair, small_flows, Flow, FlowMorphism, FlowPresentation};
use crate::lifting::{has_llp, SearchContext};

/// A generating path, by label and endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub label: String,
    pub src: String,
    pub tgt: String,
}

/// At least two distinct generators leaving (branching) or entering (merging) `state`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fork {
    pub state: String,
    pub paths: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DihomotopyReport {
    pub states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub final_states: Vec<String>,
    pub unreachable: Vec<String>,
    pub deadlocks: Vec<String>,
    /// Each loop is a closed sequence of generator labels.
    pub loops: Vec<Vec<String>>,
    pub branchings: Vec<Fork>,
    pub mergings: Vec<Fork>,
    /// Some path set is infinite (a directed cycle of generators).
    pub infinite_path_sets: bool,
    pub truncated: bool,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub designated_finals: Option<Vec<String>>,
}

/// Analysis of a materialized flow; generators are its indecomposable paths, loops are paths
/// from a state to itself.
pub fn analyze_flow(x: &Flow, options: &AnalyzeOptions) -> DihomotopyReport {
    let all: Vec<(usize, usize)> = x.paths().iter().map(|p| (p.src, p.tgt)).collect();
    let gens: Vec<(usize, usize, String)> = x
        .indecomposables()
        .into_iter()
        .map(|p| {
            let path = x.path(p);
            (path.src, path.tgt, path.label.clone())
        })
        .collect();
    let loops = x
        .paths()
        .iter()
        .filter(|p| p.src == p.tgt)
        .map(|p| vec![p.label.clone()])
        .collect();
    let mut report = analyze_graph(x.states(), &all, &gens, loops, options);
    report.truncated = x.is_truncated();
    report.infinite_path_sets = x.is_truncated();
    report
}

/// Generator-level analysis of a presentation; loops are directed cycles of edges, one per
/// strongly connected component that has one.
pub fn analyze_presentation(p: &FlowPresentation, options: &AnalyzeOptions) -> DihomotopyReport {
    let gens: Vec<(usize, usize, String)> = p.edges().iter().map(|e| (e.src, e.tgt, e.label.clone())).collect();
    let loops = component_cycles(p.vertices().len(), &gens);
    let all: Vec<(usize, usize)> = gens.iter().map(|(s, t, _)| (*s, *t)).collect();
    let mut report = analyze_graph(p.vertices(), &all, &gens, loops, options);
    report.infinite_path_sets = !report.loops.is_empty();
    report
}

/// `reach` drives initial, final and reachable states; `gens` drives branchings and mergings.
fn analyze_graph(
    states: &FinSet,
    reach: &[(usize, usize)],
    gens: &[(usize, usize, String)],
    loops: Vec<Vec<String>>,
    options: &AnalyzeOptions,
) -> DihomotopyReport {
    let n = states.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut has_in = vec![false; n];
    for &(s, t) in reach {
        succ[s].push(t);
        has_in[t] = true;
    }
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (s, t, _)) in gens.iter().enumerate() {
        outgoing[*s].push(i);
        incoming[*t].push(i);
    }
    let initial: Vec<usize> = (0..n).filter(|&s| !has_in[s]).collect();
    let finals: Vec<usize> = (0..n).filter(|&s| succ[s].is_empty()).collect();

    let mut reachable = vec![false; n];
    let mut stack = initial.clone();
    for &s in &initial {
        reachable[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &t in &succ[s] {
            if !reachable[t] {
                reachable[t] = true;
                stack.push(t);
            }
        }
    }

    let designated: Option<BTreeSet<&str>> = options
        .designated_finals
        .as_ref()
        .map(|d| d.iter().map(String::as_str).collect());
    let deadlocks = finals
        .iter()
        .copied()
        .filter(|&s| has_in[s])
        .filter(|&s| match &designated {
            Some(d) => !d.contains(states.label(s)),
            None => !reachable[s],
        })
        .collect::<Vec<_>>();

    let forks = |adj: &[Vec<usize>]| -> Vec<Fork> {
        (0..n)
            .filter(|&s| adj[s].len() >= 2)
            .map(|s| Fork {
                state: states.label(s).to_string(),
                paths: adj[s].iter().map(|&g| gens[g].2.clone()).collect(),
            })
            .collect()
    };
    let names = |v: &[usize]| v.iter().map(|&s| states.label(s).to_string()).collect::<Vec<_>>();
    let unreachable: Vec<usize> = (0..n).filter(|&s| !reachable[s]).collect();
    DihomotopyReport {
        states: states.labels().to_vec(),
        initial: names(&initial),
        final_states: names(&finals),
        unreachable: names(&unreachable),
        deadlocks: names(&deadlocks),
        loops,
        branchings: forks(&outgoing),
        mergings: forks(&incoming),
        infinite_path_sets: false,
        truncated: false,
    }
}

/// One directed cycle per strongly connected component containing a cycle.
fn component_cycles(n: usize, gens: &[(usize, usize, String)]) -> Vec<Vec<String>> {
    let comp = strongly_connected(n, gens);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (g, (s, t, _)) in gens.iter().enumerate() {
        if comp[*s] != comp[*t] || !seen.insert(comp[*s]) {
            continue;
        }
        // shortest path t ⇝ s inside the component closes the cycle through g
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut queue = std::collections::VecDeque::from([*t]);
        let mut visited = vec![false; n];
        visited[*t] = true;
        while let Some(v) = queue.pop_front() {
            if v == *s {
                break;
            }
            for (h, (a, b, _)) in gens.iter().enumerate() {
                if *a == v && comp[*b] == comp[*s] && !visited[*b] {
                    visited[*b] = true;
                    via[*b] = Some(h);
                    queue.push_back(*b);
                }
            }
        }
        let mut cycle = vec![g];
        let mut cur = *s;
        let mut back = Vec::new();
        while cur != *t {
            let h = via[cur].expect("same component");
            back.push(h);
            cur = gens[h].0;
        }
        back.reverse();
        cycle.extend(back);
        out.push(cycle.into_iter().map(|h| gens[h].2.clone()).collect());
    }
    out
}

/// Kosaraju: component index of every vertex.
fn strongly_connected(n: usize, gens: &[(usize, usize, String)]) -> Vec<usize> {
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for (s, t, _) in gens {
        fwd[*s].push(*t);
        rev[*t].push(*s);
    }
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((v, i)) = stack.pop() {
            if i < fwd[v].len() {
                stack.push((v, i + 1));
                let w = fwd[v][i];
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let mut stack = vec![root];
        comp[root] = count;
        while let Some(v) = stack.pop() {
            for &w in &rev[v] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    comp
}

/// Bijective on states and on every path set `P_{α,β}X → P_{f(α),f(β)}Y`.
pub fn is_discrete_weq(f: &FlowMorphism) -> bool {
    if !f.f0().is_bijective() {
        return false;
    }
    let n = f.source().states().len();
    (0..n).all(|a| (0..n).all(|b| f.path_component(a, b).is_bijective()))
}

#[derive(Debug, Clone, Serialize)]
pub struct SkeletonCount {
    pub segment_states: usize,
    pub double_segment_states: usize,
    pub phi_f0: SetMap,
    pub phi_is_discrete_weq: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GluingCase {
    pub name: String,
    /// The states `ι(0) ≠ ι(1)` identified by the pushout of `R`.
    pub identified: (String, String),
    pub states_before: usize,
    pub states_after: usize,
    /// The pushout leg `X → Z` identifies the two states.
    pub non_trivial: bool,
    /// Materializing the apex fails with this directed cycle.
    pub infinite_cycle: Option<Vec<String>>,
    pub damage: DihomotopyReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodiagonalCase {
    pub name: String,
    pub h0: SetMap,
    pub h0_epi: bool,
    pub h0_injective: bool,
    pub g0_surjective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkeletonSweep {
    pub flows: usize,
    pub morphisms: usize,
    pub with_rlp_against_r_and_c: usize,
    /// Morphisms lifting against `R` and `C` whose state map is not bijective.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub skeletons: SkeletonCount,
    pub pushouts_of_r: Vec<GluingCase>,
    pub codiagonals: Vec<CodiagonalCase>,
    pub skeleton_sweep: SkeletonSweep,
    /// Reachability, deadlock and weak equivalence are working definitions of this library.
    pub definitions: Vec<&'static str>,
}

impl CounterexampleReport {
    pub fn all_confirmed(&self) -> bool {
        self.skeletons.segment_states == 2
            && self.skeletons.double_segment_states == 3
            && !self.skeletons.phi_is_discrete_weq
            && self.pushouts_of_r.iter().all(|c| c.non_trivial)
            && self.codiagonals.iter().all(|c| c.h0_epi && !c.h0_injective)
            && self.skeleton_sweep.violations.is_empty()
    }
}

/// Runs every counterexample construction and records what it found.
pub fn counterexample_suite(ctx: &SearchContext) -> Result<CounterexampleReport> {
    let (i, ii) = segment_pair();
    let p = phi();
    let skeletons = SkeletonCount {
        segment_states: i.states().len(),
        double_segment_states: ii.states().len(),
        phi_f0: p.f0(),
        phi_is_discrete_weq: is_discrete_weq(&p),
    };

    let seg = Arc::new(directed_segment());
    let two_segments = coproduct(&seg, &seg)?.materialize(None)?.apex;
    let samples = [
        ("ends of the segment", seg.clone(), 0, 1),
        ("final states of two segments", two_segments.clone(), 1, 3),
        ("initial states of two segments", two_segments.clone(), 0, 2),
    ];
    let mut pushouts_of_r = Vec::new();
    for (name, x, a, b) in samples {
        pushouts_of_r.push(glue_with_r(name, &x, a, b)?);
    }

    let mut codiagonals = Vec::new();
    for (name, g) in [("C+", FlowMorphism::from_set_map(&named::c_plus())), ("phi", p.clone())] {
        let cd = codiagonal_construction(&g, ctx.budget())?;
        let h0 = cd.h.f0();
        codiagonals.push(CodiagonalCase {
            name: name.to_string(),
            h0_epi: h0.is_surjective(),
            h0_injective: h0.is_injective(),
            g0_surjective: g.f0().is_surjective(),
            h0,
        });
    }

    Ok(CounterexampleReport {
        skeletons,
        pushouts_of_r,
        codiagonals,
        skeleton_sweep: skeleton_sweep(2, 1, ctx)?,
        definitions: vec![
            "initial: not the target of any path; final: not the source of any path",
            "unreachable: not reachable from an initial state along generating paths",
            "deadlock: non-isolated state without outgoing paths that is not an intended terminal",
            "discrete weak equivalence: bijective on states and on every path set",
        ],
    })
}

/// `R̂ : X → Z`, the pushout of `R : {0,1} → {0}` along `ι : {0,1} → X`, `ι = (a, b)`.
fn glue_with_r(name: &str, x: &Arc<Flow>, a: usize, b: usize) -> Result<GluingCase> {
    let ends = Arc::new(Flow::discrete(FinSet::range(2)));
    let iota = FlowMorphism::new(ends, x.clone(), vec![a, b], vec![])?;
    let po = pushout(&FlowMorphism::from_set_map(&named::r()), &iota)?;
    let r_hat = &po.right;
    let infinite_cycle = match po.materialize(None) {
        Ok(_) => None,
        Err(crate::Error::InfinitePathSet { cycle }) => Some(cycle),
        Err(e) => return Err(e),
    };
    Ok(GluingCase {
        name: name.to_string(),
        identified: (x.state_label(a).to_string(), x.state_label(b).to_string()),
        states_before: x.states().len(),
        states_after: po.apex.vertices().len(),
        non_trivial: r_hat.vertices.at(a) == r_hat.vertices.at(b) && a != b,
        infinite_cycle,
        damage: analyze_presentation(&po.apex, &AnalyzeOptions::default()),
    })
}

/// Every morphism between small flows that lifts against `R` and `C` has a bijective state map.
pub fn skeleton_sweep(max_states: usize, max_per_pair: usize, ctx: &SearchContext) -> Result<SkeletonSweep> {
    let flows: Vec<Arc<Flow>> = small_flows(max_states, max_per_pair).into_iter().map(Arc::new).collect();
    let r = FlowMorphism::from_set_map(&named::r());
    let c = FlowMorphism::from_set_map(&named::c());
    let mut morphisms = 0;
    let mut lifting = 0;
    let mut violations = Vec::new();
    for x in &flows {
        for y in &flows {
            for f in ctx.flow_homs(x, y)?.iter() {
                morphisms += 1;
                if has_llp(ctx, &r, f)? && has_llp(ctx, &c, f)? {
                    lifting += 1;
                    if !f.f0().is_bijective() {
                        violations.push(f.to_string());
                    }
                }
            }
        }
    }
    Ok(SkeletonSweep {
        flows: flows.len(),
        morphisms,
        with_rlp_against_r_and_c: lifting,
        violations,
    })
}
