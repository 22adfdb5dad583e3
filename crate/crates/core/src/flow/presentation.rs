//! Finitely presented flows: a directed graph of generating paths plus relations between
//! composable words, and materialization into a [`Flow`] by congruence closure.

use std::collections::HashMap;

use super::{Flow, FlowBuilder};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::uf::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

pub type Word = Vec<usize>;

/// Edges are kept sorted by label; relations are oriented (shorter/lexicographically smaller
/// word first), deduplicated and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowPresentation {
    vertices: FinSet,
    edges: Vec<Edge>,
    relations: Vec<(Word, Word)>,
}

impl FlowPresentation {
    /// Label-based constructor: edges are `(label, src, tgt)`, relation words are edge labels.
    pub fn new(vertices: FinSet, edges: &[(&str, &str, &str)], relations: &[(Vec<&str>, Vec<&str>)]) -> Result<Self> {
        let vertex = |l: &str| {
            vertices.index_of(l).ok_or_else(|| Error::UnknownLabel {
                label: l.to_string(),
                context: "presentation vertices".into(),
            })
        };
        let parsed: Vec<Edge> = edges
            .iter()
            .map(|&(label, s, t)| {
                Ok(Edge {
                    label: label.to_string(),
                    src: vertex(s)?,
                    tgt: vertex(t)?,
                })
            })
            .collect::<Result<_>>()?;
        let index: HashMap<&str, usize> = edges.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
        let word = |w: &[&str]| -> Result<Word> {
            w.iter()
                .map(|l| {
                    index.get(l).copied().ok_or_else(|| Error::UnknownLabel {
                        label: l.to_string(),
                        context: "relation word".into(),
                    })
                })
                .collect()
        };
        let rels = relations
            .iter()
            .map(|(u, v)| Ok((word(u)?, word(v)?)))
            .collect::<Result<Vec<_>>>()?;
        FlowPresentation::from_parts(vertices.clone(), parsed, rels)
    }

    /// Index-based constructor; canonicalizes edge order and relation order.
    pub fn from_parts(vertices: FinSet, edges: Vec<Edge>, relations: Vec<(Word, Word)>) -> Result<Self> {
        for e in &edges {
            if e.src >= vertices.len() || e.tgt >= vertices.len() {
                return Err(Error::MalformedPresentation(format!("edge `{}` has unknown endpoints", e.label)));
            }
        }
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by(|&a, &b| edges[a].label.cmp(&edges[b].label));
        for w in order.windows(2) {
            if edges[w[0]].label == edges[w[1]].label {
                return Err(Error::MalformedPresentation(format!(
                    "duplicate edge label `{}`",
                    edges[w[0]].label
                )));
            }
        }
        let mut new_index = vec![0; edges.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_index[old] = pos;
        }
        let sorted: Vec<Edge> = order.iter().map(|&i| edges[i].clone()).collect();

        let mut rels = Vec::new();
        for (u, v) in relations {
            if u.iter().chain(&v).any(|&e| e >= edges.len()) {
                return Err(Error::MalformedPresentation("relation refers to an unknown edge".into()));
            }
            let u: Word = u.iter().map(|&e| new_index[e]).collect();
            let v: Word = v.iter().map(|&e| new_index[e]).collect();
            let eu = word_endpoints(&sorted, &u)?;
            let ev = word_endpoints(&sorted, &v)?;
            if eu != ev {
                return Err(Error::MalformedPresentation(
                    "relation words have different endpoints".into(),
                ));
            }
            if u == v {
                continue;
            }
            rels.push(if shortlex(&u, &v) { (u, v) } else { (v, u) });
        }
        rels.sort();
        rels.dedup();
        Ok(FlowPresentation {
            vertices,
            edges: sorted,
            relations: rels,
        })
    }

    /// Every path becomes a generator and every composite a relation `x·y = x*y`.
    /// Returns the presentation and, for each path index of `flow`, its edge index.
    pub fn from_flow(flow: &Flow) -> (FlowPresentation, Vec<usize>) {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for p in flow.paths() {
            *counts.entry(p.label.as_str()).or_default() += 1;
        }
        let edges: Vec<Edge> = flow
            .paths()
            .iter()
            .map(|p| Edge {
                label: if counts[p.label.as_str()] == 1 {
                    p.label.clone()
                } else {
                    format!("{}@{}", p.label, flow.pair_key(p.src, p.tgt))
                },
                src: p.src,
                tgt: p.tgt,
            })
            .collect();
        let relations = flow
            .composable_pairs()
            .filter_map(|(x, y)| flow.compose(x, y).map(|xy| (vec![x, y], vec![xy])))
            .collect();
        let labels: Vec<String> = edges.iter().map(|e| e.label.clone()).collect();
        let pres = FlowPresentation::from_parts(flow.states().clone(), edges, relations)
            .expect("a flow yields a well-formed presentation");
        let path_edges = labels
            .iter()
            .map(|l| pres.edge_index(l).expect("edge kept"))
            .collect();
        (pres, path_edges)
    }

    pub fn vertices(&self) -> &FinSet {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.label.as_str().cmp(label)).ok()
    }

    pub fn word_labels(&self, w: &[usize]) -> Vec<String> {
        w.iter().map(|&e| self.edges[e].label.clone()).collect()
    }

    /// A directed cycle of generating edges, if any.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src].push(i);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut color = vec![0u8; n];
        let mut via: Vec<Option<usize>> = vec![None; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            color[root] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < out[v].len() {
                    let e = out[v][*next];
                    *next += 1;
                    let w = self.edges[e].tgt;
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            via[w] = Some(e);
                            stack.push((w, 0));
                        }
                        1 => {
                            // unwind from v back to w
                            let mut cycle = vec![e];
                            let mut cur = v;
                            while cur != w {
                                let back = via[cur].expect("on stack");
                                cycle.push(back);
                                cur = self.edges[back].src;
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    color[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }
}

fn word_endpoints(edges: &[Edge], w: &[usize]) -> Result<(usize, usize)> {
    let first = w
        .first()
        .ok_or_else(|| Error::MalformedPresentation("relation word is empty".into()))?;
    for pair in w.windows(2) {
        if edges[pair[0]].tgt != edges[pair[1]].src {
            return Err(Error::MalformedPresentation(format!(
                "word is not composable at `{}`·`{}`",
                edges[pair[0]].label, edges[pair[1]].label
            )));
        }
    }
    Ok((edges[*first].src, edges[*w.last().unwrap()].tgt))
}

fn shortlex(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) <= (b.len(), b)
}

/// A materialized presentation, with the path each generator became and a representative
/// word for each path.
#[derive(Debug, Clone)]
pub struct Materialized {
    pub flow: Flow,
    pub edge_paths: Vec<usize>,
    pub path_words: Vec<Word>,
}

/// Free flow on the generating graph, quotiented by the congruence generated by the relations.
///
/// Acyclic graphs have finitely many words and are materialized exactly. A directed cycle makes
/// some path set infinite: without `max_len` that is reported as [`Error::InfinitePathSet`];
/// with it, only words up to that length are kept and the result is flagged as truncated.
pub fn materialize(p: &FlowPresentation, max_len: Option<usize>) -> Result<Materialized> {
    let cycle = p.find_cycle();
    let bound = match (&cycle, max_len) {
        (Some(c), None) => {
            return Err(Error::InfinitePathSet {
                cycle: p.word_labels(c),
            })
        }
        (Some(_), Some(len)) => len,
        (None, _) => usize::MAX,
    };

    let edges = p.edges();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); p.vertices().len()];
    for (i, e) in edges.iter().enumerate() {
        out_edges[e.src].push(i);
    }

    let mut words: Vec<Word> = if bound >= 1 {
        (0..edges.len()).map(|e| vec![e]).collect()
    } else {
        Vec::new()
    };
    let mut start = 0;
    while start < words.len() {
        let end = words.len();
        for w in start..end {
            if words[w].len() >= bound {
                continue;
            }
            let last = edges[*words[w].last().unwrap()].tgt;
            for &e in &out_edges[last] {
                let mut next = words[w].clone();
                next.push(e);
                words.push(next);
            }
        }
        start = end;
    }
    let ids: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

    let mut uf = UnionFind::new(words.len());
    for (id, w) in words.iter().enumerate() {
        for (u, v) in p.relations() {
            for (from, to) in [(u, v), (v, u)] {
                if from.len() > w.len() {
                    continue;
                }
                for at in 0..=w.len() - from.len() {
                    if w[at..at + from.len()] == from[..] {
                        let mut rewritten = w[..at].to_vec();
                        rewritten.extend_from_slice(to);
                        rewritten.extend_from_slice(&w[at + from.len()..]);
                        if let Some(&other) = ids.get(&rewritten) {
                            uf.union(id, other);
                        }
                    }
                }
            }
        }
    }
    let (class_of, count) = uf.classes();
    let mut reps: Vec<Option<usize>> = vec![None; count];
    for (id, &c) in class_of.iter().enumerate() {
        match reps[c] {
            Some(r) if shortlex(&words[r], &words[id]) => {}
            _ => reps[c] = Some(id),
        }
    }
    let reps: Vec<usize> = reps.into_iter().map(|r| r.expect("class is non-empty")).collect();

    let label_of = |w: &Word| p.word_labels(w).join("*");
    let mut builder = FlowBuilder::new(p.vertices().clone());
    let handles: Vec<usize> = reps
        .iter()
        .map(|&r| {
            let w = &words[r];
            builder.path_by_index(edges[w[0]].src, edges[*w.last().unwrap()].tgt, label_of(w))
        })
        .collect();
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); p.vertices().len()];
    for (c, &r) in reps.iter().enumerate() {
        by_src[edges[words[r][0]].src].push(c);
    }
    for (c1, &r1) in reps.iter().enumerate() {
        let tgt = edges[*words[r1].last().unwrap()].tgt;
        for &c2 in &by_src[tgt] {
            let mut joined = words[r1].clone();
            joined.extend_from_slice(&words[reps[c2]]);
            if let Some(&id) = ids.get(&joined) {
                builder.compose(handles[c1], handles[c2], handles[class_of[id]]);
            }
        }
    }
    builder.truncated(cycle.is_some());
    let flow = builder.build()?;

    let index_of_class = |c: usize| -> usize {
        let w = &words[reps[c]];
        flow.find_path(edges[w[0]].src, edges[*w.last().unwrap()].tgt, &label_of(w))
            .expect("class became a path")
    };
    let mut path_words = vec![Vec::new(); flow.path_count()];
    for c in 0..count {
        path_words[index_of_class(c)] = words[reps[c]].clone();
    }
    let edge_paths = if bound >= 1 {
        (0..edges.len()).map(|e| index_of_class(class_of[e])).collect()
    } else {
        Vec::new()
    };
    Ok(Materialized {
        flow,
        edge_paths,
        path_words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::concat_globes;

    fn double_segment() -> FlowPresentation {
        FlowPresentation::new(FinSet::range(3), &[("u", "0", "1"), ("v", "1", "2")], &[]).unwrap()
    }

    #[test]
    fn free_flow_on_a_chain_is_the_concatenation() {
        let m = materialize(&double_segment(), None).unwrap();
        assert!(!m.flow.is_truncated());
        assert_eq!(m.flow.states().len(), 3);
        assert_eq!(m.flow.path_count(), 3);
        let direct = concat_globes(&FinSet::singleton("u"), &FinSet::singleton("v"));
        assert!(m.flow.is_isomorphic(&direct));
        assert_eq!(m.path_words.len(), 3);
    }

    #[test]
    fn self_loop_is_infinite() {
        let p = FlowPresentation::new(FinSet::range(1), &[("e", "0", "0")], &[]).unwrap();
        match materialize(&p, None) {
            Err(Error::InfinitePathSet { cycle }) => assert_eq!(cycle, vec!["e".to_string()]),
            other => panic!("expected an infinite path set, got {other:?}"),
        }
        let truncated = materialize(&p, Some(3)).unwrap();
        assert!(truncated.flow.is_truncated());
        assert_eq!(truncated.flow.path_count(), 3);
        let e = truncated.flow.find_path(0, 0, "e").unwrap();
        let ee = truncated.flow.find_path(0, 0, "e*e").unwrap();
        assert_eq!(truncated.flow.compose(e, e), Some(ee));
        assert_eq!(truncated.flow.compose(ee, ee), None);
    }

    #[test]
    fn empty_presentation() {
        let p = FlowPresentation::new(FinSet::empty(), &[], &[]).unwrap();
        let m = materialize(&p, None).unwrap();
        assert!(m.flow.states().is_empty());
    }

    #[test]
    fn relations_identify_words() {
        // two parallel routes 0->1->2 and 0->2 identified
        let p = FlowPresentation::new(
            FinSet::range(3),
            &[("u", "0", "1"), ("v", "1", "2"), ("w", "0", "2")],
            &[(vec!["u", "v"], vec!["w"])],
        )
        .unwrap();
        let m = materialize(&p, None).unwrap();
        assert_eq!(m.flow.path_count(), 3);
        assert_eq!(m.flow.path_set(0, 2), FinSet::singleton("w"));
    }

    #[test]
    fn free_path_count_matches_graph_paths() {
        // diamond 0->1->3, 0->2->3, plus 3->4: directed edge-paths counted by hand = 5 edges
        // + (01·13, 02·23, 13·34, 23·34) + (01·13·34, 02·23·34) = 11
        let p = FlowPresentation::new(
            FinSet::range(5),
            &[("a", "0", "1"), ("b", "1", "3"), ("c", "0", "2"), ("d", "2", "3"), ("e", "3", "4")],
            &[],
        )
        .unwrap();
        let m = materialize(&p, None).unwrap();
        assert_eq!(m.flow.path_count(), 11);
    }

    #[test]
    fn malformed_relations() {
        let bad = FlowPresentation::new(
            FinSet::range(3),
            &[("u", "0", "1"), ("v", "1", "2")],
            &[(vec!["u"], vec!["v"])],
        );
        assert!(matches!(bad, Err(Error::MalformedPresentation(_))));
        let not_composable = FlowPresentation::new(
            FinSet::range(3),
            &[("u", "0", "1"), ("v", "1", "2")],
            &[(vec!["v", "u"], vec!["u"])],
        );
        assert!(not_composable.is_err());
        let empty_word = FlowPresentation::new(FinSet::range(2), &[("u", "0", "1")], &[(vec![], vec!["u"])]);
        assert!(empty_word.is_err());
    }

    #[test]
    fn flow_round_trips_through_presentation() {
        let ii = concat_globes(&FinSet::new(["a", "b"]).unwrap(), &FinSet::singleton("c"));
        let (p, path_edges) = FlowPresentation::from_flow(&ii);
        assert_eq!(path_edges.len(), ii.path_count());
        let m = materialize(&p, None).unwrap();
        assert!(m.flow.is_isomorphic(&ii));
    }
}
