//! Pushouts of finite flows, computed on presentations.
//!
//! The apex of `X ←f− Z −g→ Y` is the disjoint union of the presentations of `X` and `Y`,
//! with states and generators identified along the span and the relations of both sides
//! carried over. Materializing the apex is a separate step, since gluing can create loops.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::{quotient, FinSet, SetMap};
use crate::flow::{enumerate_morphisms, materialize, Edge, Flow, FlowMorphism, FlowPresentation, Word};
use crate::uf::UnionFind;

/// Which side of the span a vertex or generator of the apex was first seen on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left(usize),
    Right(usize),
}

/// A morphism of presentations sending generators to generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationMap {
    pub vertices: SetMap,
    /// Path index of the source flow ↦ edge index of the apex.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PushoutResult {
    pub apex: FlowPresentation,
    pub left: PresentationMap,
    pub right: PresentationMap,
    pub span: (FlowMorphism, FlowMorphism),
    vertex_origin: Vec<Side>,
    edge_origin: Vec<Side>,
}

/// A materialized pushout: apex flow and the two legs as flow morphisms.
#[derive(Debug, Clone)]
pub struct MaterializedPushout {
    pub apex: Arc<Flow>,
    pub left: FlowMorphism,
    pub right: FlowMorphism,
    pub span: (FlowMorphism, FlowMorphism),
    path_words: Vec<Word>,
    edge_origin: Vec<Side>,
    vertex_origin: Vec<Side>,
}

/// Pushout of the span `X ←f− Z −g→ Y`.
pub fn pushout(f: &FlowMorphism, g: &FlowMorphism) -> Result<PushoutResult> {
    if **f.source() != **g.source() {
        return Err(Error::SpanMismatch);
    }
    let (x, y) = (f.target(), g.target());
    let (px, x_edges) = FlowPresentation::from_flow(x);
    let (py, y_edges) = FlowPresentation::from_flow(y);

    let (sum, inl, inr) = px.vertices().coproduct(py.vertices());
    let mut vuf = UnionFind::new(sum.len());
    for z in 0..f.source().states().len() {
        vuf.union(inl.at(f.state(z)), inr.at(g.state(z)));
    }
    let (vertices, vq) = quotient(&sum, &mut vuf)?;

    let edge_labels = FinSet::new(
        px.edges()
            .iter()
            .map(|e| format!("1:{}", e.label))
            .chain(py.edges().iter().map(|e| format!("2:{}", e.label))),
    )?;
    let nx = px.edges().len();
    let mut euf = UnionFind::new(edge_labels.len());
    for p in 0..f.source().path_count() {
        euf.union(x_edges[f.path(p)], nx + y_edges[g.path(p)]);
    }
    let (edge_set, eq) = quotient(&edge_labels, &mut euf)?;

    let endpoint = |i: usize| -> (usize, usize) {
        if i < nx {
            let e = &px.edges()[i];
            (vq.at(inl.at(e.src)), vq.at(inl.at(e.tgt)))
        } else {
            let e = &py.edges()[i - nx];
            (vq.at(inr.at(e.src)), vq.at(inr.at(e.tgt)))
        }
    };
    let path_of = |edges_of_paths: &[usize], n: usize| {
        let mut inv = vec![usize::MAX; n];
        for (p, &e) in edges_of_paths.iter().enumerate() {
            inv[e] = p;
        }
        inv
    };
    let (x_paths, y_paths) = (path_of(&x_edges, nx), path_of(&y_edges, py.edges().len()));
    let mut edges: Vec<Option<Edge>> = vec![None; edge_set.len()];
    let mut edge_origin = vec![Side::Left(0); edge_set.len()];
    for i in (0..edge_labels.len()).rev() {
        let (src, tgt) = endpoint(i);
        let c = eq.at(i);
        edges[c] = Some(Edge {
            label: edge_set.label(c).to_string(),
            src,
            tgt,
        });
        edge_origin[c] = if i < nx {
            Side::Left(x_paths[i])
        } else {
            Side::Right(y_paths[i - nx])
        };
    }
    let edges: Vec<Edge> = edges.into_iter().map(|e| e.expect("every class has a member")).collect();

    let mut relations: Vec<(Word, Word)> = Vec::new();
    for (pres, offset) in [(&px, 0), (&py, nx)] {
        for (u, v) in pres.relations() {
            let map = |w: &Word| w.iter().map(|&e| eq.at(offset + e)).collect::<Word>();
            relations.push((map(u), map(v)));
        }
    }
    let apex = FlowPresentation::from_parts(vertices.clone(), edges, relations)?;
    // from_parts sorts edges by label; the quotient already lists them in label order
    debug_assert!(apex.edges().iter().enumerate().all(|(i, e)| e.label == edge_set.label(i)));

    let mut vertex_origin = vec![Side::Left(0); vertices.len()];
    for i in (0..sum.len()).rev() {
        vertex_origin[vq.at(i)] = if i < inl.domain().len() {
            Side::Left(i)
        } else {
            Side::Right(i - inl.domain().len())
        };
    }

    let left = PresentationMap {
        vertices: inl.then(&vq)?,
        edges: x_edges.iter().map(|&e| eq.at(e)).collect(),
    };
    let right = PresentationMap {
        vertices: inr.then(&vq)?,
        edges: y_edges.iter().map(|&e| eq.at(nx + e)).collect(),
    };
    Ok(PushoutResult {
        apex,
        left,
        right,
        span: (f.clone(), g.clone()),
        vertex_origin,
        edge_origin,
    })
}

/// Disjoint union, as the pushout over the empty flow.
pub fn coproduct(x: &Arc<Flow>, y: &Arc<Flow>) -> Result<PushoutResult> {
    pushout(&FlowMorphism::from_empty(x.clone()), &FlowMorphism::from_empty(y.clone()))
}

impl PushoutResult {
    /// Materializes the apex and turns both legs into flow morphisms.
    pub fn materialize(&self, max_len: Option<usize>) -> Result<MaterializedPushout> {
        let m = materialize(&self.apex, max_len)?;
        let apex = Arc::new(m.flow);
        let leg = |source: &Arc<Flow>, map: &PresentationMap| {
            FlowMorphism::new(
                source.clone(),
                apex.clone(),
                map.vertices.table().to_vec(),
                map.edges.iter().map(|&e| m.edge_paths[e]).collect(),
            )
        };
        let left = leg(self.span.0.target(), &self.left)?;
        let right = leg(self.span.1.target(), &self.right)?;
        Ok(MaterializedPushout {
            apex: apex.clone(),
            left,
            right,
            span: self.span.clone(),
            path_words: m.path_words,
            edge_origin: self.edge_origin.clone(),
            vertex_origin: self.vertex_origin.clone(),
        })
    }
}

impl MaterializedPushout {
    /// The morphism out of the apex induced by a cocone `a : X → W`, `b : Y → W`.
    /// Built from generators, then checked to be the only morphism through which the cocone
    /// factors among all of `hom(apex, W)` (so uniqueness is certified within `budget`).
    pub fn mediating_morphism(&self, a: &FlowMorphism, b: &FlowMorphism, budget: u64) -> Result<FlowMorphism> {
        let h = self.induced(a, b)?;
        let candidates = enumerate_morphisms(&self.apex, a.target(), budget)?;
        let through = candidates
            .iter()
            .filter(|k| self.left.then(k).as_ref() == Ok(a) && self.right.then(k).as_ref() == Ok(b))
            .count();
        if through != 1 {
            return Err(Error::NotUnique(through));
        }
        Ok(h)
    }

    /// The mediating morphism without the uniqueness sweep.
    pub fn induced(&self, a: &FlowMorphism, b: &FlowMorphism) -> Result<FlowMorphism> {
        let (f, g) = &self.span;
        if a.source() != f.target() || b.source() != g.target() || **a.target() != **b.target() {
            return Err(Error::SpanMismatch);
        }
        if f.then(a)? != g.then(b)? {
            return Err(Error::NonCommutingCocone);
        }
        let w = a.target();
        let states = self
            .vertex_origin
            .iter()
            .map(|side| match *side {
                Side::Left(i) => a.state(i),
                Side::Right(i) => b.state(i),
            })
            .collect();
        let edge_image = |e: usize| match self.edge_origin[e] {
            Side::Left(p) => a.path(p),
            Side::Right(p) => b.path(p),
        };
        let mut paths = Vec::with_capacity(self.path_words.len());
        for word in &self.path_words {
            let mut acc = edge_image(word[0]);
            for &e in &word[1..] {
                acc = w
                    .compose(acc, edge_image(e))
                    .ok_or_else(|| Error::NotAMorphism("cocone images are not composable".into()))?;
            }
            paths.push(acc);
        }
        FlowMorphism::new(self.apex.clone(), w.clone(), states, paths)
    }
}

/// `Y ⊔_X Y` for `g : X → Y`, its two coprojections, and the fold `h` induced by `(id, id)`.
#[derive(Debug, Clone)]
pub struct Codiagonal {
    pub pushout: MaterializedPushout,
    pub k1: FlowMorphism,
    pub k2: FlowMorphism,
    pub h: FlowMorphism,
}

pub fn codiagonal_construction(g: &FlowMorphism, budget: u64) -> Result<Codiagonal> {
    let po = pushout(g, g)?.materialize(None)?;
    let id = FlowMorphism::identity(g.target().clone());
    let h = po.mediating_morphism(&id, &id, budget)?;
    Ok(Codiagonal {
        k1: po.left.clone(),
        k2: po.right.clone(),
        h,
        pushout: po,
    })
}
