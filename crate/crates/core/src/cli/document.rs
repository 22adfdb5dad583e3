//! JSON interchange for flows, presentations, set maps and flow morphisms.
//!
//! ```json
//! {
//!   "compose": [["u", "v", "(u,v)"]],
//!   "paths": {"0->1": ["u"], "0->2": ["(u,v)"], "1->2": ["v"]},
//!   "states": ["0", "1", "2"]
//! }
//! ```
//!
//! Path references in `compose` are bare labels when the label is unique in the flow and
//! `label@src->tgt` otherwise. A document with a `presentation` describes a finitely presented
//! flow instead; its `paths` and `compose` must then be empty.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{named, FinSet, SetMap};
use crate::flow::{directed_segment, phi, segment_pair, Edge, Flow, FlowBuilder, FlowMorphism, FlowPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowDocument {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub paths: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationDocument>,
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDocument {
    pub edges: Vec<[String; 3]>,
    #[serde(default)]
    pub relations: Vec<[Vec<String>; 2]>,
}

/// A parsed [`FlowDocument`].
#[derive(Debug, Clone, PartialEq)]
pub enum FlowSource {
    Flow(Flow),
    Presentation(FlowPresentation),
}

impl FlowSource {
    pub fn to_document(&self) -> FlowDocument {
        match self {
            FlowSource::Flow(x) => FlowDocument::from_flow(x),
            FlowSource::Presentation(p) => FlowDocument::from_presentation(p),
        }
    }
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

/// Splits `a->b` into two known states; labels may themselves contain `->`.
fn split_pair(states: &FinSet, key: &str) -> Result<(usize, usize)> {
    let mut found = None;
    for (i, _) in key.match_indices("->") {
        if let (Some(a), Some(b)) = (states.index_of(&key[..i]), states.index_of(&key[i + 2..])) {
            if found.replace((a, b)).is_some() {
                return Err(doc_err(format!("ambiguous state pair `{key}`")));
            }
        }
    }
    found.ok_or_else(|| doc_err(format!("`{key}` is not a pair of declared states")))
}

/// `label` if unique among all paths, else `label@src->tgt`.
pub fn path_ref(x: &Flow, p: usize) -> String {
    let path = x.path(p);
    if x.paths().iter().filter(|q| q.label == path.label).count() == 1 {
        path.label.clone()
    } else {
        format!("{}@{}", path.label, x.pair_key(path.src, path.tgt))
    }
}

impl FlowDocument {
    pub fn from_flow(x: &Flow) -> Self {
        let mut paths = BTreeMap::new();
        for (a, b) in x.nonempty_pairs() {
            let mut labels: Vec<String> = x.pair_range(a, b).map(|p| x.path(p).label.clone()).collect();
            labels.sort();
            paths.insert(x.pair_key(a, b), labels);
        }
        let mut compose: Vec<[String; 3]> = x
            .composable_pairs()
            .filter_map(|(p, q)| x.compose(p, q).map(|pq| [path_ref(x, p), path_ref(x, q), path_ref(x, pq)]))
            .collect();
        compose.sort();
        FlowDocument {
            compose,
            paths,
            presentation: None,
            states: x.states().labels().to_vec(),
            truncated: x.is_truncated(),
        }
    }

    pub fn from_presentation(p: &FlowPresentation) -> Self {
        let v = p.vertices();
        let edges = p
            .edges()
            .iter()
            .map(|e| [e.label.clone(), v.label(e.src).to_string(), v.label(e.tgt).to_string()])
            .collect();
        let relations = p
            .relations()
            .iter()
            .map(|(u, w)| [p.word_labels(u), p.word_labels(w)])
            .collect();
        FlowDocument {
            compose: Vec::new(),
            paths: BTreeMap::new(),
            presentation: Some(PresentationDocument { edges, relations }),
            states: v.labels().to_vec(),
            truncated: false,
        }
    }

    pub fn parse(&self) -> Result<FlowSource> {
        let states = FinSet::new(self.states.iter().cloned())?;
        if let Some(pres) = &self.presentation {
            if !self.compose.is_empty() || self.paths.values().any(|v| !v.is_empty()) {
                return Err(doc_err("a presentation document cannot also list paths"));
            }
            let mut edges = Vec::new();
            let mut index = HashMap::new();
            for [label, s, t] in &pres.edges {
                let state = |l: &str| {
                    states
                        .index_of(l)
                        .ok_or_else(|| doc_err(format!("edge `{label}` uses undeclared state `{l}`")))
                };
                index.insert(label.as_str(), edges.len());
                edges.push(Edge {
                    label: label.clone(),
                    src: state(s)?,
                    tgt: state(t)?,
                });
            }
            let word = |w: &[String]| -> Result<Vec<usize>> {
                w.iter()
                    .map(|l| index.get(l.as_str()).copied().ok_or_else(|| doc_err(format!("unknown edge `{l}`"))))
                    .collect()
            };
            let relations = pres
                .relations
                .iter()
                .map(|[u, w]| Ok((word(u)?, word(w)?)))
                .collect::<Result<Vec<_>>>()?;
            return Ok(FlowSource::Presentation(FlowPresentation::from_parts(states, edges, relations)?));
        }

        let mut builder = FlowBuilder::new(states.clone());
        let mut handles: Vec<(String, (usize, usize), usize)> = Vec::new();
        for (key, labels) in &self.paths {
            let (a, b) = split_pair(&states, key)?;
            for l in labels {
                let h = builder.path_by_index(a, b, l.clone());
                handles.push((l.clone(), (a, b), h));
            }
        }
        let resolve = |r: &str| -> Result<usize> {
            let exact: Vec<usize> = handles.iter().filter(|h| h.0 == r).map(|h| h.2).collect();
            match exact.len() {
                1 => return Ok(exact[0]),
                0 => {}
                _ => return Err(doc_err(format!("path reference `{r}` is ambiguous; use `label@src->tgt`"))),
            }
            let (label, key) = r
                .rsplit_once('@')
                .ok_or_else(|| doc_err(format!("unknown path `{r}`")))?;
            let pair = split_pair(&states, key)?;
            handles
                .iter()
                .find(|h| h.0 == label && h.1 == pair)
                .map(|h| h.2)
                .ok_or_else(|| doc_err(format!("unknown path `{r}`")))
        };
        for [x, y, xy] in &self.compose {
            builder.compose(resolve(x)?, resolve(y)?, resolve(xy)?);
        }
        builder.truncated(self.truncated);
        Ok(FlowSource::Flow(builder.build()?))
    }

    /// Parse and re-serialize.
    pub fn canonical(&self) -> Result<FlowDocument> {
        Ok(self.parse()?.to_document())
    }
}

/// A flow given inline or by built-in name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FlowRef {
    Named(String),
    Inline(FlowDocument),
}

/// `f0` maps state labels; `paths["a->b"]` maps the labels of `P_{a,b}` to labels of the
/// image pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDocument {
    pub f0: BTreeMap<String, String>,
    #[serde(default)]
    pub paths: BTreeMap<String, BTreeMap<String, String>>,
    pub source: FlowRef,
    pub target: FlowRef,
}

impl MorphismDocument {
    pub fn from_morphism(f: &FlowMorphism) -> Self {
        let (x, y) = (f.source(), f.target());
        let f0 = (0..x.states().len())
            .map(|s| (x.state_label(s).to_string(), y.state_label(f.state(s)).to_string()))
            .collect();
        let mut paths: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for (p, path) in x.paths().iter().enumerate() {
            paths
                .entry(x.pair_key(path.src, path.tgt))
                .or_default()
                .insert(path.label.clone(), y.path(f.path(p)).label.clone());
        }
        MorphismDocument {
            f0,
            paths,
            source: FlowRef::Inline(FlowDocument::from_flow(x)),
            target: FlowRef::Inline(FlowDocument::from_flow(y)),
        }
    }

    pub fn parse(&self) -> Result<FlowMorphism> {
        let x = Arc::new(resolve_flow_ref(&self.source)?);
        let y = Arc::new(resolve_flow_ref(&self.target)?);
        let f0 = SetMap::new(
            x.states().clone(),
            y.states().clone(),
            self.f0.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )?;
        let mut table = vec![usize::MAX; x.path_count()];
        for (key, assignment) in &self.paths {
            let (a, b) = split_pair(x.states(), key)?;
            for (label, image) in assignment {
                let p = x
                    .find_path(a, b, label)
                    .ok_or_else(|| doc_err(format!("no path `{label}` in {key}")))?;
                let q = y.find_path(f0.at(a), f0.at(b), image).ok_or_else(|| {
                    doc_err(format!("no path `{image}` in {}", y.pair_key(f0.at(a), f0.at(b))))
                })?;
                table[p] = q;
            }
        }
        if let Some(p) = table.iter().position(|&q| q == usize::MAX) {
            return Err(Error::NotTotal(path_ref(&x, p)));
        }
        FlowMorphism::new(x, y, f0.table().to_vec(), table)
    }
}

fn resolve_flow_ref(r: &FlowRef) -> Result<Flow> {
    match r {
        FlowRef::Named(name) => builtin_flow(name)
            .map(|f| (*f).clone())
            .ok_or_else(|| doc_err(format!("unknown built-in flow `{name}`"))),
        FlowRef::Inline(doc) => match doc.parse()? {
            FlowSource::Flow(x) => Ok(x),
            FlowSource::Presentation(_) => Err(doc_err("morphism endpoints must be flows, not presentations")),
        },
    }
}

/// `I` and `I*I`.
pub fn builtin_flow(name: &str) -> Option<Arc<Flow>> {
    match name {
        "I" => Some(Arc::new(directed_segment())),
        "I*I" => Some(segment_pair().1),
        _ => None,
    }
}

/// A set map or a flow morphism.
#[derive(Debug, Clone, PartialEq)]
pub enum ArrowSource {
    Set(SetMap),
    Flow(FlowMorphism),
}

impl ArrowSource {
    pub fn into_flow(self) -> FlowMorphism {
        match self {
            ArrowSource::Set(f) => FlowMorphism::from_set_map(&f),
            ArrowSource::Flow(f) => f,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ArrowSource::Set(f) => serde_json::to_value(f),
            ArrowSource::Flow(f) => serde_json::to_value(MorphismDocument::from_morphism(f)),
        }
        .expect("documents serialize")
    }
}

/// `R`, `C`, `C+` and `phi`.
pub fn builtin_arrow(name: &str) -> Option<ArrowSource> {
    match name {
        "R" => Some(ArrowSource::Set(named::r())),
        "C" => Some(ArrowSource::Set(named::c())),
        "C+" => Some(ArrowSource::Set(named::c_plus())),
        "phi" => Some(ArrowSource::Flow(phi())),
        _ => None,
    }
}

/// A set-map document has `domain`, a morphism document has `f0`.
pub fn parse_arrow_json(text: &str) -> Result<ArrowSource> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
    if value.get("f0").is_some() {
        let doc: MorphismDocument = serde_json::from_value(value).map_err(|e| doc_err(e.to_string()))?;
        Ok(ArrowSource::Flow(doc.parse()?))
    } else if value.get("domain").is_some() {
        let f: SetMap = serde_json::from_value(value).map_err(|e| doc_err(e.to_string()))?;
        Ok(ArrowSource::Set(f))
    } else {
        Err(doc_err("expected a set-map document (`domain`) or a morphism document (`f0`)"))
    }
}

pub fn parse_flow_json(text: &str) -> Result<FlowSource> {
    let doc: FlowDocument = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
    doc.parse()
}
