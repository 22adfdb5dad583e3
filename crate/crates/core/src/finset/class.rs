use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::SetMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassTag {
    All,
    Iso,
    Mono,
    Epi,
    SplitMono,
    Empty,
    NonEmpty,
}

impl ClassTag {
    pub const ALL_TAGS: [ClassTag; 7] = [
        ClassTag::All,
        ClassTag::Iso,
        ClassTag::Mono,
        ClassTag::Epi,
        ClassTag::SplitMono,
        ClassTag::Empty,
        ClassTag::NonEmpty,
    ];

    pub fn holds(self, f: &SetMap) -> bool {
        match self {
            ClassTag::All => true,
            ClassTag::Iso => f.is_bijective(),
            ClassTag::Mono => f.is_injective(),
            ClassTag::Epi => f.is_surjective(),
            ClassTag::SplitMono => f.left_inverse().is_some(),
            ClassTag::Empty => f.domain().is_empty(),
            ClassTag::NonEmpty => !f.domain().is_empty(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::All => "All",
            ClassTag::Iso => "Iso",
            ClassTag::Mono => "Mono",
            ClassTag::Epi => "Epi",
            ClassTag::SplitMono => "SplitMono",
            ClassTag::Empty => "Empty",
            ClassTag::NonEmpty => "NonEmpty",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lowered = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        ClassTag::ALL_TAGS
            .into_iter()
            .find(|t| t.name().to_ascii_lowercase() == lowered)
            .ok_or_else(|| Error::BadClassExpr(s.to_string()))
    }
}

impl Serialize for ClassTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// A named class of set maps: a tag, or finite unions and intersections of classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MapClass {
    Tag(ClassTag),
    Union(Vec<MapClass>),
    Intersection(Vec<MapClass>),
}

impl MapClass {
    pub fn union(parts: impl IntoIterator<Item = MapClass>) -> Self {
        MapClass::Union(parts.into_iter().collect())
    }

    pub fn intersection(parts: impl IntoIterator<Item = MapClass>) -> Self {
        MapClass::Intersection(parts.into_iter().collect())
    }

    pub fn contains(&self, f: &SetMap) -> bool {
        match self {
            MapClass::Tag(t) => t.holds(f),
            MapClass::Union(parts) => parts.iter().any(|p| p.contains(f)),
            MapClass::Intersection(parts) => parts.iter().all(|p| p.contains(f)),
        }
    }
}

impl From<ClassTag> for MapClass {
    fn from(tag: ClassTag) -> Self {
        MapClass::Tag(tag)
    }
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, parts: &[MapClass], sep: &str) -> fmt::Result {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                match p {
                    MapClass::Tag(_) => write!(f, "{p}")?,
                    _ => write!(f, "({p})")?,
                }
            }
            Ok(())
        }
        match self {
            MapClass::Tag(t) => write!(f, "{t}"),
            MapClass::Union(parts) => join(f, parts, "∪"),
            MapClass::Intersection(parts) => join(f, parts, "∩"),
        }
    }
}

/// Parses tags combined with `|` (union) and `&` (intersection, binding tighter), with
/// parentheses. `∪`, `+` and `∩` are accepted as well.
impl FromStr for MapClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.replace('∪', "|").replace('∩', "&").replace('+', "|");
        let tokens: Vec<&str> = tokenize(&normalized);
        let mut pos = 0;
        let parsed = parse_union(&tokens, &mut pos);
        match parsed {
            Some(c) if pos == tokens.len() => Ok(c),
            _ => Err(Error::BadClassExpr(s.to_string())),
        }
    }
}

fn tokenize(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if matches!(ch, '|' | '&' | '(' | ')') {
            if !s[start..i].trim().is_empty() {
                out.push(s[start..i].trim());
            }
            out.push(&s[i..i + 1]);
            start = i + 1;
        }
    }
    if !s[start..].trim().is_empty() {
        out.push(s[start..].trim());
    }
    out
}

fn parse_union(tokens: &[&str], pos: &mut usize) -> Option<MapClass> {
    let mut terms = vec![parse_intersection(tokens, pos)?];
    while tokens.get(*pos) == Some(&"|") {
        *pos += 1;
        terms.push(parse_intersection(tokens, pos)?);
    }
    Some(if terms.len() == 1 { terms.pop().unwrap() } else { MapClass::Union(terms) })
}

fn parse_intersection(tokens: &[&str], pos: &mut usize) -> Option<MapClass> {
    let mut factors = vec![parse_atom(tokens, pos)?];
    while tokens.get(*pos) == Some(&"&") {
        *pos += 1;
        factors.push(parse_atom(tokens, pos)?);
    }
    Some(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        MapClass::Intersection(factors)
    })
}

fn parse_atom(tokens: &[&str], pos: &mut usize) -> Option<MapClass> {
    let tok = *tokens.get(*pos)?;
    *pos += 1;
    if tok == "(" {
        let inner = parse_union(tokens, pos)?;
        if tokens.get(*pos) != Some(&")") {
            return None;
        }
        *pos += 1;
        Some(inner)
    } else {
        tok.parse::<ClassTag>().ok().map(MapClass::Tag)
    }
}

impl Serialize for MapClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The tags whose predicate `f` satisfies.
pub fn classify_map(f: &SetMap) -> BTreeSet<ClassTag> {
    ClassTag::ALL_TAGS.into_iter().filter(|t| t.holds(f)).collect()
}
