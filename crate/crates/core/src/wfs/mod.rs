//! Weak factorization systems and model structures on finite sets.
//!
//! Classes of maps are decided per arrow; the lifting relation is tabulated once per
//! universe of arrow-isomorphism representatives, which is enough since lifting properties
//! are invariant under isomorphism in the arrow category.

mod model;
mod soa;
mod table;
mod verify;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finset::{enumerate_universe, named, ArrowShape, ClassTag, FinSet, MapClass, SetMap};
use crate::lifting::{has_llp, SearchContext};

pub use model::{nine_model_structures, verify_model_structure, ModelReport, ModelStructureSpec, TwoOutOfThreeFailure};
pub use soa::{soa_factorize, soa_factorize_flows, FlowSoa, SetSoa, SoaIncomplete, SoaLimits, DEFAULT_STAGE_CAP};
pub use table::{nine_possibilities_table, CellVerdict, InclusionFailure, TableCell, COLUMNS, ROWS};
pub use verify::{cof_membership, verify_wfs, AxiomCheck, AxiomFailure, FactorizationCheck, Verdict, WfsReport};

/// The six weak factorization systems on finite sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedWfs {
    IsoAll,
    MonoEpi,
    SplitMonoEpiEmpty,
    EpiMono,
    AllIso,
    IsoNonEmptyIsoEmpty,
}

fn tag(t: ClassTag) -> MapClass {
    MapClass::Tag(t)
}

fn either(a: ClassTag, b: ClassTag) -> MapClass {
    MapClass::union([tag(a), tag(b)])
}

impl NamedWfs {
    pub const ALL: [NamedWfs; 6] = [
        NamedWfs::IsoAll,
        NamedWfs::MonoEpi,
        NamedWfs::SplitMonoEpiEmpty,
        NamedWfs::EpiMono,
        NamedWfs::AllIso,
        NamedWfs::IsoNonEmptyIsoEmpty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedWfs::IsoAll => "iso-all",
            NamedWfs::MonoEpi => "mono-epi",
            NamedWfs::SplitMonoEpiEmpty => "splitmono-epiempty",
            NamedWfs::EpiMono => "epi-mono",
            NamedWfs::AllIso => "all-iso",
            NamedWfs::IsoNonEmptyIsoEmpty => "isononempty-isoempty",
        }
    }

    pub fn left(self) -> MapClass {
        use ClassTag::*;
        match self {
            NamedWfs::IsoAll => tag(Iso),
            NamedWfs::MonoEpi => tag(Mono),
            NamedWfs::SplitMonoEpiEmpty => tag(SplitMono),
            NamedWfs::EpiMono => tag(Epi),
            NamedWfs::AllIso => tag(All),
            NamedWfs::IsoNonEmptyIsoEmpty => either(Iso, NonEmpty),
        }
    }

    pub fn right(self) -> MapClass {
        use ClassTag::*;
        match self {
            NamedWfs::IsoAll => tag(All),
            NamedWfs::MonoEpi => tag(Epi),
            NamedWfs::SplitMonoEpiEmpty => either(Epi, Empty),
            NamedWfs::EpiMono => tag(Mono),
            NamedWfs::AllIso => tag(Iso),
            NamedWfs::IsoNonEmptyIsoEmpty => either(Iso, Empty),
        }
    }

    /// Generating set `K` with `(cof(K), inj(K))` equal to this pair.
    pub fn generators(self) -> Vec<SetMap> {
        match self {
            NamedWfs::IsoAll => vec![],
            NamedWfs::MonoEpi => vec![named::c()],
            NamedWfs::SplitMonoEpiEmpty => vec![named::c_plus()],
            NamedWfs::EpiMono => vec![named::r()],
            NamedWfs::AllIso => vec![named::r(), named::c()],
            NamedWfs::IsoNonEmptyIsoEmpty => vec![named::r(), named::c_plus()],
        }
    }

    /// The named pair whose classes agree with `(left, right)` on every arrow of `universe`.
    pub fn matching(left: &ClassPredicate, right: &ClassPredicate, universe: &[SetMap]) -> Option<NamedWfs> {
        NamedWfs::ALL.into_iter().find(|w| {
            let (l, r) = (ClassPredicate::from(w.left()), ClassPredicate::from(w.right()));
            universe
                .iter()
                .all(|u| l.contains(u) == left.contains(u) && r.contains(u) == right.contains(u))
        })
    }
}

impl fmt::Display for NamedWfs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left(), self.right())
    }
}

impl FromStr for NamedWfs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        NamedWfs::ALL
            .into_iter()
            .find(|w| w.name() == key)
            .ok_or_else(|| Error::UnknownWfs(s.to_string()))
    }
}

impl Serialize for NamedWfs {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// A decidable class of set maps: a class expression, an explicit list of arrows (compared
/// up to isomorphism), or an intersection.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassPredicate {
    Class(MapClass),
    Extensional { name: String, shapes: Vec<ArrowShape> },
    Meet(Vec<ClassPredicate>),
}

impl ClassPredicate {
    pub fn extensional(name: impl Into<String>, members: &[SetMap]) -> Self {
        let mut shapes: Vec<ArrowShape> = members.iter().map(SetMap::shape).collect();
        shapes.sort();
        shapes.dedup();
        ClassPredicate::Extensional {
            name: name.into(),
            shapes,
        }
    }

    pub fn meet(parts: impl IntoIterator<Item = ClassPredicate>) -> Self {
        ClassPredicate::Meet(parts.into_iter().collect())
    }

    pub fn contains(&self, f: &SetMap) -> bool {
        match self {
            ClassPredicate::Class(c) => c.contains(f),
            ClassPredicate::Extensional { shapes, .. } => shapes.binary_search(&f.shape()).is_ok(),
            ClassPredicate::Meet(parts) => parts.iter().all(|p| p.contains(f)),
        }
    }

    pub fn members(&self, universe: &[SetMap]) -> Vec<SetMap> {
        universe.iter().filter(|u| self.contains(u)).cloned().collect()
    }
}

impl From<MapClass> for ClassPredicate {
    fn from(c: MapClass) -> Self {
        ClassPredicate::Class(c)
    }
}

impl From<ClassTag> for ClassPredicate {
    fn from(t: ClassTag) -> Self {
        ClassPredicate::Class(MapClass::Tag(t))
    }
}

impl FromStr for ClassPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<MapClass>().map(ClassPredicate::Class)
    }
}

impl fmt::Display for ClassPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassPredicate::Class(c) => write!(f, "{c}"),
            ClassPredicate::Extensional { name, .. } => f.write_str(name),
            ClassPredicate::Meet(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ∩ ")?;
                    }
                    match p {
                        ClassPredicate::Class(MapClass::Union(_)) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl Serialize for ClassPredicate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `f = r∘l` with `l` in the left class and `r` in the right class of `wfs`.
pub fn canonical_factorization(f: &SetMap, wfs: NamedWfs) -> (SetMap, SetMap) {
    let (x, y) = (f.domain(), f.codomain());
    let identity_first = || (SetMap::identity(x), f.clone());
    let identity_last = || (f.clone(), SetMap::identity(y));
    match wfs {
        NamedWfs::IsoAll => identity_first(),
        NamedWfs::AllIso => identity_last(),
        NamedWfs::EpiMono => {
            let image = f.image();
            let labels = FinSet::new(image.iter().map(|&j| y.label(j).to_string())).expect("image labels are distinct");
            let onto = SetMap::from_table(x.clone(), labels.clone(), f.table().iter().map(|&j| image.binary_search(&j).unwrap()).collect())
                .expect("surjection onto the image");
            let incl = SetMap::from_table(labels, y.clone(), image).expect("inclusion of the image");
            (onto, incl)
        }
        NamedWfs::MonoEpi => through_coproduct(f),
        NamedWfs::SplitMonoEpiEmpty if !x.is_empty() => through_coproduct(f),
        NamedWfs::SplitMonoEpiEmpty => identity_first(),
        NamedWfs::IsoNonEmptyIsoEmpty if !x.is_empty() => identity_last(),
        NamedWfs::IsoNonEmptyIsoEmpty => identity_first(),
    }
}

/// `X ↪ X ⊔ Y` followed by the fold `(f, id)`.
fn through_coproduct(f: &SetMap) -> (SetMap, SetMap) {
    let (x, y) = (f.domain(), f.codomain());
    let (sum, inl, _) = x.coproduct(y);
    let mut table = f.table().to_vec();
    table.extend(0..y.len());
    let fold = SetMap::from_table(sum, y.clone(), table).expect("fold is total");
    (inl, fold)
}

/// The arrow-isomorphism representatives of size at most `bound`, with the lifting relation
/// tabulated and the retract relation computed on demand.
pub struct Universe {
    bound: usize,
    arrows: Vec<SetMap>,
    index: HashMap<ArrowShape, usize>,
    /// `llp[i][j]`: arrow `i` lifts against arrow `j`.
    llp: Vec<Vec<bool>>,
    retracts: OnceLock<Vec<Vec<bool>>>,
}

impl Universe {
    pub fn new(bound: usize, ctx: &SearchContext) -> Result<Self> {
        let arrows = enumerate_universe(bound)?;
        let index = arrows.iter().enumerate().map(|(i, a)| (a.shape(), i)).collect();
        let llp = arrows
            .iter()
            .map(|i| arrows.iter().map(|p| has_llp(ctx, i, p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Universe {
            bound,
            arrows,
            index,
            llp,
            retracts: OnceLock::new(),
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn arrows(&self) -> &[SetMap] {
        &self.arrows
    }

    /// Index of the representative isomorphic to `f`, if `f` is small enough.
    pub fn index_of(&self, f: &SetMap) -> Option<usize> {
        self.index.get(&f.shape()).copied()
    }

    pub fn lifts(&self, i: usize, p: usize) -> bool {
        self.llp[i][p]
    }

    /// `is_retract(arrows[i], arrows[j])`, tabulated on first use.
    pub fn is_retract(&self, i: usize, j: usize) -> bool {
        self.retracts.get_or_init(|| {
            self.arrows
                .iter()
                .map(|f| self.arrows.iter().map(|g| crate::finset::is_retract(f, g)).collect())
                .collect()
        })[i][j]
    }
}
