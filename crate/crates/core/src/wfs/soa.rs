//! The small object argument, run for finitely many stages.
//!
//! Each stage glues a copy of `cod(k)` along every commuting square from `k` to the current
//! right factor, for each `k ∈ K` the right factor does not yet lift against, and stops as
//! soon as it lifts against all of `K`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::colimits::pushout;
use crate::error::{Error, Result};
use crate::finset::{FinSet, SetMap};
use crate::flow::{FlowBuilder, FlowMorphism};
use crate::lifting::{has_llp, Arrow, SearchContext};
use crate::uf::UnionFind;

pub const DEFAULT_STAGE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SoaLimits {
    pub stages: usize,
    /// Largest middle object allowed (elements for sets, states plus paths for flows).
    pub max_size: usize,
}

impl Default for SoaLimits {
    fn default() -> Self {
        SoaLimits {
            stages: DEFAULT_STAGE_CAP,
            max_size: 4096,
        }
    }
}

/// `f = r∘l` produced by the small object argument, with the number of gluing stages used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetSoa {
    pub l: SetMap,
    pub r: SetMap,
    pub stages: usize,
}

#[derive(Debug, Clone)]
pub struct FlowSoa {
    pub l: FlowMorphism,
    pub r: FlowMorphism,
    pub stages: usize,
}

/// A run that hit its limits, with the factorization reached so far.
#[derive(Debug, Clone)]
pub struct SoaIncomplete<F> {
    pub partial: F,
    pub reason: Error,
}

/// Small object argument for set maps.
pub fn soa_factorize(
    f: &SetMap,
    k: &[SetMap],
    limits: SoaLimits,
    ctx: &SearchContext,
) -> std::result::Result<SetSoa, Box<SoaIncomplete<SetSoa>>> {
    let mut state = SetSoa {
        l: SetMap::identity(f.domain()),
        r: f.clone(),
        stages: 0,
    };
    loop {
        let mut pending = Vec::new();
        for gen in k {
            match has_llp(ctx, gen, &state.r) {
                Ok(true) => {}
                Ok(false) => pending.push(gen.clone()),
                Err(reason) => return Err(Box::new(SoaIncomplete { partial: state, reason })),
            }
        }
        if pending.is_empty() {
            return Ok(state);
        }
        if state.stages == limits.stages {
            let reason = Error::StagesExceeded { stages: state.stages };
            return Err(Box::new(SoaIncomplete { partial: state, reason }));
        }
        match glue_stage(&state.r, &pending, limits.max_size) {
            Ok((step, r)) => {
                state = SetSoa {
                    l: state.l.then(&step).expect("composable"),
                    r,
                    stages: state.stages + 1,
                };
            }
            Err(reason) => return Err(Box::new(SoaIncomplete { partial: state, reason })),
        }
    }
}

/// Fibers of `r` over each point of its codomain.
fn fibers(r: &SetMap) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); r.codomain().len()];
    for (x, &y) in r.table().iter().enumerate() {
        out[y].push(x);
    }
    out
}

/// Every commuting square `(top, bottom)` from `k` to `r`, as tables.
fn squares(k: &SetMap, r: &SetMap) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    let fib = fibers(r);
    let k = k.clone();
    crate::finset::all_maps(&k.codomain().clone(), &r.codomain().clone())
        .collect::<Vec<_>>()
        .into_iter()
        .flat_map(move |bottom| {
            let choices: Vec<Vec<usize>> = k.table().iter().map(|&t| fib[bottom.at(t)].clone()).collect();
            product(choices).into_iter().map(move |top| (top, bottom.table().to_vec()))
        })
}

fn product(choices: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for c in &choices {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                c.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out
}

fn square_count(k: &SetMap, r: &SetMap) -> u128 {
    let fib = fibers(r);
    crate::finset::all_maps(k.codomain(), r.codomain())
        .map(|bottom| {
            k.table()
                .iter()
                .map(|&t| fib[bottom.at(t)].len() as u128)
                .product::<u128>()
        })
        .sum()
}

/// One stage: the pushout of `⊔ dom(k) → ⊔ cod(k)` along all squares into the middle object.
/// Returns the map from the old middle object to the new one, and the new right factor.
fn glue_stage(r: &SetMap, k: &[SetMap], max_size: usize) -> Result<(SetMap, SetMap)> {
    let m = r.domain().len();
    let mut added: u128 = 0;
    for gen in k {
        added += square_count(gen, r) * gen.codomain().len() as u128;
    }
    let total = m as u128 + added;
    if total > max_size as u128 {
        return Err(Error::BudgetExceeded {
            needed: total,
            cap: max_size as u64,
        });
    }
    let total = total as usize;
    let mut uf = UnionFind::new(total);
    let mut over: Vec<usize> = r.table().to_vec();
    over.resize(total, usize::MAX);
    let mut next = m;
    for gen in k {
        for (top, bottom) in squares(gen, r) {
            for (t, &b) in bottom.iter().enumerate() {
                over[next + t] = b;
            }
            for (s, &t) in gen.table().iter().enumerate() {
                uf.union(top[s], next + t);
            }
            next += gen.codomain().len();
        }
    }
    let (class_of, count) = uf.classes();
    let middle = FinSet::range(count);
    let mut r_table = vec![0; count];
    for (x, &c) in class_of.iter().enumerate() {
        r_table[c] = over[x];
    }
    let step = SetMap::from_table(r.domain().clone(), middle.clone(), class_of[..m].to_vec())?;
    let r_next = SetMap::from_table(middle, r.codomain().clone(), r_table)?;
    Ok((step, r_next))
}

/// Small object argument for finite flow morphisms, gluing one square at a time by pushout.
pub fn soa_factorize_flows(
    f: &FlowMorphism,
    k: &[FlowMorphism],
    limits: SoaLimits,
    ctx: &SearchContext,
) -> std::result::Result<FlowSoa, Box<SoaIncomplete<FlowSoa>>> {
    let mut state = FlowSoa {
        l: FlowMorphism::identity(f.source().clone()),
        r: f.clone(),
        stages: 0,
    };
    loop {
        match flow_stage(&state, k, limits, ctx) {
            Ok(None) => return Ok(state),
            Ok(Some(next)) => state = next,
            Err(reason) => return Err(Box::new(SoaIncomplete { partial: state, reason })),
        }
    }
}

fn flow_stage(state: &FlowSoa, k: &[FlowMorphism], limits: SoaLimits, ctx: &SearchContext) -> Result<Option<FlowSoa>> {
    let r = &state.r;
    let mut pending = Vec::new();
    for gen in k {
        if !has_llp(ctx, gen, r)? {
            pending.push(gen);
        }
    }
    if pending.is_empty() {
        return Ok(None);
    }
    if state.stages == limits.stages {
        return Err(Error::StagesExceeded { stages: state.stages });
    }
    let mut squares = Vec::new();
    for gen in pending {
        let tops = FlowMorphism::hom(ctx, gen.dom(), r.dom())?;
        let bottoms = FlowMorphism::hom(ctx, gen.cod(), r.cod())?;
        for top in tops.iter() {
            let tr = top.then(r)?;
            for bottom in bottoms.iter() {
                if gen.then(bottom)? == tr {
                    squares.push((gen, top.clone(), bottom.clone()));
                }
            }
        }
    }
    let mut incl = FlowMorphism::identity(r.source().clone());
    let mut right = r.clone();
    for (gen, top, bottom) in squares {
        let po = pushout(gen, &top.then(&incl)?)?.materialize(None)?;
        let size = po.apex.states().len() + po.apex.path_count();
        if size > limits.max_size {
            return Err(Error::BudgetExceeded {
                needed: size as u128,
                cap: limits.max_size as u64,
            });
        }
        right = po.induced(&bottom, &right)?;
        incl = incl.then(&po.right)?;
    }
    debug_assert!(Arc::ptr_eq(incl.target(), right.source()) || incl.target() == right.source());
    let (incl, right) = relabel_middle(&incl, &right)?;
    Ok(Some(FlowSoa {
        l: state.l.then(&incl)?,
        r: right,
        stages: state.stages + 1,
    }))
}

/// Renames the middle flow: states become `0..n`, paths drop the coproduct prefixes that
/// repeated gluing accumulates.
fn relabel_middle(incl: &FlowMorphism, right: &FlowMorphism) -> Result<(FlowMorphism, FlowMorphism)> {
    let x = incl.target();
    let n = x.states().len();
    let states = FinSet::range(n);
    let state_of: Vec<usize> = (0..n).map(|i| states.index_of(&i.to_string()).expect("range label")).collect();
    let mut builder = FlowBuilder::new(states);
    let mut taken: HashSet<(usize, usize, String)> = HashSet::new();
    let mut handles = Vec::with_capacity(x.path_count());
    let mut labels = Vec::with_capacity(x.path_count());
    for path in x.paths() {
        let (a, b) = (state_of[path.src], state_of[path.tgt]);
        let base = short_label(&path.label);
        let mut label = base.to_string();
        let mut k = 1;
        while !taken.insert((a, b, label.clone())) {
            k += 1;
            label = format!("{base}#{k}");
        }
        handles.push(builder.path_by_index(a, b, label.clone()));
        labels.push((a, b, label));
    }
    for (p, q) in x.composable_pairs() {
        if let Some(pq) = x.compose(p, q) {
            builder.compose(handles[p], handles[q], handles[pq]);
        }
    }
    let y = Arc::new(builder.build()?);
    let path_of: Vec<usize> = labels
        .iter()
        .map(|(a, b, l)| y.find_path(*a, *b, l).expect("path was added"))
        .collect();
    let mut inv_state = vec![0; n];
    for (i, &j) in state_of.iter().enumerate() {
        inv_state[j] = i;
    }
    let mut inv_path = vec![0; path_of.len()];
    for (p, &q) in path_of.iter().enumerate() {
        inv_path[q] = p;
    }
    let incl = FlowMorphism::new(
        incl.source().clone(),
        y.clone(),
        incl.state_table().iter().map(|&s| state_of[s]).collect(),
        incl.path_table().iter().map(|&p| path_of[p]).collect(),
    )?;
    let right = FlowMorphism::new(
        y,
        right.target().clone(),
        inv_state.iter().map(|&i| right.state(i)).collect(),
        inv_path.iter().map(|&p| right.path(p)).collect(),
    )?;
    Ok((incl, right))
}

/// `1:2:u=2:v` becomes `u`.
fn short_label(label: &str) -> &str {
    let mut first = label.split('=').next().unwrap_or(label);
    while let Some(rest) = first.strip_prefix("1:").or_else(|| first.strip_prefix("2:")) {
        first = rest;
    }
    first
}
