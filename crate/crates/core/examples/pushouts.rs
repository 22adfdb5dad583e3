// Pushouts of flows: gluing globes end to end, and gluing states that creates a loop.
//
//     cargo run --example pushouts

use std::sync::Arc;

use flowcalc::colimits::{codiagonal_construction, pushout};
use flowcalc::finset::{named, FinSet};
use flowcalc::flow::{directed_segment, glob, Flow, FlowMorphism, DEFAULT_BUDGET};
use flowcalc::Error;

fn main() {
    // the end of Glob({a,b}) glued to the start of Glob({c})
    let point = Arc::new(Flow::discrete(FinSet::range(1)));
    let end = FlowMorphism::new(point.clone(), Arc::new(glob(&FinSet::new(["a", "b"]).unwrap())), vec![1], vec![]).unwrap();
    let start = FlowMorphism::new(point, Arc::new(glob(&FinSet::singleton("c"))), vec![0], vec![]).unwrap();
    let po = pushout(&end, &start).unwrap().materialize(None).unwrap();
    println!("concatenation: {}", po.apex);

    // the mediating morphism out of the pushout
    let h = po.induced(&po.left, &po.right).unwrap();
    println!("mediating morphism of the pushout cocone is the identity: {}", h.is_isomorphism());

    // identifying the two ends of the directed segment
    let ends = Arc::new(Flow::discrete(FinSet::range(2)));
    let iota = FlowMorphism::new(ends, Arc::new(directed_segment()), vec![0, 1], vec![]).unwrap();
    let glued = pushout(&FlowMorphism::from_set_map(&named::r()), &iota).unwrap();
    match glued.materialize(None) {
        Err(Error::InfinitePathSet { cycle }) => println!("\ngluing the ends of I: infinite path set along {cycle:?}"),
        other => println!("\nunexpected: {other:?}"),
    }
    let truncated = glued.materialize(Some(3)).unwrap();
    println!("truncated at length 3: {}", truncated.apex);

    let cd = codiagonal_construction(&FlowMorphism::from_set_map(&named::c_plus()), DEFAULT_BUDGET).unwrap();
    println!("\ncodiagonal of C+: h0 = {}", cd.h.f0());
}
