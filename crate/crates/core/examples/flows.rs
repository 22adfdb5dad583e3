// Building flows, composing paths and mapping between flows.
//
//     cargo run --example flows

use std::sync::Arc;

use flowcalc::finset::FinSet;
use flowcalc::flow::{concat_globes, enumerate_morphisms, glob, phi, FlowBuilder, DEFAULT_BUDGET};

fn main() {
    let g = glob(&FinSet::new(["u", "v"]).unwrap());
    println!("Glob({{u,v}}): {g}");

    let x = concat_globes(&FinSet::new(["a", "b"]).unwrap(), &FinSet::singleton("c"));
    println!("Glob({{a,b}})*Glob({{c}}): {x}");
    x.check_associativity().unwrap();

    // a square with two ways round
    let mut b = FlowBuilder::new(FinSet::new(["s", "l", "r", "t"]).unwrap());
    let up = b.path("s", "l", "up").unwrap();
    let right = b.path("s", "r", "right").unwrap();
    let l_t = b.path("l", "t", "across").unwrap();
    let r_t = b.path("r", "t", "down").unwrap();
    let top = b.path("s", "t", "via-l").unwrap();
    let bottom = b.path("s", "t", "via-r").unwrap();
    b.compose(up, l_t, top).compose(right, r_t, bottom);
    let square = b.build().unwrap();
    println!("square: {square}");
    println!("indecomposable paths: {}", square.indecomposables().len());

    let p = phi();
    println!("\nphi: {p}");
    p.check_homomorphism().unwrap();
    let homs = enumerate_morphisms(p.source(), p.target(), DEFAULT_BUDGET).unwrap();
    println!("hom(I, I*I) has {} elements", homs.len());
    let sq = Arc::new(square);
    println!("hom(square, square) has {} elements", enumerate_morphisms(&sq, &sq, DEFAULT_BUDGET).unwrap().len());
}
