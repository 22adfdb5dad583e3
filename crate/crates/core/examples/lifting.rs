// Lifting properties of set maps and of flow morphisms, decided by exhaustive search.
//
//     cargo run --example lifting

use flowcalc::finset::{enumerate_universe, named};
use flowcalc::flow::{phi, FlowMorphism};
use flowcalc::lifting::{has_llp, lifting_witness, llp_members, rlp_members, SearchContext};

fn main() {
    let ctx = SearchContext::default();
    let (r, c) = (named::r(), named::c());

    println!("C lifts against R: {}", has_llp(&ctx, &c, &r).unwrap());
    match lifting_witness(&ctx, &r, &r).unwrap() {
        Some(square) => println!("R does not lift against R:\n{square}\n"),
        None => println!("R lifts against R"),
    }

    let universe = enumerate_universe(3).unwrap();
    let inj = rlp_members(&ctx, std::slice::from_ref(&r), &universe).unwrap();
    let cof = llp_members(&ctx, &inj, &universe).unwrap();
    println!(
        "rlp(R): {} arrows, all injective: {}",
        inj.len(),
        inj.iter().all(|f| f.is_injective())
    );
    println!(
        "llp(rlp(R)): {} arrows, all surjective: {}",
        cof.len(),
        cof.iter().all(|f| f.is_surjective())
    );

    // set maps are flow morphisms between path-free flows
    let rf = FlowMorphism::from_set_map(&r);
    println!("\nphi has the right lifting property against R: {}", has_llp(&ctx, &rf, &phi()).unwrap());
}
