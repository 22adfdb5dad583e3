// Classify set maps and enumerate the arrow universe.
//
//     cargo run --example classify_maps

use flowcalc::finset::{classify_map, enumerate_universe, named, FinSet, MapClass, SetMap};

fn main() {
    for (name, f) in [("R", named::r()), ("C", named::c()), ("C+", named::c_plus())] {
        let tags: Vec<String> = classify_map(&f).into_iter().map(|t| t.to_string()).collect();
        println!("{name:3} {f}  {}", tags.join(" "));
    }

    let f = SetMap::new(
        FinSet::new(["a", "b", "c"]).unwrap(),
        FinSet::new(["x", "y"]).unwrap(),
        [("a", "x"), ("b", "y"), ("c", "y")],
    )
    .unwrap();
    println!("\n{f} is epi: {}, mono: {}", f.is_surjective(), f.is_injective());

    let class: MapClass = "SplitMono|Empty".parse().unwrap();
    let universe = enumerate_universe(3).unwrap();
    let members = universe.iter().filter(|g| class.contains(g)).count();
    println!("{class} has {members} of the {} arrows between sets of size at most 3", universe.len());
}
