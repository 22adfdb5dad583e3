// The six weak factorization systems on finite sets, and a few pairs that are not.
//
//     cargo run --release --example wfs_classification

use flowcalc::finset::ClassTag;
use flowcalc::lifting::SearchContext;
use flowcalc::wfs::{cof_membership, verify_wfs, ClassPredicate, NamedWfs, Universe};

fn main() {
    let ctx = SearchContext::default();
    let universe = Universe::new(3, &ctx).unwrap();
    println!("{} arrows between sets of size at most 3\n", universe.arrows().len());

    for w in NamedWfs::ALL {
        let report = verify_wfs(&w.left().into(), &w.right().into(), &universe, &ctx).unwrap();
        println!("{:<22} ({}, {}): {:?}", w.name(), w.left(), w.right(), report.verdict);
    }

    println!();
    for (l, r) in [
        (ClassTag::Mono, ClassTag::Mono),
        (ClassTag::Epi, ClassTag::Epi),
        (ClassTag::Iso, ClassTag::Epi),
        (ClassTag::SplitMono, ClassTag::Epi),
    ] {
        let report = verify_wfs(&ClassPredicate::from(l), &ClassPredicate::from(r), &universe, &ctx).unwrap();
        let witness = report.first_witness().map(|f| f.to_string()).unwrap_or_default();
        println!("({l}, {r}): {:?}, witness {witness}", report.verdict);
    }

    println!("\ncof(K) for each generating set, as a class:");
    for w in NamedWfs::ALL {
        let k = w.generators();
        let members: Vec<bool> = universe
            .arrows()
            .iter()
            .map(|f| cof_membership(f, &k, &universe, &ctx).unwrap())
            .collect();
        let agrees = universe.arrows().iter().zip(&members).all(|(f, &m)| w.left().contains(f) == m);
        println!("  {:<22} cof(K) = {}: {agrees}", w.name(), w.left());
    }
}
