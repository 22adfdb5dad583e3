// Factoring maps with the small object argument.
//
//     cargo run --example small_object_argument

use flowcalc::finset::{named, FinSet, SetMap};
use flowcalc::flow::{phi, FlowMorphism};
use flowcalc::lifting::SearchContext;
use flowcalc::wfs::{canonical_factorization, soa_factorize, soa_factorize_flows, NamedWfs, SoaLimits};

fn main() {
    let ctx = SearchContext::default();
    let f = SetMap::from_table(FinSet::range(3), FinSet::range(3), vec![0, 0, 1]).unwrap();
    println!("f = {f}\n");

    for w in [NamedWfs::MonoEpi, NamedWfs::EpiMono, NamedWfs::AllIso] {
        let out = soa_factorize(&f, &w.generators(), SoaLimits::default(), &ctx).unwrap();
        let (l, r) = canonical_factorization(&f, w);
        println!("{w}: {} stage(s)", out.stages);
        println!("  small object argument  l = {}\n                         r = {}", out.l, out.r);
        println!("  canonical              l = {l}\n                         r = {r}");
    }

    let k = [named::r(), named::c()].map(|g| FlowMorphism::from_set_map(&g));
    let out = soa_factorize_flows(&phi(), &k, SoaLimits::default(), &ctx).unwrap();
    println!("\nphi against R and C: {} stage(s)\n  l = {}\n  r = {}", out.stages, out.l, out.r);
}
