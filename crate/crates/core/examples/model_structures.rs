// The nine model structures on finite sets, and the candidates the classification rules out.
//
//     cargo run --release --example model_structures

use flowcalc::lifting::SearchContext;
use flowcalc::wfs::{
    nine_model_structures, nine_possibilities_table, verify_model_structure, CellVerdict, ModelStructureSpec, NamedWfs, Universe,
};

fn main() {
    let ctx = SearchContext::default();
    let universe = Universe::new(3, &ctx).unwrap();
    for spec in nine_model_structures() {
        let report = verify_model_structure(&spec, &universe, &ctx).unwrap();
        println!("{:<42} {:?}", spec.name(), report.verdict);
    }

    let perturbed = ModelStructureSpec::parse("Mono", "Epi", "Iso").unwrap();
    let report = verify_model_structure(&perturbed, &universe, &ctx).unwrap();
    println!("\n{}: {:?}", perturbed.name(), report.verdict);

    println!();
    for cell in nine_possibilities_table(&universe) {
        println!("{} x {}: {:?}", cell.row, cell.column, cell.verdict);
        match cell.verdict {
            CellVerdict::InclusionFails => {
                for failure in &cell.inclusion_failures {
                    println!("    {}, witness {}", failure.claim, failure.witness);
                }
            }
            _ => {
                println!("    W = {}", cell.w);
                if let Some(w) = &cell.two_out_of_three {
                    println!("    f = {}, g = {}, missing {}", w.f, w.g, w.missing);
                }
                if let (NamedWfs::IsoNonEmptyIsoEmpty, Some(c)) = (cell.column, &cell.closure_contradiction) {
                    println!("    closure of Fib∩W: {}, contradiction at {}", cell.trivial_fibration_closure, c);
                }
            }
        }
    }
}
