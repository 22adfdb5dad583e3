// Why no model structure on flows makes the subdivision phi a weak equivalence while keeping
// weak equivalences bijective on states.
//
//     cargo run --example counterexamples

use flowcalc::dihomotopy::counterexample_suite;
use flowcalc::lifting::SearchContext;

fn main() {
    let report = counterexample_suite(&SearchContext::default()).unwrap();
    let s = &report.skeletons;
    println!(
        "phi: {} states -> {} states, state map {}, discrete weak equivalence: {}",
        s.segment_states, s.double_segment_states, s.phi_f0, s.phi_is_discrete_weq
    );
    for case in &report.pushouts_of_r {
        println!(
            "\npushout of R gluing the {}: {} -> {} states",
            case.name, case.states_before, case.states_after
        );
        if let Some(cycle) = &case.infinite_cycle {
            println!("  infinite path set along {}", cycle.join(" * "));
        }
        println!("  loops {:?}", case.damage.loops);
        println!("  branchings {:?}", case.damage.branchings);
        println!("  mergings {:?}", case.damage.mergings);
    }
    for c in &report.codiagonals {
        println!("\ncodiagonal of {}: h0 = {} (epi {}, injective {})", c.name, c.h0, c.h0_epi, c.h0_injective);
    }
    let sw = &report.skeleton_sweep;
    println!(
        "\n{} of {} morphisms between small flows lift against R and C; {} of those are not bijective on states",
        sw.with_rlp_against_r_and_c,
        sw.morphisms,
        sw.violations.len()
    );
    println!("all confirmed: {}", report.all_confirmed());
}
