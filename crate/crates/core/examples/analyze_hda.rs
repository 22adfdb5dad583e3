// Reachability, deadlocks, loops, branchings and mergings of a small automaton.
//
//     cargo run --example analyze_hda

use flowcalc::dihomotopy::{analyze_flow, analyze_presentation, AnalyzeOptions};
use flowcalc::finset::FinSet;
use flowcalc::flow::{materialize, FlowPresentation};

fn main() {
    // two processes taking a lock in either order; one ordering can get stuck in `wait`
    let p = FlowPresentation::new(
        FinSet::new(["idle", "a", "b", "both", "done", "wait", "orphan"]).unwrap(),
        &[
            ("take-a", "idle", "a"),
            ("take-b", "idle", "b"),
            ("then-b", "a", "both"),
            ("then-a", "b", "both"),
            ("release", "both", "done"),
            ("block", "b", "wait"),
            ("retry", "orphan", "orphan"),
        ],
        &[(vec!["take-a", "then-b"], vec!["take-b", "then-a"])],
    )
    .unwrap();

    let r = analyze_presentation(&p, &AnalyzeOptions::default());
    println!("initial {:?}\nfinal {:?}", r.initial, r.final_states);
    println!("unreachable {:?}\ndeadlocks {:?}\nloops {:?}", r.unreachable, r.deadlocks, r.loops);
    for b in &r.branchings {
        println!("branching at {}: {:?}", b.state, b.paths);
    }
    for m in &r.mergings {
        println!("merging at {}: {:?}", m.state, m.paths);
    }

    let designated = AnalyzeOptions {
        designated_finals: Some(vec!["done".into()]),
    };
    println!(
        "\nwith `done` as the only terminal, deadlocks are {:?}",
        analyze_presentation(&p, &designated).deadlocks
    );

    let flow = materialize(&p, Some(2)).unwrap().flow;
    println!("\ntruncated at length 2: {} paths, truncated {}", flow.path_count(), flow.is_truncated());
    let r = analyze_flow(&flow, &designated);
    println!("materialized: loops {:?}, deadlocks {:?}", r.loops, r.deadlocks);
}
