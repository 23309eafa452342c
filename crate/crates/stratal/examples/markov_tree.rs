//! Walk the trace tree of simple closed geodesics on a once-punctured torus.
//!
//! Traces of simple closed curves obey the Markov-style recursion
//! `t_new = t_a * t_b - t_old` along flips of triples.  This example descends
//! from a far-out triple to the minimal one, enumerates all simple geodesics
//! below a length cutoff at the square (modular) point, and replays the
//! recursion in exact integers to depth 10 as a consistency check.

use stratal::torus::{
    descend_to_minimal, enumerate_scc, exact_tree_check, trace_of_slope, Branch, FrickePoint, Slope,
};

fn main() {
    let p = FrickePoint::solve(3.0, 3.0, Branch::Minus).expect("modular point");
    println!("modular point: ({}, {}, {})", p.x(), p.y(), p.z());

    // Traces grow fast along the tree: a few slopes away from the minimum.
    for (num, den) in [(1i64, 1i64), (3, 2), (5, 2), (8, 5)] {
        let slope = Slope::new(num, den).expect("nonzero");
        println!("  trace of slope {slope}: {}", trace_of_slope(&p, slope));
    }

    let minimal = descend_to_minimal(&p).expect("descent terminates");
    println!(
        "minimal triple: slopes {} {} {} with traces {:?} after {} flips",
        minimal.slopes[0], minimal.slopes[1], minimal.slopes[2], minimal.traces, minimal.flips,
    );

    let cutoff = 6.0;
    let records = enumerate_scc(&p, cutoff).expect("finite enumeration");
    println!("\nsimple closed geodesics with length <= {cutoff}:");
    for r in &records {
        println!(
            "  slope {:>5}  trace {:>5.1}  length {:.6}",
            r.slope.to_string(),
            r.trace,
            r.length
        );
    }

    let exact = exact_tree_check(3, 3, 3, 10);
    println!(
        "\nexact recursion to depth {}: {} triangles, relation holds: {}, largest trace has {} digits",
        exact.depth, exact.triangles, exact.relation_holds, exact.max_digits,
    );
}
